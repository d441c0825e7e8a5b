"""Seeded, reproducible experiments over the shipped generator systems.

Modes:

* ``behrstock-scan``   — empirical bound M for the mixed-projection minimum
* ``order-audit``      — the order trichotomy diagnostics on far tree pairs
* ``theorem9-check``   — per-syllable lower bound d >= K|e| under escalated powers
* ``interval-check``   — activity intervals disjoint and ordered along paths
* ``qie-sandwich``     — the word-length sandwich |g| <= (5 s L / K) N
* ``farey-crosscheck`` — continued-fraction distances against a BFS oracle

Every run is a pure function of (fixture, mode, seed, samples): reports are
canonical JSON and byte-identical across runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import ceil, floor, gcd
from typing import Dict, List, Optional, Tuple

from freefactor import factors as fc, farey, projections as pj, raag, serialize as se
from freefactor import systems as sy
from freefactor.errors import FreefactorError
from freefactor.raag import RaagWord
from freefactor.words import (
    Alphabet,
    GroupMap,
    compose_map,
    group_map,
    identity_map,
    invert_automorphism,
    letter,
    map_power,
    verify_automorphism,
)

MODES = (
    "behrstock-scan",
    "order-audit",
    "theorem9-check",
    "interval-check",
    "qie-sandwich",
    "farey-crosscheck",
)

MAX_POWER = 2 ** 10
# cap on p * sum|e_i|: label lengths grow geometrically in this exponent
DEFAULT_BUDGET_EXP = 14
NIELSEN_TREE_LENGTH = 12


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    fixture: str = "pentagon-f5"
    samples: int = 100
    seed: int = 1
    nielsen_len: int = NIELSEN_TREE_LENGTH
    power: Optional[int] = None          # None = auto-escalate
    budget_exp: int = DEFAULT_BUDGET_EXP
    box: int = 40                        # farey-crosscheck exhaustive box
    random_pairs: int = 10_000           # farey-crosscheck metric checks

    def __post_init__(self):
        assert self.mode in MODES, f"unknown mode {self.mode!r}"


# --- random trees -----------------------------------------------------------

def nielsen_generators(alphabet: Alphabet) -> List[GroupMap]:
    """Right transvections x_i -> x_i x_j^s: a fixed generating set used for
    sampling; every map is short, so certificates stay cheap."""
    out = []
    n = alphabet.rank
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for s in (1, -1):
                images = [letter(alphabet, k) for k in range(n)]
                images[i] = images[i] * letter(alphabet, j, s)
                out.append(verify_automorphism(group_map(alphabet, alphabet, images)))
    return out

def random_automorphism(rng: random.Random, alphabet: Alphabet, max_len: int) -> GroupMap:
    gens = nielsen_generators(alphabet)
    f = identity_map(alphabet)
    for _ in range(rng.randint(0, max_len)):
        f = compose_map(rng.choice(gens), f)
    return verify_automorphism(f)


def random_tree(rng: random.Random, alphabet: Alphabet, max_len: int) -> pj.MarkedGraph:
    return pj.transform_marked(
        random_automorphism(rng, alphabet, max_len), pj.rose(alphabet)
    )


def random_raag_word(
    rng: random.Random, gamma, max_syllables: int = 6, max_exp: int = 3
) -> RaagWord:
    n = rng.randint(1, max_syllables)
    syls = []
    for _ in range(n):
        e = rng.randint(1, max_exp) * rng.choice((1, -1))
        syls.append((rng.choice(sorted(gamma.vertices)), e))
    return raag.normalize(gamma, raag.raag_word(gamma, syls))


# --- derived constants ------------------------------------------------------

def _overlapping_pairs(system: sy.AdmissibleSystem) -> List[Tuple[int, int]]:
    coll = system.collection
    return [
        (i, j)
        for i, j, kind in coll.classifications
        if kind == "overlap"
    ]


def measure_m_emp(system: sy.AdmissibleSystem, seed: int, samples: int) -> int:
    """Max of the Behrstock minimum over random trees and overlapping pairs."""
    rng = random.Random(seed)
    coll = system.collection
    ambient = coll.factors[0].ambient
    pairs = _overlapping_pairs(system)
    best = 0
    for _ in range(samples):
        T = random_tree(rng, ambient, NIELSEN_TREE_LENGTH)
        for i, j in pairs:
            best = max(best, pj.behrstock_min(coll.factors[i], coll.factors[j], T))
    return best


def measure_l_path(system: sy.AdmissibleSystem, steps: int = 4) -> int:
    """Max per-step projection displacement when applying one generator power."""
    coll = system.collection
    ambient = coll.factors[0].ambient
    best = 1
    for i, f in enumerate(system.maps):
        trees = [pj.rose(ambient)]
        for _ in range(steps):
            trees.append(pj.transform_marked(f, trees[-1]))
        path = pj.TreePath(tuple(trees))
        for A in coll.factors:
            best = max(best, path.step_bound(A))
    return best


def derive_constants(system: sy.AdmissibleSystem, seed: int, scan_samples: int = 100) -> Dict:
    coll = system.collection
    ambient = coll.factors[0].ambient
    rose = pj.rose(ambient)
    m_emp = measure_m_emp(system, seed, scan_samples)
    l_path = measure_l_path(system)
    maxd = 0
    for i, A in enumerate(coll.factors):
        for j, B in enumerate(coll.factors):
            if i == j or not fc.meet_projection(A, B):
                continue
            maxd = max(maxd, pj.projection_distance(A, rose, B))
    s = raag.clique_number(coll.gamma)
    K = 5 * m_emp + 3 * l_path + 2 * maxd
    return {"M_emp": m_emp, "L_path": l_path, "max_factor_dist": maxd, "s": s, "K": K}


def escalate_power(K: int, requested: Optional[int]) -> int:
    """Smallest power of two >= K (capped), unless one was requested."""
    if requested is not None:
        return requested
    p = 1
    while p < K and p < MAX_POWER:
        p *= 2
    return p


# --- modes ------------------------------------------------------------------

def _run_behrstock_scan(cfg: ExperimentConfig, system: sy.AdmissibleSystem) -> Dict:
    rng = random.Random(cfg.seed)
    coll = system.collection
    ambient = coll.factors[0].ambient
    pairs = _overlapping_pairs(system)
    records = []
    per_pair = {f"{coll.names[i]}|{coll.names[j]}": 0 for i, j in pairs}
    for k in range(cfg.samples):
        T = random_tree(rng, ambient, cfg.nielsen_len)
        worst = 0
        for i, j in pairs:
            m = pj.behrstock_min(coll.factors[i], coll.factors[j], T)
            key = f"{coll.names[i]}|{coll.names[j]}"
            per_pair[key] = max(per_pair[key], m)
            worst = max(worst, m)
        records.append({"sample": k, "max_min": worst})
    m_emp = max(per_pair.values(), default=0)
    return {
        "records": records,
        "aggregates": {"M_emp": m_emp, "per_pair": per_pair},
        "violations": [],
    }


def _run_order_audit(cfg: ExperimentConfig, system: sy.AdmissibleSystem) -> Dict:
    rng = random.Random(cfg.seed)
    coll = system.collection
    ambient = coll.factors[0].ambient
    M = measure_m_emp(system, cfg.seed + 1, min(100, cfg.samples))
    K = 2 * M + 1
    m_push = max(K, 4)
    records: List[Dict] = []
    violations: List[Dict] = []
    met = 0
    insufficient = 0
    for k in range(cfg.samples):
        i, j = rng.choice(_overlapping_pairs(system))
        if rng.random() < 0.5:
            i, j = j, i
        rec: Dict = {"sample": k, "pair": [coll.names[i], coll.names[j]]}
        if m_push > cfg.budget_exp:
            insufficient += 1
            rec["status"] = "power-insufficient"
            records.append(rec)
            continue
        T = random_tree(rng, ambient, 4)
        fi = map_power(system.maps[i], m_push)
        fj = map_power(system.maps[j], m_push)
        T2 = pj.transform_marked(compose_map(fi, fj), T)
        A = coll.factors[i]
        B2 = fc.transport(fi, coll.factors[j])
        if not fc.meet_projection(A, B2):
            rec["status"] = "pair-degenerate"
            records.append(rec)
            continue
        dA = pj.projection_distance(A, T, T2)
        dB = pj.projection_distance(B2, T, T2)
        rec["d_A"], rec["d_B"] = dA, dB
        if dA < K or dB < K:
            rec["status"] = "precondition-unmet"
            records.append(rec)
            continue
        met += 1
        v_ab = pj.factor_order(A, B2, T, T2, M)
        v_ba = pj.factor_order(B2, A, T, T2, M)
        checks = {
            "exactly_one_order": v_ab.first_precedes_second != v_ba.first_precedes_second,
        }
        first = v_ab if v_ab.first_precedes_second else v_ba
        checks["far_shadow_at_start"] = first.d_A_T_B >= M + 1
        checks["near_shadow_at_start"] = first.d_B_T_A <= M
        checks["far_shadow_at_end"] = first.d_B_T2_A >= M + 1
        checks["near_shadow_at_end"] = first.d_A_T2_B <= M
        rec["status"] = "checked"
        rec["checks"] = checks
        if not all(checks.values()):
            violations.append(rec)
        records.append(rec)
    return {
        "records": records,
        "aggregates": {
            "M_emp": M,
            "K": K,
            "push_power": m_push,
            "met_precondition": met,
            "power_insufficient": insufficient,
        },
        "violations": violations,
    }


def _run_theorem9(cfg: ExperimentConfig, system: sy.AdmissibleSystem) -> Dict:
    rng = random.Random(cfg.seed)
    consts = derive_constants(system, cfg.seed + 1)
    K = consts["K"]
    p = escalate_power(K, cfg.power)
    gamma = system.collection.gamma
    rose = pj.rose(system.collection.factors[0].ambient)
    records: List[Dict] = []
    violations: List[Dict] = []
    insufficient = 0
    for k in range(cfg.samples):
        g = random_raag_word(rng, gamma)
        total_exp = sum(abs(s.exp) for s in g.syllables)
        rec: Dict = {
            "sample": k,
            "word": [[s.gen, s.exp] for s in g.syllables],
            "total_exp": total_exp,
        }
        if not g.syllables:
            rec["status"] = "empty-word"
            records.append(rec)
            continue
        # d_{A^g(k)}(T, phi(g)T) is invariant under the global isometry
        # (prefix . f^{p e_k})^{-1}, which splits phi(g) at the active
        # syllable; both sides stay small when the split is balanced
        exps = [abs(s.exp) for s in g.syllables]
        dists: List[Optional[int]] = []
        ok = True
        fits_all = True
        for idx, syl in enumerate(g.syllables):
            left_exp = p * sum(exps[: idx + 1])
            right_exp = p * sum(exps[idx + 1 :])
            if max(left_exp, right_exp) > cfg.budget_exp:
                dists.append(None)
                fits_all = False
                continue
            left = identity_map(rose.alphabet)
            for s in g.syllables[: idx + 1]:
                left = compose_map(left, map_power(system.map_of(s.gen), p * s.exp))
            right = identity_map(rose.alphabet)
            for s in g.syllables[idx + 1 :]:
                right = compose_map(right, map_power(system.map_of(s.gen), p * s.exp))
            T1 = pj.transform_marked(invert_automorphism(left), rose)
            T2 = pj.transform_marked(right, rose)
            A = system.collection.factors[system.collection.index(syl.gen)]
            d = pj.projection_distance(A, T1, T2)
            dists.append(d)
            if d < K * abs(syl.exp):
                ok = False
        rec["distances"] = dists
        rec["required"] = [K * e for e in exps]
        if not fits_all:
            insufficient += 1
            rec["status"] = "power-insufficient"
        else:
            rec["status"] = "checked"
        if not ok:
            violations.append(rec)
        records.append(rec)
    checked = sum(1 for r in records if r["status"] == "checked")
    verdict = (
        "pass"
        if not violations and not insufficient
        else ("power-insufficient" if not violations and checked == 0 else "fail")
    )
    return {
        "records": records,
        "aggregates": {
            **consts,
            "power": p,
            "checked": checked,
            "power_insufficient": insufficient,
            "theorem_verdict": verdict,
        },
        "violations": violations,
    }


def _run_interval_check(cfg: ExperimentConfig, system: sy.AdmissibleSystem) -> Dict:
    rng = random.Random(cfg.seed)
    coll = system.collection
    ambient = coll.factors[0].ambient
    M = measure_m_emp(system, cfg.seed + 1, min(100, cfg.samples))
    L = measure_l_path(system)
    K = 5 * M + 3 * L
    s = raag.clique_number(coll.gamma)
    m_push = K + 1
    records: List[Dict] = []
    violations: List[Dict] = []
    insufficient = 0
    seg_cache: Dict[Tuple[int, bool], List[pj.MarkedGraph]] = {}

    def segment(idx: int, inverse: bool) -> List[pj.MarkedGraph]:
        key = (idx, inverse)
        if key not in seg_cache:
            sign = -1 if inverse else 1
            seg_cache[key] = [
                pj.transform_marked(
                    map_power(system.maps[idx], sign * step), pj.rose(ambient)
                )
                for step in range(m_push + 1)
            ]
        return seg_cache[key]

    for k in range(cfg.samples):
        i, j = rng.choice(_overlapping_pairs(system))
        if rng.random() < 0.5:
            i, j = j, i
        rec: Dict = {"sample": k, "pair": [coll.names[i], coll.names[j]]}
        if m_push > cfg.budget_exp:
            insufficient += 1
            rec["status"] = "power-insufficient"
            records.append(rec)
            continue
        # two-segment staggered path f_i^k R (k <= m), then f_i^m f_j^k R,
        # pulled back by the isometry f_i^{-m} so every label stays small;
        # the pullback carries the transported second factor back to A_j
        trees = list(reversed(segment(i, True))) + segment(j, False)[1:]
        path = pj.TreePath(tuple(trees))
        A = coll.factors[i]
        B2 = coll.factors[j]
        try:
            ra = pj.interval_of(path, A, M, L)
            rb = pj.interval_of(path, B2, M, L)
        except (FreefactorError, AssertionError) as exc:
            rec["status"] = "threshold-unmet"
            rec["detail"] = str(exc)
            records.append(rec)
            continue
        total = sum(
            pj.projection_distance(F, trees[0], trees[-1]) for F in (A, B2)
        )
        checks = {
            "disjoint": ra.b <= rb.a or rb.b <= ra.a,
            "ordered_first_before_second": ra.b <= rb.a,
            "sum_bound": total <= 5 * s * L * path.length,
        }
        rec["status"] = "checked"
        rec["intervals"] = {"first": [ra.a, ra.b], "second": [rb.a, rb.b]}
        rec["checks"] = checks
        if not all(checks.values()):
            violations.append(rec)
        records.append(rec)
    checked = sum(1 for r in records if r["status"] == "checked")
    return {
        "records": records,
        "aggregates": {
            "M_emp": M,
            "L_path": L,
            "K": K,
            "s": s,
            "push_power": m_push,
            "checked": checked,
            "power_insufficient": insufficient,
        },
        "violations": violations,
    }


def _run_qie_sandwich(cfg: ExperimentConfig, system: sy.AdmissibleSystem) -> Dict:
    rng = random.Random(cfg.seed)
    consts = derive_constants(system, cfg.seed + 1)
    K, L, s = consts["K"], consts["L_path"], consts["s"]
    p = escalate_power(K, cfg.power)
    gamma = system.collection.gamma
    records: List[Dict] = []
    violations: List[Dict] = []
    for k in range(cfg.samples):
        g = random_raag_word(rng, gamma)
        size = sum(abs(s_.exp) for s_ in g.syllables)
        N = p * size  # one path step per generator application
        bound = 5 * s * L * N / K if K else float("inf")
        rec = {
            "sample": k,
            "word_size": size,
            "path_length": N,
            "bound": bound,
            "status": "checked",
        }
        if size > bound:
            violations.append(rec)
        records.append(rec)
    return {
        "records": records,
        "aggregates": {**consts, "power": p},
        "violations": violations,
    }


# --- farey crosscheck -------------------------------------------------------

def _bfs_distances(base: Tuple[int, int], box: int) -> Dict[Tuple[int, int], int]:
    def norm(p, q):
        lead = p if p != 0 else q
        return (-p, -q) if lead < 0 else (p, q)

    def t_range(c, d):
        # integers t with |c + t*d| <= box (d may be 0)
        if d == 0:
            return (-10 ** 9, 10 ** 9) if abs(c) <= box else (1, 0)
        ends = ((-box - c) / d, (box - c) / d)
        lo, hi = min(ends), max(ends)
        return ceil(lo), floor(hi)

    def neighbors(p, q):
        # solutions of p*q2 - q*p2 = 1 are one Bezout pair plus integer
        # multiples of (p, q); the det = -1 line is its negation, which the
        # sign normalization folds onto the same vertices
        a, b = abs(p), abs(q)
        x0, x1, y0, y1 = 1, 0, 0, 1
        while b:
            qq, a, b = a // b, b, a % b
            x0, x1 = x1, x0 - qq * x1
            y0, y1 = y1, y0 - qq * y1
        sp = 1 if p >= 0 else -1
        sq = 1 if q >= 0 else -1
        q2, p2 = sp * x0, -sq * y0  # p*q2 - q*p2 == 1
        lo1, hi1 = t_range(p2, p)
        lo2, hi2 = t_range(q2, q)
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        return [norm(p2 + t * p, q2 + t * q) for t in range(lo, hi + 1)]

    start = norm(*base)
    dist = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for u in neighbors(*v):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    return dist


def _run_farey_crosscheck(cfg: ExperimentConfig) -> Dict:
    rng = random.Random(cfg.seed)
    box = cfg.box
    # BFS over a larger box so in-box geodesics are unconstrained
    dist = _bfs_distances((1, 0), 4 * box)
    base = farey.farey_vertex(1, 0)
    mismatches = []
    checked = 0
    for p in range(-box, box + 1):
        for q in range(-box, box + 1):
            if (p, q) == (0, 0) or gcd(abs(p), abs(q)) != 1:
                continue
            v = farey.farey_vertex(p, q)
            got = farey.farey_distance(base, v)
            want = dist[(v.p, v.q)]
            checked += 1
            if got != want:
                mismatches.append({"p": p, "q": q, "got": got, "bfs": want})
    metric_fail = []
    for k in range(cfg.random_pairs):
        def rand_vertex():
            while True:
                p = rng.randint(-200, 200)
                q = rng.randint(-200, 200)
                if (p, q) != (0, 0) and gcd(abs(p), abs(q)) == 1:
                    return farey.farey_vertex(p, q)
        a, b, c = rand_vertex(), rand_vertex(), rand_vertex()
        dab = farey.farey_distance(a, b)
        ok = (
            dab == farey.farey_distance(b, a)
            and dab <= farey.farey_distance(a, c) + farey.farey_distance(c, b)
            and (dab == 0) == (a == b)
        )
        if not ok:
            metric_fail.append({"sample": k, "a": str(a), "b": str(b), "c": str(c)})
    violations = mismatches + metric_fail
    return {
        "records": [],
        "aggregates": {
            "exhaustive_checked": checked,
            "metric_samples": cfg.random_pairs,
            "mismatches": len(mismatches),
            "metric_failures": len(metric_fail),
        },
        "violations": violations,
    }


# --- entry point ------------------------------------------------------------

def run_experiment(cfg: ExperimentConfig) -> Dict:
    """Execute one mode and assemble the canonical report dictionary."""
    if cfg.mode == "farey-crosscheck":
        body = _run_farey_crosscheck(cfg)
    else:
        system = se.load_fixture(cfg.fixture)
        runner = {
            "behrstock-scan": _run_behrstock_scan,
            "order-audit": _run_order_audit,
            "theorem9-check": _run_theorem9,
            "interval-check": _run_interval_check,
            "qie-sandwich": _run_qie_sandwich,
        }[cfg.mode]
        body = runner(cfg, system)
    insufficient = body["aggregates"].get("power_insufficient", 0)
    if body["violations"]:
        verdict = "fail"
    elif insufficient:
        verdict = "power-insufficient"
    else:
        verdict = "pass"
    return {
        "config": {
            "mode": cfg.mode,
            "fixture": cfg.fixture if cfg.mode != "farey-crosscheck" else None,
            "samples": cfg.samples,
            "seed": cfg.seed,
            "nielsen_len": cfg.nielsen_len,
            "power": cfg.power,
            "budget_exp": cfg.budget_exp,
        },
        "records": body["records"],
        "aggregates": body["aggregates"],
        "verdict": verdict,
        "violations": body["violations"],
    }
