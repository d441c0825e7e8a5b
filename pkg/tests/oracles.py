"""Independent reference implementations used as test oracles.

Everything here is deliberately naive and self-contained: plain tuples and
dicts, brute-force closures, BFS.  Frozen before the library code was tuned;
the library must agree with these, not the other way around.
"""

from collections import deque
from math import gcd


# --- free words -------------------------------------------------------------

def naive_reduce(seq):
    """Quadratic free reduction by repeated scanning."""
    word = list(seq)
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] == -word[i + 1]:
                del word[i : i + 2]
                changed = True
                break
    return tuple(word)


def subgroup_ball(gens, max_len):
    """All reduced words of length <= max_len in the subgroup <gens>."""
    gens = [naive_reduce(g) for g in gens]
    gens = [g for g in gens if g]
    closure = {(): True}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                for gg in (g, tuple(-x for x in reversed(g))):
                    prod = naive_reduce(w + gg)
                    if len(prod) <= max_len and prod not in closure:
                        closure[prod] = True
                        nxt.append(prod)
        frontier = nxt
    return set(closure)


# --- Farey graph ------------------------------------------------------------

def farey_norm(p, q):
    lead = p if p != 0 else q
    if lead < 0:
        p, q = -p, -q
    return (p, q)


def farey_neighbors(v, bound):
    """All primitive neighbours (|det| = 1) of v with coordinates <= bound."""
    p, q = v
    # solve p*y - q*x = +-1 : one solution via extended gcd, rest differ by t*(p,q)
    x0, x1, y0, y1, a, b = 1, 0, 0, 1, p, q
    while b:
        k = a // b
        a, b = b, a - k * b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    assert a in (1, -1)
    # p*x0 + q*y0 = a ; base solution of p*y - q*x = a: (x, y) = (-y0, x0)
    bx, by = -y0 * a, x0 * a
    out = set()
    for sign in (1, -1):
        sx, sy = sign * bx, sign * by
        # walk t until out of the box in both directions
        for step in (1, -1):
            t = 0
            while True:
                x, y = sx + t * p, sy + t * q
                if abs(x) > bound or abs(y) > bound:
                    if t != 0:
                        break
                else:
                    out.add(farey_norm(x, y))
                t += step
                if abs(t) > 4 * bound + 8:
                    break
    out.discard(farey_norm(p, q))
    return out


def farey_bfs_distances(source, bound):
    """BFS distances from source over vertices with |p|, |q| <= bound."""
    source = farey_norm(*source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in farey_neighbors(v, bound):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def primitive_pairs(bound):
    out = set()
    for p in range(-bound, bound + 1):
        for q in range(-bound, bound + 1):
            if (p, q) != (0, 0) and gcd(abs(p), abs(q)) == 1:
                out.add(farey_norm(p, q))
    return out


# --- RAAG rewriting ---------------------------------------------------------

def raag_closure(adjacency, word):
    """Full closure of a syllable tuple under moves (1), (2), (3).

    ``adjacency`` is a set of frozensets {a, b}; ``word`` a tuple of
    (generator, exponent) pairs with nonzero exponents.
    """
    word = tuple((g, e) for g, e in word if e != 0)
    seen = {word}
    queue = [word]
    while queue:
        cur = queue.pop()
        for i in range(len(cur) - 1):
            (g1, e1), (g2, e2) = cur[i], cur[i + 1]
            cands = []
            if g1 == g2:
                e = e1 + e2
                merged = () if e == 0 else ((g1, e),)
                cands.append(cur[:i] + merged + cur[i + 2 :])
            elif frozenset((g1, g2)) in adjacency:
                cands.append(cur[:i] + ((g2, e2), (g1, e1)) + cur[i + 2 :])
            for nxt in cands:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return seen


def raag_min_forms(adjacency, word):
    closure = raag_closure(adjacency, word)
    m = min(len(w) for w in closure)
    return {w for w in closure if len(w) == m}


def raag_canonical(adjacency, word, vertex_order):
    rank = {v: i for i, v in enumerate(sorted(vertex_order))}
    return min(raag_min_forms(adjacency, word), key=lambda w: tuple((rank[g], e) for g, e in w))
