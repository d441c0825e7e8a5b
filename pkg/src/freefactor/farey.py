"""The rank-2 free factor complex as the Farey graph.

Vertices are primitive integer pairs up to sign; two vertices are adjacent
iff the corresponding pairs form a basis of Z^2 (determinant +-1).  Distance
is computed by continued-fraction descent: after moving one endpoint to
(1, 0) by an isometry, a vertex p/q with q >= 2 has exactly two neighbours of
smaller denominator (its Stern-Brocot parents), and some geodesic to (1, 0)
descends through one of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, List, Tuple

from freefactor.errors import NonPrimitiveImage, NotHyperbolic
from freefactor.words import GroupMap, Word


@dataclass(frozen=True)
class FareyVertex:
    p: int
    q: int

    def __post_init__(self):
        assert (self.p, self.q) != (0, 0)
        assert gcd(abs(self.p), abs(self.q)) == 1, "pair must be primitive"
        # sign normalization: first nonzero coordinate positive
        lead = self.p if self.p != 0 else self.q
        assert lead > 0, "vertex must be sign-normalized"

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def farey_vertex(p: int, q: int) -> FareyVertex:
    g = gcd(abs(p), abs(q))
    if g == 0:
        raise NonPrimitiveImage("zero vector is not a vertex")
    if g != 1:
        raise NonPrimitiveImage(f"({p}, {q}) is not primitive")
    lead = p if p != 0 else q
    if lead < 0:
        p, q = -p, -q
    return FareyVertex(p, q)


def vertex_from_str(s: str) -> FareyVertex:
    p, q = s.split("/")
    return farey_vertex(int(p), int(q))


def farey_vertex_of(factor_word_in_basis: Word) -> FareyVertex:
    """Abelianize a rank-1 factor generator written in a rank-2 basis."""
    assert factor_word_in_basis.alphabet.rank == 2
    p = sum(1 if x == 1 else -1 for x in factor_word_in_basis.letters if abs(x) == 1)
    q = sum(1 if x == 2 else -1 for x in factor_word_in_basis.letters if abs(x) == 2)
    return farey_vertex(p, q)


def adjacent(u: FareyVertex, v: FareyVertex) -> bool:
    return abs(u.p * v.q - u.q * v.p) == 1


@lru_cache(maxsize=1_000_000)
def _dist_to_infinity(p: int, q: int) -> int:
    """Distance from p/q (q >= 0, primitive) to (1, 0).

    A vertex with q >= 2 is the mediant of its two Stern-Brocot parents, its
    only neighbours of smaller denominator, and some geodesic to (1, 0)
    descends through a parent.  Writing p/q = [a0; a1, ..., ak], the nodes
    [a0; ..., a_{j-1}, t] have parents [a0; ..., a_{j-1}, t-1] and the
    convergent C_{j-1}, which collapses the descent to a linear recurrence in
    the partial quotients.
    """
    if q == 0:
        return 0
    if q == 1:
        return 1
    cf = []
    a, b = p, q
    while b:
        k = a // b
        cf.append(k)
        a, b = b, a - k * b
    k = len(cf) - 1  # floor CF of a non-integer: k >= 1 and cf[k] >= 2
    dC = [1]  # dC[j] = d(infinity, [a0; ...; a_j])
    f1 = 1    # f(j, 1) = d of [a0; ...; a_{j-1}, 1]; for j = 1 an integer
    for j in range(1, k + 1):
        if j > 1:
            f1 = min(f1 + cf[j - 1], dC[j - 2] + 1)
        t = cf[j]
        dC.append(f1 if t == 1 else min(f1 + t - 1, dC[j - 1] + 1))
    return dC[k]


def _norm(p: int, q: int) -> Tuple[int, int]:
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return p, q


def farey_distance(u: FareyVertex, v: FareyVertex) -> int:
    """Exact geodesic distance, by continued-fraction descent."""
    if u == v:
        return 0
    # isometry sending u to (1, 0): rows (s, -r), (-q, p) with p s - q r = 1
    p, q = u.p, u.q
    r, s = _bezout(p, q)
    a = s * v.p - r * v.q
    b = -q * v.p + p * v.q
    a, b = _norm(a, b)
    return _dist_to_infinity(a, b)


def _bezout(p: int, q: int) -> Tuple[int, int]:
    """(r, s) with p*s - q*r = 1."""
    # extended gcd: find x, y with p*x + q*y = 1
    x0, x1, y0, y1, a, b = 1, 0, 0, 1, p, q
    while b:
        k = a // b
        a, b = b, a - k * b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a == -1:
        x0, y0 = -x0, -y0
        a = 1
    assert a == 1
    return -y0, x0


def diameter(vertices: Iterable[FareyVertex]) -> int:
    vs = list(vertices)
    best = 0
    for i, u in enumerate(vs):
        for v in vs[i + 1 :]:
            best = max(best, farey_distance(u, v))
    return best


@dataclass(frozen=True)
class Matrix2Z:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        assert abs(self.det) == 1, "matrix must lie in GL(2, Z)"

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: "Matrix2Z") -> "Matrix2Z":
        return Matrix2Z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def power(self, k: int) -> "Matrix2Z":
        assert k >= 0
        result = Matrix2Z(1, 0, 0, 1)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result


def matrix_of_out(f: GroupMap) -> Matrix2Z:
    """Abelianization matrix of a rank-2 automorphism (columns = images)."""
    assert f.domain.rank == 2 and f.codomain.rank == 2
    cols = []
    for w in f.images:
        e1 = sum(1 if x == 1 else -1 for x in w.letters if abs(x) == 1)
        e2 = sum(1 if x == 2 else -1 for x in w.letters if abs(x) == 2)
        cols.append((e1, e2))
    m = Matrix2Z(cols[0][0], cols[1][0], cols[0][1], cols[1][1])
    return m


def act(m: Matrix2Z, v: FareyVertex) -> FareyVertex:
    return farey_vertex(m.a * v.p + m.b * v.q, m.c * v.p + m.d * v.q)


def is_fully_irreducible(m: Matrix2Z) -> bool:
    """Hyperbolic matrices have no primitive eigenvector: |trace| > 2."""
    return abs(m.trace) > 2


def translation_length_estimate(m: Matrix2Z, k_max: int = 16):
    """Distances d(v, M^k v) for v = (1,0) and the Fekete upper bound.

    The sequence is subadditive, so min_k d_k / k is an upper bound for the
    stable translation length and the stabilized slope is the estimate.
    """
    assert 1 <= k_max <= 16
    if not is_fully_irreducible(m):
        raise NotHyperbolic(f"trace {m.trace} is not hyperbolic")
    v = farey_vertex(1, 0)
    dists: List[int] = []
    for k in range(1, k_max + 1):
        dists.append(farey_distance(v, act(m.power(k), v)))
    fekete = min(d / k for k, d in enumerate(dists, start=1))
    return dists, fekete
