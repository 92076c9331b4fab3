"""Cartan data for finite types A-G and their untwisted affine extensions.

Conventions: ``cartan_matrix[i][j] = <h_i, alpha_j> = 2(alpha_i|alpha_j)/(alpha_i|alpha_i)``,
so column ``j`` of the finite matrix expands the simple root alpha_j over the
fundamental weights.  Node labels follow Kac's tables for classical types and
Bourbaki for E (chain 1-3-4-5-6-7-8 with node 2 attached to 4).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

SUPPORTED = "ABCDEFG"


class CartanError(ValueError):
    pass


def _edges(family: str, rank: int) -> list[tuple[int, int, int, int]]:
    """Edges (i, j, a_ij, a_ji) of the finite Dynkin diagram, 1-based nodes."""
    chain = [(i, i + 1, -1, -1) for i in range(1, rank)]
    if family == "A":
        return chain
    if family == "B":
        return chain[:-1] + [(rank - 1, rank, -1, -2)]
    if family == "C":
        return chain[:-1] + [(rank - 1, rank, -2, -1)]
    if family == "D":
        return chain[:-1] + [(rank - 2, rank, -1, -1)]
    if family == "E":
        edges = [(1, 3), (3, 4), (2, 4)] + [(i, i + 1) for i in range(4, rank)]
        return [(i, j, -1, -1) for i, j in edges]
    if family == "F":
        return [(1, 2, -1, -1), (2, 3, -1, -2), (3, 4, -1, -1)]
    if family == "G":
        return [(1, 2, -1, -3)]
    raise CartanError(f"unsupported family {family!r}")


def check_family(family: str, rank: int) -> None:
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 4,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }
    if family not in ok:
        raise CartanError(f"unsupported family {family!r}; expected one of {SUPPORTED}")
    if not ok[family]:
        raise CartanError(f"type {family}{rank} is not a valid finite type")


def finite_cartan_matrix(family: str, rank: int) -> np.ndarray:
    check_family(family, rank)
    a = 2 * np.eye(rank, dtype=np.int64)
    for i, j, aij, aji in _edges(family, rank):
        a[i - 1, j - 1] = aij
        a[j - 1, i - 1] = aji
    return a


def _inverse(a: np.ndarray) -> list[list[Fraction]]:
    n = len(a)
    m = [[Fraction(int(x)) for x in row] + [Fraction(int(i == r)) for i in range(n)]
         for r, row in enumerate(a)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def _symmetrizer(a: np.ndarray) -> list[Fraction]:
    """eps_i = (alpha_i|alpha_i)/2 with the long roots normalised to 1."""
    n = len(a)
    eps: list[Fraction | None] = [None] * n
    eps[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and a[i, j] != 0 and eps[j] is None:
                # eps_i a_ij = eps_j a_ji
                eps[j] = eps[i] * int(a[i, j]) / int(a[j, i])
                stack.append(j)
    top = max(eps)
    return [e / top for e in eps]


def _positive_roots(a: np.ndarray) -> list[tuple[int, ...]]:
    """Positive roots in simple-root coordinates via root strings."""
    n = len(a)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                # <beta, alpha_i^vee> = sum_j beta_j a_ij
                pairing = sum(beta[j] * int(a[i, j]) for j in range(n))
                # length p of the downward string beta - p alpha_i
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                q = p - pairing
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    return sorted(roots, key=lambda r: (sum(r), tuple(-x for x in r)))


@dataclass(frozen=True, eq=False)
class CartanDatum:
    family: str
    rank: int
    cartan_matrix: np.ndarray          # finite part, rank x rank
    affine_matrix: np.ndarray          # (rank+1) x (rank+1), node 0 first
    marks: tuple[int, ...]             # a_0 .. a_n
    comarks: tuple[int, ...]
    coxeter_h: int
    dual_coxeter_hvee: int
    eps: tuple[Fraction, ...]          # (alpha_i|alpha_i)/2 for i in I_0
    gram: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    positive_coroots: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def index_set(self) -> tuple[int, ...]:
        return tuple(range(self.rank + 1))

    @property
    def t(self) -> tuple[int, ...]:
        return tuple(int(1 / e) for e in self.eps)

    @property
    def fold_degree(self) -> tuple[int, ...]:
        d = max(self.t)
        return tuple(d // ti for ti in self.t)

    @property
    def d(self) -> int:
        return max(self.t)

    @property
    def rho_finite(self) -> tuple[int, ...]:
        return (1,) * self.rank

    @property
    def theta(self) -> tuple[int, ...]:
        return self.marks[1:]

    @property
    def simple_root_coords(self) -> np.ndarray:
        """Row j gives alpha_j over the fundamental weights."""
        return self.cartan_matrix.T.copy()

    def root_to_weight(self, root) -> tuple[int, ...]:
        a = self.cartan_matrix
        return tuple(int(sum(a[i, j] * root[j] for j in range(self.rank))) for i in range(self.rank))

    def level(self, finite_weight) -> int:
        return sum(c * w for c, w in zip(self.comarks[1:], finite_weight))


def bilinear(datum: CartanDatum, x, y, basis: str = "weight") -> Fraction:
    """Normalised invariant form, (theta|theta) = 2.

    ``basis`` is ``"weight"`` (fundamental weights) or ``"root"`` (simple roots)
    and applies to both arguments.
    """
    n = datum.rank
    if len(x) != n or len(y) != n:
        raise CartanError(f"expected vectors of length {n}")
    if basis == "weight":
        g = datum.gram
        return sum((Fraction(x[i]) * g[i][j] * y[j] for i in range(n) for j in range(n)), Fraction(0))
    if basis == "root":
        a, e = datum.cartan_matrix, datum.eps
        return sum((Fraction(x[i]) * e[i] * int(a[i, j]) * y[j] for i in range(n) for j in range(n)),
                   Fraction(0))
    raise CartanError(f"unknown basis {basis!r}")


def root_weight_pairing(datum: CartanDatum, weight, root) -> Fraction:
    """(weight|root) for a weight over fundamental weights and a root over simple roots."""
    return sum((Fraction(w) * r * e for w, r, e in zip(weight, root, datum.eps)), Fraction(0))


def positive_roots(datum: CartanDatum) -> list[tuple[int, ...]]:
    return list(datum.positive_roots)


def parse_type(label: str) -> tuple[str, int]:
    m = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*(\^?\(1\))?\s*", label)
    if not m:
        raise CartanError(f"cannot parse type label {label!r}")
    return m.group(1).upper(), int(m.group(2))


@lru_cache(maxsize=None)
def build_cartan(family: str, rank: int | None = None) -> CartanDatum:
    if rank is None:
        family, rank = parse_type(family)
    family = family.upper()
    a = finite_cartan_matrix(family, rank)
    eps = _symmetrizer(a)
    roots = _positive_roots(a)
    theta = roots[-1]
    marks = (1,) + theta
    comarks = (1,) + tuple(int(m * e) for m, e in zip(theta, eps))
    inv = _inverse(a)
    gram = tuple(tuple(inv[k][i] * eps[k] for k in range(rank)) for i in range(rank))

    aff = np.zeros((rank + 1, rank + 1), dtype=np.int64)
    aff[1:, 1:] = a
    aff[0, 0] = 2
    sym = [[eps[i] * int(a[i, j]) for j in range(rank)] for i in range(rank)]
    for j in range(rank):
        theta_alpha = sum(theta[i] * sym[i][j] for i in range(rank))
        aff[0, j + 1] = int(-theta_alpha)          # -2(theta|alpha_j)/(theta|theta)
        aff[j + 1, 0] = int(-theta_alpha / eps[j])  # -2(alpha_j|theta)/(alpha_j|alpha_j)

    coroots = []
    for r in roots:
        norm = sum(r[i] * sym[i][j] * r[j] for i in range(rank) for j in range(rank)) / 2
        coroots.append(tuple(r[i] * eps[i] / norm for i in range(rank)))

    return CartanDatum(
        family=family,
        rank=rank,
        cartan_matrix=a,
        affine_matrix=aff,
        marks=marks,
        comarks=comarks,
        coxeter_h=sum(marks),
        dual_coxeter_hvee=sum(comarks),
        eps=tuple(eps),
        gram=gram,
        positive_roots=tuple(roots),
        positive_coroots=tuple(coroots),
    )


def catalog(max_classical_rank: int = 8) -> list[tuple[str, int]]:
    out = [("A", n) for n in range(1, max_classical_rank + 1)]
    out += [("B", n) for n in range(2, max_classical_rank + 1)]
    out += [("C", n) for n in range(2, max_classical_rank + 1)]
    out += [("D", n) for n in range(4, max_classical_rank + 1)]
    out += [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]
    return out


def info(datum: CartanDatum) -> dict:
    return {
        "type": datum.name,
        "marks": list(datum.marks),
        "comarks": list(datum.comarks),
        "h": datum.coxeter_h,
        "hvee": datum.dual_coxeter_hvee,
        "d": datum.d,
        "d_i": list(datum.fold_degree),
        "t_i": list(datum.t),
        "positive_roots": len(datum.positive_roots),
    }
