"""Verlinde (fusion) rings at level k.

Structure constants are computed exactly by Kac-Walton: the weights of one
factor are added to the other and pushed into the alcove with a sign.  The
modular S-matrix is built numerically only as an independent cross-check.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cartan import CartanDatum, build_cartan
from .repring import RepRingElement, dim, weight_system
from .weyl import alcove_project, conjugate_weight, enumerate_Pk_plus, finite_reflect

AffWeight = tuple[int, ...]


class FusionError(ValueError):
    pass


class VerlindeElement:
    """Integer combination of level-k classes [L(lambda)]."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[AffWeight, int] | Iterable[tuple[AffWeight, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[AffWeight, int] = defaultdict(int)
        for w, c in items:
            acc[tuple(int(x) for x in w)] += int(c)
        self.terms = {w: c for w, c in acc.items() if c}

    def __add__(self, other: "VerlindeElement") -> "VerlindeElement":
        return VerlindeElement(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "VerlindeElement":
        return VerlindeElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "VerlindeElement") -> "VerlindeElement":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, VerlindeElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*[{list(w)}]" for w, c in sorted(self.terms.items(), reverse=True))


def is_positive(v: VerlindeElement) -> bool:
    return bool(v) and all(c >= 0 for c in v.terms.values())


def _bareiss_det(m: list[list[int]]) -> int:
    m = [row[:] for row in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def weyl_group_order(datum: CartanDatum) -> int:
    det = _bareiss_det([[int(x) for x in row] for row in datum.cartan_matrix])
    return math.factorial(datum.rank) * math.prod(datum.marks[1:]) * det


class FusionRing:
    """Level-k Verlinde ring of a finite type, with a dense structure-constant table."""

    def __init__(self, datum: CartanDatum, k: int):
        if k < 1:
            raise FusionError("level must be positive")
        self.datum = datum
        self.k = k
        self.basis: list[AffWeight] = enumerate_Pk_plus(datum, k)
        self.index = {w: i for i, w in enumerate(self.basis)}
        self.size = len(self.basis)
        self.unit = self.index[(k,) + (0,) * datum.rank]

    def __repr__(self) -> str:
        return f"FusionRing({self.datum.name}, k={self.k}, size={self.size})"

    # -- element conversion
    def vector(self, v: VerlindeElement) -> np.ndarray:
        out = np.zeros(self.size, dtype=np.int64)
        for w, c in v.terms.items():
            if w not in self.index:
                raise FusionError(f"{w} is not a level-{self.k} dominant weight")
            out[self.index[w]] += c
        return out

    def element(self, vec: Sequence[int]) -> VerlindeElement:
        return VerlindeElement((self.basis[i], int(c)) for i, c in enumerate(vec) if c)

    def basis_element(self, w: AffWeight) -> VerlindeElement:
        if tuple(w) not in self.index:
            raise FusionError(f"{tuple(w)} is not in P_{self.k}^+")
        return VerlindeElement({tuple(w): 1})

    # -- structure constants
    def _kac_walton(self, a: AffWeight, b: AffWeight) -> np.ndarray:
        d = self.datum
        fa, fb = a[1:], b[1:]
        if dim(d, fa) < dim(d, fb):
            fa, fb = fb, fa
        out = np.zeros(self.size, dtype=np.int64)
        for tau, m in weight_system(d, fb).items():
            res = alcove_project(d, [x + y for x, y in zip(fa, tau)], self.k)
            if res.sign:
                out[self.index[res.weight]] += res.sign * m
        return out

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """N[a, b, c] = multiplicity of basis c in basis a times basis b."""
        n = self.size
        table = np.zeros((n, n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                row = self._kac_walton(self.basis[i], self.basis[j])
                table[i, j] = row
                table[j, i] = row
        return table

    def multiply_vectors(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("a,b,abc->c", x, y, self.structure_constants)

    def multiply(self, a: VerlindeElement, b: VerlindeElement) -> VerlindeElement:
        return self.element(self.multiply_vectors(self.vector(a), self.vector(b)))

    def multiplication_matrix(self, v: VerlindeElement) -> np.ndarray:
        """Row b holds the coordinates of v times basis b."""
        return np.einsum("a,abc->bc", self.vector(v), self.structure_constants)

    # -- maps into the ring
    def project(self, finite_weight: Sequence[int]) -> VerlindeElement:
        res = alcove_project(self.datum, finite_weight, self.k)
        return VerlindeElement({res.weight: res.sign}) if res.sign else VerlindeElement()

    def phi_image(self, r: RepRingElement) -> VerlindeElement:
        acc: dict[AffWeight, int] = defaultdict(int)
        for w, c in r.terms.items():
            res = alcove_project(self.datum, w, self.k)
            if res.sign:
                acc[res.weight] += res.sign * c
        return VerlindeElement(acc)

    # -- numerics
    def qdim(self, lam: Sequence[int]) -> float:
        return qdim(self.datum, lam, self.k)

    def qdim_element(self, v: VerlindeElement) -> float:
        return sum(c * self.qdim(w) for w, c in v.terms.items())

    def is_unit(self, v: VerlindeElement) -> bool:
        m = self.multiplication_matrix(v)
        return abs(_bareiss_det([[int(x) for x in row] for row in m])) == 1

    def conjugate(self, lam: AffWeight) -> AffWeight:
        return conjugate_weight(self.datum, lam)

    def is_simple_current(self, v: VerlindeElement) -> bool:
        """A single class [L(lam)] with [L(lam)] * [L(lam*)] = 1, i.e. an invertible object."""
        if len(v.terms) != 1:
            return False
        (lam, c), = v.terms.items()
        if c != 1:
            return False
        dual = self.basis_element(self.conjugate(lam))
        return self.multiply(v, dual) == self.basis_element(self.basis[self.unit])


@lru_cache(maxsize=None)
def fusion_ring(type_label: str, k: int) -> FusionRing:
    return FusionRing(build_cartan(type_label), k)


def fusion_multiply(datum: CartanDatum, a: VerlindeElement, b: VerlindeElement, k: int) -> VerlindeElement:
    for w in list(a.terms) + list(b.terms):
        if sum(c * x for c, x in zip(datum.comarks, w)) != k:
            raise FusionError(f"{w} does not have level {k}")
    return fusion_ring(datum.name, k).multiply(a, b)


def phi_image(datum: CartanDatum, r: RepRingElement, k: int) -> VerlindeElement:
    return fusion_ring(datum.name, k).phi_image(r)


def is_unit(datum: CartanDatum, v: VerlindeElement, k: int) -> bool:
    return fusion_ring(datum.name, k).is_unit(v)


def qdim(datum: CartanDatum, lam: Sequence[int], k: int) -> float:
    """Quantum dimension via the sine product; lam may be affine or finite."""
    finite = tuple(lam[1:]) if len(lam) == datum.rank + 1 else tuple(lam)
    big = k + datum.dual_coxeter_hvee
    val = 1.0
    for root in datum.positive_roots:
        top = sum((l + 1) * r * e for l, r, e in zip(finite, root, datum.eps))
        bottom = sum(r * e for r, e in zip(root, datum.eps))
        val *= math.sin(math.pi * float(top) / big) / math.sin(math.pi * float(bottom) / big)
    return val


# -- modular S-matrix ---------------------------------------------------------

@dataclass
class SMatrix:
    labels: list[AffWeight]
    entries: np.ndarray
    normalization: complex

    def index(self, lam: AffWeight) -> int:
        return self.labels.index(tuple(lam))


def _signed_orbit(datum: CartanDatum, regular: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """W_0-orbit of a regular weight with the sign of the element reaching each point."""
    seen = {regular: 1}
    layer = [regular]
    while layer:
        nxt = []
        for x in layer:
            s = -seen[x]
            for i in range(datum.rank):
                y = finite_reflect(datum, i, x)
                if y not in seen:
                    seen[y] = s
                    nxt.append(y)
        layer = nxt
    pts = np.array(list(seen.keys()), dtype=np.float64)
    signs = np.array(list(seen.values()), dtype=np.float64)
    return pts, signs


def s_matrix(datum: CartanDatum, k: int, max_weyl_order: int = 10**7, force: bool = False) -> SMatrix:
    order = weyl_group_order(datum)
    if order > max_weyl_order and not force:
        raise FusionError(f"|W_0| = {order} exceeds the feasibility bound {max_weyl_order}; "
                          f"pass force=True (--force on the command line) or raise the bound to at least {order}")
    labels = enumerate_Pk_plus(datum, k)
    n = len(labels)
    gram = np.array([[float(x) for x in row] for row in datum.gram])
    big = k + datum.dual_coxeter_hvee
    shifted = np.array([[c + 1 for c in lam[1:]] for lam in labels], dtype=np.float64)
    raw = np.zeros((n, n), dtype=np.complex128)
    for a, lam in enumerate(labels):
        pts, signs = _signed_orbit(datum, tuple(c + 1 for c in lam[1:]))
        pairings = pts @ gram @ shifted.T          # (|W|, n)
        terms = signs[:, None] * np.exp(-2j * np.pi * pairings / big)
        raw[a] = terms.sum(axis=0)  # numpy uses pairwise summation
    norm = math.sqrt((raw @ raw.conj().T)[0, 0].real)
    phase = raw[0, 0] / abs(raw[0, 0])
    const = norm * phase
    return SMatrix(labels, raw / const, const)


def verlinde_coefficient(S: SMatrix, lam: AffWeight, mu: AffWeight, nu: AffWeight, tol: float = 1e-6) -> int:
    e = S.entries
    a, b, c = S.index(lam), S.index(mu), S.index(nu)
    raw = np.sum(e[a] * e[b] * e[c].conj() / e[0])
    val = round(raw.real)
    resid = abs(raw - val)
    if resid >= tol:
        raise FusionError(f"Verlinde sum {raw} is not within {tol} of an integer")
    return int(val)


def verlinde_table(S: SMatrix) -> tuple[np.ndarray, float]:
    """All structure constants from the Verlinde formula and the worst rounding residual."""
    e = S.entries
    raw = np.einsum("aw,bw,cw,w->abc", e, e, e.conj(), 1 / e[0])
    rounded = np.rint(raw.real)
    resid = float(np.max(np.abs(raw - rounded)))
    return rounded.astype(np.int64), resid
