"""The representation ring of a simple Lie algebra.

Elements are integer combinations of irreducible classes [L(lambda)], keyed by
dominant weights over the fundamental weights.  Weight multiplicities come from
Freudenthal's recursion, products from Brauer-Klimyk reduction.
"""
from __future__ import annotations

import json
import math
import os
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .cartan import CartanDatum
from .weyl import finite_orbit, finite_reflect

Weight = tuple[int, ...]


class RepRingError(ArithmeticError):
    pass


class RepRingElement:
    """Integer combination of irreducible classes; zero multiplicities are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Weight, int] | Iterable[tuple[Weight, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Weight, int] = defaultdict(int)
        for w, c in items:
            acc[tuple(int(x) for x in w)] += int(c)
        self.terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def irreducible(cls, w: Iterable[int], mult: int = 1) -> "RepRingElement":
        return cls({tuple(w): mult})

    @classmethod
    def one(cls, rank: int) -> "RepRingElement":
        return cls({(0,) * rank: 1})

    def __add__(self, other: "RepRingElement") -> "RepRingElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return RepRingElement(out)

    def __neg__(self) -> "RepRingElement":
        return RepRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "RepRingElement") -> "RepRingElement":
        return self + (-other)

    def scale(self, c: int) -> "RepRingElement":
        return RepRingElement({w: c * m for w, m in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, RepRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"{c}*L{list(w)}" if c != 1 else f"L{list(w)}" for w, c in sorted(self.terms.items())]
        return " + ".join(parts)

    def is_genuine(self) -> bool:
        return all(c > 0 for c in self.terms.values())

    def to_json(self) -> list[dict]:
        return [{"weight": list(w), "mult": c} for w, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, items: list[dict]) -> "RepRingElement":
        return cls((tuple(d["weight"]), d["mult"]) for d in items)


# -- weight systems -----------------------------------------------------------

@dataclass
class _Forms:
    """Integer-scaled form data shared by the Freudenthal recursion."""
    datum: CartanDatum
    scale: int = 0
    gram: list[list[int]] = field(default_factory=list)
    root_weights: list[Weight] = field(default_factory=list)

    def __post_init__(self):
        g = self.datum.gram
        n = self.datum.rank
        self.scale = math.lcm(*(x.denominator for row in g for x in row))
        self.gram = [[int(g[i][j] * self.scale) for j in range(n)] for i in range(n)]
        self.root_weights = [self.datum.root_to_weight(r) for r in self.datum.positive_roots]

    def form(self, x: Weight, y: Weight) -> int:
        g = self.gram
        return sum(x[i] * g[i][j] * y[j] for i in range(len(x)) if x[i] for j in range(len(y)) if y[j])


@lru_cache(maxsize=None)
def _forms(datum: CartanDatum) -> _Forms:
    return _Forms(datum)


def _dominant_rep(datum: CartanDatum, w: Weight) -> Weight:
    w = list(w)
    while True:
        i = next((i for i, c in enumerate(w) if c < 0), None)
        if i is None:
            return tuple(w)
        w = list(finite_reflect(datum, i, w))


def dominant_weights_below(datum: CartanDatum, lam: Weight) -> dict[Weight, tuple[int, ...]]:
    """Dominant mu <= lam, mapped to lam - mu in simple-root coordinates."""
    lam = tuple(lam)
    roots = datum.positive_roots
    root_w = _forms(datum).root_weights
    found = {lam: (0,) * datum.rank}
    stack = [lam]
    while stack:
        mu = stack.pop()
        depth = found[mu]
        for r, rw in zip(roots, root_w):
            nu = tuple(a - b for a, b in zip(mu, rw))
            if min(nu) >= 0 and nu not in found:
                found[nu] = tuple(a + b for a, b in zip(depth, r))
                stack.append(nu)
    return found


@lru_cache(maxsize=4096)
def dominant_multiplicities(datum: CartanDatum, lam: Weight) -> dict[Weight, int]:
    """Freudenthal multiplicities of the dominant weights of L(lam)."""
    lam = tuple(lam)
    if min(lam) < 0:
        raise RepRingError(f"{lam} is not dominant")
    f = _forms(datum)
    rho = datum.rho_finite
    below = dominant_weights_below(datum, lam)
    order = sorted(below, key=lambda mu: sum(below[mu]))
    lr = tuple(a + b for a, b in zip(lam, rho))
    top = f.form(lr, lr)
    mult: dict[Weight, int] = {lam: 1}
    for mu in order[1:]:
        acc = 0
        for rw in f.root_weights:
            nu = tuple(a + b for a, b in zip(mu, rw))
            while True:
                m = mult.get(_dominant_rep(datum, nu), 0)
                if not m:
                    break
                acc += m * f.form(nu, rw)
                nu = tuple(a + b for a, b in zip(nu, rw))
        mr = tuple(a + b for a, b in zip(mu, rho))
        denom = top - f.form(mr, mr)
        value, rem = divmod(2 * acc, denom)
        if rem:
            raise RepRingError(f"non-integral Freudenthal multiplicity at {mu}")
        if value:
            mult[mu] = value
    return mult


@lru_cache(maxsize=1024)
def _weight_system(datum: CartanDatum, lam: Weight) -> tuple[tuple[Weight, int], ...]:
    out = []
    for mu, m in dominant_multiplicities(datum, lam).items():
        out.extend((nu, m) for nu in finite_orbit(datum, mu))
    return tuple(out)


def weight_system(datum: CartanDatum, lam: Iterable[int]) -> dict[Weight, int]:
    return dict(_weight_system(datum, tuple(lam)))


def dim(datum: CartanDatum, lam: Iterable[int]) -> int:
    """Weyl dimension formula."""
    lam = tuple(lam)
    num = Fraction(1)
    for root in datum.positive_roots:
        top = sum((l + 1) * r * e for l, r, e in zip(lam, root, datum.eps))
        bottom = sum(r * e for r, e in zip(root, datum.eps))
        num *= Fraction(top) / bottom
    if num.denominator != 1:
        raise RepRingError("Weyl dimension is not an integer")
    return int(num)


def element_dim(datum: CartanDatum, x: RepRingElement) -> int:
    return sum(c * dim(datum, w) for w, c in x.terms.items())


def element_size(datum: CartanDatum, x: RepRingElement) -> int:
    """Total dimension ignoring signs; a cost estimate for products."""
    return sum(abs(c) * dim(datum, w) for w, c in x.terms.items())


# -- products -----------------------------------------------------------------

def reduce_dominant(datum: CartanDatum, shifted: Iterable[int]) -> tuple[int, Weight | None]:
    """Move a rho-shifted weight into the dominant chamber; sign 0 on a wall."""
    x = list(shifted)
    a = datum.cartan_matrix
    n = len(x)
    sign = 1
    while True:
        if 0 in x:
            return 0, None
        i = next((i for i in range(n) if x[i] < 0), None)
        if i is None:
            return sign, tuple(c - 1 for c in x)
        ci = x[i]
        for j in range(n):
            if a[j, i]:
                x[j] -= ci * int(a[j, i])
        sign = -sign


@lru_cache(maxsize=65536)
def _basis_product(datum: CartanDatum, lam: Weight, mu: Weight) -> tuple[tuple[Weight, int], ...]:
    if dim(datum, lam) < dim(datum, mu):
        lam, mu = mu, lam
    acc: dict[Weight, int] = defaultdict(int)
    shifted = tuple(l + 1 for l in lam)
    for nu, m in _weight_system(datum, mu):
        sign, w = reduce_dominant(datum, [a + b for a, b in zip(shifted, nu)])
        if sign:
            acc[w] += sign * m
    return tuple((w, c) for w, c in acc.items() if c)


# past this many weights per factor the product runs on numpy arrays
BATCH_THRESHOLD = 20000


def _orbit_array(datum: CartanDatum, mu: Weight) -> np.ndarray:
    """W-orbit of a dominant weight, built layer by layer in Bruhat length."""
    a = np.asarray(datum.cartan_matrix, dtype=np.int64)
    layer = np.array([mu], dtype=np.int64)
    layers = [layer]
    while len(layer):
        nxt = []
        for i in range(datum.rank):
            up = layer[layer[:, i] > 0]
            if len(up):
                nxt.append(up - up[:, i:i + 1] * a[:, i])
        layer = np.unique(np.concatenate(nxt), axis=0) if nxt else layer[:0]
        layers.append(layer)
    return np.concatenate(layers)


def _character_arrays(datum: CartanDatum, x: RepRingElement) -> tuple[np.ndarray, np.ndarray]:
    """All weights of x with their (possibly negative) multiplicities."""
    total: dict[Weight, int] = defaultdict(int)
    for lam, c in x.terms.items():
        for mu, m in dominant_multiplicities(datum, lam).items():
            total[mu] += c * m
    weights, mults = [], []
    for mu, m in total.items():
        if m:
            orbit = _orbit_array(datum, mu)
            weights.append(orbit)
            mults.append(np.full(len(orbit), m, dtype=np.int64))
    if not weights:
        return np.zeros((0, datum.rank), dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(weights), np.concatenate(mults)


def _reduce_batch(datum: CartanDatum, x: np.ndarray, coeff: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """reduce_dominant on every row of x; rows landing on a wall are dropped."""
    a_cols = np.asarray(datum.cartan_matrix, dtype=np.int64).T
    x, coeff = x.copy(), coeff.copy()
    done_w, done_c = [x[:0]], [coeff[:0]]
    while len(x):
        keep = (x != 0).all(axis=1)
        x, coeff = x[keep], coeff[keep]
        neg = x < 0
        settled = ~neg.any(axis=1)
        done_w.append(x[settled] - 1)
        done_c.append(coeff[settled])
        x, coeff, neg = x[~settled], coeff[~settled], neg[~settled]
        i = neg.argmax(axis=1)
        x -= x[np.arange(len(x)), i][:, None] * a_cols[i]
        coeff = -coeff
    return np.concatenate(done_w), np.concatenate(done_c)


def _tensor_batch(datum: CartanDatum, a: RepRingElement, b: RepRingElement) -> RepRingElement:
    weights, mults = _character_arrays(datum, b)
    rho = np.ones(datum.rank, dtype=np.int64)
    acc: dict[Weight, int] = defaultdict(int)
    for lam, c in a.terms.items():
        w, k = _reduce_batch(datum, weights + (np.array(lam) + rho), mults * c)
        keys, inv = np.unique(w, axis=0, return_inverse=True)
        sums = np.zeros(len(keys), dtype=np.int64)
        np.add.at(sums, inv.ravel(), k)
        for key, v in zip(keys.tolist(), sums.tolist()):
            if v:
                acc[tuple(key)] += v
    return RepRingElement(acc)


def tensor(datum: CartanDatum, a: RepRingElement, b: RepRingElement) -> RepRingElement:
    if len(a.terms) * element_size(datum, b) > len(b.terms) * element_size(datum, a):
        a, b = b, a
    if element_size(datum, b) > BATCH_THRESHOLD:
        return _tensor_batch(datum, a, b)
    acc: dict[Weight, int] = defaultdict(int)
    for la, ca in a.terms.items():
        for lb, cb in b.terms.items():
            for w, c in _basis_product(datum, la, lb):
                acc[w] += ca * cb * c
    return RepRingElement(acc)


def power(datum: CartanDatum, a: RepRingElement, e: int) -> RepRingElement:
    out = RepRingElement.one(datum.rank)
    for _ in range(e):
        out = tensor(datum, out, a)
    return out


def _order_key(datum: CartanDatum):
    inv_height = _height_functional(datum)

    def key(w: Weight):
        return (sum(h * x for h, x in zip(inv_height, w)), w)
    return key


@lru_cache(maxsize=None)
def _height_functional(datum: CartanDatum) -> tuple[Fraction, ...]:
    """Coefficients h_i with height(w) = sum_i h_i w_i (sum of root coordinates)."""
    from .cartan import _inverse
    inv = _inverse(datum.cartan_matrix)
    n = datum.rank
    return tuple(sum((inv[r][i] for r in range(n)), Fraction(0)) for i in range(n))


def divide_exact(datum: CartanDatum, a: RepRingElement, b: RepRingElement) -> RepRingElement:
    """Quotient q with q * b == a, by leading-term elimination."""
    if not b:
        raise RepRingError("division by zero")
    key = _order_key(datum)
    lead_b = max(b.terms, key=key)
    if b.terms[lead_b] != 1:
        raise RepRingError(f"leading term {lead_b} of divisor has multiplicity {b.terms[lead_b]}")
    quotient: dict[Weight, int] = {}
    rem = a
    while rem:
        lead = max(rem.terms, key=key)
        q = tuple(x - y for x, y in zip(lead, lead_b))
        if min(q) < 0:
            raise RepRingError(f"inexact division: remainder term {lead} has no dominant quotient")
        c = rem.terms[lead]
        quotient[q] = quotient.get(q, 0) + c
        rem = rem - tensor(datum, RepRingElement({q: c}), b)
    return RepRingElement(quotient)


# -- Kirillov-Reshetikhin restrictions ----------------------------------------

@dataclass(frozen=True)
class KRBranchingData:
    type_label: str
    fundamental: dict[int, RepRingElement]
    provenance: str = ""

    def validate(self, datum: CartanDatum) -> None:
        for i, x in self.fundamental.items():
            top = tuple(int(j == i - 1) for j in range(datum.rank))
            if x.terms.get(top) != 1 or not x.is_genuine():
                raise RepRingError(f"branching for node {i} must contain L(w_{i}) once and be genuine")
            key = _order_key(datum)
            if max(x.terms, key=key) != top:
                raise RepRingError(f"L(w_{i}) is not the top constituent for node {i}")


def _closed_form_branching(datum: CartanDatum) -> dict[int, RepRingElement]:
    """Classical fundamental KR restrictions: removal of vertical dominoes for B and D."""
    n = datum.rank
    fam = datum.family

    def fund(i: int) -> Weight:
        return tuple(int(j == i - 1) for j in range(n))

    out = {}
    for i in range(1, n + 1):
        if fam in "AC" or (fam == "B" and i == n) or (fam == "D" and i >= n - 1):
            out[i] = RepRingElement.irreducible(fund(i))
        elif fam in "BD":
            out[i] = RepRingElement((fund(j) if j else (0,) * n, 1) for j in range(i, -1, -2))
        else:
            raise RepRingError(f"no closed form for type {datum.name}")
    return out


def data_path(name: str):
    """Shipped data file, or one from $CLUSTERFUSION_DATA when that is set."""
    root = os.environ.get("CLUSTERFUSION_DATA")
    if root:
        return Path(root) / name
    return resources.files("clusterfusion") / "data" / name


def load_branching(datum: CartanDatum) -> KRBranchingData:
    """Fundamental KR branching: shipped data for B, D, E; closed form for A, C."""
    if datum.family in "AC":
        return KRBranchingData(datum.name, _closed_form_branching(datum), "closed form")
    path = data_path(f"kr_branching_{datum.name}.json")
    if not path.is_file():
        raise RepRingError(f"no branching data shipped for type {datum.name}")
    raw = json.loads(path.read_text())
    return branching_from_json(datum, raw)


def branching_from_json(datum: CartanDatum, raw: dict) -> KRBranchingData:
    if raw.get("type") != datum.name:
        raise RepRingError(f"branching file is for {raw.get('type')}, not {datum.name}")
    fund = {int(i): RepRingElement.from_json(v) for i, v in raw["fundamental_kr"].items()}
    data = KRBranchingData(datum.name, fund, raw.get("provenance", ""))
    data.validate(datum)
    return data


def qsystem_rhs_indices(datum: CartanDatum, i: int, m: int) -> list[tuple[int, int]]:
    """(j, m') factors of the Q-system right-hand side for node i (1-based)."""
    a = datum.cartan_matrix
    out = []
    for j in range(1, datum.rank + 1):
        aij = int(a[i - 1, j - 1])
        if j != i and aij < 0:
            aji = int(a[j - 1, i - 1])
            for nn in range(-aij):
                out.append((j, (aji * m - nn) // aij))
    return out


class KRTower:
    """Memoised Q-system solutions Q^{(i)}_m over the representation ring."""

    def __init__(self, datum: CartanDatum, branching: KRBranchingData):
        self.datum = datum
        self.branching = branching
        self._cache: dict[tuple[int, int], RepRingElement] = {}
        self._squares: dict[tuple[int, int], RepRingElement] = {}
        self._products: dict[tuple[int, int], RepRingElement] = {}

    def square(self, i: int, m: int) -> RepRingElement:
        if (i, m) not in self._squares:
            q = self(i, m)
            self._squares[i, m] = tensor(self.datum, q, q)
        return self._squares[i, m]

    def neighbour_product(self, i: int, m: int) -> RepRingElement:
        """The product term on the right of the Q-system at (i, m)."""
        if (i, m) not in self._products:
            out = RepRingElement.one(self.datum.rank)
            for j, mj in qsystem_rhs_indices(self.datum, i, m):
                out = tensor(self.datum, out, self(j, mj))
            self._products[i, m] = out
        return self._products[i, m]

    def __call__(self, i: int, m: int) -> RepRingElement:
        if m < 0:
            raise ValueError("m must be non-negative")
        if m == 0:
            return RepRingElement.one(self.datum.rank)
        if m == 1:
            return self.branching.fundamental[i]
        key = (i, m)
        if key not in self._cache:
            d = self.datum
            num = self.square(i, m - 1) - self.neighbour_product(i, m - 1)
            try:
                q = divide_exact(d, num, self(i, m - 2))
            except RepRingError as exc:
                raise RepRingError(f"branching data inconsistent at Q^({i})_{m}: {exc}") from exc
            top = tuple(m * int(j == i - 1) for j in range(d.rank))
            if not q.is_genuine() or q.terms.get(top) != 1:
                raise RepRingError(f"branching data inconsistent: Q^({i})_{m} = {q} is not a KR class")
            self._cache[key] = q
        return self._cache[key]


@lru_cache(maxsize=None)
def _tower(datum: CartanDatum) -> KRTower:
    return KRTower(datum, load_branching(datum))


def kr_restriction(datum: CartanDatum, i: int, m: int, branching: KRBranchingData | None = None) -> RepRingElement:
    tower = _tower(datum) if branching is None else KRTower(datum, branching)
    return tower(i, m)


@dataclass
class QSystemReport:
    passed: bool
    checked: int
    failure: str | None = None


def check_qsystem(datum: CartanDatum, branching: KRBranchingData, max_m: int) -> QSystemReport:
    """Verify Q_m^2 - Q_{m+1} Q_{m-1} = prod Q^{(j)} for 1 <= m <= max_m.

    Q_{m+1} is obtained by exact division, so the check fails either on a
    division error or when a derived class is not a genuine KR class.
    """
    tower = KRTower(datum, branching)
    checked = 0
    for m in range(1, max_m + 1):
        for i in range(1, datum.rank + 1):
            try:
                q_next = tower(i, m + 1)
                lhs = tower.square(i, m) - tensor(datum, q_next, tower(i, m - 1))
                rhs = tower.neighbour_product(i, m)
            except RepRingError as exc:
                return QSystemReport(False, checked, f"node {i}, m={m}: {exc}")
            if lhs != rhs:
                return QSystemReport(False, checked, f"node {i}, m={m}: identity fails")
            checked += 1
    return QSystemReport(True, checked)
