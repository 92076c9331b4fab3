"""Cluster algebra engine: Laurent polynomials, seeds, mutation and enumeration.

Also builds the initial seeds of the monoidal categories C_l from height
functions on the unfolded simply-laced diagram.
"""
from __future__ import annotations

import json
import random
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cartan import CartanDatum, build_cartan, finite_cartan_matrix
from .linalg import Inconsistent, SparseRREF

Exponent = tuple[int, ...]
Monomial = dict[tuple[int, int], int]   # (node, spectral parameter) -> exponent

PRIME = (1 << 61) - 1


class ClusterError(RuntimeError):
    pass


class LimitExceeded(ClusterError):
    pass


# -- Laurent polynomials ------------------------------------------------------

class LaurentPoly:
    """Sparse Laurent polynomial with integer coefficients in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, int] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def variable(cls, nvars: int, i: int) -> "LaurentPoly":
        return cls(nvars, {tuple(int(j == i) for j in range(nvars)): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: c})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.nvars, out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) - c
        return LaurentPoly(self.nvars, out)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.nvars, out)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self.terms) != 1:
                raise ClusterError("only monomials have Laurent inverses")
            (e, c), = self.terms.items()
            if abs(c) != 1:
                raise ClusterError("monomial coefficient is not a unit")
            return LaurentPoly(self.nvars, {tuple(x * n for x in e): c ** -n})
        out = LaurentPoly.constant(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient by leading-term elimination in lex order."""
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if len(other.terms) == 1:
            (e, c), = other.terms.items()
            out = {}
            for f, d in self.terms.items():
                q, r = divmod(d, c)
                if r:
                    raise ClusterError("inexact Laurent division")
                out[tuple(a - b for a, b in zip(f, e))] = q
            return LaurentPoly(self.nvars, out)
        lead_d = max(other.terms)
        tail_d = min(other.terms)
        cd = other.terms[lead_d]
        floor = None
        if self.terms:
            floor = tuple(a - b for a, b in zip(min(self.terms), tail_d))
        rem = dict(self.terms)
        quot: dict[Exponent, int] = {}
        while rem:
            lead = max(rem)
            q_exp = tuple(a - b for a, b in zip(lead, lead_d))
            if q_exp < floor:
                raise ClusterError("inexact Laurent division")
            q, r = divmod(rem[lead], cd)
            if r:
                raise ClusterError("inexact Laurent division")
            quot[q_exp] = q
            for e, c in other.terms.items():
                t = tuple(a + b for a, b in zip(q_exp, e))
                v = rem.get(t, 0) - q * c
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return LaurentPoly(self.nvars, quot)

    def evaluate_mod(self, values: Sequence[int], prime: int = PRIME) -> int:
        inv = [pow(v, -1, prime) for v in values]
        total = 0
        for e, c in self.terms.items():
            t = c % prime
            for v, iv, x in zip(values, inv, e):
                if x > 0:
                    t = t * pow(v, x, prime) % prime
                elif x < 0:
                    t = t * pow(iv, -x, prime) % prime
            total = (total + t) % prime
        return total

    def min_coefficient(self) -> int:
        return min(self.terms.values()) if self.terms else 0

    def to_text(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            factors = []
            for n, x in zip(names, e):
                if x == 1:
                    factors.append(n)
                elif x:
                    factors.append(f"{n}^{x}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> list:
        return [[list(e), c] for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, nvars: int, data: list) -> "LaurentPoly":
        return cls(nvars, {tuple(e): c for e, c in data})


# -- exchange matrices --------------------------------------------------------

def mutate_matrix(b: np.ndarray, k: int) -> np.ndarray:
    """Matrix mutation at k on a square skew-symmetrizable matrix."""
    col = b[:, k]
    row = b[k, :]
    pos = np.maximum(np.outer(col, row), 0)
    sign = np.where(col < 0, -1, 1)[:, None]
    out = b + sign * pos
    out[k, :] = -b[k, :]
    out[:, k] = -b[:, k]
    return out


def cartan_counterpart(b: np.ndarray) -> np.ndarray:
    c = -np.abs(np.asarray(b, dtype=np.int64))
    np.fill_diagonal(c, 2)
    return c


def _is_finite_cartan(c: np.ndarray) -> bool:
    """Positive definiteness of the symmetrised counterpart, block by block."""
    n = len(c)
    if n == 0:
        return True
    # symmetrise: d_i c_ij = d_j c_ji
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and c[i, j]:
                    if c[j, i] == 0:
                        return False
                    val = d[i] * int(c[i, j]) / int(c[j, i])
                    if d[j] is None:
                        d[j] = val
                        stack.append(j)
                    elif d[j] != val:
                        return False
    sym = np.array([[float(d[i] * int(c[i, j])) for j in range(n)] for i in range(n)])
    return bool(np.all(np.linalg.eigvalsh(sym) > 1e-9))


def classify_finite(b: np.ndarray) -> bool:
    """Finite-type test on one seed: counterpart of the principal part is a Cartan matrix."""
    return _is_finite_cartan(cartan_counterpart(b))


@dataclass
class Seed:
    matrix: np.ndarray            # square, indexed by all vertices
    vars: tuple[int, ...]         # registry ids per vertex
    exchangeable: tuple[int, ...]

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.vars[i] for i in self.exchangeable))

    @property
    def principal(self) -> np.ndarray:
        ex = list(self.exchangeable)
        return self.matrix[np.ix_(ex, ex)]


@dataclass
class ExchangeRelation:
    left: tuple[int, int]
    right: tuple[tuple[int, ...], tuple[int, ...]]   # sorted id multisets

    def key(self):
        return (tuple(sorted(self.left)), tuple(sorted(self.right)))

    def to_text(self) -> str:
        def mono(ids):
            return "*".join(f"x{i + 1}" for i in ids) if ids else "1"
        a, b = sorted(self.left)
        return f"x{a + 1} * x{b + 1} = {mono(self.right[0])} + {mono(self.right[1])}"

    @classmethod
    def from_text(cls, line: str) -> "ExchangeRelation":
        m = re.fullmatch(r"\s*x(\d+)\s*\*\s*x(\d+)\s*=\s*(.+?)\s*\+\s*(.+?)\s*", line)
        if not m:
            raise ValueError(f"malformed relation line {line!r}")

        def ids(s):
            s = s.replace(" ", "")
            return () if s == "1" else tuple(sorted(int(t[1:]) - 1 for t in s.split("*")))
        return cls((int(m.group(1)) - 1, int(m.group(2)) - 1), (ids(m.group(3)), ids(m.group(4))))


@dataclass
class VariableRegistry:
    """Cluster variables keyed by a modular fingerprint, with optional exact data."""
    nvars: int
    frozen: tuple[int, ...]
    eval_point: tuple[int, ...]
    fingerprints: list[int] = field(default_factory=list)
    laurent: list[LaurentPoly | None] = field(default_factory=list)
    leads: list[tuple[int, ...]] = field(default_factory=list)
    labels: list[Monomial | None] = field(default_factory=list)
    lookup: dict[int, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.fingerprints)

    def add(self, fp: int, poly: LaurentPoly | None, lead: tuple[int, ...], label: Monomial | None) -> tuple[int, bool]:
        if fp in self.lookup:
            j = self.lookup[fp]
            if poly is not None and self.laurent[j] is not None and self.laurent[j] != poly:
                raise ClusterError("fingerprint collision between distinct Laurent polynomials")
            return j, False
        j = len(self.fingerprints)
        self.lookup[fp] = j
        self.fingerprints.append(fp)
        self.laurent.append(poly)
        self.leads.append(lead)
        self.labels.append(label)
        return j, True

    @property
    def exchangeable_ids(self) -> list[int]:
        return [j for j in range(len(self)) if j not in self.frozen]


@dataclass
class Enumeration:
    registry: VariableRegistry
    relations: list[ExchangeRelation]
    clusters: int
    initial: Seed
    grid: "QDatumGrid | None" = None

    @property
    def num_variables(self) -> int:
        return len(self.registry)


def _lead_weight(b: np.ndarray, exchangeable: Sequence[int]) -> list[Fraction] | None:
    """Some w with (B^T w)_k = 1 for every exchangeable column k, or None if there is none."""
    n = len(b)
    m = SparseRREF()
    try:
        for k in exchangeable:
            m.add({i: int(b[i, k]) for i in range(n) if b[i, k]}, -1, tag=k)
    except Inconsistent:
        return None
    w = [Fraction(0)] * n
    for p, (row, const) in m.rows.items():
        w[p] = -const      # free variables are set to zero
    return w


def _lead_label(lead: Sequence[int], inits: Sequence[Monomial]) -> Monomial:
    out: Monomial = {}
    for g, z in zip(lead, inits):
        if g:
            for key, e in z.items():
                out[key] = out.get(key, 0) + g * e
    return {k: v for k, v in out.items() if v}


def mutate(seed: Seed, k: int, registry: VariableRegistry, exact: bool = True,
           w: Sequence[Fraction] | None = None, inits: Sequence[Monomial] | None = None) -> tuple[Seed, ExchangeRelation]:
    """Mutate at vertex k, registering the new variable."""
    if k not in seed.exchangeable:
        raise ClusterError(f"vertex {k} is frozen")
    b = seed.matrix
    col = b[:, k]
    plus = [i for i in range(len(col)) if col[i] > 0]
    minus = [i for i in range(len(col)) if col[i] < 0]
    ids_plus = tuple(sorted(i for v in plus for i in [seed.vars[v]] * int(col[v])))
    ids_minus = tuple(sorted(i for v in minus for i in [seed.vars[v]] * int(-col[v])))
    xk = seed.vars[k]
    fps = registry.fingerprints

    def fp_of(ids):
        out = 1
        for i in ids:
            out = out * fps[i] % PRIME
        return out

    new_fp = (fp_of(ids_plus) + fp_of(ids_minus)) * pow(fps[xk], -1, PRIME) % PRIME
    if new_fp in registry.lookup:
        new_id = registry.lookup[new_fp]
    else:
        lead = None
        if w is not None:
            leads = registry.leads
            zero = np.zeros(registry.nvars, int)
            l_plus = np.sum([leads[i] for i in ids_plus], axis=0) if ids_plus else zero
            l_minus = np.sum([leads[i] for i in ids_minus], axis=0) if ids_minus else zero
            sp = sum(Fraction(int(x)) * y for x, y in zip(l_plus, w))
            sm = sum(Fraction(int(x)) * y for x, y in zip(l_minus, w))
            if sp == sm:
                raise ClusterError("tie in leading-term selection")
            lead = tuple(int(x) for x in (l_plus if sp > sm else l_minus) - np.array(leads[xk]))
        label = _lead_label(lead, inits) if (lead is not None and inits is not None) else None
        poly = None
        if exact:
            polys = registry.laurent

            def prod(ids):
                out = LaurentPoly.constant(registry.nvars, 1)
                for i in ids:
                    out = out * polys[i]
                return out
            poly = (prod(ids_plus) + prod(ids_minus)).exact_div(polys[xk])
        new_id, _ = registry.add(new_fp, poly, lead, label)
    new_vars = list(seed.vars)
    new_vars[k] = new_id
    rel = ExchangeRelation((xk, new_id), tuple(sorted((ids_plus, ids_minus))))
    return Seed(mutate_matrix(b, k), tuple(new_vars), seed.exchangeable), rel


def new_registry(seed: Seed, inits: Sequence[Monomial] | None = None, exact: bool = True,
                 rng_seed: int = 20240917) -> VariableRegistry:
    n = len(seed.vars)
    rng = random.Random(rng_seed)
    point = tuple(rng.randrange(2, PRIME - 1) for _ in range(n))
    frozen = tuple(v for v in range(n) if v not in seed.exchangeable)
    reg = VariableRegistry(n, frozen, point)
    for v in range(n):
        lead = tuple(int(i == v) for i in range(n))
        poly = LaurentPoly.variable(n, v) if exact else None
        reg.add(point[v], poly, lead, dict(inits[v]) if inits is not None else None)
    return reg


def enumerate_finite(seed: Seed, inits: Sequence[Monomial] | None = None, exact: bool = True,
                     max_seeds: int = 10**6, max_vars: int = 10**4, order: str = "min") -> Enumeration:
    """Breadth-first closure over clusters, recording every distinct exchange relation.

    ``seed.vars`` must be ``range(n)``; ids of the registry refer to vertices of
    the initial seed first, then to new variables in discovery order.
    """
    registry = new_registry(seed, inits, exact)
    w = _lead_weight(seed.matrix, seed.exchangeable)
    relations: dict = {}
    seen = {seed.key()}
    queue = deque([seed])
    ex = list(seed.exchangeable)
    if order == "max":
        ex = ex[::-1]
    elif order != "min":
        raise ValueError("order must be 'min' or 'max'")
    while queue:
        cur = queue.popleft()
        for k in ex:
            nxt, rel = mutate(cur, k, registry, exact, w, inits)
            relations.setdefault(rel.key(), rel)
            if len(registry) > max_vars:
                raise LimitExceeded(f"more than {max_vars} cluster variables")
            key = nxt.key()
            if key not in seen:
                seen.add(key)
                if len(seen) > max_seeds:
                    raise LimitExceeded(f"more than {max_seeds} clusters")
                queue.append(nxt)
    return Enumeration(registry, list(relations.values()), len(seen), seed)


def canonical_form(en: Enumeration) -> tuple[frozenset, frozenset]:
    """Registry contents and relations with ids replaced by fingerprints."""
    fps = en.registry.fingerprints
    variables = frozenset(fps)
    rels = frozenset(
        (frozenset((fps[a], fps[b])), frozenset(tuple(sorted(fps[i] for i in m)) for m in r.right))
        for r in en.relations for a, b in [r.left])
    return variables, rels


def seed_from_matrix(b: np.ndarray, frozen: Iterable[int] = ()) -> Seed:
    b = np.asarray(b, dtype=np.int64)
    frozen = set(frozen)
    n = len(b)
    return Seed(b, tuple(range(n)), tuple(i for i in range(n) if i not in frozen))


# -- C_l initial seeds --------------------------------------------------------

def _unfolding(datum: CartanDatum) -> tuple[str, int, dict[int, int]]:
    """Simply-laced type and the projection pi onto the nodes of the datum."""
    fam, n = datum.family, datum.rank
    if fam in "ADE":
        return fam, n, {i: i for i in range(1, n + 1)}
    if fam == "B":
        return "A", 2 * n - 1, {i: min(i, 2 * n - i) for i in range(1, 2 * n)}
    if fam == "C":
        return "D", n + 1, {i: min(i, n) for i in range(1, n + 2)}
    if fam == "F":
        return "E", 6, {1: 1, 6: 1, 3: 2, 5: 2, 4: 3, 2: 4}
    if fam == "G":
        return "D", 4, {1: 1, 3: 1, 4: 1, 2: 2}
    raise ClusterError(f"no unfolding for {datum.name}")


def default_height(datum: CartanDatum) -> dict[int, int]:
    fam, n = datum.family, datum.rank
    if fam == "A":
        return {i: 2 - i for i in range(1, n + 1)}
    if fam == "D":
        return {**{i: i - 2 for i in range(1, n)}, n: n - 3}
    if fam == "E":
        return {1: -1, 2: 2, 3: 0, **{i: i - 3 for i in range(4, n + 1)}}
    raise ClusterError(f"no default height function for {datum.name}; pass one explicitly")


@dataclass
class QDatumGrid:
    datum: CartanDatum
    ell: int
    height: dict[int, int]
    projection: dict[int, int]
    degree: dict[int, int]          # d for each unfolded node
    points: list[tuple[int, int]]
    frozen: list[tuple[int, int]]

    def kr_monomial(self, node: int, p: int) -> Monomial:
        step = 2 * self.degree[node]
        top = self.height[node]
        i = self.projection[node]
        return {(i, q): 1 for q in range(p, top + 1, step)}


def build_grid(datum: CartanDatum, ell: int, height: Mapping[int, int] | None = None) -> QDatumGrid:
    if ell < 1:
        raise ClusterError("ell must be at least 1")
    fam, nfin, proj = _unfolding(datum)
    if height is None:
        height = default_height(datum)
    height = {int(k): int(v) for k, v in height.items()}
    if sorted(height) != list(range(1, nfin + 1)):
        raise ClusterError(f"height function must be defined on nodes 1..{nfin}")
    sizes = {i: sum(1 for v in proj.values() if v == i) for i in set(proj.values())}
    deg = {v: sizes[proj[v]] for v in proj}
    a_fin = finite_cartan_matrix(fam, nfin)
    for u in range(1, nfin + 1):
        for v in range(u + 1, nfin + 1):
            if a_fin[u - 1, v - 1] and abs(height[u] - height[v]) != min(deg[u], deg[v]):
                raise ClusterError(f"height function is not admissible on the edge {u}-{v}")
    for u, i in proj.items():
        assert deg[u] == datum.fold_degree[i - 1], "unfolding disagrees with the symmetriser"
    d = max(deg.values())
    points = []
    for u in sorted(height, key=lambda v: (height[v], v)):
        lo = height[u] - 2 * d * ell - 2 * (d - 1)
        step = 2 * deg[u]
        p = height[u]
        col = []
        while p >= lo:
            col.append((u, p))
            p -= step
        points.extend(sorted(col, key=lambda x: -x[1]))
    frozen = [min((pt for pt in points if pt[0] == u), key=lambda x: x[1]) for u in sorted(height)]
    return QDatumGrid(datum, ell, dict(height), proj, deg, points, frozen)


def grid_arrows(grid: QDatumGrid) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    a = grid.datum.cartan_matrix
    pts = set(grid.points)
    arrows = []
    for (u, r) in grid.points:
        for (v, s) in grid.points:
            if (u, r) == (v, s):
                continue
            aij = int(a[grid.projection[u] - 1, grid.projection[v] - 1])
            if aij and s == r + grid.degree[u] * aij + grid.degree[v] - grid.degree[u]:
                arrows.append(((u, r), (v, s)))
    assert all(x in pts and y in pts for x, y in arrows)
    return arrows


def build_initial_seed(datum: CartanDatum, ell: int, height: Mapping[int, int] | None = None
                       ) -> tuple[Seed, QDatumGrid, list[Monomial]]:
    grid = build_grid(datum, ell, height)
    idx = {pt: i for i, pt in enumerate(grid.points)}
    n = len(grid.points)
    b = np.zeros((n, n), dtype=np.int64)
    for x, y in grid_arrows(grid):
        b[idx[x], idx[y]] += 1
        b[idx[y], idx[x]] -= 1
    frozen = {idx[pt] for pt in grid.frozen}
    seed = Seed(b, tuple(range(n)), tuple(i for i in range(n) if i not in frozen))
    inits = [grid.kr_monomial(u, p) for (u, p) in grid.points]
    return seed, grid, inits


def enumerate_category(type_label: str, ell: int, height: Mapping[int, int] | None = None,
                       exact: bool = True, **limits) -> Enumeration:
    datum = build_cartan(type_label)
    seed, grid, inits = build_initial_seed(datum, ell, height)
    en = enumerate_finite(seed, inits, exact, **limits)
    en.grid = grid
    return en


# -- labels -------------------------------------------------------------------

def format_monomial(m: Mapping[tuple[int, int], int]) -> str:
    parts = []
    for (i, p), e in sorted(m.items()):
        parts.append(f"Y_{{{i},{p}}}" + (f"^{e}" if e != 1 else ""))
    return "".join(parts) if parts else "1"


def parse_monomial(text: str) -> Monomial:
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty monomial")
    if s == "1":
        return {}
    pos = 0
    out: Monomial = {}
    pat = re.compile(r"Y_\{(-?\d+),(-?\d+)\}(?:\^(-?\d+))?")
    while pos < len(s):
        m = pat.match(s, pos)
        if not m:
            raise ValueError(f"malformed monomial {text!r} at position {pos}")
        key = (int(m.group(1)), int(m.group(2)))
        out[key] = out.get(key, 0) + int(m.group(3) or 1)
        pos = m.end()
    return {k: v for k, v in out.items() if v}


def kr_shape(label: Mapping[tuple[int, int], int], datum: CartanDatum) -> tuple[int, int] | None:
    """(i, m) when the label is Y_{i,p} Y_{i,p+2d_i} ... Y_{i,p+2(m-1)d_i}."""
    if not label or any(e != 1 for e in label.values()):
        return None
    nodes = {i for i, _ in label}
    if len(nodes) != 1:
        return None
    i = nodes.pop()
    step = 2 * datum.fold_degree[i - 1]
    ps = sorted(p for _, p in label)
    if any(b - a != step for a, b in zip(ps, ps[1:])):
        return None
    return i, len(ps)


def detect_kr(registry: VariableRegistry, datum: CartanDatum,
              labels: Sequence[Monomial | None] | None = None) -> tuple[dict[int, tuple[int, int]], list[int]]:
    labels = registry.labels if labels is None else labels
    found, unlabeled = {}, []
    for j, lab in enumerate(labels):
        if lab is None:
            unlabeled.append(j)
            continue
        shape = kr_shape(lab, datum)
        if shape:
            found[j] = shape
    return found, unlabeled


# -- export -------------------------------------------------------------------

def export(en: Enumeration, fmt: str = "txt") -> str:
    reg = en.registry
    if fmt == "txt":
        return "\n".join(r.to_text() for r in sorted(en.relations, key=lambda r: r.key())) + "\n"
    if fmt == "json":
        items = []
        for j in range(len(reg)):
            entry = {"id": j + 1, "frozen": j in reg.frozen}
            if reg.laurent[j] is not None:
                entry["laurent"] = reg.laurent[j].to_json()
            if reg.labels[j] is not None:
                entry["label"] = format_monomial(reg.labels[j])
            items.append(entry)
        return json.dumps({"nvars": reg.nvars, "variables": items,
                           "relations": [r.to_text() for r in en.relations]}, indent=1)
    if fmt == "dot":
        return quiver_dot(en.initial, en.grid)
    raise ValueError(f"unknown format {fmt!r}")


def import_json(text: str) -> tuple[list[LaurentPoly | None], list[Monomial | None], list[ExchangeRelation]]:
    raw = json.loads(text)
    n = raw["nvars"]
    polys = [LaurentPoly.from_json(n, v["laurent"]) if "laurent" in v else None for v in raw["variables"]]
    labels = [parse_monomial(v["label"]) if "label" in v else None for v in raw["variables"]]
    rels = [ExchangeRelation.from_text(s) for s in raw["relations"]]
    return polys, labels, rels


def quiver_dot(seed: Seed, grid: QDatumGrid | None = None) -> str:
    def name(v):
        if grid is not None:
            u, p = grid.points[v]
            return f"M{u},{p}"
        return f"x{v + 1}"
    lines = ["digraph quiver {"]
    frozen = set(range(len(seed.vars))) - set(seed.exchangeable)
    for v in range(len(seed.vars)):
        shape = "box" if v in frozen else "ellipse"
        lines.append(f'  "{name(v)}" [shape={shape}];')
    b = seed.matrix
    for i in range(len(b)):
        for j in range(len(b)):
            if b[i, j] > 0 and not (i in frozen and j in frozen):
                for _ in range(int(b[i, j])):
                    lines.append(f'  "{name(i)}" -> "{name(j)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
