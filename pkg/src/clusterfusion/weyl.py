"""Weyl group actions on weights and the signed level-k alcove projection."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .cartan import CartanDatum


class AlcoveError(RuntimeError):
    pass


@dataclass(frozen=True)
class AlcoveResult:
    """Outcome of projecting a finite weight into the level-k alcove.

    ``sign == 0`` encodes the null case; otherwise ``weight`` holds the
    dominant affine coordinates (c_0, ..., c_n).
    """
    sign: int
    weight: tuple[int, ...] | None = None

    @property
    def is_null(self) -> bool:
        return self.sign == 0

    def to_json(self) -> dict:
        if self.is_null:
            return {"status": "null"}
        return {"status": "signed", "sign": self.sign, "weight": list(self.weight)}


NULL = AlcoveResult(0)


def lift_to_level(datum: CartanDatum, w: Sequence[int], k: int) -> tuple[int, ...]:
    if len(w) != datum.rank:
        raise ValueError(f"weight must have {datum.rank} coordinates")
    return (k - datum.level(w),) + tuple(int(x) for x in w)


def affine_level(datum: CartanDatum, mu: Sequence[int]) -> int:
    return sum(c * x for c, x in zip(datum.comarks, mu))


def affine_reflect(datum: CartanDatum, i: int, mu: Sequence[int]) -> tuple[int, ...]:
    """s_i on P_cl: c_j <- c_j - c_i a_{j,i}."""
    a = datum.affine_matrix
    ci = mu[i]
    if ci == 0:
        return tuple(mu)
    return tuple(int(c - ci * a[j, i]) for j, c in enumerate(mu))


def finite_reflect(datum: CartanDatum, i: int, w: Sequence[int]) -> tuple[int, ...]:
    """s_i on P_0 with 0-based finite node i."""
    a = datum.cartan_matrix
    wi = w[i]
    return tuple(int(c - wi * a[j, i]) for j, c in enumerate(w))


def reflection_bound(datum: CartanDatum, shifted_finite: Sequence[int], shifted_level: int) -> int:
    """Upper bound on the number of affine walls separating a point from the alcove."""
    total = 0
    for cor in datum.positive_coroots:
        pairing = abs(sum(c * x for c, x in zip(cor, shifted_finite)))
        total += int(pairing // shifted_level) + 1
    return total


def _reduce(datum: CartanDatum, shifted: list[int], pick_last: bool = False) -> AlcoveResult:
    n = len(shifted)
    bound = reflection_bound(datum, shifted[1:], affine_level(datum, shifted))
    a = datum.affine_matrix
    sign = 1
    for _ in range(bound + 1):
        if 0 in shifted:
            return NULL
        negatives = [i for i in range(n) if shifted[i] < 0]
        if not negatives:
            return AlcoveResult(sign, tuple(c - 1 for c in shifted))
        i = negatives[-1] if pick_last else negatives[0]
        ci = shifted[i]
        for j in range(n):
            if a[j, i]:
                shifted[j] -= ci * int(a[j, i])
        sign = -sign
    raise AlcoveError(f"alcove reduction exceeded certified bound {bound}")


def alcove_project_affine(datum: CartanDatum, lam: Sequence[int], pick_last: bool = False) -> AlcoveResult:
    """pi_k on an affine weight given over the Lambda basis."""
    return _reduce(datum, [c + 1 for c in lam], pick_last)


def alcove_project(datum: CartanDatum, w: Sequence[int], k: int, pick_last: bool = False) -> AlcoveResult:
    if k < 1:
        raise ValueError("level must be positive")
    return alcove_project_affine(datum, lift_to_level(datum, w, k), pick_last)


def enumerate_Pk_plus(datum: CartanDatum, k: int) -> list[tuple[int, ...]]:
    """Dominant level-k weights in descending lexicographic order of (c_0, ..., c_n)."""
    comarks = datum.comarks
    n = len(comarks)
    out: list[tuple[int, ...]] = []

    def rec(i: int, remaining: int, prefix: list[int]) -> None:
        if i == n - 1:
            if remaining % comarks[i] == 0:
                out.append(tuple(prefix + [remaining // comarks[i]]))
            return
        for c in range(remaining // comarks[i], -1, -1):
            rec(i + 1, remaining - c * comarks[i], prefix + [c])

    rec(0, k, [])
    return out


def make_dominant(datum: CartanDatum, w: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Dominant W_0-conjugate of w and the number of reflections used."""
    w = list(w)
    steps = 0
    while True:
        neg = next((i for i, c in enumerate(w) if c < 0), None)
        if neg is None:
            return tuple(w), steps
        w = list(finite_reflect(datum, neg, w))
        steps += 1


def conjugate_weight(datum: CartanDatum, lam: Sequence[int]) -> tuple[int, ...]:
    """lambda* whose finite part is -w_0(lambda-bar); level and c_0 are kept."""
    if any(c < 0 for c in lam):
        raise ValueError(f"{tuple(lam)} is not dominant")
    dual, _ = make_dominant(datum, [-c for c in lam[1:]])
    return (lam[0],) + dual


def finite_orbit(datum: CartanDatum, w: Sequence[int]) -> Iterator[tuple[int, ...]]:
    seen = {tuple(w)}
    stack = [tuple(w)]
    while stack:
        x = stack.pop()
        yield x
        for i in range(datum.rank):
            if x[i]:
                y = finite_reflect(datum, i, x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
