import json

import pytest
from hypothesis import given, strategies as st

from clusterfusion.cartan import build_cartan
from clusterfusion.repring import (KRBranchingData, RepRingElement, RepRingError, branching_from_json,
                                   check_qsystem, data_path, dim, divide_exact, element_dim,
                                   kr_restriction, load_branching, tensor, weight_system)
from clusterfusion import repring
from clusterfusion.verifier import kr_qdim_sequence
from oracles import CHARACTER_BOXES, weight_box, weyl_character


@pytest.mark.parametrize("label,top", CHARACTER_BOXES)
def test_freudenthal_matches_weyl_character(label, top):
    d = build_cartan(label)
    checked = 0
    for lam in weight_box(d.rank, top):
        if dim(d, lam) > 500:
            continue
        assert weight_system(d, lam) == weyl_character(d, lam), lam
        assert sum(weight_system(d, lam).values()) == dim(d, lam)
        checked += 1
    assert checked >= 4


def test_known_dimensions():
    b3 = build_cartan("B3")
    assert [dim(b3, w) for w in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]] == [7, 21, 8]
    assert dim(build_cartan("E8"), (1, 0, 0, 0, 0, 0, 0, 0)) == 3875
    assert dim(build_cartan("E8"), (0, 0, 0, 0, 0, 0, 0, 1)) == 248
    assert dim(build_cartan("E6"), (1, 0, 0, 0, 0, 0)) == 27
    assert dim(build_cartan("E7"), (0, 0, 0, 0, 0, 0, 1)) == 56


@given(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.tuples(st.integers(0, 2), st.integers(0, 2)))
def test_tensor_dimension_multiplicative(a, b):
    d = build_cartan("B2")
    x, y = RepRingElement.irreducible(a), RepRingElement.irreducible(b)
    prod = tensor(d, x, y)
    assert prod.is_genuine()
    assert element_dim(d, prod) == dim(d, a) * dim(d, b)
    assert prod == tensor(d, y, x)


def test_a2_tensor_example():
    d = build_cartan("A2")
    fund = RepRingElement.irreducible((1, 0))
    antifund = RepRingElement.irreducible((0, 1))
    assert tensor(d, fund, antifund) == RepRingElement({(1, 1): 1, (0, 0): 1})


@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(1, 3)), min_size=1, max_size=3))
def test_divide_exact_inverts_tensor(parts):
    d = build_cartan("A2")
    a = RepRingElement((w[:2], w[2]) for w in parts)
    b = RepRingElement({(1, 0): 1, (0, 0): 1})
    assert divide_exact(d, tensor(d, a, b), b) == a


def test_divide_exact_rejects_non_multiple():
    d = build_cartan("A2")
    with pytest.raises(RepRingError):
        divide_exact(d, RepRingElement.irreducible((1, 0)), RepRingElement.irreducible((0, 1)))


QUICK = ["B2", "B3", "B4", "B5", "B6", "D4", "D5", "D6", "D7", "E6"]
SLOW = ["B7", "B8", "D8"]


def _qsystem(label, max_m):
    d = build_cartan(label)
    report = check_qsystem(d, load_branching(d), max_m)
    assert report.passed, report.failure
    assert report.checked == d.rank * max_m


@pytest.mark.parametrize("label", QUICK)
def test_shipped_branching_satisfies_qsystem(label):
    _qsystem(label, 2)


@pytest.mark.slow
@pytest.mark.parametrize("label", SLOW)
def test_shipped_branching_satisfies_qsystem_large(label):
    _qsystem(label, 2)


def test_e7_branching_satisfies_qsystem_first_step():
    _qsystem("E7", 1)


@pytest.mark.slow
def test_e7_branching_satisfies_qsystem():
    _qsystem("E7", 2)


@pytest.mark.slow
def test_e8_branching_satisfies_qsystem_first_step():
    # Q_3 for E8 is out of reach, so only the step producing Q_2 is checked exactly
    _qsystem("E8", 1)


def test_closed_forms_satisfy_qsystem():
    for label in ("A3", "A4", "C3"):
        _qsystem(label, 2)


def test_corrupted_branching_is_rejected():
    d = build_cartan("D4")
    raw = json.loads(data_path("kr_branching_D4.json").read_text())
    raw["fundamental_kr"]["2"] = [t for t in raw["fundamental_kr"]["2"] if any(t["weight"])]
    bad = branching_from_json(d, raw)
    report = check_qsystem(d, bad, 2)
    assert not report.passed
    assert "m=1" in report.failure


def test_branching_validation():
    d = build_cartan("D4")
    with pytest.raises(RepRingError):
        KRBranchingData("D4", {1: RepRingElement.irreducible((0, 1, 0, 0))}).validate(d)
    with pytest.raises(RepRingError):
        branching_from_json(d, {"type": "D5", "fundamental_kr": {}})


def test_e6_node4_branching():
    d = build_cartan("E6")
    w4 = load_branching(d).fundamental[4]
    expected = RepRingElement({(0, 0, 0, 1, 0, 0): 1, (0, 1, 0, 0, 0, 0): 2,
                               (1, 0, 0, 0, 0, 1): 1, (0, 0, 0, 0, 0, 0): 1})
    assert w4 == expected
    assert element_dim(d, w4) == 2925 + 2 * 78 + 650 + 1


def test_kr_restriction_type_b():
    d = build_cartan("B3")
    assert kr_restriction(d, 2, 1) == RepRingElement({(0, 1, 0): 1, (0, 0, 0): 1})
    assert kr_restriction(d, 1, 2) == RepRingElement({(2, 0, 0): 1})


@pytest.mark.parametrize("label", ["A2", "A3", "B3", "C3", "D4", "D5", "E6"])
@pytest.mark.parametrize("k", [2, 3])
def test_kr_qdim_sequence_endpoints_and_log_concavity(label, k):
    d = build_cartan(label)
    for i in range(1, d.rank + 1):
        seq = kr_qdim_sequence(d, i, k, top=d.t[i - 1] * k + 1)
        top = d.t[i - 1] * k
        assert seq[0] == 1
        assert seq[top] == pytest.approx(1, abs=1e-8)
        assert seq[top + 1] == pytest.approx(0, abs=1e-8)
        for m in range(1, top):
            assert seq[m] ** 2 >= seq[m - 1] * seq[m + 1] - 1e-8


@pytest.mark.parametrize("label", ["E7", "E8"])
def test_exceptional_branching_has_vanishing_qdim_tail(label):
    # the exact checks stop at Q_3 (E7) and Q_2 (E8); the level-2 tail is checked numerically
    d = build_cartan(label)
    for i in range(1, d.rank + 1):
        top = d.t[i - 1] * 2
        seq = kr_qdim_sequence(d, i, 2, top=top + 1)
        assert seq[top] == pytest.approx(1, abs=1e-6)
        assert seq[top + 1] == pytest.approx(0, abs=1e-6)


_small = st.dictionaries(st.tuples(*[st.integers(0, 1)] * 4), st.integers(-2, 2), min_size=1, max_size=3)


@given(_small, _small)
def test_batched_product_matches_pairwise(a, b):
    d = build_cartan("F4")
    x, y = RepRingElement(a), RepRingElement(b)
    batched = repring._tensor_batch(d, x, y)
    saved = repring.BATCH_THRESHOLD
    repring.BATCH_THRESHOLD = 10**30
    try:
        assert tensor(d, x, y) == batched
    finally:
        repring.BATCH_THRESHOLD = saved
