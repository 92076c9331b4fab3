import json
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from clusterfusion.cartan import build_cartan
from clusterfusion.cluster import (ClusterError, ExchangeRelation, LaurentPoly, LimitExceeded,
                                   build_grid, build_initial_seed, canonical_form, classify_finite,
                                   detect_kr, enumerate_category, enumerate_finite, export,
                                   format_monomial, import_json, kr_shape, mutate_matrix, parse_monomial,
                                   quiver_dot, seed_from_matrix)
from clusterfusion.verifier import B3_HEIGHT, load_cluster_table

MARKOV = [[0, 2, -2], [-2, 0, 2], [2, -2, 0]]


def _relation_holds(en, rel):
    polys = en.registry.laurent
    one = LaurentPoly.constant(en.registry.nvars, 1)

    def prod(ids):
        out = one
        for i in ids:
            out = out * polys[i]
        return out
    a, b = rel.left
    return polys[a] * polys[b] == prod(rel.right[0]) + prod(rel.right[1])


def test_rank_two_pentagon():
    en = enumerate_finite(seed_from_matrix([[0, 1], [-1, 0]]))
    assert en.clusters == 5 and en.num_variables == 5
    texts = sorted(r.to_text() for r in en.relations)
    assert "x1 * x3 = 1 + x2" in texts
    x1, x2 = LaurentPoly.variable(2, 0), LaurentPoly.variable(2, 1)
    assert en.registry.laurent[2] * x1 == x2 + LaurentPoly.constant(2, 1)


@st.composite
def skew_matrices(draw):
    n = draw(st.integers(2, 5))
    b = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(st.integers(-3, 3))
            b[i, j], b[j, i] = v, -v
    return b


@given(skew_matrices(), st.data())
def test_mutation_is_an_involution(b, data):
    k = data.draw(st.integers(0, len(b) - 1))
    once = mutate_matrix(b, k)
    assert np.array_equal(-once, once.T)
    assert np.array_equal(mutate_matrix(once, k), b)


def _polys(draw_terms, n):
    return LaurentPoly(n, {tuple(e): c for e, c in draw_terms})


exps = st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2))


@given(st.lists(st.tuples(exps, st.integers(-3, 3)), min_size=1, max_size=4),
       st.lists(st.tuples(exps, st.integers(1, 3)), min_size=1, max_size=3))
def test_laurent_exact_division(a_terms, b_terms):
    a, b = _polys(a_terms, 3), _polys(b_terms, 3)
    if not b:
        return
    assert (a * b).exact_div(b) == a


def test_laurent_division_rejects_remainder():
    x, one = LaurentPoly.variable(2, 0), LaurentPoly.constant(2, 1)
    with pytest.raises(ClusterError):
        (x * x + one).exact_div(x + one)


@pytest.mark.parametrize("label,n", [("A1", 1), ("A2", 2), ("A3", 3), ("A4", 4), ("D4", 4), ("D5", 5)])
def test_counts_match_almost_positive_roots(label, n):
    en = enumerate_category(label, 1)
    reg = en.registry
    assert len(reg.frozen) == n
    if label[0] == "A":
        assert len(reg.exchangeable_ids) == n * (n + 3) // 2
        assert en.clusters == comb(2 * n + 2, n + 1) // (n + 2)
    else:
        assert len(reg.exchangeable_ids) == n * n
        assert en.num_variables == n * n + n
        assert en.clusters == (3 * n - 2) * comb(2 * n - 2, n - 1) // n


@pytest.mark.parametrize("label", ["A4", "D5", "E6"])
def test_laurent_positivity_and_relation_soundness(label):
    en = enumerate_category(label, 1)
    assert all(p.min_coefficient() >= 1 for p in en.registry.laurent)
    assert all(_relation_holds(en, r) for r in en.relations)


def test_fingerprint_only_run_agrees_with_exact_run():
    exact = enumerate_category("D5", 1, exact=True)
    fast = enumerate_category("D5", 1, exact=False)
    assert canonical_form(exact) == canonical_form(fast)
    assert all(p is None for p in fast.registry.laurent)


@pytest.mark.parametrize("label", ["D5", "E6"])
def test_enumeration_is_order_independent(label):
    seed, grid, inits = build_initial_seed(build_cartan(label), 1)
    a = enumerate_finite(seed, inits, exact=False, order="min")
    b = enumerate_finite(seed, inits, exact=False, order="max")
    assert canonical_form(a) == canonical_form(b)
    assert a.clusters == b.clusters


def test_e6_labels_and_table_relation():
    en = enumerate_category("E6", 1)
    reg = en.registry
    assert (len(reg), en.clusters, len(en.relations)) == (48, 833, 385)
    table = load_cluster_table("E6")
    by_label = {json.dumps(sorted(parse_monomial(r["monomial"]).items())): r["index"] for r in table["rows"]}
    ours = [by_label[json.dumps(sorted(lab.items()))] for lab in reg.labels]
    assert sorted(ours) == list(range(1, 49))
    assert ours[:12] == list(range(1, 13))
    renamed = {(frozenset((ours[a], ours[b])), frozenset(tuple(sorted(ours[i] for i in m)) for m in r.right))
               for r in en.relations for a, b in [r.left]}
    assert (frozenset((1, 34)), frozenset([(2, 3), (4,)])) in renamed


def test_e6_kr_detection():
    en = enumerate_category("E6", 1)
    found, unlabeled = detect_kr(en.registry, build_cartan("E6"))
    assert unlabeled == []
    assert len(found) == 18
    per_node = {i: sum(1 for j, _ in found.values() if j == i) for i in range(1, 7)}
    assert per_node == {i: 3 for i in range(1, 7)}


def test_markov_quiver_is_infinite():
    assert not classify_finite(np.array(MARKOV))
    with pytest.raises(LimitExceeded):
        enumerate_finite(seed_from_matrix(MARKOV), exact=False, max_vars=200)


def test_finite_type_classification():
    a3 = np.array([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    assert classify_finite(a3)
    assert classify_finite(mutate_matrix(mutate_matrix(a3, 1), 0))
    seed, _, _ = build_initial_seed(build_cartan("D4"), 1)
    assert classify_finite(seed.principal)
    kronecker = np.array([[0, 2], [-2, 0]])
    assert not classify_finite(kronecker)


def test_quiver_shapes():
    seed, grid, _ = build_initial_seed(build_cartan("A3"), 2)
    assert len(grid.points) == 9 and len(seed.exchangeable) == 6
    assert _visible_arrows(seed) == 14
    seed, grid, _ = build_initial_seed(build_cartan("B3"), 2, B3_HEIGHT)
    assert sorted(grid.frozen) == [(1, -10), (2, -8), (3, -9), (4, -6), (5, -4)]
    assert _visible_arrows(seed) == 30


def _visible_arrows(seed):
    b = seed.matrix
    frozen = set(range(len(b))) - set(seed.exchangeable)
    return sum(int(b[i, j]) for i in range(len(b)) for j in range(len(b))
               if b[i, j] > 0 and not (i in frozen and j in frozen))


def test_dot_output_boxes_frozen_vertices():
    seed, grid, _ = build_initial_seed(build_cartan("A3"), 2)
    dot = quiver_dot(seed, grid)
    assert dot.count("shape=box") == 3
    assert dot.count("->") == 14
    assert '"M1,-3" [shape=box]' in dot


def test_export_round_trip():
    en = enumerate_category("A3", 1)
    polys, labels, rels = import_json(export(en, "json"))
    assert polys == en.registry.laurent
    assert labels == en.registry.labels
    assert {r.key() for r in rels} == {r.key() for r in en.relations}
    lines = export(en, "txt").splitlines()
    assert len(lines) == len(en.relations)
    assert {ExchangeRelation.from_text(s).key() for s in lines} == {r.key() for r in en.relations}
    with pytest.raises(ValueError):
        export(en, "xml")


def test_monomial_parsing():
    m = parse_monomial("Y_{1,0}Y_{1,4}Y_{2,-6}^2")
    assert m == {(1, 0): 1, (1, 4): 1, (2, -6): 2}
    assert parse_monomial(format_monomial(m)) == m
    assert parse_monomial("1") == {}
    for bad in ["", "Y_{1}", "Y_{1,2}x", "Z_{1,2}"]:
        with pytest.raises(ValueError):
            parse_monomial(bad)


def test_kr_shape_uses_symmetriser():
    b3 = build_cartan("B3")
    assert kr_shape({(1, 0): 1, (1, 4): 1}, b3) == (1, 2)
    assert kr_shape({(3, -3): 1, (3, -1): 1, (3, 1): 1}, b3) == (3, 3)
    assert kr_shape({(1, 0): 1, (1, 2): 1}, b3) is None
    assert kr_shape({(1, 0): 2}, b3) is None


def test_height_validation():
    with pytest.raises(ClusterError):
        build_grid(build_cartan("A3"), 1, {1: 0, 2: 0, 3: 1})
    with pytest.raises(ClusterError):
        build_grid(build_cartan("A3"), 1, {1: 0, 2: 1})
    with pytest.raises(ClusterError):
        build_grid(build_cartan("B2"), 1)
    with pytest.raises(ClusterError):
        build_grid(build_cartan("A3"), 0)


def test_frozen_vertex_cannot_mutate():
    from clusterfusion.cluster import mutate, new_registry
    seed = seed_from_matrix([[0, 1], [-1, 0]], frozen=[1])
    with pytest.raises(ClusterError):
        mutate(seed, 1, new_registry(seed))
