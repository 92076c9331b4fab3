from fractions import Fraction

import numpy as np
import pytest

from clusterfusion.cartan import (CartanError, bilinear, build_cartan, catalog, info, parse_type,
                                  root_weight_pairing)

# (h, h_vee, number of positive roots) from the standard classification tables
KNOWN = {
    "A1": (2, 2, 1), "A4": (5, 5, 10), "B3": (6, 5, 9), "C3": (6, 4, 9), "D4": (6, 6, 12),
    "D5": (8, 8, 20), "E6": (12, 12, 36), "E7": (18, 18, 63), "E8": (30, 30, 120),
    "F4": (12, 9, 24), "G2": (6, 4, 6),
}


@pytest.mark.parametrize("label", sorted(KNOWN))
def test_coxeter_numbers_and_root_counts(label):
    d = build_cartan(label)
    assert (d.coxeter_h, d.dual_coxeter_hvee, len(d.positive_roots)) == KNOWN[label]


def test_b3_conventions():
    d = build_cartan("B3")
    assert d.comarks == (1, 1, 2, 1)
    assert d.t == (1, 1, 2)
    assert d.fold_degree == (2, 2, 1)
    assert d.d == 2


def test_e6_affine_node_attaches_to_node_2():
    d = build_cartan("E6")
    row = d.affine_matrix[0, 1:]
    assert list(np.nonzero(row)[0] + 1) == [2]


@pytest.mark.parametrize("label", [f"{f}{n}" for f, n in catalog(5)])
def test_highest_root_has_norm_two(label):
    d = build_cartan(label)
    theta = d.positive_roots[-1]
    assert bilinear(d, theta, theta, basis="root") == 2
    # theta pairs with every simple coroot non-negatively
    for i in range(d.rank):
        assert sum(d.cartan_matrix[i, j] * theta[j] for j in range(d.rank)) >= 0


@pytest.mark.parametrize("label", ["B3", "C4", "F4", "G2", "E7"])
def test_gram_is_inverse_of_symmetrised_cartan(label):
    d = build_cartan(label)
    n = d.rank
    # (w_i | alpha_j) = eps_j delta_ij
    for i in range(n):
        w = [int(j == i) for j in range(n)]
        for j in range(n):
            alpha = [int(r == j) for r in range(n)]
            assert root_weight_pairing(d, w, alpha) == (d.eps[j] if i == j else 0)
    g = np.array([[float(x) for x in row] for row in d.gram])
    assert np.allclose(g, g.T)
    assert np.all(np.linalg.eigvalsh(g) > 0)


def test_affine_rows_annihilate_marks():
    for f, n in catalog(6):
        d = build_cartan(f, n)
        a = d.affine_matrix
        # sum_j a_ij * marks_j = 0 for every row i
        assert not (a @ np.array(d.marks)).any(), d.name
        assert not (np.array(d.comarks) @ a).any(), d.name


def test_parse_type_variants():
    assert parse_type("E6") == ("E", 6)
    assert parse_type("d_5") == ("D", 5)
    assert parse_type("A2^(1)") == ("A", 2)
    with pytest.raises(CartanError):
        parse_type("X9")
    with pytest.raises(CartanError):
        build_cartan("E9")
    with pytest.raises(CartanError):
        build_cartan("D3")


def test_info_is_json_ready():
    data = info(build_cartan("G2"))
    assert data["t_i"] == [1, 3]
    assert data["hvee"] == 4
    assert isinstance(bilinear(build_cartan("G2"), (1, 0), (1, 0)), Fraction)
