import numpy as np
import pytest

from clusterfusion.cartan import build_cartan
from clusterfusion.cluster import enumerate_category, parse_monomial
from clusterfusion.fusion import VerlindeElement, fusion_ring
from clusterfusion.repring import kr_restriction
from clusterfusion.verifier import (Contradiction, VerificationError, a1_expected, a_plucker_expected,
                                    certify, check_dn, check_example_a2, check_example_b3,
                                    cluster_monomial_qdims, dn_census, format_image, kr_image, load_cluster_table,
                                    parse_image, propagate, relation_residual, seed_known_images,
                                    table_images, verify)


@pytest.fixture(scope="module")
def e6_report():
    return verify("E6", 2)


@pytest.fixture(scope="module")
def e6_setup():
    return enumerate_category("E6", 1), fusion_ring("E6", 2)


def test_e6_passes_and_matches_table(e6_report):
    r = e6_report
    assert r.passed
    assert r.table_match is True and r.mismatches == []
    assert r.summary() == "48 variables, all positive"
    assert (r.variables, r.exchangeable, r.frozen, len(r.kr_ids)) == (48, 42, 6, 18)
    assert r.stats.undetermined == []
    assert r.certificate.frozen_ok
    assert r.certificate.nonfrozen_simple_currents == []


def test_e6_x34_is_forced_to_v4(e6_report):
    table = load_cluster_table("E6")
    row = next(row for row in table["rows"] if row["index"] == 34)
    j = next(j for j, lab in enumerate(e6_report.labels) if lab == parse_monomial(row["monomial"]))
    assert j not in e6_report.kr_ids
    assert e6_report.table.element(j) == VerlindeElement({(0, 1, 0, 0, 0, 0, 1): 1})
    assert row["image"] == "V_4"


def test_seed_sources_agree(e6_setup):
    en, ring = e6_setup
    a, kr_a = seed_known_images(en, ring, "pipeline")
    b, kr_b = seed_known_images(en, ring, "data")
    assert kr_a == kr_b
    assert all(np.array_equal(a.known[j], b.known[j]) for j in a.known)
    with pytest.raises(ValueError):
        seed_known_images(en, ring, "guess")


def test_data_source_needs_a_table():
    en = enumerate_category("D4", 1)
    with pytest.raises(VerificationError):
        seed_known_images(en, fusion_ring("D4", 2), "data")


@pytest.mark.parametrize("scale", [0, 2])
def test_injected_fault_is_detected(e6_setup, scale):
    en, ring = e6_setup
    table, kr = seed_known_images(en, ring)
    victim = sorted(kr)[5]
    table.known[victim] = table.known[victim] * scale
    with pytest.raises(Contradiction) as info:
        propagate(en.relations, table)
    assert info.value.relation is not None


def test_propagation_only_adds_information(e6_setup):
    en, ring = e6_setup
    table, kr = seed_known_images(en, ring)
    before = {j: v.copy() for j, v in table.known.items()}
    stats = propagate(en.relations, table)
    assert all(n > 0 for n in stats.iterations)
    assert sum(stats.iterations) == (48 - len(before)) * ring.size
    assert all(np.array_equal(table.known[j], v) for j, v in before.items())
    assert all(not relation_residual(ring, r, table.known).any() for r in en.relations)


def test_certificate_flags_bad_images(e6_setup):
    en, ring = e6_setup
    table, kr = seed_known_images(en, ring)
    propagate(en.relations, table)
    exch = next(j for j in range(table.size) if j not in en.registry.frozen)
    table.known[exch] = ring.vector(ring.basis_element(ring.basis[ring.unit]))
    frozen = en.registry.frozen[0]
    table.known[frozen] = ring.vector(ring.basis_element((1, 1, 0, 0, 0, 0, 0)))
    cert = certify(table, en.registry.frozen)
    assert exch in cert.nonfrozen_simple_currents
    assert not cert.frozen_units[frozen]
    assert not cert.passed


def test_qdim_is_multiplicative_on_images(e6_report):
    assert cluster_monomial_qdims(e6_report, samples=300) < 1e-6


def test_e7_level_two():
    r = verify("E7", 2)
    assert r.passed and r.table_match
    assert (r.variables, len(r.kr_ids)) == (77, 21)


def test_report_formats(e6_report):
    d = e6_report.to_json()
    assert d["counts"]["variables"] == 48 and d["positivity"] is True
    assert len(d["images"]) == 48 and all("coeffs" in e for e in d["images"])
    md = e6_report.to_markdown()
    assert md.startswith("# E6 at level 2") and md.count("| x") == 48


def test_level_one_is_rejected():
    with pytest.raises(ValueError):
        verify("E6", 1)


def test_image_text_round_trip():
    basis = fusion_ring("E6", 2).basis
    v = parse_image("V_0 + 2 V_5", basis)
    assert v == VerlindeElement({basis[0]: 1, basis[5]: 2})
    assert parse_image(format_image(v, basis), basis) == v
    with pytest.raises(ValueError):
        parse_image("V_12", basis)
    images = table_images(load_cluster_table("E7"))
    assert len(images) == 77


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_a1_closed_form(k):
    r = verify("A1", k)
    assert r.passed
    for j, lab in enumerate(r.labels):
        assert r.table.element(j) == a1_expected(k, lab)


@pytest.mark.parametrize("rank", [2, 3, 4])
def test_type_a_level_two_closed_form(rank):
    r = verify(f"A{rank}", 2)
    assert r.passed
    for j, lab in enumerate(r.labels):
        assert r.table.element(j) == a_plucker_expected(rank, lab)


@pytest.mark.parametrize("n", [4, 5])
def test_dn_formula_small_rank(n):
    rep = check_dn(n)
    assert rep.census == rep.expected_census == dn_census(n)
    assert rep.exchangeable == n * n
    assert rep.consistent and rep.pipeline_agrees
    assert rep.missing_formula == [] and rep.nonpositive == []


def test_dn_rank_six_needs_amended_head():
    # forced images differ from the stated formula only by the head 2L1 -> 2L0
    rep = check_dn(6)
    assert rep.nonpositive == [] and rep.amended_consistent
    assert rep.failed_relations and not rep.consistent
    assert rep.disagreements
    for line in rep.disagreements:
        stated, forced = line.split(": ", 1)[1].split(" vs ")
        assert "[[0, 2, 0, 0, 0, 0, 0]]" in stated and "[[2, 0, 0, 0, 0, 0, 0]]" in forced


def test_worked_examples():
    a2 = check_example_a2()
    assert a2.passed, a2.row_failures
    b3 = check_example_b3()
    assert b3.passed, b3.row_failures
    assert b3.total_dim == b3.expected_dim == 47880
    assert (b3.null_rows, b3.negative_rows) == (7, 4)


def test_fusion_side_qsystem_agrees_with_exact_restriction():
    d = build_cartan("E7")
    ring = fusion_ring("E7", 2)
    for i in range(1, 8):
        assert kr_image(ring, i, 2) == ring.phi_image(kr_restriction(d, i, 2))
