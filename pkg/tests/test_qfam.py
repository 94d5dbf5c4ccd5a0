import random

import pytest

from qfamily.finsemigroup import CayleyTable, enumerate_tables, find_identity, validate_associativity
from qfamily.qfam import (
    AntipodeCandidate,
    CheckResult,
    CheckVerdict,
    CounitCandidate,
    PreconditionError,
    QFamConfig,
    VerificationReport,
    antipode_candidates,
    build_delta,
    build_gamma,
    build_phi,
    check_antipode_candidate,
    check_coassoc_delta,
    check_coassoc_gamma,
    check_diagram_d1,
    check_e1,
    check_e2,
    check_gamma_well_defined,
    check_proof_chain,
    is_counit,
    mutate_gamma,
    search_counit,
    verify_theorem,
)
from qfamily.starpoly import Gen, Preset, Verdict
from qfamily.tensorspace import ALG, TensorElem, eq_tensor

Z3 = CayleyTable.from_rows([[(r + s) % 3 for s in range(3)] for r in range(3)])


def gamma(table, m=None, **kw):
    return build_gamma(QFamConfig.create(table, m, **kw))


def test_phi_and_delta_for_z2(z2):
    cfg = QFamConfig.create(z2)
    assert build_phi(cfg)[0].render() == "e[0]⊗c[0,0] + e[1]⊗c[1,0]"
    assert build_delta(cfg)[0].render() == "e[0]⊗e[0] + e[1]⊗e[1]"
    assert build_delta(cfg)[1].render() == "e[0]⊗e[1] + e[1]⊗e[0]"


def test_gamma_images_for_z2(z2):
    g = gamma(z2)
    assert g.image(0, 0).render() == "c[0,0]⊗c[0,0] + c[0,1]⊗c[0,1]"
    assert g.image(1, 1).render() == "c[1,0]⊗c[1,1] + c[1,1]⊗c[1,0]"


def test_left_zero_gamma_is_left_copy(left_zero):
    g = gamma(left_zero)
    for gen in g.generators():
        expected = TensorElem((ALG, ALG), g.pres, [(((gen,), ()), 1)])
        assert eq_tensor(g.images[gen], expected) is Verdict.EQUAL


@pytest.mark.parametrize("fixture", ["z2", "left_zero", "monoid3"])
def test_theorem_holds(fixture, request):
    report = verify_theorem(gamma(request.getfixturevalue(fixture)))
    assert report.verdict is CheckVerdict.PASS, [(e.name, e.witness) for e in report if not e.passed]
    assert {"diagram_d1", "coassoc_gamma", "e1", "e2", "e1_lhs_chain", "e1_rhs_chain"} <= set(report.names())


def test_nonassociative_table_breaks_coassociativity(nonassoc):
    g = gamma(nonassoc, require_associative=False)
    assert check_coassoc_delta(g.config).verdict is CheckVerdict.FAIL
    assert check_coassoc_gamma(g).verdict is CheckVerdict.FAIL
    assert check_e1(g).verdict is CheckVerdict.FAIL
    # the structural parts of the argument do not use associativity
    assert check_diagram_d1(g).verdict is CheckVerdict.PASS
    assert all(r.passed for r in check_proof_chain(g))
    assert all(r.passed for r in check_gamma_well_defined(g))


def test_create_rejects_nonassociative_by_default(nonassoc):
    with pytest.raises(ValueError, match="not associative"):
        QFamConfig.create(nonassoc)


def test_config_shape_errors(z2):
    with pytest.raises(ValueError):
        QFamConfig.create(z2, 0)
    with pytest.raises(ValueError, match="m == n"):
        QFamConfig.create(z2, 3, Preset.MAGIC_SQUARE)


@pytest.mark.slow
def test_theorem_for_every_small_semigroup_and_domain():
    for n in (1, 2, 3):
        for t in enumerate_tables(n, associative_only=True):
            for m in (1, 2, 3):
                report = verify_theorem(gamma(t, m))
                assert report.verdict is CheckVerdict.PASS, (t.label(), m)


def test_magic_preset_does_not_descend(z2):
    # pointwise products of bijections are not bijections; column relations stay unproved
    g = gamma(z2, preset=Preset.MAGIC_SQUARE)
    by_name = {r.name: r for r in check_gamma_well_defined(g)}
    assert by_name["gamma_row_sums"].passed
    assert by_name["gamma_column_sums"].verdict is CheckVerdict.INCONCLUSIVE


def test_e2_examples():
    words = [(Gen(0, 0),), (Gen(1, 1),), (Gen(0, 1),)]
    assert check_e2(2, words).verdict is CheckVerdict.PASS
    with pytest.raises(ValueError):
        check_e2(2, words[:2])


def test_counit_of_monoid_on_one_point(monoid3):
    assert search_counit(gamma(monoid3, 1)) == [CounitCandidate((0,))]


def test_counit_of_z2(z2):
    assert search_counit(gamma(z2)) == [CounitCandidate((0, 0))]


def test_no_counit_without_identity(left_zero):
    assert search_counit(gamma(left_zero)) == []


def test_counit_search_cap(monoid3):
    with pytest.raises(PreconditionError):
        search_counit(gamma(monoid3), cap=10)


def test_z2_antipode_is_identity(z2):
    g = gamma(z2)
    eps = CounitCandidate((0, 0))
    ident = AntipodeCandidate(((0, 1), (0, 1)))
    assert check_antipode_candidate(g, ident, eps).passed


def test_z3_antipode_is_inversion():
    g = gamma(Z3, 1)
    eps = CounitCandidate((0,))
    passing = [s.sigma for s in antipode_candidates(3, 1) if check_antipode_candidate(g, s, eps).passed]
    assert passing == [((0, 2, 1),)]


def test_monoid_has_no_permutation_antipode(monoid3):
    g = gamma(monoid3, 1)
    eps = CounitCandidate((0,))
    results = [check_antipode_candidate(g, s, eps) for s in antipode_candidates(3, 1)]
    assert results and not any(r.passed for r in results)
    assert all(r.witness for r in results)


def test_antipode_requires_counit(z2):
    with pytest.raises(PreconditionError):
        check_antipode_candidate(gamma(z2), AntipodeCandidate(((0, 1), (0, 1))), CounitCandidate((1, 1)))


def test_antipode_rejects_non_permutation():
    with pytest.raises(ValueError):
        AntipodeCandidate(((0, 0),))


def test_is_counit_rejects_non_identity(z2):
    assert not is_counit(gamma(z2), CounitCandidate((0, 1)))


def test_mutations_are_detected(z2, monoid3):
    rng = random.Random(3)
    for table in (z2, monoid3):
        g = gamma(table)
        for _ in range(15):
            bad, desc = mutate_gamma(g, rng)
            assert desc.startswith("Γ(c[")
            assert verify_theorem(bad).verdict is CheckVerdict.FAIL, desc


def test_mutation_leaves_original_untouched(z2):
    g = gamma(z2)
    before = {k: v.render() for k, v in g.images.items()}
    mutate_gamma(g, random.Random(0))
    assert {k: v.render() for k, v in g.images.items()} == before


def test_report_rejects_duplicate_names():
    rep = VerificationReport()
    rep.add(CheckResult("a", CheckVerdict.PASS))
    with pytest.raises(ValueError):
        rep.add(CheckResult("a", CheckVerdict.FAIL))


def test_report_verdict_precedence():
    rep = VerificationReport()
    assert rep.verdict is CheckVerdict.PASS
    rep.add([CheckResult("a", CheckVerdict.INCONCLUSIVE), CheckResult("b", CheckVerdict.PASS)])
    assert rep.verdict is CheckVerdict.INCONCLUSIVE
    rep.add(CheckResult("c", CheckVerdict.FAIL))
    assert rep.verdict is CheckVerdict.FAIL


def test_fail_witness_names_the_instance(nonassoc):
    g = gamma(nonassoc, require_associative=False)
    res = check_coassoc_delta(g.config)
    assert res.witness.startswith("k=")
