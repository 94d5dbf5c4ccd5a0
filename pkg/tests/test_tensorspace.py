import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfamily.numrep import evaluate_components, sample_rep
from qfamily.starpoly import Gen, Preset, Presentation, Verdict
from qfamily.tensorspace import (
    ALG,
    LegHom,
    PointLeg,
    TensorElem,
    apply_alg_mult,
    apply_flip,
    apply_mult,
    eq_tensor,
    substitute_hom,
    tensor_concat,
    tensor_mul,
)

P = Presentation(2, 2)
P2 = PointLeg(2)
c00, c01, c10, c11 = Gen(0, 0), Gen(0, 1), Gen(1, 0), Gen(1, 1)


def mixed_elems(sig, pres=P):
    """Random elements over a signature mixing point and algebra legs."""
    gens = st.builds(Gen, st.integers(0, pres.m - 1), st.integers(0, pres.n - 1))
    factor = {
        "p": lambda k: st.integers(0, k.d - 1),
        "a": lambda k: st.lists(gens, max_size=3).map(tuple),
    }
    legs = [factor["p" if isinstance(k, PointLeg) else "a"](k) for k in sig]
    term = st.tuples(st.tuples(*legs), st.integers(-3, 3))
    return st.lists(term, max_size=4).map(lambda ts: TensorElem(sig, pres, ts))


SIG4 = (P2, ALG, P2, ALG)


def test_flip_moves_legs():
    u = TensorElem.basis((P2, ALG), P, (1, (c00,)))
    f = apply_flip(u, 0)
    assert f.signature == (ALG, P2)
    assert f.render() == "c[0,0]⊗e[1]"


def test_point_multiplication():
    sig = (P2, P2)
    assert apply_mult(TensorElem.basis(sig, P, (1, 1)), 0) == TensorElem.point(2, 1, P)
    assert apply_mult(TensorElem.basis(sig, P, (0, 1)), 0).is_zero()


def test_mult_rejects_algebra_legs():
    with pytest.raises(TypeError):
        apply_mult(TensorElem.basis((P2, ALG), P, (0, (c00,))), 0)


def test_position_out_of_range():
    u = TensorElem.basis((P2, P2), P, (0, 0))
    with pytest.raises(IndexError):
        apply_flip(u, 1)


def test_algebra_multiplication_reduces():
    u = TensorElem.basis((ALG, ALG), P, ((c00,), (c01,)))
    assert apply_alg_mult(u, 0).is_zero()
    v = TensorElem.basis((ALG, ALG), P, ((c00,), (c10,)))
    assert apply_alg_mult(v, 0).render() == "c[0,0]·c[1,0]"


def test_unit_of_point_leg_is_sum_of_projections():
    assert TensorElem.unit((P2,), P).render() == "e[0] + e[1]"


@given(mixed_elems(SIG4), st.integers(0, 2))
def test_flip_is_an_involution(u, at):
    assert apply_flip(apply_flip(u, at), at) == u


@given(mixed_elems(SIG4))
def test_disjoint_flips_commute(u):
    assert apply_flip(apply_flip(u, 0), 2) == apply_flip(apply_flip(u, 2), 0)


@given(mixed_elems((P2, P2, P2)))
def test_point_mult_associative(u):
    assert apply_mult(apply_mult(u, 0), 0) == apply_mult(apply_mult(u, 1), 0)


@given(mixed_elems((ALG, ALG, ALG)))
def test_alg_mult_associative(u):
    assert apply_alg_mult(apply_alg_mult(u, 0), 0) == apply_alg_mult(apply_alg_mult(u, 1), 0)


@given(mixed_elems((P2, P2, ALG)), mixed_elems((P2, P2, ALG)))
def test_mult_is_a_homomorphism(u, v):
    assert apply_mult(tensor_mul(u, v), 0) == tensor_mul(apply_mult(u, 0), apply_mult(v, 0))


def _swap_hom():
    # the automorphism of C exchanging the two columns
    images = {g: TensorElem.basis((ALG,), P, ((Gen(g.x, 1 - g.k),),)) for g in P.generators()}
    return LegHom("swap", ALG, (ALG,), images)


@given(mixed_elems((P2, ALG)), mixed_elems((P2, ALG)))
def test_substitute_distributes_over_sums(u, v):
    h = _swap_hom()
    assert substitute_hom(u + v, 1, h) == substitute_hom(u, 1, h) + substitute_hom(v, 1, h)


@given(mixed_elems((P2, ALG)), mixed_elems((P2, ALG)))
def test_substitute_is_multiplicative(u, v):
    h = _swap_hom()
    lhs = substitute_hom(tensor_mul(u, v), 1, h)
    rhs = tensor_mul(substitute_hom(u, 1, h), substitute_hom(v, 1, h))
    assert eq_tensor(lhs, rhs) is Verdict.EQUAL


def test_substitute_checks_leg_kind():
    with pytest.raises(TypeError):
        substitute_hom(TensorElem.basis((P2,), P, (0,)), 0, _swap_hom())


def test_concat_and_adjoint():
    a = TensorElem.basis((ALG,), P, ((c00, c10),), 1j)
    b = TensorElem.point(2, 1, P)
    u = tensor_concat(a, b)
    assert u.signature == (ALG, P2)
    assert u.adjoint().render() == "-i·c[1,0]·c[0,0]⊗e[1]"


def test_eq_tensor_uses_relations():
    lhs = TensorElem((ALG, ALG), P, [(((c00,), (c10,)), 1), (((c01,), (c10,)), 1)])
    rhs = TensorElem.basis((ALG, ALG), P, ((), (c10,)))
    assert eq_tensor(lhs, rhs) is Verdict.EQUAL
    assert eq_tensor(lhs, TensorElem.basis((ALG, ALG), P, ((), (c11,)))) is Verdict.NOT_EQUAL


def test_signature_mismatch():
    with pytest.raises(ValueError):
        TensorElem.basis((P2,), P, (0,)) + TensorElem.basis((ALG,), P, ((c00,),))


@settings(max_examples=60, deadline=None)
@given(mixed_elems((P2, ALG, ALG)), mixed_elems((P2, ALG, ALG)))
def test_eq_tensor_numerically_sound(u, v):
    reps = [sample_rep(2, 2, d, s) for d in (2, 3) for s in (0, 1)]
    verdict = eq_tensor(u, v)

    def gap(rep):
        a, b = evaluate_components(u, rep), evaluate_components(v, rep)
        return max([np.linalg.norm(a.get(k, 0) - b.get(k, 0)) for k in set(a) | set(b)] + [0.0])

    gaps = [gap(r) for r in reps]
    if verdict is Verdict.EQUAL:
        assert max(gaps) < 1e-9
    else:
        assert max(gaps) > 1e-4


def test_magic_mode_tensor_equality():
    M = Presentation(2, 2, Preset.MAGIC_SQUARE)
    lhs = TensorElem.basis((ALG, ALG), M, ((c00,), (c00,)))
    rhs = TensorElem.basis((ALG, ALG), M, ((c11,), (c00,)))
    assert eq_tensor(lhs, rhs) is Verdict.EQUAL
