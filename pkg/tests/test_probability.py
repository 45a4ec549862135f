import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cifc.channel import Channel, Alphabet, bsc_pair, canonical_channel, random_channel
from cifc.errors import (
    AlphabetMismatch,
    FactorizationViolation,
    InvalidParameter,
    SpecCoverageError,
    UnknownVariable,
)
from cifc.probability import (
    FactorizationSpec,
    Factor,
    JointDistribution,
    RandomVariableSet,
    add_paired_variable,
    chain,
    check_conditional_independence,
    entropy,
    evaluate_expr,
    extend_through_channel,
    joint_from_json,
    joint_to_json,
    marginalize,
    mi,
    mutual_information,
    rename_expr,
    rename_term,
    sample_factored,
    verify_factorization,
)


def h2(eps: float) -> float:
    """Binary entropy, the independent oracle for the BSC checks."""
    return -eps * np.log2(eps) - (1 - eps) * np.log2(1 - eps)


def uniform_inputs() -> JointDistribution:
    return JointDistribution(RandomVariableSet(("X1", "X2"), (2, 2)), np.full((2, 2), 0.25))


# -- sampling ----------------------------------------------------------------


def test_sample_single_binary_rv_is_simplex_point():
    rvs = RandomVariableSet(("U",), (2,))
    d = sample_factored(rvs, chain(("U",)), seed=3)
    assert d.prob.shape == (2,)
    assert d.prob.min() >= 0
    assert d.prob.sum() == pytest.approx(1.0, abs=1e-12)


def test_sample_degenerate_chain_supported_on_single_slice():
    rvs = RandomVariableSet(("U", "X"), (1, 3))
    d = sample_factored(rvs, chain(("U",), ("X", "U")), seed=1)
    assert d.prob.shape == (1, 3)
    assert d.prob.sum() == pytest.approx(1.0, abs=1e-12)


def test_sample_missing_variable_rejected():
    rvs = RandomVariableSet(("U", "X"), (2, 2))
    with pytest.raises(SpecCoverageError):
        sample_factored(rvs, chain(("U",)), seed=0)


def test_sample_deterministic_in_seed():
    rvs = RandomVariableSet(("A", "B", "C"), (2, 2, 2))
    spec = chain(("A",), ("B", "A"), ("C", "A B"))
    d1 = sample_factored(rvs, spec, seed=11)
    d2 = sample_factored(rvs, spec, seed=11)
    assert np.array_equal(d1.prob, d2.prob)


def test_factorization_spec_validation():
    with pytest.raises(InvalidParameter):
        FactorizationSpec((Factor(("A",)), Factor(("A",))))
    with pytest.raises(InvalidParameter):
        FactorizationSpec((Factor(("A",), ("B",)),))


@pytest.mark.parametrize("seed", range(20))
def test_sampled_chain_satisfies_declared_independencies(seed):
    rvs = RandomVariableSet(("X2", "U1c", "U1pb"), (2, 2, 2))
    spec = chain(("X2",), ("U1c", "X2"), ("U1pb", "X2"))
    d = sample_factored(rvs, spec, seed)
    verify_factorization(d, spec, tol=1e-9)
    assert check_conditional_independence(d, "U1c", "U1pb", "X2", tol=1e-9)


# -- channel extension -------------------------------------------------------


def test_orthogonal_extension_gives_clean_bit():
    d = extend_through_channel(uniform_inputs(), canonical_channel("orthogonal_noiseless"))
    assert mutual_information(d, mi("Y1", "X1")) == pytest.approx(1.0, abs=1e-12)
    assert mutual_information(d, mi("Y2", "X2")) == pytest.approx(1.0, abs=1e-12)


def test_constant_output_channel_gives_zero_mi():
    t = np.zeros((2, 2, 2, 2))
    t[0, 0, :, :] = 1.0
    ch = Channel(Alphabet("X1", 2), Alphabet("X2", 2), Alphabet("Y1", 2), Alphabet("Y2", 2), t)
    d = extend_through_channel(uniform_inputs(), ch)
    assert mutual_information(d, mi("Y1", "X1 X2")) == pytest.approx(0.0, abs=1e-12)
    assert mutual_information(d, mi("Y2", "X1 X2 Y1")) == pytest.approx(0.0, abs=1e-12)


def test_bsc_mi_matches_binary_entropy_oracle():
    d = extend_through_channel(uniform_inputs(), bsc_pair(0.11, 0.11))
    expected = 1.0 - h2(0.11)
    assert mutual_information(d, mi("Y1", "X1")) == pytest.approx(expected, abs=1e-12)


def test_extension_requires_matching_alphabets():
    d = uniform_inputs()
    with pytest.raises(AlphabetMismatch):
        extend_through_channel(d, random_channel(0, sizes=(3, 2, 2, 2)))
    d2 = JointDistribution(RandomVariableSet(("X1", "Z"), (2, 2)), np.full((2, 2), 0.25))
    with pytest.raises(AlphabetMismatch):
        extend_through_channel(d2, bsc_pair(0.1, 0.1))


def test_extension_marginal_is_channel_pushforward():
    ch = random_channel(9)
    d = extend_through_channel(uniform_inputs(), ch)
    out = marginalize(d, "Y1 Y2").prob
    expected = ch.transition.sum(axis=(2, 3)) / 4.0
    assert np.allclose(out, expected, atol=1e-14)


# -- marginalization ---------------------------------------------------------


def test_marginalize_keep_all_is_identity():
    d = sample_factored(RandomVariableSet(("A", "B"), (2, 3)), chain(("A",), ("B", "A")), 5)
    m = marginalize(d, ("A", "B"))
    assert np.allclose(m.prob, d.prob, atol=0)


def test_marginalize_to_nothing_is_scalar_one():
    d = sample_factored(RandomVariableSet(("A",), (4,)), chain(("A",)), 5)
    m = marginalize(d, ())
    assert m.prob.shape == ()
    assert float(m.prob) == pytest.approx(1.0, abs=1e-12)


def test_marginalize_product_recovers_factor():
    pa = np.array([0.3, 0.7])
    pb = np.array([0.2, 0.5, 0.3])
    d = JointDistribution(RandomVariableSet(("A", "B"), (2, 3)), np.outer(pa, pb))
    assert np.allclose(marginalize(d, "B").prob, pb, atol=1e-15)


def test_marginalize_unknown_variable():
    d = uniform_inputs()
    with pytest.raises(UnknownVariable):
        marginalize(d, ("X1", "W"))


# -- information measures ----------------------------------------------------


def test_mi_independent_is_zero():
    d = uniform_inputs()
    assert mutual_information(d, mi("X1", "X2")) == 0.0


def test_mi_identical_uniform_bit():
    p = np.zeros((2, 2))
    p[0, 0] = p[1, 1] = 0.5
    d = JointDistribution(RandomVariableSet(("A", "B"), (2, 2)), p)
    assert mutual_information(d, mi("A", "B")) == pytest.approx(1.0, abs=1e-12)


def test_mi_noisy_copy_matches_oracle():
    eps = 0.11
    p = np.array([[0.5 * (1 - eps), 0.5 * eps], [0.5 * eps, 0.5 * (1 - eps)]])
    d = JointDistribution(RandomVariableSet(("A", "B"), (2, 2)), p)
    assert mutual_information(d, mi("A", "B")) == pytest.approx(1 - h2(eps), abs=1e-12)


def test_mi_unknown_variable():
    with pytest.raises(UnknownVariable):
        mutual_information(uniform_inputs(), mi("X1", "Q"))


def test_miterm_validation():
    with pytest.raises(InvalidParameter):
        mi("A", "A")
    with pytest.raises(InvalidParameter):
        mi("A", "B", "A")
    with pytest.raises(InvalidParameter):
        mi("", "B")


def test_expr_cancellation_is_zero():
    d = sample_factored(
        RandomVariableSet(("A", "B"), (2, 2)), chain(("A",), ("B", "A")), 17
    )
    e = mi("A", "B") - mi("A", "B")
    assert evaluate_expr(d, e) == 0.0


@pytest.mark.parametrize("seed", range(10))
def test_expr_chain_rule_identity(seed):
    rvs = RandomVariableSet(("U1c", "U2c", "X2"), (2, 2, 2))
    d = sample_factored(rvs, chain(("U1c U2c X2",)), seed)
    e = mi("U1c", "X2 U2c") - mi("U1c", "X2") - mi("U2c", "U1c", "X2")
    assert abs(evaluate_expr(d, e)) < 1e-12


def test_expr_constant_and_str():
    e = mi("A", "B") - mi("A", "B", "C") + 0.5
    assert e.constant == 0.5
    assert "I(A;B)" in str(e) and "I(A;B|C)" in str(e)
    assert e.variables() == {"A", "B", "C"}


# -- conditional independence ------------------------------------------------


def test_ci_product_distribution():
    assert check_conditional_independence(uniform_inputs(), "X1", "X2")


def test_ci_rejects_identical_variables():
    p = np.zeros((2, 2))
    p[0, 0] = p[1, 1] = 0.5
    d = JointDistribution(RandomVariableSet(("A", "B"), (2, 2)), p)
    assert not check_conditional_independence(d, "A", "B", tol=1e-9)


@pytest.mark.parametrize("seed", range(100))
def test_ci_holds_for_sampled_chain(seed):
    rvs = RandomVariableSet(("X2", "U1c", "U1pb"), (2, 2, 2))
    d = sample_factored(rvs, chain(("X2",), ("U1c", "X2"), ("U1pb", "X2")), seed)
    assert check_conditional_independence(d, "U1c", "U1pb", "X2", tol=1e-9)


def test_verify_factorization_names_violation():
    p = np.zeros((2, 2))
    p[0, 0] = p[1, 1] = 0.5
    d = JointDistribution(RandomVariableSet(("A", "B"), (2, 2)), p)
    with pytest.raises(FactorizationViolation) as err:
        verify_factorization(d, chain(("A",), ("B",)))
    assert "I(B;A" in str(err.value).replace(" ", "")


# -- spec invariants ---------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_mi_nonnegative_on_sampled_joints(seed):
    rvs = RandomVariableSet(("A", "B", "C"), (2, 2, 2))
    d = sample_factored(rvs, chain(("A B C",)), seed)
    for term in (mi("A", "B"), mi("A", "B", "C"), mi("A", "B C")):
        assert mutual_information(d, term) >= 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_chain_rule_on_random_joints(seed):
    rvs = RandomVariableSet(("A", "B", "C", "D"), (2, 2, 2, 2))
    d = sample_factored(rvs, chain(("A B C D",)), seed)
    lhs = mutual_information(d, mi("A", "B C", "D"))
    rhs = mutual_information(d, mi("A", "B", "D")) + mutual_information(d, mi("A", "C", "B D"))
    assert lhs == pytest.approx(rhs, abs=1e-9)


@pytest.mark.parametrize("seed", range(25))
def test_data_processing_through_channel(seed):
    rvs = RandomVariableSet(("X1", "X2"), (2, 2))
    d = sample_factored(rvs, chain(("X1 X2",)), seed)
    ext = extend_through_channel(d, random_channel(seed))
    assert mutual_information(ext, mi("X1", "Y1")) <= entropy(ext, "X1") + 1e-9


# -- renaming ----------------------------------------------------------------


def test_rename_merges_and_drops():
    t = mi("X2b U1c", "Y2", "X2a Q")
    r = rename_term(t, {"X2a": (), "X2b": ("X2a", "X2b")})
    assert set(r.left) == {"X2a", "X2b", "U1c"}
    assert r.given == ("Q",)
    assert rename_term(mi("X2a", "Y2"), {"X2a": ()}) is None


def test_rename_expr_drops_vanished_terms():
    e = mi("X2a", "Y2", "Q") + mi("X2b", "Y1")
    r = rename_expr(e, {"X2a": (), "X2b": ("X2a", "X2b")})
    assert len(r.terms) == 1
    assert set(r.terms[0][1].left) == {"X2a", "X2b"}


# -- deterministic variables and serialization --------------------------------


def test_add_paired_variable_is_deterministic_function():
    rvs = RandomVariableSet(("A", "B"), (2, 3))
    d = sample_factored(rvs, chain(("A",), ("B", "A")), 21)
    dp = add_paired_variable(d, "P", ("A", "B"))
    assert dp.rvs.size("P") == 6
    assert entropy(dp, "P", "A B") == pytest.approx(0.0, abs=1e-12)
    assert dp.prob.sum() == pytest.approx(1.0, abs=1e-12)


def test_joint_json_roundtrip():
    d = sample_factored(
        RandomVariableSet(("A", "B"), (2, 3)), chain(("A",), ("B", "A")), 8
    )
    back = joint_from_json(joint_to_json(d))
    assert back.names == d.names
    assert np.array_equal(back.prob, d.prob)


def test_joint_json_rejects_bad_length():
    with pytest.raises(InvalidParameter):
        joint_from_json({"names": ["A"], "sizes": [2], "p": [1.0]})


def test_joint_mass_validation():
    rvs = RandomVariableSet(("A",), (2,))
    with pytest.raises(InvalidParameter):
        JointDistribution(rvs, np.array([0.6, 0.6]))
