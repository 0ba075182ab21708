import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from quartic.core.errors import DimensionError, DomainError, MembershipViolation
from quartic.core.hermitian import (
    HermitianOperator,
    basis_projector,
    diagonal_operator,
    hs_inner,
    maximally_mixed,
    projector,
    random_density,
    random_unitary,
    spectrum,
    tensor_product,
    von_neumann_entropy,
)
from quartic.core.states import (
    ExtendedState,
    TheoryOrder,
    XPovmElement,
    distinguishable_family,
    extend_product,
    extended_pure,
    gauged_entropy,
    is_classical_state,
    is_extended_state,
    is_povm_element,
    is_quantum_state,
    is_xpovm_element,
    reduce_state,
    sample_extended_state,
    sample_xpovm_element,
    validate_state,
    xpovm_certificate,
    xpovm_probability,
)


def test_theory_order_counts(exbit):
    assert exbit.dim == 4
    assert exbit.ancilla_dim == 2
    assert exbit.parameter_count == 16
    assert exbit.vertex_count == 6
    assert exbit.pure_manifold_dimension == 8
    low, high = exbit.entropy_interval
    assert low == pytest.approx(math.log(2))
    assert high == pytest.approx(2 * math.log(2))
    assert exbit.generator().tolist() == [0.5, 0.5, 0.0, 0.0]


@pytest.mark.parametrize("n,m,vertices,manifold", [(3, 0, 3, 4), (3, 1, 84, 36), (2, 2, 70, 32)])
def test_theory_order_other_orders(n, m, vertices, manifold):
    order = TheoryOrder(n=n, m=m)
    assert order.vertex_count == vertices
    assert order.pure_manifold_dimension == manifold


def test_theory_order_rejects_non_positive_n():
    with pytest.raises(ValueError):
        TheoryOrder(n=0)


def test_anchor_is_extremal_extended_state(exbit):
    sigma = ExtendedState(operator=exbit.anchor(), order=exbit)
    assert gauged_entropy(sigma) == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(reduce_state(sigma).matrix, basis_projector(2, 0).matrix)


def test_extended_state_membership(exbit):
    assert is_extended_state(maximally_mixed(4), exbit)
    assert not is_extended_state(projector([1, 0, 0, 0]), exbit)
    with pytest.raises(DomainError):
        ExtendedState(operator=projector([1, 0, 0, 0]), order=exbit)
    with pytest.raises(DimensionError):
        is_extended_state(maximally_mixed(3), exbit)


def test_subnormalized_extended_state(exbit):
    half = HermitianOperator(matrix=exbit.anchor().matrix / 2)
    assert not is_extended_state(half, exbit)
    assert is_extended_state(half, exbit, subnormalized=True)
    sigma = ExtendedState(operator=half, order=exbit, normalized=False)
    with pytest.raises(DomainError):
        gauged_entropy(sigma)


def test_embedding_round_trip(exbit, rng):
    rho = random_density(2, rng)
    sigma = extend_product(rho, exbit)
    assert np.allclose(reduce_state(sigma).matrix, rho.matrix)
    assert np.allclose(sigma.matrix, np.kron(rho.matrix, np.eye(2) / 2))


def test_embedding_at_order_zero_is_identity(rng):
    rho = random_density(3, rng)
    sigma = extend_product(rho, TheoryOrder(n=3, m=0))
    assert np.array_equal(sigma.matrix, rho.matrix)
    assert reduce_state(sigma) is sigma.operator


def test_embedding_rejects_bad_input(exbit):
    with pytest.raises(DimensionError):
        extend_product(maximally_mixed(3), exbit)
    with pytest.raises(DomainError):
        extend_product(diagonal_operator([1.5, -0.5]), exbit)


def test_pure_marginal_forces_maximally_mixed_ancilla(exbit):
    phi = projector([1.0, 1j])
    assert is_extended_state(tensor_product(phi, maximally_mixed(2)), exbit)
    tilted = HermitianOperator(matrix=np.diag([0.6, 0.4]).astype(complex))
    assert not is_extended_state(tensor_product(phi, tilted), exbit)


def test_distinguishable_family_is_orthogonal():
    order = TheoryOrder(n=3, m=1)
    family = distinguishable_family(random_unitary(3, 5), order)
    assert len(family) == 3
    for i, a in enumerate(family):
        for j, b in enumerate(family):
            expected = 1 / 3 if i == j else 0.0
            assert hs_inner(a.operator, b.operator) == pytest.approx(expected, abs=1e-12)
    with pytest.raises(DomainError):
        distinguishable_family(np.ones((3, 3)), order)


def test_extended_pure_is_extremal(exbit):
    sigma = extended_pure([0.6, 0.8], random_unitary(4, 11), exbit)
    assert gauged_entropy(sigma) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(DomainError):
        extended_pure([1.0, 1.0], np.eye(4), exbit)
    with pytest.raises(DomainError):
        extended_pure([1.0, 0.0], np.ones((4, 4)), exbit)


def test_gauged_entropy_bounds(exbit):
    mixed = ExtendedState(operator=maximally_mixed(4), order=exbit)
    assert gauged_entropy(mixed) == pytest.approx(math.log(2))


@pytest.mark.parametrize("n,m", [(2, 0), (2, 1), (3, 1), (2, 2)])
def test_sampled_states_respect_entropy_window(n, m):
    order = TheoryOrder(n=n, m=m)
    low, high = order.entropy_interval
    for i in range(20):
        sigma = sample_extended_state(order, i)
        s = von_neumann_entropy(sigma.operator)
        assert low - 1e-9 <= s <= high + 1e-9


def test_sampler_is_deterministic_and_extremal_with_one_term(exbit):
    a = sample_extended_state(exbit, 3)
    b = sample_extended_state(exbit, 3)
    assert np.array_equal(a.matrix, b.matrix)
    extremal = sample_extended_state(exbit, 3, terms=1)
    assert gauged_entropy(extremal) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(DomainError):
        sample_extended_state(exbit, 3, terms=0)


@pytest.mark.parametrize(
    "values,member",
    [
        ([1.0, 0.0, 0.0, 0.0], True),
        ([0.5, 0.5, 0.5, -0.5], True),
        ([1.0, 1.0, 1.0, 1.0], True),
        ([0.0, 0.0, 0.0, 0.0], True),
        ([1.0, 1.0, -1.0, 0.0], False),
        ([-1.0, 0.0, 0.0, 0.0], False),
        ([2.0, 0.0, 0.0, 0.0], False),
    ],
)
def test_xpovm_membership_examples(exbit, values, member):
    assert is_xpovm_element(diagonal_operator(values), exbit) == member


def test_xpovm_elements_may_have_negative_eigenvalues(exbit):
    e = XPovmElement(operator=diagonal_operator([0.5, 0.5, 0.5, -0.5]), order=exbit)
    assert spectrum(e.operator).values[-1] < 0
    assert not is_povm_element(e.operator)
    with pytest.raises(DomainError):
        XPovmElement(operator=diagonal_operator([1.0, 1.0, -1.0, 0.0]), order=exbit)


def test_xpovm_probability_is_non_negative(exbit):
    for i in range(50):
        sigma = sample_extended_state(exbit, 100 + i)
        e = sample_xpovm_element(exbit, 200 + i)
        p = xpovm_probability(sigma, e)
        assert 0.0 <= p <= 1.0


def test_xpovm_probability_guards(exbit):
    e = XPovmElement(operator=diagonal_operator([0.5, 0.5, 0.5, -0.5]), order=exbit)
    other = TheoryOrder(n=4, m=0)
    sigma = ExtendedState(operator=maximally_mixed(4), order=other)
    with pytest.raises(DimensionError):
        xpovm_probability(sigma, e)
    # outside the extended set, a pure state can pair negatively with e
    assert hs_inner(basis_projector(4, 3), e.operator) == pytest.approx(-0.5)
    unchecked = ExtendedState.model_construct(operator=basis_projector(4, 3), order=exbit)
    with pytest.raises(MembershipViolation):
        xpovm_probability(unchecked, e)


def test_xpovm_tolerance_applies_to_the_unnormalized_spectrum(exbit):
    zeroth = TheoryOrder(n=2, m=0)
    small = diagonal_operator([1e-3, -5e-10])
    assert is_povm_element(small)
    assert is_xpovm_element(small, zeroth)
    beyond = diagonal_operator([1e-3, -5e-9])
    assert not is_povm_element(beyond)
    assert not is_xpovm_element(beyond, zeroth)

    e = diagonal_operator([1e-3, 0.0, 0.0, -5e-10])
    assert is_xpovm_element(e, exbit)
    assert xpovm_certificate(e, exbit).worst_value == pytest.approx(-2.5e-10)
    assert not is_xpovm_element(diagonal_operator([1e-3, 0.0, 0.0, -5e-9]), exbit)


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, 3, elements=st.floats(-0.01, 1.01)), st.integers(0, 2**32 - 1))
def test_order_zero_predicates_are_the_quantum_ones(values, seed):
    order = TheoryOrder(n=3, m=0)
    u = random_unitary(3, seed)
    e = diagonal_operator(values, u)
    assert is_xpovm_element(e, order) == is_povm_element(e)
    assert is_extended_state(e, order) == is_quantum_state(e)
    assert is_extended_state(e, order, subnormalized=True) == is_quantum_state(
        e, subnormalized=True
    )
    probs = np.abs(values) + 1e-3
    rho = diagonal_operator(probs / probs.sum(), u)
    assert is_extended_state(rho, order) == is_quantum_state(rho)


def test_sampler_logs_mixture_size(exbit, caplog):
    with caplog.at_level(logging.DEBUG, logger="quartic.core.states"):
        sample_extended_state(exbit, 3, terms=2)
    assert "Mixing 2 unitary conjugates" in caplog.text


def test_sampled_xpovm_elements_for_larger_orders():
    order = TheoryOrder(n=3, m=1)
    for seed in range(5):
        e = sample_xpovm_element(order, seed)
        assert is_xpovm_element(e.operator, order)


def test_classical_and_quantum_predicates():
    assert is_classical_state([0.2, 0.8])
    assert not is_classical_state([0.2, 0.7])
    assert is_classical_state([0.2, 0.7], subnormalized=True)
    assert not is_classical_state([1.2, -0.2])
    assert is_quantum_state(maximally_mixed(3))
    assert not is_quantum_state(diagonal_operator([1.2, -0.2]))
    assert is_povm_element(diagonal_operator([1.0, 0.3]))


def test_validate_state_verdicts(exbit):
    verdict = validate_state(maximally_mixed(4), exbit)
    assert verdict.is_quantum_state and verdict.is_extended_state
    assert verdict.gauged_entropy == pytest.approx(math.log(2))
    assert verdict.marginal is not None
    assert np.allclose(verdict.marginal.matrix, np.eye(2) / 2)

    pure = validate_state(projector([1, 0, 0, 0]), exbit)
    assert pure.is_quantum_state and not pure.is_extended_state
    assert pure.partial_sum_excess == pytest.approx(0.5)
    assert pure.gauged_entropy is None
