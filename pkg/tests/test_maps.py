import numpy as np
import pytest

from quartic.core.errors import DimensionError, DomainError, ImpossibleOutcomeError
from quartic.core.hermitian import (
    HermitianOperator,
    basis_projector,
    diagonal_operator,
    hadamard,
    projector,
    random_density,
    random_unitary,
    swap_operator,
)
from quartic.core.maps import (
    KrausSet,
    apply_map,
    classical_paths,
    classical_reduction,
    classify,
    coarse_grain,
    compose_maps,
    contraction_map,
    dephasing_channel,
    find_classical_witness,
    from_choi,
    from_kraus,
    from_superop,
    hadamard_witness,
    identity_channel,
    jamiolkowski_state,
    kraus_apply,
    map_effect,
    map_effect_from_state,
    map_from_state,
    measurement_update,
    random_bistochastic_map,
    random_cptp_map,
    to_kraus,
    unitary_channel,
)


def test_identity_channel():
    phi = identity_channel(3)
    flags = classify(phi)
    assert flags.cp and flags.trace_preserving and flags.unital and flags.bistochastic
    assert np.allclose(classical_reduction(phi), np.eye(3))


def test_kraus_set_validation():
    with pytest.raises(DomainError):
        KrausSet(operators=[2 * np.eye(2)])
    with pytest.raises(DimensionError):
        KrausSet(operators=[np.eye(2), np.eye(3)])
    with pytest.raises(DimensionError):
        KrausSet(operators=[])
    partial = KrausSet(operators=[np.diag([1.0, 0.0])])
    assert partial.k == 1 and partial.n == 2


def test_trace_nonincreasing_map():
    flags = classify(from_kraus(KrausSet(operators=[np.diag([1.0, 0.5])])))
    assert flags.cp and flags.trace_nonincreasing
    assert not flags.trace_preserving


def test_transpose_is_positive_but_not_cp():
    transpose = from_superop(swap_operator(2))
    flags = classify(transpose)
    assert flags.trace_preserving and flags.unital
    assert not flags.cp
    with pytest.raises(DomainError):
        to_kraus(transpose)


def test_to_kraus_rebuilds_the_map():
    phi = random_cptp_map(3, 4)
    ops = to_kraus(phi)
    assert 1 <= len(ops) <= 9
    rebuilt = from_kraus(KrausSet(operators=ops))
    assert np.allclose(rebuilt.superop, phi.superop, atol=1e-10)


def test_choi_and_superop_are_reshuffles():
    phi = random_cptp_map(2, 9)
    again = from_choi(phi.choi.matrix)
    assert np.array_equal(again.superop, phi.superop)


def test_hadamard_reduction_is_uniform():
    assert np.allclose(classical_reduction(unitary_channel(hadamard())), np.full((2, 2), 0.5))


def test_unitary_channel_rejects_non_unitary():
    with pytest.raises(DomainError):
        unitary_channel(np.ones((2, 2)))


def test_dephasing_channel():
    phi = dephasing_channel(3)
    assert classify(phi).bistochastic
    assert np.allclose(classical_reduction(phi), np.eye(3))
    rho = random_density(3, 1)
    assert np.allclose(apply_map(phi, rho).matrix, np.diag(np.diag(rho.matrix)))


def test_kraus_apply_matches_superoperator(rng):
    phi = random_cptp_map(2, rng)
    rho = random_density(2, rng)
    assert phi.kraus is not None
    assert np.allclose(kraus_apply(phi.kraus, rho).matrix, apply_map(phi, rho).matrix)


def test_measurement_update():
    measure = KrausSet(operators=[basis_projector(2, 0).matrix, basis_projector(2, 1).matrix])
    prob, post = measurement_update(measure, 0, projector([1.0, 1.0]))
    assert prob == pytest.approx(0.5)
    assert np.allclose(post.matrix, basis_projector(2, 0).matrix)
    with pytest.raises(ImpossibleOutcomeError):
        measurement_update(measure, 1, basis_projector(2, 0))
    with pytest.raises(DimensionError):
        measurement_update(measure, 2, basis_projector(2, 0))


def test_compose_maps_of_unitaries():
    u = random_unitary(2, 1)
    v = random_unitary(2, 2)
    composed = compose_maps(unitary_channel(u), unitary_channel(v))
    assert np.allclose(composed.superop, unitary_channel(u @ v).superop)
    with pytest.raises(DimensionError):
        compose_maps(identity_channel(2), identity_channel(3))


def test_contraction_map(rng):
    rho = random_density(3, rng)
    phi = contraction_map(rho)
    omega = random_density(3, rng)
    assert np.allclose(apply_map(phi, omega).matrix, rho.matrix)
    assert np.allclose(map_effect(phi).matrix, rho.matrix)
    assert np.allclose(map_effect_from_state(phi).matrix, rho.matrix)
    flags = classify(phi)
    assert flags.cp and flags.trace_preserving and not flags.unital
    with pytest.raises(DomainError):
        contraction_map(HermitianOperator(matrix=np.eye(3)))


@pytest.mark.parametrize("n", [2, 3])
def test_jamiolkowski_pair_is_exact_inverse(n):
    for seed in range(20):
        phi = random_cptp_map(n, seed)
        sigma = jamiolkowski_state(phi)
        assert np.trace(sigma.matrix).real == pytest.approx(1.0)
        back = map_from_state(sigma)
        assert np.array_equal(back.superop, phi.superop)
        assert np.array_equal(back.choi.matrix, phi.choi.matrix)


def test_map_from_plain_state_scales_by_dimension():
    phi = map_from_state(HermitianOperator(matrix=np.eye(4) / 4))
    assert np.allclose(phi.choi.matrix, np.eye(4) / 2)
    assert classify(phi).trace_preserving
    with pytest.raises(DimensionError):
        map_from_state(HermitianOperator(matrix=np.eye(3)))


@pytest.mark.parametrize("n", [2, 3])
def test_random_map_samplers(n):
    for seed in range(10):
        t = classical_reduction(random_cptp_map(n, seed))
        assert np.allclose(t.sum(axis=0), 1.0)
        assert t.min() >= -1e-12
        bistochastic = random_bistochastic_map(n, seed)
        assert classify(bistochastic).bistochastic
        t = classical_reduction(bistochastic)
        assert np.allclose(t.sum(axis=1), 1.0)


def test_coarse_grain():
    rho = projector([1.0, 1.0])
    assert np.allclose(coarse_grain(rho), [0.5, 0.5])
    assert np.allclose(coarse_grain(rho, hadamard()), [1.0, 0.0])
    with pytest.raises(DomainError):
        coarse_grain(rho, np.ones((2, 2)))


def test_hadamard_witness_gap_is_one():
    witness = hadamard_witness()
    assert witness.gap == pytest.approx(1.0)
    assert np.allclose(witness.paths.p_prime, [1.0, 0.0])
    assert np.allclose(witness.paths.p_doubleprime, [0.5, 0.5])


def test_classical_diagram_commutes_on_diagonal_states(rng):
    for _ in range(20):
        psi = random_cptp_map(3, rng)
        p = rng.dirichlet(np.ones(3))
        rho = diagonal_operator(p)
        assert classical_paths(psi, rho).gap < 1e-12


def test_classical_witness_search():
    assert find_classical_witness(2, 0, 5).gap >= 1.0 - 1e-12
    searched = find_classical_witness(3, 0, 50)
    assert searched.gap > 0.0
    assert 0 <= searched.trial < 50
    with pytest.raises(DomainError):
        find_classical_witness(2, 0, 0)
