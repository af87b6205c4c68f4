"""Fock-space enumeration, ladder operators, state constructors, and
moment computations."""
from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.stats import poisson

from su3optics import (
    FockSpace,
    QuantumState,
    Su3Params,
    coherent_state,
    expectation,
    mode_correlations,
    psi_n_state,
    qutrit_w_state,
    total_number_distribution,
    unit_vector,
    variance,
)
from su3optics.errors import (
    CapacityError,
    DimensionMismatchError,
    DomainError,
    TruncationError,
)


def basis_state(space, occ):
    vec = np.zeros(space.dim, dtype=np.complex128)
    vec[space.index_of(occ)] = 1.0
    return QuantumState(space, vector=vec)


def test_enumeration_is_lexicographic():
    space = FockSpace(2, 2)
    expected = [
        (0, 0), (0, 1), (0, 2),
        (1, 0), (1, 1), (1, 2),
        (2, 0), (2, 1), (2, 2),
    ]
    assert space.dim == 9
    assert [tuple(row) for row in space.occupations] == expected
    for i, occ in enumerate(expected):
        assert space.index_of(occ) == i


def test_capped_dimension_is_simplex_count():
    # total <= cap with cutoff >= cap counts lattice points of a simplex
    space = FockSpace(3, 4, total_photon_cap=4)
    assert space.dim == math.comb(4 + 3, 3)
    assert space.occupations.sum(axis=1).max() == 4
    six = FockSpace(6, 3, total_photon_cap=3)
    assert six.dim == math.comb(3 + 6, 6)


def test_index_of_rejects_out_of_range():
    space = FockSpace(3, 2, total_photon_cap=2)
    with pytest.raises(DomainError):
        space.index_of((3, 0, 0))
    with pytest.raises(DomainError):
        space.index_of((1, 1, 1))  # over the cap
    with pytest.raises(DomainError):
        space.index_of((-1, 0, 0))


def test_ladder_operator_matrix_elements():
    space = FockSpace(1, 5)
    a = space.annihilator(0).toarray()
    for n in range(1, 6):
        assert abs(a[n - 1, n] - math.sqrt(n)) < 1e-15
    assert np.count_nonzero(a) == 5
    ad = space.creator(0).toarray()
    assert np.allclose(ad, a.conj().T)
    n_op = space.number_op(0).toarray()
    assert np.allclose(n_op, np.diag(np.arange(6)))


def test_canonical_commutator_on_interior():
    space = FockSpace(2, 6)
    a = space.annihilator(0)
    comm = (a @ space.creator(0) - space.creator(0) @ a).toarray()
    # exact identity on every state below the cutoff layer
    interior = space.occupations[:, 0] < 6
    assert np.allclose(np.diag(comm)[interior], 1.0)


def test_total_number_operator():
    space = FockSpace(3, 2, total_photon_cap=2)
    totals = space.total_number_op().diagonal().real
    assert np.array_equal(totals, space.occupations.sum(axis=1))


def test_state_validation():
    space = FockSpace(2, 1)
    with pytest.raises(DomainError):
        QuantumState(space, vector=np.ones(space.dim))  # not normalized
    with pytest.raises(DimensionMismatchError):
        QuantumState(space, vector=np.array([1.0, 0.0]))
    with pytest.raises(DomainError):
        QuantumState(space)  # neither vector nor density
    rho = np.eye(space.dim) / space.dim
    state = QuantumState(space, density=rho)
    assert state.kind == "mixed"
    bad = rho.copy()
    bad[0, 1] = 0.5
    with pytest.raises(DomainError):
        QuantumState(space, density=bad)  # not Hermitian


def test_coherent_state_is_poissonian():
    space = FockSpace(1, 25)
    alpha = 0.9 - 0.4j
    state = coherent_state(space, [alpha])
    mean_n = abs(alpha) ** 2
    probs = state.occupation_probabilities()
    expected = poisson.pmf(np.arange(26), mean_n)
    assert np.max(np.abs(probs - expected)) < 1e-12
    n_op = space.number_op(0)
    assert abs(expectation(state, n_op).real - mean_n) < 1e-10
    assert abs(variance(state, n_op) - mean_n) < 1e-9
    assert state.metadata["truncation_tail_mass"] < 1e-12


def test_coherent_state_eigenrelation():
    # a|alpha> = alpha|alpha> on the retained block
    space = FockSpace(2, 14)
    alphas = [0.7 + 0.2j, -0.3 + 0.5j]
    state = coherent_state(space, alphas)
    for m, alpha in enumerate(alphas):
        image = space.annihilator(m) @ state.vector
        resid = np.linalg.norm(image - alpha * state.vector)
        assert resid < 1e-6  # limited only by the truncated top layer


def test_coherent_truncation_guard():
    space = FockSpace(1, 12)
    with pytest.raises(TruncationError) as info:
        coherent_state(space, [math.sqrt(2.0)])
    assert info.value.tail_mass is not None
    assert info.value.tail_mass > 1e-8
    # a slightly smaller amplitude passes the tail rule at this cutoff
    coherent_state(space, [1.0])


def test_unit_vector_and_params():
    params = Su3Params(theta=0.7, phi=0.4, psi1=1.1, psi2=5.9)
    e = unit_vector(params)
    assert abs(np.sum(np.abs(e) ** 2) - 1.0) < 1e-14
    assert abs(e[0] - np.exp(1.1j) * math.sin(0.7) * math.cos(0.4)) < 1e-15
    assert abs(e[2] - math.cos(0.7)) < 1e-15
    with pytest.raises(DomainError):
        Su3Params(theta=2.0, phi=0.1)
    with pytest.raises(DomainError):
        Su3Params(theta=0.1, phi=-0.2)
    with pytest.raises(DomainError):
        Su3Params(theta=0.1, phi=0.1, psi1=7.0)
    balanced = unit_vector(Su3Params.maximally_entangled())
    assert np.allclose(np.abs(balanced) ** 2, 1.0 / 3.0)


def test_psi_n_amplitudes_match_multinomial():
    space = FockSpace(3, 2)
    e = unit_vector(Su3Params(theta=0.8, phi=0.3, psi1=0.5, psi2=2.5))
    state = psi_n_state(space, e, 2)
    for k1 in range(3):
        for k2 in range(3 - k1):
            k3 = 2 - k1 - k2
            expected = (
                math.sqrt(
                    math.factorial(2)
                    / (
                        math.factorial(k1)
                        * math.factorial(k2)
                        * math.factorial(k3)
                    )
                )
                * e[0] ** k1
                * e[1] ** k2
                * e[2] ** k3
            )
            got = state.vector[space.index_of((k1, k2, k3))]
            assert abs(got - expected) < 1e-14
    # photon number is sharp
    totals = total_number_distribution(state)
    assert abs(totals[2] - 1.0) < 1e-14


def test_psi_n_needs_room():
    space = FockSpace(3, 2)
    e = unit_vector(Su3Params(theta=0.5, phi=0.5))
    with pytest.raises(CapacityError):
        psi_n_state(space, e, 3)
    capped = FockSpace(3, 3, total_photon_cap=2)
    with pytest.raises(CapacityError):
        psi_n_state(capped, e, 3)


def test_qutrit_w_state():
    space = FockSpace(3, 1)
    e = unit_vector(Su3Params(theta=0.9, phi=0.2, psi2=1.0))
    state = qutrit_w_state(space, e)
    assert abs(state.vector[space.index_of((1, 0, 0))] - e[0]) < 1e-14
    assert abs(state.vector[space.index_of((0, 1, 0))] - e[1]) < 1e-14
    assert abs(state.vector[space.index_of((0, 0, 1))] - e[2]) < 1e-14
    assert abs(state.vector[space.index_of((0, 0, 0))]) == 0.0


def test_expectation_and_variance_mixed():
    space = FockSpace(1, 4)
    rho = np.zeros((space.dim, space.dim), dtype=np.complex128)
    rho[1, 1] = 0.25
    rho[3, 3] = 0.75
    state = QuantumState(space, density=rho)
    n_op = space.number_op(0)
    mean = 0.25 * 1 + 0.75 * 3
    assert abs(expectation(state, n_op).real - mean) < 1e-12
    second = 0.25 * 1 + 0.75 * 9
    assert abs(variance(state, n_op) - (second - mean**2)) < 1e-12


def test_variance_is_clamped_not_negative():
    space = FockSpace(1, 3)
    state = basis_state(space, (2,))
    assert variance(state, space.number_op(0)) == 0.0


def test_mode_correlations_coherent():
    space = FockSpace(3, 10)
    alphas = np.array([0.5 + 0.1j, -0.2 + 0.4j, 0.3])
    state = coherent_state(space, alphas)
    corr = mode_correlations(state)
    expected = np.outer(np.conj(alphas), alphas)
    assert np.max(np.abs(corr - expected)) < 1e-9
    assert np.max(np.abs(corr - corr.conj().T)) < 1e-15


def test_total_number_distribution_coherent():
    space = FockSpace(2, 12)
    state = coherent_state(space, [0.6, 0.8j])
    dist = total_number_distribution(state)
    expected = poisson.pmf(np.arange(dist.size), 1.0)
    assert np.max(np.abs(dist - expected)) < 1e-10
