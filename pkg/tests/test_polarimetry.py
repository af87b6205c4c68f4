"""Coherency matrices, Stokes parameters, and the two- and three-mode
polarization degrees with their invariant identities."""
from __future__ import annotations

import math

import numpy as np
import pytest

from su3optics import (
    CoherencyMatrix,
    FockSpace,
    QuantumState,
    Su3Params,
    build_gellmann,
    coherency2,
    coherency3,
    coherent_state,
    complete_polarization_test,
    degree_p2,
    degree_p2_stokes,
    degree_p3,
    p3_from_invariants,
    psi_n_state,
    qutrit_w_state,
    report_from_correlations,
    stokes_parameters,
    unit_vector,
)
from su3optics.errors import DomainError, UndefinedStatisticError

SQRT3 = math.sqrt(3.0)


def random_density(space, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((space.dim, space.dim)) + 1j * rng.standard_normal(
        (space.dim, space.dim)
    )
    rho = a @ a.conj().T
    return QuantumState(space, density=rho / np.trace(rho).real)


def test_coherency_matrix_validation():
    with pytest.raises(DomainError):
        CoherencyMatrix(dim=4, entries=np.eye(4))
    with pytest.raises(DomainError):
        CoherencyMatrix(dim=2, entries=np.array([[1.0, 0.5], [0.2, 1.0]]))
    with pytest.raises(DomainError):
        CoherencyMatrix(
            dim=2, entries=np.array([[1.0, 2.0], [2.0, 1.0]])
        )  # indefinite
    good = CoherencyMatrix(dim=2, entries=np.array([[2.0, 1j], [-1j, 1.0]]))
    assert abs(good.trace - 3.0) < 1e-14


def test_coherency_of_coherent_state_is_rank_one():
    space = FockSpace(3, 10)
    alphas = np.array([0.4 + 0.1j, 0.5, -0.2j])
    state = coherent_state(space, alphas)
    j3 = coherency3(state)
    expected = np.outer(np.conj(alphas), alphas)
    assert np.max(np.abs(j3.entries - expected)) < 1e-9
    eigs = np.linalg.eigvalsh(j3.entries)
    assert abs(eigs[-1] - np.sum(np.abs(alphas) ** 2)) < 1e-9
    assert np.max(np.abs(eigs[:-1])) < 1e-9


def test_stokes_parameters_two_mode():
    space = FockSpace(2, 12)
    state = coherent_state(space, [1.0, 1.0j])
    j2 = coherency2(state, (0, 1))
    s0, s1, s2, s3 = stokes_parameters(j2)
    # J01 = conj(a0) a1 = i, so only the second Stokes component survives
    assert abs(s0 - 2.0) < 1e-8
    assert abs(s1) < 1e-8
    assert abs(s2 - 2.0) < 1e-8
    assert abs(s3) < 1e-8


def test_p2_routes_agree_and_saturate_for_coherent():
    space = FockSpace(2, 10)
    state = coherent_state(space, [0.8, 0.3 - 0.4j])
    j2 = coherency2(state, (0, 1))
    assert abs(degree_p2(j2) - 1.0) < 1e-9
    assert abs(degree_p2(j2) - degree_p2_stokes(j2)) < 1e-12


def test_p2_unpolarized_mixture():
    space = FockSpace(2, 2)
    rho = np.zeros((space.dim, space.dim), dtype=np.complex128)
    rho[space.index_of((1, 0)), space.index_of((1, 0))] = 0.5
    rho[space.index_of((0, 1)), space.index_of((0, 1))] = 0.5
    state = QuantumState(space, density=rho)
    j2 = coherency2(state, (0, 1))
    assert abs(degree_p2(j2)) < 1e-12


def test_p3_saturates_for_fully_polarized_classes():
    space = FockSpace(3, 12)
    gset = build_gellmann(space)
    e = unit_vector(Su3Params(0.8, 0.6, 1.5, 0.7))
    for state in (
        coherent_state(space, 0.9 * e),
        psi_n_state(space, e, 3),
        qutrit_w_state(space, e),
    ):
        report = degree_p3(state, gset)
        assert abs(report.degree - 1.0) < 1e-9
        assert report.det_residual < 1e-9
        assert report.complete
        flag, residuals = complete_polarization_test(state, gset)
        assert flag
        assert residuals["degree_residual"] < 1e-9


def test_p3_vanishes_for_balanced_number_mixture():
    space = FockSpace(3, 1)
    rho = np.zeros((space.dim, space.dim), dtype=np.complex128)
    for occ in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        i = space.index_of(occ)
        rho[i, i] = 1.0 / 3.0
    state = QuantumState(space, density=rho)
    report = degree_p3(state, build_gellmann(space))
    assert abs(report.degree) < 1e-12
    assert abs(report.degree_from_invariants) < 1e-7
    assert not report.complete


def test_invariant_identities_on_random_mixed_states():
    space = FockSpace(3, 2, total_photon_cap=2)
    gset = build_gellmann(space)
    for seed in range(20):
        state = random_density(space, seed)
        report = degree_p3(state, gset)
        assert report.residual_tr_sq < 1e-9
        assert report.residual_tr_cube < 1e-9
        assert abs(report.degree - report.degree_from_invariants) < 1e-9


def test_p3_from_invariants_clamps_and_guards():
    assert p3_from_invariants(3.0, 3.0) == 0.0
    with pytest.raises(UndefinedStatisticError):
        p3_from_invariants(0.0, 0.0)


def test_report_from_correlations_matches_state_route():
    space = FockSpace(3, 10)
    alphas = np.array([0.5, -0.3 + 0.2j, 0.4j])
    state = coherent_state(space, alphas)
    gset = build_gellmann(space)
    from_state = degree_p3(state, gset)
    from_corr = report_from_correlations(np.outer(np.conj(alphas), alphas))
    assert abs(from_state.degree - from_corr.degree) < 1e-8
    assert abs(from_state.trace - from_corr.trace) < 1e-8
    assert from_corr.complete


def test_zero_intensity_rejected():
    space = FockSpace(3, 1)
    vec = np.zeros(space.dim, dtype=np.complex128)
    vec[space.index_of((0, 0, 0))] = 1.0
    state = QuantumState(space, vector=vec)
    with pytest.raises(UndefinedStatisticError):
        degree_p3(state, build_gellmann(space))
