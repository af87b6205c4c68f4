"""The nine bilinear mode observables l0..l8 generating the SU(3)
symmetry of a three-mode field, with their statistics and the
squeezing comparison against a matched coherent reference.

Conventions (modes numbered 1..3 in formulas, 0..2 in code):

    l0 = n1 + n2 + n3
    l1 = a1+ a2 + a2+ a1          l2 = i (a2+ a1 - a1+ a2)
    l3 = n1 - n2
    l4 = a1+ a3 + a3+ a1          l5 = i (a3+ a1 - a1+ a3)
    l6 = a2+ a3 + a3+ a2          l7 = i (a3+ a2 - a2+ a3)
    l8 = (n1 + n2 - 2 n3) / sqrt(3)
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

from .errors import DomainError
from .fock import (
    COHERENT_TAIL_TOLERANCE,
    FockSpace,
    coherent_state,
    expectation,
    mode_correlations,
    variance,
)

SQRT3 = math.sqrt(3.0)

# totally antisymmetric structure constants f_ijk on indices 1..8
# (all entries involving index 0 vanish)
_F_BASE = {
    (1, 2, 3): 1.0,
    (1, 4, 7): 0.5,
    (1, 5, 6): -0.5,
    (2, 4, 6): 0.5,
    (2, 5, 7): 0.5,
    (3, 4, 5): 0.5,
    (3, 6, 7): -0.5,
    (4, 5, 8): SQRT3 / 2,
    (6, 7, 8): SQRT3 / 2,
}


def structure_constant(i, j, k):
    """f_ijk with full antisymmetry over the nine-index convention."""
    idx = (i, j, k)
    if len(set(idx)) < 3 or 0 in idx:
        return 0.0
    order = tuple(sorted(idx))
    base = _F_BASE.get(order, 0.0)
    if base == 0.0:
        return 0.0
    # parity of the permutation taking sorted order to (i, j, k)
    perm = [order.index(x) for x in idx]
    parity = 1
    if perm in ([1, 2, 0], [2, 0, 1]):
        parity = 1
    elif perm in ([0, 2, 1], [1, 0, 2], [2, 1, 0]):
        parity = -1
    return base * parity


@dataclass(frozen=True)
class GellMannSet:
    """The nine operators materialized as sparse matrices on one space."""

    space: FockSpace
    operators: tuple


def build_gellmann(space):
    if space.n_modes < 3:
        raise DomainError("need at least three modes")
    a = [space.annihilator(m) for m in range(3)]
    ad = [space.creator(m) for m in range(3)]

    def e(i, j):
        return (ad[i] @ a[j]).tocsr()

    ops = (
        e(0, 0) + e(1, 1) + e(2, 2),
        e(0, 1) + e(1, 0),
        1j * (e(1, 0) - e(0, 1)),
        e(0, 0) - e(1, 1),
        e(0, 2) + e(2, 0),
        1j * (e(2, 0) - e(0, 2)),
        e(1, 2) + e(2, 1),
        1j * (e(2, 1) - e(1, 2)),
        (e(0, 0) + e(1, 1) - 2 * e(2, 2)) / SQRT3,
    )
    return GellMannSet(space=space, operators=tuple(op.tocsr() for op in ops))


def gellmann_vector(state, gset):
    """Expectations of the nine observables as real numbers.

    Raises if any expectation carries imaginary residue above 1e-10, which
    would indicate a broken operator set or state."""
    if state.space.dim != gset.space.dim:
        raise DomainError("state and operator set dimensions differ")
    out = np.empty(9)
    for j, op in enumerate(gset.operators):
        val = expectation(state, op)
        if abs(val.imag) > 1e-10:
            raise DomainError(
                f"observable {j} mean has imaginary part {val.imag}"
            )
        out[j] = val.real
    return out


@dataclass(frozen=True)
class WitnessRecord:
    index: int
    variance_state: float
    variance_reference: float
    squeezed: bool


def _reference_set(gset, alphas, tail_tolerance):
    """Operator set adequate for the coherent reference amplitudes. Reuses
    the given set when its space already represents the reference within
    the tail rule; otherwise builds an uncapped space with a larger cutoff."""
    space = gset.space
    peak = float(np.max(np.abs(alphas) ** 2))
    if space.total_photon_cap is None and (
        peak == 0.0 or poisson.sf(space.cutoff, peak) < tail_tolerance
    ):
        return gset
    cutoff = max(space.cutoff, int(math.ceil(peak)))
    while poisson.sf(cutoff, peak) >= tail_tolerance:
        cutoff += 1
    return build_gellmann(FockSpace(3, cutoff))


def squeezing_witness(state, gset, reference_set=None, tolerance=1e-9,
                      tail_tolerance=COHERENT_TAIL_TOLERANCE):
    """Per-observable variances of `state` against a matched coherent
    reference.

    The reference has amplitudes alpha_j = sqrt(<l0>) e_j where e is the
    unit vector extracted from the second-order correlation matrix (its
    leading eigenvector, conjugated: for a pure N-photon class state the
    correlation matrix is N conj(e) e^T). Both states then share the mean
    photon number and mode composition, so the comparison isolates
    fluctuations. Records flag `squeezed` when the state variance sits
    below the reference by more than `tolerance`.
    """
    n_tot = expectation(state, gset.operators[0]).real
    if n_tot <= 1e-12:
        raise DomainError("zero mean photon number: reference undefined")
    corr = mode_correlations(state, (0, 1, 2))
    _, vecs = np.linalg.eigh(corr)
    e = np.conj(vecs[:, -1])
    e = e / np.linalg.norm(e)
    alphas = np.sqrt(n_tot) * e
    if reference_set is None:
        reference_set = _reference_set(gset, alphas, tail_tolerance)
    ref_alphas = np.zeros(reference_set.space.n_modes, dtype=np.complex128)
    ref_alphas[:3] = alphas
    ref = coherent_state(
        reference_set.space, ref_alphas, tail_tolerance=tail_tolerance
    )
    records = []
    for j in range(9):
        vs = variance(state, gset.operators[j])
        vr = variance(ref, reference_set.operators[j])
        records.append(
            WitnessRecord(
                index=j,
                variance_state=vs,
                variance_reference=vr,
                squeezed=vs < vr - tolerance,
            )
        )
    return records


def structure_constant_check(gset, probe_states):
    """Largest residual of <[l_i, l_j]> - 2i sum_k f_ijk <l_k> over all
    index pairs and probe states.

    Probes must keep the top two per-mode photon layers empty; the
    commutation relations only hold away from the truncation boundary.
    """
    worst = 0.0
    for state in probe_states:
        if state.space.dim != gset.space.dim:
            raise DomainError("probe and operator set dimensions differ")
        if state.vector is not None:
            vecs = [op @ state.vector for op in gset.operators]
            means = [np.vdot(state.vector, w).real for w in vecs]
            for i in range(9):
                for j in range(i + 1, 9):
                    comm = np.vdot(vecs[i], vecs[j]) - np.vdot(vecs[j], vecs[i])
                    target = 2j * sum(
                        structure_constant(i, j, k) * means[k]
                        for k in range(9)
                    )
                    worst = max(worst, abs(comm - target))
        else:
            means = [expectation(state, op).real for op in gset.operators]
            for i in range(9):
                for j in range(i + 1, 9):
                    prod_ij = expectation(
                        state, gset.operators[i] @ gset.operators[j]
                    )
                    prod_ji = expectation(
                        state, gset.operators[j] @ gset.operators[i]
                    )
                    target = 2j * sum(
                        structure_constant(i, j, k) * means[k]
                        for k in range(9)
                    )
                    worst = max(worst, abs(prod_ij - prod_ji - target))
    return worst
