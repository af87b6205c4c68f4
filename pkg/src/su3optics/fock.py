"""Truncated multimode bosonic Fock space: basis bookkeeping, state
constructors, mode operators, and expectation machinery.

The basis is ordered lexicographically over occupation tuples
(n_1, ..., n_k) with mode 1 slowest, so serialized states are portable
between builds. With a total photon cap the basis keeps only tuples with
sum(n) <= cap, in the same order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.stats import poisson

from .errors import (
    CapacityError,
    DimensionMismatchError,
    DomainError,
    TruncationError,
)

COHERENT_TAIL_TOLERANCE = 1e-8


def _enumerate_occupations(n_modes, cutoff, cap):
    """All occupation tuples in lexicographic order, as an (dim, n_modes)
    int32 array. Vectorized so capped six-mode spaces stay cheap."""
    if cap is None:
        grids = np.indices((cutoff + 1,) * n_modes)
        return np.ascontiguousarray(
            grids.reshape(n_modes, -1).T, dtype=np.int32
        )
    parts = np.zeros((1, 0), dtype=np.int32)
    sums = np.zeros(1, dtype=np.int64)
    for _ in range(n_modes):
        budget = np.minimum(cutoff, cap - sums)
        reps = (budget + 1).astype(np.int64)
        row_of = np.repeat(np.arange(parts.shape[0]), reps)
        starts = np.concatenate(([0], np.cumsum(reps)[:-1]))
        vals = np.arange(reps.sum(), dtype=np.int64) - np.repeat(starts, reps)
        parts = np.concatenate(
            [parts[row_of], vals[:, None].astype(np.int32)], axis=1
        )
        sums = sums[row_of] + vals
    return parts


class FockSpace:
    """Truncated Fock space for `n_modes` bosonic modes with `cutoff`
    photons per mode and an optional bound `total_photon_cap` on the summed
    occupation.

    Immutable after construction; operator matrices and evolution plans are
    cached on the instance (derived data only).
    """

    def __init__(self, n_modes, cutoff, total_photon_cap=None):
        if n_modes < 1:
            raise DomainError("need at least one mode")
        if cutoff < 0:
            raise DomainError("cutoff must be non-negative")
        if total_photon_cap is not None and total_photon_cap < 0:
            raise DomainError("total photon cap must be non-negative")
        self.n_modes = int(n_modes)
        self.cutoff = int(cutoff)
        self.total_photon_cap = (
            None if total_photon_cap is None else int(total_photon_cap)
        )
        self.occupations = _enumerate_occupations(
            self.n_modes, self.cutoff, self.total_photon_cap
        )
        self.dim = self.occupations.shape[0]
        # mixed-radix weights: mode 0 slowest, matching the basis order
        radix = self.cutoff + 1
        self._weights = radix ** np.arange(
            self.n_modes - 1, -1, -1, dtype=np.int64
        )
        self._keys = self.occupations.astype(np.int64) @ self._weights
        self._ops = {}
        self._pair_plans = {}

    def __repr__(self):
        return (
            f"FockSpace(n_modes={self.n_modes}, cutoff={self.cutoff}, "
            f"total_photon_cap={self.total_photon_cap}, dim={self.dim})"
        )

    def index_of(self, occupations):
        """Basis index for an occupation tuple, or an array of indices for
        an (m, n_modes) array of tuples. Raises DomainError for tuples
        outside the basis."""
        occ = np.asarray(occupations, dtype=np.int64)
        single = occ.ndim == 1
        occ = np.atleast_2d(occ)
        if occ.shape[1] != self.n_modes:
            raise DimensionMismatchError(
                f"expected {self.n_modes} modes, got {occ.shape[1]}"
            )
        if np.any(occ < 0) or np.any(occ > self.cutoff):
            raise DomainError("occupation outside per-mode range")
        if (
            self.total_photon_cap is not None
            and np.any(occ.sum(axis=1) > self.total_photon_cap)
        ):
            raise DomainError("occupation exceeds total photon cap")
        keys = occ @ self._weights
        idx = np.searchsorted(self._keys, keys)
        if single:
            return int(idx[0])
        return idx

    def occupation_of(self, index):
        """Occupation tuple at a basis index."""
        return tuple(int(n) for n in self.occupations[index])

    @property
    def vacuum_index(self):
        return 0

    def annihilator(self, mode):
        """Sparse annihilation operator a_mode in the occupation basis."""
        if not 0 <= mode < self.n_modes:
            raise DomainError(f"mode {mode} out of range")
        key = ("a", mode)
        if key not in self._ops:
            occ = self.occupations
            cols = np.nonzero(occ[:, mode] > 0)[0]
            rows = np.searchsorted(
                self._keys, self._keys[cols] - self._weights[mode]
            )
            vals = np.sqrt(occ[cols, mode].astype(np.float64))
            self._ops[key] = sp.csr_matrix(
                (vals, (rows, cols)), shape=(self.dim, self.dim)
            )
        return self._ops[key]

    def creator(self, mode):
        key = ("adag", mode)
        if key not in self._ops:
            self._ops[key] = self.annihilator(mode).conj().T.tocsr()
        return self._ops[key]

    def number_op(self, mode):
        if not 0 <= mode < self.n_modes:
            raise DomainError(f"mode {mode} out of range")
        key = ("n", mode)
        if key not in self._ops:
            self._ops[key] = sp.diags(
                self.occupations[:, mode].astype(np.float64)
            ).tocsr()
        return self._ops[key]

    def total_number_op(self):
        key = ("ntot",)
        if key not in self._ops:
            self._ops[key] = sp.diags(
                self.occupations.sum(axis=1).astype(np.float64)
            ).tocsr()
        return self._ops[key]


class QuantumState:
    """A pure state (amplitude vector) or mixed state (density matrix) over
    a FockSpace.

    Pure states must be normalized within `norm_tolerance`; density
    matrices must be trace one, Hermitian, and positive semidefinite within
    the tolerance. `metadata` carries construction bookkeeping such as
    truncation tail masses.
    """

    def __init__(self, space, vector=None, density=None, norm_tolerance=1e-9,
                 metadata=None):
        if (vector is None) == (density is None):
            raise DomainError("provide exactly one of vector or density")
        self.space = space
        self.norm_tolerance = float(norm_tolerance)
        self.metadata = dict(metadata) if metadata else {}
        if vector is not None:
            vec = np.asarray(vector, dtype=np.complex128)
            if vec.shape != (space.dim,):
                raise DimensionMismatchError(
                    f"vector length {vec.shape} does not match dim {space.dim}"
                )
            norm = np.linalg.norm(vec)
            if abs(norm - 1.0) > self.norm_tolerance:
                raise DomainError(f"state norm {norm} outside tolerance")
            self.vector = vec
            self.density = None
        else:
            rho = np.asarray(density, dtype=np.complex128)
            if rho.shape != (space.dim, space.dim):
                raise DimensionMismatchError(
                    f"density shape {rho.shape} does not match dim {space.dim}"
                )
            tr = np.trace(rho)
            if abs(tr - 1.0) > self.norm_tolerance:
                raise DomainError(f"density trace {tr} outside tolerance")
            if np.max(np.abs(rho - rho.conj().T)) > self.norm_tolerance:
                raise DomainError("density matrix is not Hermitian")
            lo = np.linalg.eigvalsh(rho)[0]
            if lo < -self.norm_tolerance:
                raise DomainError(
                    f"density matrix has negative eigenvalue {lo}"
                )
            self.vector = None
            self.density = rho

    @property
    def kind(self):
        return "pure" if self.vector is not None else "mixed"

    def occupation_probabilities(self):
        """Diagonal of the state in the occupation basis (real array)."""
        if self.vector is not None:
            return np.abs(self.vector) ** 2
        return np.real(np.diag(self.density))


@dataclass(frozen=True)
class Su3Params:
    """The four angles parameterizing the complex unit vector e:

        e1 = exp(i psi1) sin(theta) cos(phi)
        e2 = exp(i psi2) sin(theta) sin(phi)
        e3 = cos(theta)

    with theta, phi in [0, pi/2] and psi1, psi2 in [0, 2 pi).
    """

    theta: float
    phi: float
    psi1: float = 0.0
    psi2: float = 0.0

    def __post_init__(self):
        half_pi = math.pi / 2
        if not 0.0 <= self.theta <= half_pi:
            raise DomainError(f"theta {self.theta} outside [0, pi/2]")
        if not 0.0 <= self.phi <= half_pi:
            raise DomainError(f"phi {self.phi} outside [0, pi/2]")
        for name, val in (("psi1", self.psi1), ("psi2", self.psi2)):
            if not 0.0 <= val < 2 * math.pi:
                raise DomainError(f"{name} {val} outside [0, 2 pi)")

    @classmethod
    def maximally_entangled(cls):
        """Angles giving e = (1/sqrt3, 1/sqrt3, 1/sqrt3)."""
        return cls(theta=math.acos(1 / math.sqrt(3)), phi=math.pi / 4)


def unit_vector(params):
    """Complex unit vector e from the four angles. The squared moduli sum
    to one by construction."""
    st, ct = math.sin(params.theta), math.cos(params.theta)
    sp_, cp = math.sin(params.phi), math.cos(params.phi)
    return np.array(
        [
            np.exp(1j * params.psi1) * st * cp,
            np.exp(1j * params.psi2) * st * sp_,
            ct,
        ],
        dtype=np.complex128,
    )


def coherent_state(space, alphas, tail_tolerance=COHERENT_TAIL_TOLERANCE):
    """Product of truncated coherent states with amplitudes `alphas`,
    renormalized to unit norm.

    Each mode must satisfy the truncation adequacy rule: the Poisson tail
    mass beyond the cutoff must stay below `tail_tolerance`, otherwise a
    TruncationError reports the offending tail. The total mass lost to
    truncation (per-mode tails plus any total-cap pruning) is attached as
    metadata["truncation_tail_mass"].
    """
    alphas = np.asarray(alphas, dtype=np.complex128)
    if alphas.shape != (space.n_modes,):
        raise DimensionMismatchError(
            f"expected {space.n_modes} amplitudes, got {alphas.shape}"
        )
    for j, a in enumerate(alphas):
        mean = abs(a) ** 2
        if mean == 0.0:
            continue
        tail = float(poisson.sf(space.cutoff, mean))
        if tail >= tail_tolerance:
            raise TruncationError(
                f"mode {j}: |alpha|^2 = {mean:.4g} leaves tail mass "
                f"{tail:.3e} beyond cutoff {space.cutoff}",
                tail_mass=tail,
                mode=j,
            )
    # per-mode amplitude tables via the stable recurrence c_n = c_{n-1} a/sqrt(n)
    tables = np.zeros((space.n_modes, space.cutoff + 1), dtype=np.complex128)
    tables[:, 0] = 1.0
    for n in range(1, space.cutoff + 1):
        tables[:, n] = tables[:, n - 1] * alphas / math.sqrt(n)
    vec = np.ones(space.dim, dtype=np.complex128)
    for j in range(space.n_modes):
        vec *= tables[j, space.occupations[:, j]]
    vec *= math.exp(-0.5 * float(np.sum(np.abs(alphas) ** 2)))
    captured = float(np.linalg.norm(vec) ** 2)
    if captured <= 0.0:
        raise TruncationError(
            "no amplitude mass captured at this truncation", tail_mass=1.0
        )
    vec /= math.sqrt(captured)
    return QuantumState(
        space,
        vector=vec,
        metadata={
            "alphas": tuple(complex(a) for a in alphas),
            "truncation_tail_mass": 1.0 - captured,
        },
    )


def _check_unit_e(e):
    e = np.asarray(e, dtype=np.complex128)
    if e.shape != (3,):
        raise DomainError("e must have three components")
    ssum = float(np.sum(np.abs(e) ** 2))
    if abs(ssum - 1.0) > 1e-9:
        raise DomainError(f"e is not normalized: sum |e_j|^2 = {ssum}")
    return e


def psi_n_state(space, e, n_photons):
    """The N-photon state obtained by applying the composite creation
    operator (e1 a1+ + e2 a2+ + e3 a3+) N times to vacuum and normalizing.

    Occupation (k1, k2, k3) carries amplitude
    sqrt(N!/(k1! k2! k3!)) e1^k1 e2^k2 e3^k3. Exact at any truncation with
    cutoff >= N and cap >= N, so the total photon number is exactly N.
    """
    e = _check_unit_e(e)
    if space.n_modes < 3:
        raise DomainError("need at least three modes")
    n_photons = int(n_photons)
    if n_photons < 0:
        raise DomainError("photon number must be non-negative")
    if n_photons > space.cutoff or (
        space.total_photon_cap is not None
        and n_photons > space.total_photon_cap
    ):
        raise CapacityError(
            f"{n_photons} photons exceed the truncation "
            f"(cutoff {space.cutoff}, cap {space.total_photon_cap})"
        )
    vec = np.zeros(space.dim, dtype=np.complex128)
    occ = np.zeros(space.n_modes, dtype=np.int64)
    for k1 in range(n_photons + 1):
        for k2 in range(n_photons - k1 + 1):
            k3 = n_photons - k1 - k2
            coeff = math.sqrt(
                math.factorial(n_photons)
                / (
                    math.factorial(k1)
                    * math.factorial(k2)
                    * math.factorial(k3)
                )
            )
            occ[:3] = (k1, k2, k3)
            vec[space.index_of(occ)] = (
                coeff * e[0] ** k1 * e[1] ** k2 * e[2] ** k3
            )
    return QuantumState(space, vector=vec)


def qutrit_w_state(space, e):
    """Single-photon superposition e1|100> + e2|010> + e3|001>; identical
    to psi_n_state(space, e, 1)."""
    return psi_n_state(space, _check_unit_e(e), 1)


def _as_operator(op, dim):
    if sp.issparse(op):
        if op.shape != (dim, dim):
            raise DimensionMismatchError(
                f"operator shape {op.shape} does not match dim {dim}"
            )
        return op
    arr = np.asarray(op)
    if arr.shape != (dim, dim):
        raise DimensionMismatchError(
            f"operator shape {arr.shape} does not match dim {dim}"
        )
    return arr


def expectation(state, op):
    """<A> for a pure or mixed state; returns a complex number."""
    op = _as_operator(op, state.space.dim)
    if state.vector is not None:
        return complex(np.vdot(state.vector, op @ state.vector))
    prod = op @ state.density
    return complex(np.trace(prod) if isinstance(prod, np.ndarray)
                   else prod.diagonal().sum())


def variance(state, op, clamp_tolerance=1e-10):
    """<A^2> - <A>^2 for a Hermitian operator.

    Small negative round-off (within -clamp_tolerance) is clamped to zero;
    anything more negative signals a non-Hermitian operator and raises.
    """
    op = _as_operator(op, state.space.dim)
    if state.vector is not None:
        w = op @ state.vector
        mean = np.vdot(state.vector, w)
        if abs(mean.imag) > 1e-8 * max(1.0, abs(mean)):
            raise DomainError(
                f"operator mean {mean} is not real; operator not Hermitian?"
            )
        var = float(np.vdot(w, w).real - mean.real**2)
    else:
        mean = expectation(state, op)
        if abs(mean.imag) > 1e-8 * max(1.0, abs(mean)):
            raise DomainError(
                f"operator mean {mean} is not real; operator not Hermitian?"
            )
        sq = expectation(state, op @ op)
        var = float(sq.real - mean.real**2)
    if var < 0.0:
        if var < -clamp_tolerance * max(1.0, abs(mean.real) ** 2):
            raise DomainError(f"variance {var} is negative beyond tolerance")
        var = 0.0
    return var


def mode_correlations(state, modes=None):
    """Matrix of second-order correlations <a_i+ a_j> over the given modes
    (all modes by default). Hermitian up to round-off; the conjugate pairs
    are cross-checked before symmetrizing."""
    if modes is None:
        modes = range(state.space.n_modes)
    modes = list(modes)
    k = len(modes)
    out = np.zeros((k, k), dtype=np.complex128)
    if state.vector is not None:
        vecs = [state.space.annihilator(m) @ state.vector for m in modes]
        for i in range(k):
            for j in range(k):
                out[i, j] = np.vdot(vecs[i], vecs[j])
    else:
        for i, mi in enumerate(modes):
            for j, mj in enumerate(modes):
                op = state.space.creator(mi) @ state.space.annihilator(mj)
                out[i, j] = expectation(state, op)
    asym = np.max(np.abs(out - out.conj().T))
    if asym > 1e-10 * max(1.0, float(np.abs(np.trace(out)))):
        raise DomainError(
            f"correlation matrix asymmetry {asym} exceeds tolerance"
        )
    return 0.5 * (out + out.conj().T)


def total_number_distribution(state):
    """Probability of each total photon number T, as an array indexed by T."""
    probs = state.occupation_probabilities()
    totals = state.space.occupations.sum(axis=1)
    return np.bincount(totals, weights=probs)
