"""Coherency matrices, scalar invariants, and degrees of polarization.

For a pair of modes the degree is

    P2 = sqrt(1 - 4 det(J2) / Tr(J2)^2),

equivalently the normalized length of the Stokes vector. For three modes

    P3 = (sqrt(3)/2) sqrt(sum_{j=1..8} <l_j>^2) / <l_0>,

and the scalar invariants of the 3x3 coherency matrix satisfy

    Tr(J^2) = (Tr J)^2 (1 + 2 P3^2) / 3
    Tr(J^3) = P3^2 (Tr J)^3 + 3 det(J)

identically, so the reported residuals are round-off diagnostics.
A field is completely polarized exactly when det(J3) = 0 and P3 = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UndefinedStatisticError
from .fock import mode_correlations
from .su3 import SQRT3, gellmann_vector

# single-particle (3x3) images of the nine observables:
# <l_j> = sum_mn g_j[m, n] J[m, n] with J[m, n] = <a_m+ a_n>
_G3 = np.zeros((9, 3, 3), dtype=np.complex128)
_G3[0] = np.eye(3)
_G3[1, 0, 1] = _G3[1, 1, 0] = 1
_G3[2, 1, 0] = 1j
_G3[2, 0, 1] = -1j
_G3[3, 0, 0] = 1
_G3[3, 1, 1] = -1
_G3[4, 0, 2] = _G3[4, 2, 0] = 1
_G3[5, 2, 0] = 1j
_G3[5, 0, 2] = -1j
_G3[6, 1, 2] = _G3[6, 2, 1] = 1
_G3[7, 2, 1] = 1j
_G3[7, 1, 2] = -1j
_G3[8, 0, 0] = _G3[8, 1, 1] = 1 / SQRT3
_G3[8, 2, 2] = -2 / SQRT3


@dataclass(frozen=True)
class CoherencyMatrix:
    """Hermitian matrix of second-order mode correlations <a_i+ a_j>."""

    dim: int
    entries: np.ndarray
    source_state_id: str = ""

    def __post_init__(self):
        ent = np.asarray(self.entries, dtype=np.complex128)
        if ent.shape != (self.dim, self.dim) or self.dim not in (2, 3):
            raise DomainError("coherency matrix must be 2x2 or 3x3")
        scale = max(1.0, float(np.abs(np.trace(ent)).real))
        if np.max(np.abs(ent - ent.conj().T)) > 1e-10 * scale:
            raise DomainError("coherency matrix is not Hermitian")
        diag = np.diag(ent)
        if np.any(diag.real < -1e-10 * scale):
            raise DomainError("coherency matrix has negative diagonal")
        if np.linalg.eigvalsh(ent)[0] < -1e-9 * scale:
            raise DomainError("coherency matrix is not positive semidefinite")
        object.__setattr__(self, "entries", ent)

    @property
    def trace(self):
        return float(np.trace(self.entries).real)


def _state_label(state):
    label = state.metadata.get("label")
    if label:
        return str(label)
    return f"{state.kind}:{state.space.n_modes}m:c{state.space.cutoff}"


def coherency3(state, modes=(0, 1, 2)):
    """3x3 coherency matrix over the given modes (first three by default)."""
    if len(set(modes)) != 3:
        raise DomainError("need three distinct modes")
    ent = mode_correlations(state, modes)
    return CoherencyMatrix(dim=3, entries=ent,
                           source_state_id=_state_label(state))


def coherency2(state, mode_pair):
    """2x2 coherency matrix over a pair of distinct modes."""
    i, j = mode_pair
    if i == j:
        raise DomainError("mode pair must be distinct")
    ent = mode_correlations(state, (i, j))
    return CoherencyMatrix(dim=2, entries=ent,
                           source_state_id=_state_label(state))


def stokes_parameters(j2):
    """(S0, S1, S2, S3) of a 2x2 coherency matrix."""
    if j2.dim != 2:
        raise DomainError("Stokes parameters need a 2x2 matrix")
    m = j2.entries
    return np.array(
        [
            m[0, 0].real + m[1, 1].real,
            2 * m[0, 1].real,
            2 * m[0, 1].imag,
            m[0, 0].real - m[1, 1].real,
        ]
    )


def degree_p2(j2):
    """Two-mode degree of polarization from the determinant form, with the
    Stokes form as an internal consistency guard."""
    if j2.dim != 2:
        raise DomainError("degree_p2 needs a 2x2 matrix")
    tr = j2.trace
    if tr <= 0.0:
        raise UndefinedStatisticError("zero-intensity field: P2 undefined")
    m = j2.entries
    det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
    val = math.sqrt(max(0.0, 1.0 - 4.0 * det / tr**2))
    s = stokes_parameters(j2)
    alt = math.sqrt(s[1] ** 2 + s[2] ** 2 + s[3] ** 2) / s[0]
    if abs(val - alt) > 1e-10 * max(1.0, val):
        raise DomainError(
            f"determinant and Stokes forms disagree: {val} vs {alt}"
        )
    return val


def degree_p2_stokes(j2):
    """Two-mode degree via the Stokes-vector length (independent route)."""
    s = stokes_parameters(j2)
    if s[0] <= 0.0:
        raise UndefinedStatisticError("zero-intensity field: P2 undefined")
    return math.sqrt(s[1] ** 2 + s[2] ** 2 + s[3] ** 2) / s[0]


@dataclass(frozen=True)
class PolarizationReport:
    trace: float
    det: float
    tr_sq: float
    tr_cube: float
    degree: float
    complete: bool
    degree_from_invariants: float
    residual_tr_sq: float
    residual_tr_cube: float
    det_residual: float
    degree_residual: float

    def to_record(self):
        return {
            "trace": self.trace,
            "det": self.det,
            "tr_sq": self.tr_sq,
            "tr_cube": self.tr_cube,
            "degree": self.degree,
            "complete": self.complete,
            "degree_from_invariants": self.degree_from_invariants,
            "residual_tr_sq": self.residual_tr_sq,
            "residual_tr_cube": self.residual_tr_cube,
            "det_residual": self.det_residual,
            "degree_residual": self.degree_residual,
        }


def p3_from_invariants(trace, tr_sq):
    """Invert the Tr(J^2) identity for P3, clamping negative round-off
    before the square root."""
    if trace <= 0.0:
        raise UndefinedStatisticError("zero-intensity field: P3 undefined")
    val = (3.0 * tr_sq / trace**2 - 1.0) / 2.0
    return math.sqrt(max(0.0, val))


def _assemble_report(lam, corr, tolerance=1e-9):
    l0 = lam[0]
    if l0 <= 0.0:
        raise UndefinedStatisticError("zero-intensity field: P3 undefined")
    degree = (SQRT3 / 2.0) * float(np.linalg.norm(lam[1:])) / l0
    tr = float(np.trace(corr).real)
    det = float(np.linalg.det(corr).real)
    tr_sq = float(np.sum(np.abs(corr) ** 2))
    tr_cube = float(np.trace(corr @ corr @ corr).real)
    id_sq = tr**2 * (1.0 + 2.0 * degree**2) / 3.0
    id_cube = degree**2 * tr**3 + 3.0 * det
    res_sq = abs(tr_sq - id_sq) / max(abs(tr_sq), abs(id_sq), 1e-300)
    res_cube = abs(tr_cube - id_cube) / max(abs(tr_cube), abs(id_cube), tr**3 * 1e-12, 1e-300)
    det_res = abs(det) / (tr / 3.0) ** 3
    deg_res = abs(degree - 1.0)
    return PolarizationReport(
        trace=tr,
        det=det,
        tr_sq=tr_sq,
        tr_cube=tr_cube,
        degree=degree,
        complete=(det_res < tolerance and deg_res < tolerance),
        degree_from_invariants=p3_from_invariants(tr, tr_sq),
        residual_tr_sq=res_sq,
        residual_tr_cube=res_cube,
        det_residual=det_res,
        degree_residual=deg_res,
    )


def degree_p3(state, gset, tolerance=1e-9):
    """Three-mode polarization report: degree from the observable means,
    invariants from the coherency matrix, identity residuals, and the
    complete-polarization flag."""
    lam = gellmann_vector(state, gset)
    corr = mode_correlations(state, (0, 1, 2))
    return _assemble_report(lam, corr, tolerance)


def report_from_correlations(corr, tolerance=1e-9):
    """Polarization report straight from a 3x3 correlation matrix, with the
    observable means taken through the single-particle images. Used when no
    state vector exists (amplitude-level transport)."""
    corr = np.asarray(corr, dtype=np.complex128)
    lam = np.array([np.sum(_G3[j] * corr).real for j in range(9)])
    return _assemble_report(lam, corr, tolerance)


def complete_polarization_test(state, gset, tolerance=1e-9):
    """(flag, residuals): the field is completely polarized when |det J3|
    vanishes on the (Tr/3)^3 scale and the degree equals one."""
    report = degree_p3(state, gset, tolerance)
    return report.complete, {
        "det_residual": report.det_residual,
        "degree_residual": report.degree_residual,
    }
