"""Fock-space evolution kernels for two-mode blocks and phase shifts.

A two-mode unitary block mixes only the pair occupations (n_p, n_q) and
conserves m = n_p + n_q, so the basis splits into groups sharing the
occupations of the remaining modes and the value of m. Each group is a
complete ladder n_q = 0..m exactly when the space enforces
total_photon_cap <= cutoff, and the block then acts as a dense
(m+1) x (m+1) unitary per group.

The group sweep is the hot loop. It ships compiled (`_speedups`, Cython)
with a pure-numpy twin (`_fallback`); the import below picks the compiled
one when present, and SU3OPTICS_PURE_PYTHON=1 forces the fallback.
"""
from __future__ import annotations

import os

import numpy as np
from scipy.linalg import expm, logm

from .errors import DomainError

try:
    from . import _speedups as _compiled
except ImportError:
    _compiled = None

from . import _fallback as _python

_FORCE_PYTHON = os.environ.get("SU3OPTICS_PURE_PYTHON", "") == "1"
BACKEND = "compiled" if (_compiled is not None and not _FORCE_PYTHON) else "python"
_impl = _compiled if BACKEND == "compiled" else _python


def pair_plan(space, p, q):
    """Group index tables for the mode pair (p, q) of a FockSpace.

    Returns a list indexed by m; entry m is an int32 array of shape
    (groups, m + 1) whose row g lists the basis indices of one group,
    column j holding the state with n_q = j, n_p = m - j. Cached on the
    space instance."""
    if p == q:
        raise DomainError("pair modes must be distinct")
    cap = space.total_photon_cap
    if cap is None or cap > space.cutoff:
        raise DomainError(
            "pair evolution needs total_photon_cap <= cutoff so every "
            "two-mode group is a complete ladder"
        )
    key = (p, q)
    cached = space._pair_plans.get(key)
    if cached is not None:
        return cached
    occ = space.occupations
    n_p = occ[:, p].astype(np.int64)
    n_q = occ[:, q].astype(np.int64)
    m = n_p + n_q
    rest = space._keys - n_p * space._weights[p] - n_q * space._weights[q]
    order = np.lexsort((n_q, m, rest))
    m_sorted = m[order]
    plan = []
    for mm in range(cap + 1):
        sel = order[m_sorted == mm]
        plan.append(sel.reshape(-1, mm + 1).astype(np.int32))
    space._pair_plans[key] = plan
    return plan


def block_tables(block, m_max):
    """Dense per-m unitaries for a 2x2 mode block.

    The block B acts on annihilation operators as (a_p, a_q) -> B (a_p, a_q).
    The state-space lift is exp(i H) with H = sum K_mn a_m+ a_n and
    K = -i log B, restricted to each m ladder (tridiagonal there), which
    keeps every table unitary to machine precision."""
    block = np.asarray(block, dtype=np.complex128)
    if block.shape != (2, 2):
        raise DomainError("block must be 2x2")
    if np.max(np.abs(block @ block.conj().T - np.eye(2))) > 1e-12:
        raise DomainError("block is not unitary")
    k = -1j * logm(block)
    k = 0.5 * (k + k.conj().T)
    tables = []
    for m in range(m_max + 1):
        h = np.zeros((m + 1, m + 1), dtype=np.complex128)
        for j in range(m + 1):
            h[j, j] = k[0, 0] * (m - j) + k[1, 1] * j
            if j > 0:
                h[j - 1, j] = k[0, 1] * np.sqrt((m - j + 1) * j)
            if j < m:
                h[j + 1, j] = k[1, 0] * np.sqrt((j + 1) * (m - j))
        tables.append(expm(1j * h))
    return tables


def apply_pair_unitary(psi, plan, tables):
    """Apply a two-mode block to a state vector; returns a new array."""
    out = np.empty_like(psi)
    for m, idx in enumerate(plan):
        if idx.size:
            _impl.apply_groups(out, psi, idx, np.ascontiguousarray(tables[m]))
    return out


def apply_phase(psi, space, mode, angle):
    """Apply exp(i angle n_mode); returns a new array."""
    return psi * np.exp(1j * angle * space.occupations[:, mode])
