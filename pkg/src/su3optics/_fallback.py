"""Pure-numpy implementation of the two-mode block kernel.

Same contract as the compiled module `_speedups`: `apply_groups` writes the
transformed amplitudes for every group listed in `idx` into `out`.
"""
import numpy as np


def apply_groups(out, psi, idx, d):
    """For each row g of idx (one group of pair states, column j holding
    the basis index with j photons in the second pair mode), apply the
    dense block d: out[idx[g]] = d @ psi[idx[g]]."""
    if idx.size == 0:
        return
    out[idx] = psi[idx] @ d.T
