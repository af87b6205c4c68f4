"""Relative-amplitude observables of a three-mode field and their exact
counting statistics.

The four observables are functions of commuting number operators and
hence diagonal in the occupation basis; writing N = n1 + n2 + n3,

    S_phi   = sqrt(n2 / (n1 + n2))      C_phi   = sqrt(n1 / (n1 + n2))
    S_theta = sqrt((n1 + n2) / N)       C_theta = sqrt(n3 / N).

All statistics therefore come exactly from the photon-counting
distribution W(n1, n2, n3), never from matrix square roots. Tuples where
an observable's denominator vanishes carry no information about it; such
tuples are excluded from that observable group, the group renormalized,
and the excluded probability mass reported. On every tuple kept,
S^2 + C^2 = 1 within each group by construction.

Closed-form small-fluctuation variances (`linearized_variances`) are
provided for cross-checking against the exact statistics at large mean
photon number; they divide by the per-mode means and are refused at zero
mean.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import poisson

from .errors import DomainError, UndefinedStatisticError

OBSERVABLES = ("S_phi", "C_phi", "S_theta", "C_theta")

_SUM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class CountingDistribution:
    """Joint photon-counting distribution over occupation triples.

    `support` is an (M, 3) integer array of occupation tuples,
    `probabilities` the matching weights, non-negative and summing to one
    within 1e-10."""

    support: np.ndarray = field(repr=False)
    probabilities: np.ndarray = field(repr=False)

    def __post_init__(self):
        support = np.asarray(self.support, dtype=np.int64)
        probs = np.asarray(self.probabilities, dtype=np.float64)
        if support.ndim != 2 or support.shape[1] != 3:
            raise DomainError("support must be an (M, 3) array of counts")
        if probs.shape != (support.shape[0],):
            raise DomainError("probabilities must match support length")
        if support.size and support.min() < 0:
            raise DomainError("occupation numbers must be non-negative")
        if probs.size and probs.min() < 0:
            raise DomainError("probabilities must be non-negative")
        total = float(probs.sum())
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise DomainError(
                f"probabilities sum to {total}, not 1 within {_SUM_TOLERANCE}"
            )
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probabilities", probs)

    def rows(self):
        """Export as (n1, n2, n3, probability) tuples."""
        return [
            (int(a), int(b), int(c), float(p))
            for (a, b, c), p in zip(self.support, self.probabilities)
        ]


def counting_distribution(state):
    """Exact counting distribution of a three-mode state: under ideal
    detection the count probabilities are the occupation-basis
    probabilities."""
    if state.space.n_modes != 3:
        raise DomainError("counting distribution is defined for 3 modes")
    return CountingDistribution(
        support=state.space.occupations.astype(np.int64),
        probabilities=state.occupation_probabilities(),
    )


def poisson_product_distribution(nbars, neglect=1e-12):
    """Product-Poisson counting distribution with means `nbars`, windowed
    per mode so the neglected tail mass is below `neglect` on each side,
    then renormalized (the trimmed mass is at most a few times `neglect`).
    This is the counting distribution of a product coherent state with
    |alpha_j|^2 = nbars[j], at any phases."""
    nbars = [float(n) for n in nbars]
    if len(nbars) != 3 or any(n < 0 for n in nbars):
        raise DomainError("need three non-negative mean photon numbers")
    axes, weights = [], []
    for mu in nbars:
        if mu == 0.0:
            ns = np.array([0])
            w = np.array([1.0])
        else:
            lo = int(poisson.ppf(neglect, mu))
            hi = int(poisson.isf(neglect, mu))
            ns = np.arange(lo, hi + 1)
            w = poisson.pmf(ns, mu)
        axes.append(ns)
        weights.append(w)
    n1, n2, n3 = np.meshgrid(*axes, indexing="ij")
    probs = np.einsum("i,j,k->ijk", *weights).ravel()
    support = np.stack(
        [n1.ravel(), n2.ravel(), n3.ravel()], axis=1
    ).astype(np.int64)
    return CountingDistribution(
        support=support, probabilities=probs / probs.sum()
    )


@dataclass(frozen=True)
class ConditioningPolicy:
    """What to exclude before computing statistics. Denominator-zero
    tuples are always excluded per observable group; `drop_vacuum`
    additionally removes the (0,0,0) tuple from the whole distribution
    and renormalizes, the weak-field detection convention."""

    drop_vacuum: bool = False


@dataclass(frozen=True)
class AmplitudeStats:
    """Means and variances of the four amplitude observables under a
    conditioning policy.

    `excluded_mass` reports, on the distribution the statistics were
    taken from: "vacuum" (mass removed up front by the policy, as a
    fraction of the original), "phi_group" and "theta_group" (mass with
    the respective denominator zero, after any vacuum removal). Within
    each group, excluded plus conditioned mass is one."""

    means: dict
    variances: dict
    conditioning: ConditioningPolicy
    excluded_mass: dict

    def to_record(self):
        """Flatten to one key-value record for table emission."""
        record = {}
        for name in OBSERVABLES:
            record[f"mean_{name}"] = self.means[name]
            record[f"var_{name}"] = self.variances[name]
        for group, mass in sorted(self.excluded_mass.items()):
            record[f"excluded_{group}"] = mass
        record["drop_vacuum"] = self.conditioning.drop_vacuum
        return record


def _group_moments(values, weights, mass):
    mean = float(np.dot(weights, values)) / mass
    second = float(np.dot(weights, values * values)) / mass
    return mean, max(second - mean * mean, 0.0)


def amplitude_statistics(dist, policy=None):
    """Exact conditioned means and variances of the amplitude observables
    over a counting distribution."""
    policy = policy if policy is not None else ConditioningPolicy()
    support = dist.support
    weights = dist.probabilities
    vacuum_mass = 0.0
    if policy.drop_vacuum:
        vac = np.all(support == 0, axis=1)
        vacuum_mass = float(weights[vac].sum())
        remaining = 1.0 - vacuum_mass
        if remaining <= _SUM_TOLERANCE:
            raise UndefinedStatisticError(
                "no counts outside the vacuum: conditioned statistics "
                "are undefined"
            )
        support = support[~vac]
        weights = weights[~vac] / remaining
    n1 = support[:, 0].astype(np.float64)
    n2 = support[:, 1].astype(np.float64)
    n3 = support[:, 2].astype(np.float64)
    pair = n1 + n2
    total = pair + n3
    means, variances = {}, {}

    phi_sel = pair > 0
    phi_mass = float(weights[phi_sel].sum())
    if phi_mass <= 0.0:
        raise UndefinedStatisticError(
            "all probability mass has n1 + n2 = 0: the phase-pair "
            "amplitudes are undefined"
        )
    w = weights[phi_sel]
    denom = pair[phi_sel]
    means["S_phi"], variances["S_phi"] = _group_moments(
        np.sqrt(n2[phi_sel] / denom), w, phi_mass
    )
    means["C_phi"], variances["C_phi"] = _group_moments(
        np.sqrt(n1[phi_sel] / denom), w, phi_mass
    )

    theta_sel = total > 0
    theta_mass = float(weights[theta_sel].sum())
    if theta_mass <= 0.0:
        raise UndefinedStatisticError(
            "all probability mass is the vacuum: the polar amplitudes "
            "are undefined"
        )
    w = weights[theta_sel]
    denom = total[theta_sel]
    means["S_theta"], variances["S_theta"] = _group_moments(
        np.sqrt(pair[theta_sel] / denom), w, theta_mass
    )
    means["C_theta"], variances["C_theta"] = _group_moments(
        np.sqrt(n3[theta_sel] / denom), w, theta_mass
    )
    return AmplitudeStats(
        means=means,
        variances=variances,
        conditioning=policy,
        excluded_mass={
            "vacuum": vacuum_mass,
            "phi_group": max(1.0 - phi_mass, 0.0),
            "theta_group": max(1.0 - theta_mass, 0.0),
        },
    )


def weak_field_statistics(state):
    """Amplitude statistics with the no-count outcome discarded and the
    distribution renormalized by one minus the vacuum probability, the
    convention appropriate when only detected events are kept."""
    dist = counting_distribution(state)
    return amplitude_statistics(dist, ConditioningPolicy(drop_vacuum=True))


def linearized_variances(nbar, sigma2):
    """Small-fluctuation variances of the four amplitude observables for
    uncorrelated mode photon numbers with means `nbar` and variances
    `sigma2`.

    Writing s = n1 + n2 and N = n1 + n2 + n3:

        Var(S_phi)   = n1/(4 s^3) ((n2/n1) v1 + (n1/n2) v2)
        Var(C_phi)   = n2/(4 s^3) ((n2/n1) v1 + (n1/n2) v2)
        Var(S_theta) = 1/(4 N^3) ((n3^2/s)(v1 + v2) + s v3)
        Var(C_theta) = 1/(4 N^3) (n3 (v1 + v2) + (s^2/n3) v3)

    The formulas divide by each mean, so every nbar[j] must be positive;
    for small photon numbers use the exact statistics
    (`amplitude_statistics`) instead."""
    n1, n2, n3 = (float(v) for v in nbar)
    v1, v2, v3 = (float(v) for v in sigma2)
    if min(n1, n2, n3) <= 0.0:
        raise DomainError(
            "linearized variances need strictly positive mean photon "
            "numbers in every mode; use the exact counting statistics "
            "for weak fields"
        )
    if min(v1, v2, v3) < 0.0:
        raise DomainError("number variances must be non-negative")
    s = n1 + n2
    total = s + n3
    bracket = (n2 / n1) * v1 + (n1 / n2) * v2
    return {
        "S_phi": n1 / (4.0 * s**3) * bracket,
        "C_phi": n2 / (4.0 * s**3) * bracket,
        "S_theta": (n3**2 / s * (v1 + v2) + s * v3) / (4.0 * total**3),
        "C_theta": (n3 * (v1 + v2) + s**2 / n3 * v3) / (4.0 * total**3),
    }


def number_covariances(state):
    """Covariance matrix of the mode photon numbers, exact from the
    occupation-basis probabilities. The linearized variance formulas
    assume the off-diagonal entries vanish."""
    occ = state.space.occupations.astype(np.float64)
    probs = state.occupation_probabilities()
    means = occ.T @ probs
    second = (occ * probs[:, None]).T @ occ
    return second - np.outer(means, means)
