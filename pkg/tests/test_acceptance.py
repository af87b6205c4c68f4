"""Acceptance battery: one check per advertised guarantee, each printing
a single [PASS]/[FAIL] line (run with `pytest -s` to see them all).

Every criterion states its tolerance inline; a failure raises with the
offending values so the line identifies the counterexample.
"""
from __future__ import annotations

import contextlib
import math
import subprocess
import sys

import numpy as np

from su3optics import (
    FockSpace,
    QuantumState,
    Su3Params,
    amplitude_statistics,
    build_gellmann,
    build_twelve_port,
    coherent_state,
    counting_distribution,
    degree_p3,
    detection_stats,
    expectation,
    homodyne_limit,
    linearized_variances,
    measured_combination_matrix,
    poisson_product_distribution,
    psi_n_state,
    qutrit_w_state,
    squeezing_witness,
    structure_constant_check,
    unit_vector,
    variance,
    weak_field_statistics,
)
from su3optics.network import PAIR_MODES

SEED = 20260822


@contextlib.contextmanager
def criterion(number, description):
    try:
        yield
    except Exception as exc:
        detail = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"[FAIL] criterion {number}: {description} :: {detail}")
        raise
    print(f"[PASS] criterion {number}: {description}")


def fock_basis_state(space, occ):
    vec = np.zeros(space.dim, dtype=np.complex128)
    vec[space.index_of(occ)] = 1.0
    return QuantumState(space, vector=vec)


def combination_operator(space, g):
    op = None
    for m in range(3):
        for n in range(3):
            if g[m, n] == 0:
                continue
            term = g[m, n] * (space.creator(m) @ space.annihilator(n))
            op = term if op is None else op + term
    return op.tocsr()


def random_mixed_state(space, rng, n_components=4):
    rho = np.zeros((space.dim, space.dim), dtype=np.complex128)
    weights = rng.random(n_components)
    weights /= weights.sum()
    for w in weights:
        vec = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
        vec /= np.linalg.norm(vec)
        rho += w * np.outer(vec, np.conj(vec))
    return QuantumState(space, density=rho)


def test_criterion_1_observable_algebra():
    with criterion(1, "nine observables are Hermitian and close the "
                      "commutation algebra (residual < 1e-10)"):
        space = FockSpace(3, 10)
        gset = build_gellmann(space)
        for j, op in enumerate(gset.operators):
            dense = op.toarray()
            herm = np.max(np.abs(dense - dense.conj().T))
            assert herm < 1e-12, f"observable {j} Hermiticity {herm}"
        probes = [
            coherent_state(space, [0.5, 0.4j, 0.3 - 0.2j]),
            psi_n_state(space, unit_vector(Su3Params(0.8, 0.5, 1.1, 2.7)), 2),
            qutrit_w_state(space, unit_vector(Su3Params(0.6, 1.0))),
        ]
        mixed_space = FockSpace(3, 6)
        rho = np.zeros((mixed_space.dim,) * 2, dtype=np.complex128)
        for w, params in ((0.6, Su3Params(0.7, 0.6)),
                          (0.4, Su3Params(1.2, 0.2, 0.5, 1.5))):
            vec = qutrit_w_state(mixed_space, unit_vector(params)).vector
            rho += w * np.outer(vec, np.conj(vec))
        probes_mixed = [QuantumState(mixed_space, density=rho)]
        residual = structure_constant_check(gset, probes)
        residual_mixed = structure_constant_check(
            build_gellmann(mixed_space), probes_mixed
        )
        worst = max(residual, residual_mixed)
        assert worst < 1e-10, f"commutator residual {worst}"


def test_criterion_2_sharp_total_and_subcoherent_fluctuations():
    with criterion(2, "N-photon class states have sharp total photon "
                      "number and no observable fluctuates above the "
                      "matched coherent reference (200 seeded samples)"):
        space = FockSpace(3, 18)
        gset = build_gellmann(space)
        for n in (1, 2, 3):
            state = psi_n_state(
                space, unit_vector(Su3Params(0.9, 0.6, 0.8, 2.0)), n
            )
            spread = variance(state, gset.operators[0])
            assert spread < 1e-12, f"N={n} total-number variance {spread}"
        rng = np.random.default_rng(SEED)
        for sample in range(200):
            theta = rng.uniform(0.08, math.pi / 2 - 0.08)
            phi = rng.uniform(0.08, math.pi / 2 - 0.08)
            psi1 = rng.uniform(0.0, 2.0 * math.pi)
            psi2 = rng.uniform(0.0, 2.0 * math.pi)
            n = int(rng.integers(1, 4))
            state = psi_n_state(
                space, unit_vector(Su3Params(theta, phi, psi1, psi2)), n
            )
            records = squeezing_witness(state, gset, reference_set=gset)
            for rec in records:
                assert (
                    rec.variance_state <= rec.variance_reference + 1e-9
                ), (
                    f"sample {sample} (theta={theta}, phi={phi}, "
                    f"psi=({psi1}, {psi2}), N={n}): observable "
                    f"{rec.index} variance {rec.variance_state} above "
                    f"reference {rec.variance_reference}"
                )
            assert records[0].squeezed, (
                f"sample {sample}: total-number observable not squeezed"
            )


def test_criterion_3_complete_polarization():
    with criterion(3, "single-class states are completely polarized "
                      "(degree 1, vanishing determinant at 1e-9) and the "
                      "invariant route agrees on 100 mixed states"):
        pure_cases = []
        space12 = FockSpace(3, 12)
        pure_cases.append(coherent_state(space12, [1.0, 1.0j, 0.0]))
        pure_cases.append(
            coherent_state(space12, [0.6, 0.5 + 0.2j, 0.4 - 0.3j])
        )
        for n in (1, 2, 3):
            sp = FockSpace(3, max(n, 2), total_photon_cap=n)
            pure_cases.append(
                psi_n_state(sp, unit_vector(Su3Params(0.7, 0.9, 1.3, 0.4)), n)
            )
        sp1 = FockSpace(3, 1, total_photon_cap=1)
        pure_cases.append(
            qutrit_w_state(sp1, unit_vector(Su3Params(1.1, 0.2)))
        )
        for state in pure_cases:
            report = degree_p3(state, build_gellmann(state.space))
            assert abs(report.degree - 1.0) < 1e-9, (
                f"degree {report.degree} for {state.kind}"
            )
            assert report.det_residual < 1e-9, (
                f"det residual {report.det_residual} for {state.kind}"
            )
            assert report.complete
        rng = np.random.default_rng(SEED)
        mixed_space = FockSpace(3, 2, total_photon_cap=2)
        mixed_gset = build_gellmann(mixed_space)
        for _ in range(100):
            state = random_mixed_state(mixed_space, rng)
            report = degree_p3(state, mixed_gset)
            assert report.residual_tr_sq < 1e-9, (
                f"square-invariant identity residual {report.residual_tr_sq}"
            )
            assert report.residual_tr_cube < 1e-9, (
                f"cube-invariant identity residual {report.residual_tr_cube}"
            )
            assert abs(report.degree - report.degree_from_invariants) < 1e-9


def test_criterion_4_twelve_port_reads_the_observables():
    with criterion(4, "twelve-port detector differences read half of "
                      "each tagged observable with the stated variance "
                      "at both phase settings (tolerance 1e-9)"):
        settings = (
            (0.0, 0.0, 0.0),
            (math.pi / 2, -math.pi / 2, -math.pi / 2),
        )
        # at the two settings the tagged combinations reduce to the six
        # off-diagonal observables themselves
        space3 = FockSpace(3, 3)
        gset3 = build_gellmann(space3)
        images = {
            ("12", settings[0]): 1, ("13", settings[0]): 4,
            ("23", settings[0]): 6, ("12", settings[1]): 2,
            ("13", settings[1]): 5, ("23", settings[1]): 7,
        }
        for (key, phases), lam_index in images.items():
            g = measured_combination_matrix(key, phases)
            op = combination_operator(space3, g)
            assert abs(op - gset3.operators[lam_index]).max() < 1e-12
        rng = np.random.default_rng(SEED)
        battery = []
        for _ in range(5):
            amp = rng.normal(size=3) + 1j * rng.normal(size=3)
            amp *= math.sqrt(rng.uniform(0.3, 1.5)) / np.linalg.norm(amp)
            battery.append(coherent_state(FockSpace(3, 14), amp))
        wspace = FockSpace(3, 2, total_photon_cap=1)
        for params in (Su3Params(0.8, 0.4), Su3Params(1.2, 1.0, 0.7, 2.2),
                       Su3Params(0.5, 1.3, 4.0, 0.9)):
            battery.append(qutrit_w_state(wspace, unit_vector(params)))
        pair_space = FockSpace(3, 2, total_photon_cap=2)
        battery.append(fock_basis_state(pair_space, (1, 1, 0)))
        for state in battery:
            for phases in settings:
                network = build_twelve_port(phases)
                stats = detection_stats(network, state, backend="fock")
                for key in ("12", "13", "23"):
                    g = measured_combination_matrix(key, phases)
                    op = combination_operator(state.space, g)
                    mean_ref = 0.5 * expectation(state, op).real
                    i, j = PAIR_MODES[key]
                    intensity = sum(
                        expectation(state, state.space.number_op(m)).real
                        for m in (i, j)
                    )
                    var_ref = (
                        0.25 * variance(state, op) + 0.25 * intensity
                    )
                    dm = stats.difference_means[key] - mean_ref
                    dv = stats.difference_variances[key] - var_ref
                    assert abs(dm) < 1e-9, (
                        f"{state.kind} pair {key} at {phases}: mean off "
                        f"by {dm}"
                    )
                    assert abs(dv) < 1e-9, (
                        f"{state.kind} pair {key} at {phases}: variance "
                        f"off by {dv}"
                    )


def test_criterion_5_homodyne_quadratures():
    with criterion(5, "with a strong third-mode oscillator the detector "
                      "differences return the signal quadratures "
                      "(tolerance 1e-8) on a completely polarized field"):
        oscillator = 10.0
        beta1 = 0.3 + 0.2j
        for phases in ((0.0, 0.0, 0.0), (0.7, -0.3, 1.4)):
            network = build_twelve_port(phases)
            est = homodyne_limit(
                network, np.array([beta1, 0.0]), oscillator
            )
            assert abs(est.q1 - 2 * beta1.real) < 1e-8, f"q1 {est.q1}"
            assert abs(est.p1 - 2 * beta1.imag) < 1e-8, f"p1 {est.p1}"
            assert abs(est.q2) < 1e-8
            assert abs(est.p2) < 1e-8
            assert est.degree_p3 >= 0.99, f"degree {est.degree_p3}"
            assert est.strong_oscillator


def test_criterion_6_amplitude_statistics_closed_form():
    with criterion(6, "single-photon amplitude variances match the "
                      "closed forms on a 50x50 interior grid "
                      "(tolerance 1e-12), peak at 1/4, balanced point "
                      "2/9, number states dispersion-free"):
        space = FockSpace(3, 1, total_photon_cap=1)
        grid = np.linspace(0.02, 1.55, 50)
        for theta in grid:
            for phi in grid:
                state = qutrit_w_state(
                    space, unit_vector(Su3Params(theta, phi))
                )
                stats = weak_field_statistics(state)
                ref_phi = 0.25 * math.sin(2 * phi) ** 2
                ref_theta = 0.25 * math.sin(2 * theta) ** 2
                for name, ref in (("S_phi", ref_phi), ("C_phi", ref_phi),
                                  ("S_theta", ref_theta),
                                  ("C_theta", ref_theta)):
                    gap = abs(stats.variances[name] - ref)
                    assert gap < 1e-12, (
                        f"theta={theta}, phi={phi}, {name}: gap {gap}"
                    )
        peak = weak_field_statistics(qutrit_w_state(
            space, unit_vector(Su3Params(math.pi / 4, math.pi / 4))
        ))
        assert abs(peak.variances["S_phi"] - 0.25) < 1e-12
        assert abs(peak.variances["S_theta"] - 0.25) < 1e-12
        balanced = weak_field_statistics(qutrit_w_state(
            space, unit_vector(Su3Params.maximally_entangled())
        ))
        assert abs(balanced.variances["S_theta"] - 2.0 / 9.0) < 1e-12
        fock_space = FockSpace(3, 3)
        sharp = amplitude_statistics(counting_distribution(
            fock_basis_state(fock_space, (2, 1, 0))
        ))
        assert all(v < 1e-14 for v in sharp.variances.values())


def test_criterion_7_linearized_variances_converge():
    with criterion(7, "linearized variances approach the exact Poisson "
                      "statistics (under 5% at mean 25, gap shrinking "
                      "with intensity)"):
        gaps = {name: [] for name in
                ("S_phi", "C_phi", "S_theta", "C_theta")}
        for nbar in (5.0, 10.0, 25.0, 50.0):
            exact = amplitude_statistics(
                poisson_product_distribution((nbar, nbar, nbar))
            )
            approx = linearized_variances(
                (nbar, nbar, nbar), (nbar, nbar, nbar)
            )
            for name in gaps:
                rel = abs(approx[name] - exact.variances[name])
                rel /= exact.variances[name]
                gaps[name].append(rel)
        for name, series in gaps.items():
            at25 = series[2]
            assert at25 < 0.05, f"{name} gap {at25} at mean 25"
            assert all(
                later < earlier
                for earlier, later in zip(series, series[1:])
            ), f"{name} gaps not decreasing: {series}"


def test_criterion_8_cli_reproducibility():
    with criterion(8, "command-line runs are byte-identical across "
                      "invocations and the selftest battery passes"):
        fixed = [
            sys.executable, "-m", "su3optics.cli", "gellmann",
            "--state", "qutrit", "--theta", "0.9553166181245093",
            "--phi", "0.7853981633974483", "--format", "json",
        ]
        selftest = [sys.executable, "-m", "su3optics.cli", "selftest"]
        runs = {}
        for label, argv in (("fixed", fixed), ("selftest", selftest)):
            first = subprocess.run(argv, capture_output=True, text=True)
            second = subprocess.run(argv, capture_output=True, text=True)
            assert first.returncode == 0, (
                f"{label} exited {first.returncode}: {first.stderr}"
            )
            assert second.returncode == 0
            assert first.stdout == second.stdout, (
                f"{label} output differs between runs"
            )
            assert first.stdout
            runs[label] = first.stdout
        assert "config_hash" in runs["fixed"]
