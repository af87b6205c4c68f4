"""Command-line experiment runner.

Builds a three-mode state from flags or a JSON config, runs one of the
analyses (state, gellmann, polarization, interferometer, amplitude),
sweeps a parameter over a grid, or runs the built-in selftest battery.

Output is a table in CSV or JSON with one row per observable and columns
{observable, mean, variance, reference_value, residual, source}:
`reference_value` holds a closed-form value when one exists (for
amplitude rows it targets the variance column, elsewhere the mean), and
`source` names the library operation the numbers came from. A provenance
header records the config hash, package and library versions, the kernel
backend, and truncation bookkeeping; nothing in the output depends on
time or process identity, so a fixed config reproduces its output byte
for byte.

Exit codes: 0 success, 2 invalid config or undefined statistic,
3 truncation or capacity failure. Complex numbers on the command line
use the literal form `re+imi`, e.g. `0.3+0.2i` or `1i`; angles are in
radians.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np
import scipy

from . import __version__
from . import kernels
from .amplitude import (
    OBSERVABLES,
    amplitude_statistics,
    counting_distribution,
    linearized_variances,
    number_covariances,
    weak_field_statistics,
)
from .errors import (
    CapacityError,
    DomainError,
    TruncationError,
    UndefinedStatisticError,
)
from .fock import (
    FockSpace,
    QuantumState,
    Su3Params,
    coherent_state,
    psi_n_state,
    unit_vector,
    variance,
    mode_correlations,
)
from .network import (
    build_twelve_port,
    detection_stats,
    measured_combination_matrix,
)
from .polarimetry import degree_p3
from .serialization import config_hash, state_to_record
from .su3 import build_gellmann, gellmann_vector

COLUMNS = ("observable", "mean", "variance", "reference_value",
           "residual", "source")

ANALYSES = ("state", "gellmann", "polarization", "interferometer",
            "amplitude")

STATE_KINDS = ("coherent", "psi_n", "qutrit", "fock", "mixture")

SWEEPABLE = ("theta", "phi", "psi1", "psi2", "phi1", "phi2", "phi3")

# config keys accepted from a --config file (flat, mirroring the flags)
CONFIG_KEYS = {
    "state", "theta", "phi", "psi1", "psi2", "alpha", "n", "occ",
    "mixture", "cutoff", "cap", "phases", "backend", "weak_field",
    "linearized", "format", "analysis", "sweep_param", "start", "stop",
    "steps",
}

CROSS_CORRELATION_SCALE = 1e-6


def parse_complex(text):
    """Parse the `re+imi` literal form (i denotes the imaginary unit)."""
    token = str(text).strip().replace(" ", "")
    if not token:
        raise DomainError("empty complex literal")
    try:
        return complex(token.replace("i", "j"))
    except ValueError:
        raise DomainError(f"bad complex literal {text!r}") from None


def format_complex(z):
    return f"{z.real!r}+{z.imag!r}i"


def _parse_list(value, parser, expected, what):
    if isinstance(value, str):
        items = [parser(tok) for tok in value.split(",")]
    elif isinstance(value, (list, tuple)):
        items = [parser(tok) for tok in value]
    else:
        raise DomainError(f"bad {what}: {value!r}")
    if len(items) != expected:
        raise DomainError(f"{what} needs {expected} entries, got {len(items)}")
    return items


def _merge_config(args):
    """Flag values override config-file values; returns one flat dict."""
    merged = {}
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read config {args.config}: {exc}")
        if not isinstance(loaded, dict):
            raise DomainError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - CONFIG_KEYS)
        if unknown:
            raise DomainError(f"unknown config keys: {', '.join(unknown)}")
        merged.update(loaded)
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _resolve_state_config(merged):
    """Normalize the state portion of a merged config into a canonical
    dict (the part that is hashed and rebuilt deterministically)."""
    kind = merged.get("state", "qutrit")
    if kind not in STATE_KINDS:
        raise DomainError(
            f"unknown state kind {kind!r}; choose from {STATE_KINDS}"
        )
    cfg = {"kind": kind}
    cutoff = merged.get("cutoff")
    cap = merged.get("cap")
    if kind == "coherent":
        if "alpha" not in merged:
            raise DomainError("coherent state needs --alpha re+imi,re+imi,re+imi")
        alphas = _parse_list(merged["alpha"], parse_complex, 3, "alpha list")
        cfg["alpha"] = [[z.real, z.imag] for z in alphas]
        cfg["cutoff"] = int(cutoff) if cutoff is not None else 12
    elif kind in ("psi_n", "qutrit"):
        n = 1 if kind == "qutrit" else int(merged.get("n", 1))
        if kind == "psi_n" and n < 1:
            raise DomainError("psi_n needs --n >= 1")
        cfg["n"] = n
        for angle, default in (("theta", math.pi / 4), ("phi", math.pi / 4),
                               ("psi1", 0.0), ("psi2", 0.0)):
            cfg[angle] = float(merged.get(angle, default))
        cfg["cutoff"] = int(cutoff) if cutoff is not None else n
    elif kind == "fock":
        if "occ" not in merged:
            raise DomainError("fock state needs --occ n1,n2,n3")
        occ = _parse_list(merged["occ"], int, 3, "occupation list")
        if min(occ) < 0:
            raise DomainError("occupations must be non-negative")
        cfg["occ"] = occ
        cfg["cutoff"] = int(cutoff) if cutoff is not None else max(sum(occ), 1)
    else:  # mixture
        components = merged.get("mixture")
        if not components:
            raise DomainError(
                "mixture states are configured through --config with a "
                "'mixture' list of {weight, state} entries"
            )
        resolved = []
        total = 0.0
        for entry in components:
            if not isinstance(entry, dict) or "weight" not in entry \
                    or "state" not in entry:
                raise DomainError(
                    "each mixture entry needs 'weight' and 'state'"
                )
            weight = float(entry["weight"])
            if weight < 0:
                raise DomainError("mixture weights must be non-negative")
            sub = dict(entry["state"])
            sub.setdefault("state", sub.pop("kind", None) or "qutrit")
            sub_cfg = _resolve_state_config(sub)
            if sub_cfg["kind"] == "mixture":
                raise DomainError("mixtures cannot nest")
            total += weight
            resolved.append({"weight": weight, "state": sub_cfg})
        if abs(total - 1.0) > 1e-9:
            raise DomainError(f"mixture weights sum to {total}, expected 1")
        cfg["mixture"] = resolved
        cfg["cutoff"] = int(cutoff) if cutoff is not None else max(
            entry["state"]["cutoff"] for entry in resolved
        )
    cfg["cap"] = int(cap) if cap is not None else None
    return cfg


def build_state(cfg, space=None):
    """Construct the configured state on its (or a supplied) space."""
    if space is None:
        space = FockSpace(3, cfg["cutoff"], total_photon_cap=cfg["cap"])
    kind = cfg["kind"]
    if kind == "coherent":
        alphas = [complex(re, im) for re, im in cfg["alpha"]]
        return coherent_state(space, alphas)
    if kind in ("psi_n", "qutrit"):
        params = Su3Params(theta=cfg["theta"], phi=cfg["phi"],
                           psi1=cfg["psi1"], psi2=cfg["psi2"])
        return psi_n_state(space, unit_vector(params), cfg["n"])
    if kind == "fock":
        vec = np.zeros(space.dim, dtype=np.complex128)
        vec[space.index_of(cfg["occ"])] = 1.0
        return QuantumState(space, vector=vec)
    rho = np.zeros((space.dim, space.dim), dtype=np.complex128)
    tails = 0.0
    for entry in cfg["mixture"]:
        component = build_state(entry["state"], space=space)
        rho += entry["weight"] * np.outer(
            component.vector, component.vector.conj()
        )
        tails += entry["weight"] * component.metadata.get(
            "truncation_tail_mass", 0.0
        )
    return QuantumState(space, density=rho,
                        metadata={"truncation_tail_mass": tails})


def _expected_total(cfg):
    """Closed-form mean total photon number of the configured state, when
    one exists."""
    kind = cfg["kind"]
    if kind == "coherent":
        return float(sum(re * re + im * im for re, im in cfg["alpha"]))
    if kind in ("psi_n", "qutrit"):
        return float(cfg["n"])
    if kind == "fock":
        return float(sum(cfg["occ"]))
    totals = [_expected_total(entry["state"]) for entry in cfg["mixture"]]
    if any(t is None for t in totals):
        return None
    return float(sum(w["weight"] * t
                     for w, t in zip(cfg["mixture"], totals)))


def _row(observable, mean=None, var=None, reference=None, source=None,
         reference_target="mean"):
    residual = None
    if reference is not None:
        target = var if reference_target == "variance" else mean
        residual = None if target is None else target - reference
    return {
        "observable": observable,
        "mean": mean,
        "variance": var,
        "reference_value": reference,
        "residual": residual,
        "source": source,
    }


def analysis_state(state, cfg, merged):
    occ = state.space.occupations.astype(np.float64)
    probs = state.occupation_probabilities()
    rows = []
    expected = _expected_total(cfg)
    per_mode_ref = None
    if cfg["kind"] == "coherent":
        per_mode_ref = [re * re + im * im for re, im in cfg["alpha"]]
    for j in range(3):
        mean = float(np.dot(occ[:, j], probs))
        var = float(np.dot(occ[:, j] ** 2, probs) - mean**2)
        rows.append(_row(
            f"n_{j + 1}", mean, max(var, 0.0),
            per_mode_ref[j] if per_mode_ref else None,
            source="fock.expectation",
        ))
    total = occ.sum(axis=1)
    mean = float(np.dot(total, probs))
    var = float(np.dot(total**2, probs) - mean**2)
    rows.append(_row("n_total", mean, max(var, 0.0), expected,
                     source="fock.expectation"))
    return rows


def analysis_gellmann(state, cfg, merged):
    gset = build_gellmann(state.space)
    lam = gellmann_vector(state, gset)
    rows = []
    expected = _expected_total(cfg)
    for j in range(9):
        rows.append(_row(
            f"lambda_{j}",
            float(lam[j]),
            variance(state, gset.operators[j]),
            expected if j == 0 else None,
            source="su3.gellmann_vector",
        ))
    return rows


_POLARIZED_KINDS = ("coherent", "psi_n", "qutrit")


def analysis_polarization(state, cfg, merged):
    gset = build_gellmann(state.space)
    report = degree_p3(state, gset)
    polarized = cfg["kind"] in _POLARIZED_KINDS
    record = report.to_record()
    refs = {}
    if polarized:
        refs["degree"] = 1.0
        refs["det"] = 0.0
    rows = []
    for key, value in record.items():
        rows.append(_row(
            key,
            float(value),
            reference=refs.get(key),
            source="polarimetry.degree_p3",
        ))
    return rows


def _phases(merged):
    phases = merged.get("phases", [0.0, 0.0, 0.0])
    return tuple(_parse_list(phases, float, 3, "phase list"))


def analysis_interferometer(state, cfg, merged):
    phases = _phases(merged)
    backend = merged.get("backend", "auto")
    network = build_twelve_port(phases)
    stats = detection_stats(network, state, backend=backend)
    alphas = state.metadata.get("alphas")
    if alphas is not None:
        amp = np.asarray(alphas, dtype=np.complex128)
        corr = np.outer(np.conj(amp), amp)
    else:
        corr = mode_correlations(state, (0, 1, 2))
    rows = []
    for key in sorted(stats.difference_means):
        g = measured_combination_matrix(key, phases)
        reference = 0.5 * float(np.sum(g * corr).real)
        rows.append(_row(
            f"diff_{key}",
            stats.difference_means[key],
            stats.difference_variances[key],
            reference,
            source="network.detection_stats",
        ))
    for name, value in stats.port_means.items():
        rows.append(_row(f"port_{name}", value,
                         source="network.detection_stats"))
    return rows


def _qutrit_variance_refs(cfg):
    two_phi = math.sin(2.0 * cfg["phi"]) ** 2 / 4.0
    two_theta = math.sin(2.0 * cfg["theta"]) ** 2 / 4.0
    return {"S_phi": two_phi, "C_phi": two_phi,
            "S_theta": two_theta, "C_theta": two_theta}


def analysis_amplitude(state, cfg, merged):
    weak = bool(merged.get("weak_field", False))
    if weak:
        stats = weak_field_statistics(state)
    else:
        stats = amplitude_statistics(counting_distribution(state))
    refs = {}
    if cfg["kind"] == "qutrit":
        refs = _qutrit_variance_refs(cfg)
    if merged.get("linearized", False):
        occ = state.space.occupations.astype(np.float64)
        probs = state.occupation_probabilities()
        nbar = [float(np.dot(occ[:, j], probs)) for j in range(3)]
        sigma2 = [
            max(float(np.dot(occ[:, j] ** 2, probs)) - nbar[j] ** 2, 0.0)
            for j in range(3)
        ]
        refs = linearized_variances(nbar, sigma2)
        cov = number_covariances(state)
        off = float(np.abs(cov - np.diag(np.diag(cov))).max())
        total = float(sum(nbar))
        if off > CROSS_CORRELATION_SCALE * max(total, 1.0):
            print(
                f"warning: photon-number cross-correlations reach "
                f"{off:.3e}; the linearized formulas assume "
                "uncorrelated modes",
                file=sys.stderr,
            )
    rows = []
    for name in OBSERVABLES:
        rows.append(_row(
            name,
            stats.means[name],
            stats.variances[name],
            refs.get(name),
            source="amplitude.amplitude_statistics",
            reference_target="variance",
        ))
    for group, mass in sorted(stats.excluded_mass.items()):
        rows.append(_row(f"excluded_{group}", mass,
                         source="amplitude.amplitude_statistics"))
    return rows


_ANALYSIS_FUNCS = {
    "state": analysis_state,
    "gellmann": analysis_gellmann,
    "polarization": analysis_polarization,
    "interferometer": analysis_interferometer,
    "amplitude": analysis_amplitude,
}


def _effective_config(command, merged):
    """Canonical resolved config: what actually ran, used for hashing."""
    cfg = {"command": command, "format": merged.get("format", "csv")}
    if command != "selftest":
        cfg["state"] = _resolve_state_config(merged)
    if command in ("interferometer", "sweep"):
        cfg["phases"] = list(_phases(merged))
        cfg["backend"] = merged.get("backend", "auto")
    if command in ("amplitude", "sweep"):
        cfg["weak_field"] = bool(merged.get("weak_field", False))
        cfg["linearized"] = bool(merged.get("linearized", False))
    if command == "sweep":
        cfg["analysis"] = merged.get("analysis")
        cfg["sweep"] = {
            "param": merged.get("sweep_param"),
            "start": merged.get("start"),
            "stop": merged.get("stop"),
            "steps": merged.get("steps"),
        }
    return cfg


def _provenance(effective, state=None, extra=None):
    prov = {
        "config_hash": config_hash(effective),
        "versions": {
            "su3optics": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "kernel_backend": kernels.BACKEND,
    }
    if state is not None:
        prov["truncation_tail_mass"] = state.metadata.get(
            "truncation_tail_mass", 0.0
        )
    if extra:
        prov.update(extra)
    return prov


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def emit(rows, provenance, fmt, columns=COLUMNS, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        def native(value):
            if isinstance(value, (np.floating,)):
                return float(value)
            if isinstance(value, (np.integer,)):
                return int(value)
            return value

        document = {"provenance": provenance,
                    "rows": [
                        {k: native(row.get(k)) for k in columns}
                        for row in rows
                    ]}
        json.dump(document, stream, sort_keys=True, indent=2,
                  allow_nan=False)
        stream.write("\n")
        return
    for key, value in sorted(provenance.items()):
        if isinstance(value, dict):
            parts = " ".join(f"{k}={_fmt(v)}"
                             for k, v in sorted(value.items()))
            stream.write(f"# {key}: {parts}\n")
        else:
            stream.write(f"# {key}: {_fmt(value)}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(row.get(k)) for k in columns) + "\n")


def _run_analysis(command, merged):
    cfg = _resolve_state_config(merged)
    state = build_state(cfg)
    rows = _ANALYSIS_FUNCS[command](state, cfg, merged)
    return rows, state


def cmd_run(command, merged):
    effective = _effective_config(command, merged)
    rows, state = _run_analysis(command, merged)
    if merged.get("dump_record"):
        print(json.dumps(state_to_record(state), sort_keys=True, indent=2))
        return 0
    emit(rows, _provenance(effective, state), merged.get("format", "csv"))
    return 0


def cmd_sweep(merged):
    analysis = merged.get("analysis")
    if analysis not in ANALYSES:
        raise DomainError(
            f"sweep needs --analysis from {ANALYSES}, got {analysis!r}"
        )
    param = merged.get("sweep_param")
    if param not in SWEEPABLE:
        raise DomainError(
            f"sweep needs --sweep-param from {SWEEPABLE}, got {param!r}"
        )
    for key in ("start", "stop", "steps"):
        if merged.get(key) is None:
            raise DomainError(f"sweep needs --{key}")
    steps = int(merged["steps"])
    if steps < 0:
        raise DomainError("steps must be non-negative")
    values = np.linspace(float(merged["start"]), float(merged["stop"]),
                         steps)
    effective = _effective_config("sweep", merged)
    all_rows = []
    state = None
    for value in values:
        point = dict(merged)
        if param in ("phi1", "phi2", "phi3"):
            phases = list(_phases(merged))
            phases[int(param[-1]) - 1] = float(value)
            point["phases"] = phases
        else:
            point[param] = float(value)
        try:
            rows, state = _run_analysis(analysis, point)
        except UndefinedStatisticError as exc:
            print(
                f"warning: {param} = {float(value)!r} skipped: {exc}",
                file=sys.stderr,
            )
            continue
        for row in rows:
            row = dict(row)
            row["sweep_param"] = param
            row["sweep_value"] = float(value)
            all_rows.append(row)
    columns = ("sweep_param", "sweep_value") + COLUMNS
    emit(all_rows, _provenance(effective, state),
         merged.get("format", "csv"), columns=columns)
    return 0


def _selftest_rows():
    rows = []

    def check(name, value, reference, tol, source):
        rows.append(_row(name, float(value), reference=float(reference),
                         source=source))
        return abs(value - reference) <= tol

    ok = True

    qutrit_cfg = _resolve_state_config(
        {"state": "qutrit", "theta": math.pi / 4, "phi": math.pi / 4}
    )
    stats = weak_field_statistics(build_state(qutrit_cfg))
    for name in OBSERVABLES:
        ok &= check(f"qutrit_var_{name}", stats.variances[name], 0.25,
                    1e-12, "amplitude.weak_field_statistics")

    balanced = _resolve_state_config(
        {"state": "qutrit", "theta": math.acos(1.0 / math.sqrt(3.0)),
         "phi": math.pi / 4}
    )
    stats = weak_field_statistics(build_state(balanced))
    ok &= check("balanced_qutrit_var_S_theta", stats.variances["S_theta"],
                2.0 / 9.0, 1e-12, "amplitude.weak_field_statistics")

    coherent_cfg = _resolve_state_config(
        {"state": "coherent", "alpha": "0.6,0.5+0.2i,0.4-0.3i",
         "cutoff": 12}
    )
    coh = build_state(coherent_cfg)
    report = degree_p3(coh, build_gellmann(coh.space))
    ok &= check("coherent_degree_p3", report.degree, 1.0, 1e-9,
                "polarimetry.degree_p3")

    fock_cfg = _resolve_state_config({"state": "fock", "occ": "1,1,0"})
    stats = amplitude_statistics(
        counting_distribution(build_state(fock_cfg))
    )
    for name in OBSERVABLES:
        ok &= check(f"fock_var_{name}", stats.variances[name], 0.0,
                    1e-12, "amplitude.amplitude_statistics")

    phases = (0.3, -0.7, 1.1)
    network = build_twelve_port(phases)
    det = detection_stats(network, coh, backend="moment")
    amp = np.asarray(coh.metadata["alphas"], dtype=np.complex128)
    corr = np.outer(np.conj(amp), amp)
    for key in ("12", "13", "23"):
        g = measured_combination_matrix(key, phases)
        ref = 0.5 * float(np.sum(g * corr).real)
        ok &= check(f"twelve_port_diff_{key}",
                    det.difference_means[key], ref, 1e-10,
                    "network.detection_stats")

    fock_det = detection_stats(network, coh, backend="fock")
    for key in ("12", "13", "23"):
        ok &= check(f"backend_agreement_diff_{key}",
                    fock_det.difference_means[key],
                    det.difference_means[key], 1e-8,
                    "network.detection_stats")
        ok &= check(f"backend_agreement_var_{key}",
                    fock_det.difference_variances[key],
                    det.difference_variances[key], 1e-8,
                    "network.detection_stats")

    return rows, ok


def cmd_selftest(merged):
    effective = _effective_config("selftest", merged)
    rows, ok = _selftest_rows()
    emit(rows, _provenance(effective), merged.get("format", "csv"))
    if not ok:
        print("selftest: at least one reference check failed",
              file=sys.stderr)
        return 1
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="su3optics",
        description="Three-mode quantum-optics observables: build a "
                    "state, then tabulate mode observables, polarization "
                    "measures, interferometer statistics, or amplitude "
                    "statistics.",
    )
    parser.add_argument("--version", action="version",
                        version=f"su3optics {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default csv)")
    common.add_argument("--config", default=None, metavar="FILE",
                        help="JSON config; explicit flags override it")

    state_flags = argparse.ArgumentParser(add_help=False)
    state_flags.add_argument("--state", choices=STATE_KINDS, default=None,
                             help="state kind (default qutrit)")
    state_flags.add_argument("--theta", type=float, default=None)
    state_flags.add_argument("--phi", type=float, default=None)
    state_flags.add_argument("--psi1", type=float, default=None)
    state_flags.add_argument("--psi2", type=float, default=None)
    state_flags.add_argument("--alpha", default=None, metavar="Z,Z,Z",
                             help="coherent amplitudes, re+imi literals")
    state_flags.add_argument("--n", type=int, default=None,
                             help="photon number for psi_n states")
    state_flags.add_argument("--occ", default=None, metavar="N,N,N",
                             help="occupations for fock states")
    state_flags.add_argument("--cutoff", type=int, default=None,
                             help="per-mode Fock cutoff")
    state_flags.add_argument("--cap", type=int, default=None,
                             help="total photon-number cap")

    parents = [common, state_flags]
    p_state = sub.add_parser("state", parents=parents,
                             help="mode photon-number summary")
    p_state.add_argument("--dump-record", action="store_true",
                         dest="dump_record",
                         help="print the full state record instead")
    sub.add_parser("gellmann", parents=parents,
                   help="means and variances of the nine mode observables")
    sub.add_parser("polarization", parents=parents,
                   help="coherency invariants and polarization degree")
    p_inter = sub.add_parser("interferometer", parents=parents,
                             help="twelve-port detector statistics")
    p_inter.add_argument("--phases", default=None, metavar="F,F,F",
                         help="the three interferometer phases (radians)")
    p_inter.add_argument("--backend",
                         choices=("auto", "moment", "fock"), default=None)
    p_amp = sub.add_parser("amplitude", parents=parents,
                           help="amplitude-observable statistics")
    p_amp.add_argument("--weak-field", dest="weak_field",
                       action="store_const", const=True, default=None,
                       help="discard the no-count outcome and renormalize")
    p_amp.add_argument("--linearized", action="store_const", const=True,
                       default=None,
                       help="use linearized variances as references")
    p_sweep = sub.add_parser("sweep", parents=parents,
                             help="run an analysis over a parameter grid")
    p_sweep.add_argument("--analysis", choices=ANALYSES, default=None)
    p_sweep.add_argument("--sweep-param", dest="sweep_param",
                         choices=SWEEPABLE, default=None)
    p_sweep.add_argument("--start", type=float, default=None)
    p_sweep.add_argument("--stop", type=float, default=None)
    p_sweep.add_argument("--steps", type=int, default=None)
    p_sweep.add_argument("--phases", default=None, metavar="F,F,F")
    p_sweep.add_argument("--backend",
                         choices=("auto", "moment", "fock"), default=None)
    p_sweep.add_argument("--weak-field", dest="weak_field",
                         action="store_const", const=True, default=None)
    p_sweep.add_argument("--linearized", action="store_const", const=True,
                         default=None)
    sub.add_parser("selftest", parents=[common],
                   help="check built-in reference values")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        merged = _merge_config(args)
        if args.command == "sweep":
            return cmd_sweep(merged)
        if args.command == "selftest":
            return cmd_selftest(merged)
        merged["dump_record"] = getattr(args, "dump_record", False)
        return cmd_run(args.command, merged)
    except (DomainError, UndefinedStatisticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TruncationError, CapacityError) as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
