"""Linear-optical networks: balanced beam splitters and phase shifters on
signal plus vacuum modes, photon-counting detector ports, and the
photon-number-difference observables.

Wiring convention (documented because the twelve-port layout is fixed by
the operator identities it must satisfy, not by a unique drawing):

* A balanced beam splitter maps annihilation operators as
  out_p = (in_p + i in_q) / sqrt2, out_q = (i in_p + in_q) / sqrt2
  (transmitted amplitude 1/sqrt2, reflected i/sqrt2).
* The twelve-port uses six modes ordered (a1, a2, a3, v1, v2, v3) with
  v1..v3 prepared in vacuum. Elements act in listed order:
  BS(a1,v1), BS(a2,v2), BS(a3,v3); phase(a2, f2 - pi/2),
  phase(a3, -f1), phase(v3, f3 + pi/2); BS(a1,a2), BS(v1,a3), BS(v2,v3).
  Detector ports: d12 -> mode 0, d21 -> 1, d13 -> 3, d31 -> 2,
  d23 -> 4, d32 -> 5.

With phases (f1, f2, f3) the measured photon-number differences realize
(writing l_jk for the phase-tagged combinations)

    N(d12) - N(d21) = 1/2 (a1+ a2 e^{i f2} + h.c.)  + M12
    N(d13) - N(d31) = 1/2 (a1+ a3 e^{-i f1} + h.c.) + M13
    N(d32) - N(d23) = 1/2 (a2+ a3 e^{i f3} + h.c.)  + M23

where each M is supported on the vacuum ancillas with zero mean and
variance (n_i + n_j)/4, so

    <diff>      = <l_jk> / 2
    Var(diff)   = Var(l_jk)/4 + (<n_i> + <n_j>)/4.

Note the 2-3 difference is taken as N(d32) - N(d23). Setting all phases to
zero measures (l1, l4, l6)/2; phases (pi/2, -pi/2, -pi/2) measure
(l2, l5, l7)/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapacityError, DimensionMismatchError, DomainError
from .fock import FockSpace, QuantumState, total_number_distribution
from .polarimetry import report_from_correlations

HALF_PI = math.pi / 2

BS_CONVENTIONS = {
    "reflect-i": np.array([[1.0, 1.0j], [1.0j, 1.0]]) / math.sqrt(2),
    "hadamard": np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2),
}

# detector name -> output mode index of the twelve-port
TWELVE_PORT_LABELS = {
    "d12": 0, "d21": 1, "d13": 3, "d31": 2, "d23": 4, "d32": 5,
}

# difference key -> (positive port, negative port); note 23 is reversed
DIFFERENCE_PAIRS = {
    "12": ("d12", "d21"),
    "13": ("d13", "d31"),
    "23": ("d32", "d23"),
}

# difference key -> signal mode indices entering the combination
PAIR_MODES = {"12": (0, 1), "13": (0, 2), "23": (1, 2)}

DEFAULT_MAX_DIM = 300_000

_BS_TABLE_CACHE = {}


def _bs_tables(cap):
    tables = _BS_TABLE_CACHE.get(cap)
    if tables is None:
        tables = kernels.block_tables(BS_CONVENTIONS["reflect-i"], cap)
        _BS_TABLE_CACHE[cap] = tables
    return tables


@dataclass(frozen=True)
class Element:
    """One network element: kind "bs" with a mode pair, or kind "phase"
    with a mode and an angle in radians."""

    kind: str
    modes: tuple
    angle: float = 0.0

    def __post_init__(self):
        if self.kind == "bs":
            if len(self.modes) != 2 or self.modes[0] == self.modes[1]:
                raise DomainError("beam splitter needs two distinct modes")
        elif self.kind == "phase":
            if len(self.modes) != 1:
                raise DomainError("phase shifter acts on one mode")
        else:
            raise DomainError(f"unknown element kind {self.kind!r}")


def bs(i, j):
    return Element(kind="bs", modes=(int(i), int(j)))


def phase(mode, angle):
    return Element(kind="phase", modes=(int(mode),), angle=float(angle))


def balanced_bs(mode_a, mode_b, phase_convention="reflect-i"):
    """2x2 unitary block of a balanced beam splitter on two distinct
    modes. Every convention splits intensity 50/50."""
    if mode_a == mode_b:
        raise DomainError("beam splitter needs two distinct modes")
    try:
        return BS_CONVENTIONS[phase_convention].copy()
    except KeyError:
        raise DomainError(
            f"unknown phase convention {phase_convention!r}; "
            f"choose from {sorted(BS_CONVENTIONS)}"
        ) from None


def mode_unitary(n_modes, elements):
    """Compose the full mode unitary; the first listed element acts first
    on the annihilation-operator column vector."""
    u = np.eye(n_modes, dtype=np.complex128)
    for el in elements:
        m = np.eye(n_modes, dtype=np.complex128)
        if el.kind == "bs":
            i, j = el.modes
            block = BS_CONVENTIONS["reflect-i"]
            m[i, i] = block[0, 0]
            m[i, j] = block[0, 1]
            m[j, i] = block[1, 0]
            m[j, j] = block[1, 1]
        else:
            m[el.modes[0], el.modes[0]] = np.exp(1j * el.angle)
        u = m @ u
    return u


@dataclass(frozen=True)
class ModeNetwork:
    """A mode unitary with named detector ports.

    `unitary` acts on the annihilation-operator column vector; columns of
    its transpose equally describe Schrodinger transport of creation
    operators. Unitarity is enforced at construction.
    """

    n_total_modes: int
    elements: tuple
    port_labels: dict
    vacuum_ports: tuple = ()
    phases: tuple = None
    unitary: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        u = mode_unitary(self.n_total_modes, self.elements)
        dev = np.max(np.abs(u @ u.conj().T - np.eye(self.n_total_modes)))
        if dev > 1e-12:
            raise DomainError(f"network unitarity violated by {dev}")
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "elements", tuple(self.elements))
        for name, port in self.port_labels.items():
            if not 0 <= port < self.n_total_modes:
                raise DomainError(f"port {name} index {port} out of range")


def build_twelve_port(phases=(0.0, 0.0, 0.0)):
    """Six-mode network whose three detector-pair differences measure the
    phase-tagged two-mode combinations (module docstring has the layout
    and the identities it satisfies)."""
    f1, f2, f3 = (float(p) for p in phases)
    elements = (
        bs(0, 3), bs(1, 4), bs(2, 5),
        phase(1, f2 - HALF_PI),
        phase(2, -f1),
        phase(5, f3 + HALF_PI),
        bs(0, 1), bs(3, 2), bs(4, 5),
    )
    return ModeNetwork(
        n_total_modes=6,
        elements=elements,
        port_labels=dict(TWELVE_PORT_LABELS),
        vacuum_ports=(3, 4, 5),
        phases=(f1, f2, f3),
    )


def build_splitter_stage():
    """Six-mode network splitting each signal mode against a vacuum port,
    producing two three-mode copies on modes (0,1,2) and (3,4,5). Each
    copy carries half the input mean photon number, so downstream
    estimates are input-referred by doubling."""
    return ModeNetwork(
        n_total_modes=6,
        elements=(bs(0, 3), bs(1, 4), bs(2, 5)),
        port_labels={"copy_a": 0, "copy_b": 3},
        vacuum_ports=(3, 4, 5),
    )


def measured_combination_matrix(pair_key, phases):
    """Single-particle 3x3 matrix g of the combination measured by one
    detector pair: the observable is sum_mn g[m,n] a_m+ a_n."""
    f1, f2, f3 = phases
    g = np.zeros((3, 3), dtype=np.complex128)
    if pair_key == "12":
        g[0, 1] = np.exp(1j * f2)
    elif pair_key == "13":
        g[0, 2] = np.exp(-1j * f1)
    elif pair_key == "23":
        g[1, 2] = np.exp(1j * f3)
    else:
        raise DomainError(f"unknown pair {pair_key!r}")
    return g + g.conj().T


def evolve_pure(state, elements):
    """Apply a list of elements to a pure state within its own space.
    The space must enforce total_photon_cap <= cutoff (complete two-mode
    ladders; photon number is conserved so the cap is never crossed)."""
    if state.vector is None:
        raise DomainError("only pure states evolve on the Fock backend")
    space = state.space
    vec = state.vector
    for el in elements:
        if el.kind == "bs":
            i, j = el.modes
            plan = kernels.pair_plan(space, i, j)
            vec = kernels.apply_pair_unitary(
                vec, plan, _bs_tables(space.total_photon_cap)
            )
        else:
            vec = kernels.apply_phase(vec, space, el.modes[0], el.angle)
    return QuantumState(space, vector=vec, metadata=dict(state.metadata))


def embed_signal(state, n_total_modes=6, cap_epsilon=1e-12,
                 max_dim=DEFAULT_MAX_DIM):
    """Embed a pure signal state into a larger space with added vacuum
    modes, capping the total photon number at the smallest value that
    keeps the trimmed probability mass below cap_epsilon.

    Returns (embedded_state, trimmed_mass). The embedding space uses
    cutoff = cap so two-mode ladders stay complete under evolution."""
    if state.vector is None:
        raise DomainError("only pure states embed for Fock evolution")
    src = state.space
    if n_total_modes < src.n_modes:
        raise DomainError("target mode count below source")
    totals = total_number_distribution(state)
    tail = np.concatenate([np.cumsum(totals[::-1])[::-1][1:], [0.0]])
    cap = int(np.argmax(tail < cap_epsilon))
    cap = max(cap, 1)
    dim = math.comb(cap + n_total_modes, n_total_modes)
    if dim > max_dim:
        raise CapacityError(
            f"embedding needs {dim} basis states (cap {cap}), over the "
            f"budget of {max_dim}; use the moment backend for coherent "
            f"inputs or lower the input intensity"
        )
    target = FockSpace(n_total_modes, cap, total_photon_cap=cap)
    keep = src.occupations.sum(axis=1) <= cap
    occ = np.zeros((int(keep.sum()), n_total_modes), dtype=np.int64)
    occ[:, : src.n_modes] = src.occupations[keep]
    vec = np.zeros(target.dim, dtype=np.complex128)
    vec[target.index_of(occ)] = state.vector[keep]
    captured = float(np.linalg.norm(vec) ** 2)
    if captured <= 0.0:
        raise DomainError("state has no mass inside the embedding cap")
    vec /= math.sqrt(captured)
    trimmed = max(1.0 - captured, 0.0)
    meta = dict(state.metadata)
    meta["embedding_trimmed_mass"] = trimmed
    return QuantumState(target, vector=vec, metadata=meta), trimmed


def splitter_stage(state, cap_epsilon=1e-12, max_dim=DEFAULT_MAX_DIM):
    """Split each of three signal modes on a balanced beam splitter against
    vacuum, returning the six-mode output state (copies on modes 0-2 and
    3-5)."""
    network = build_splitter_stage()
    embedded, _ = embed_signal(
        state, network.n_total_modes, cap_epsilon, max_dim
    )
    return evolve_pure(embedded, network.elements)


@dataclass(frozen=True)
class DetectionStats:
    """Exact port statistics of a network run.

    `difference_means` are the raw detector differences; the
    `input_referred_difference_means` double them, the reading appropriate
    when the state passed through a copy-splitting stage before the
    network. `metadata` records backend bookkeeping (embedding cap and
    trimmed mass for the Fock route)."""

    backend: str
    port_means: dict
    difference_means: dict
    difference_variances: dict
    input_referred_difference_means: dict
    metadata: dict


def _moment_stats(network, alphas):
    beta_in = np.zeros(network.n_total_modes, dtype=np.complex128)
    beta_in[: len(alphas)] = alphas
    beta = network.unitary @ beta_in
    intensities = np.abs(beta) ** 2
    port_means = {
        name: float(intensities[port])
        for name, port in sorted(network.port_labels.items())
    }
    diffs, variances = {}, {}
    for key, (pos, neg) in DIFFERENCE_PAIRS.items():
        if pos not in network.port_labels or neg not in network.port_labels:
            continue
        a = intensities[network.port_labels[pos]]
        b = intensities[network.port_labels[neg]]
        diffs[key] = float(a - b)
        variances[key] = float(a + b)
    return DetectionStats(
        backend="moment",
        port_means=port_means,
        difference_means=diffs,
        difference_variances=variances,
        input_referred_difference_means={k: 2 * v for k, v in diffs.items()},
        metadata={},
    )


def _fock_stats(network, state, cap_epsilon, max_dim):
    embedded, trimmed = embed_signal(
        state, network.n_total_modes, cap_epsilon, max_dim
    )
    out = evolve_pure(embedded, network.elements)
    probs = out.occupation_probabilities()
    occ = out.space.occupations
    port_means = {
        name: float(np.dot(occ[:, port], probs))
        for name, port in sorted(network.port_labels.items())
    }
    diffs, variances = {}, {}
    for key, (pos, neg) in DIFFERENCE_PAIRS.items():
        if pos not in network.port_labels or neg not in network.port_labels:
            continue
        d = (
            occ[:, network.port_labels[pos]]
            - occ[:, network.port_labels[neg]]
        ).astype(np.float64)
        mean = float(np.dot(d, probs))
        var = float(np.dot(d * d, probs) - mean**2)
        diffs[key] = mean
        variances[key] = max(var, 0.0)
    return DetectionStats(
        backend="fock",
        port_means=port_means,
        difference_means=diffs,
        difference_variances=variances,
        input_referred_difference_means={k: 2 * v for k, v in diffs.items()},
        metadata={
            "embedding_cap": out.space.total_photon_cap,
            "embedding_trimmed_mass": trimmed,
            "embedding_dim": out.space.dim,
        },
    )


def detection_stats(network, state, backend="auto", cap_epsilon=1e-12,
                    max_dim=DEFAULT_MAX_DIM):
    """Means and variances of all detector counts and pair differences.

    Backends: "moment" transports coherent amplitudes (exact for product
    coherent inputs, any intensity); "fock" evolves the truncated state
    vector (exact for any pure input that fits the capacity budget);
    "auto" picks moment for coherent-product states and fock otherwise.
    """
    alphas = state.metadata.get("alphas")
    if backend == "auto":
        backend = "moment" if alphas is not None else "fock"
    if backend == "moment":
        if alphas is None:
            raise DomainError(
                "moment backend needs a product coherent input"
            )
        return _moment_stats(network, np.asarray(alphas, dtype=np.complex128))
    if backend == "fock":
        return _fock_stats(network, state, cap_epsilon, max_dim)
    raise DomainError(f"unknown backend {backend!r}")


@dataclass(frozen=True)
class HomodyneEstimate:
    """Quadrature estimates recovered from detector differences with a
    strong coherent mode 3 as the phase reference.

    Quadratures are q_j = a_j e^{-i f} + a_j+ e^{i f} and
    p_j = i (a_j+ e^{i f} - a_j e^{-i f}) with f the control phase.
    `degree_p3` is the three-mode polarization degree of the full input;
    `strong_oscillator` flags |alpha3|^2 >= 100 (n1 + n2)."""

    q1: float
    p1: float
    q2: float
    p2: float
    reference_phase: float
    degree_p3: float
    strong_oscillator: bool


def homodyne_limit(network, signal, control):
    """Recover (<q1>, <p1>, <q2>, <p2>) from detector differences of the
    twelve-port at its phase setting and the setting with f1, f3 advanced
    by pi/2 (two settings make the 2x2 inversion well posed at any f).

    `signal` is a product coherent state of the first two modes (a state
    carrying coherent amplitudes, or a length-2 amplitude sequence);
    `control` is the coherent amplitude of mode 3 and must be nonzero."""
    if network.phases is None:
        raise DomainError("homodyne readout needs a twelve-port network")
    control = complex(control)
    if control == 0:
        raise DomainError("zero control amplitude: phase reference undefined")
    if isinstance(signal, QuantumState):
        alphas = signal.metadata.get("alphas")
        if alphas is None:
            raise DomainError(
                "signal must be a product coherent state for the "
                "amplitude-transport readout"
            )
        beta = np.asarray(alphas, dtype=np.complex128)[:2]
    else:
        beta = np.asarray(signal, dtype=np.complex128)
        if beta.shape != (2,):
            raise DomainError("signal amplitudes must have length 2")
    f1, f2, f3 = network.phases
    full = np.array([beta[0], beta[1], control])

    def run(phases):
        net = build_twelve_port(phases)
        stats = _moment_stats(net, full)
        return stats.difference_means

    base = run((f1, f2, f3))
    shifted = run((f1 + HALF_PI, f2, f3 + HALF_PI))
    mag = abs(control)
    a13 = 0.5 * mag * np.array(
        [
            [math.cos(f1), -math.sin(f1)],
            [-math.sin(f1), -math.cos(f1)],
        ]
    )
    q1, p1 = np.linalg.solve(a13, [base["13"], shifted["13"]])
    a23 = 0.5 * mag * np.array(
        [
            [math.cos(f3), math.sin(f3)],
            [-math.sin(f3), math.cos(f3)],
        ]
    )
    q2, p2 = np.linalg.solve(a23, [base["23"], shifted["23"]])
    corr = np.outer(np.conj(full), full)
    report = report_from_correlations(corr)
    n12 = abs(beta[0]) ** 2 + abs(beta[1]) ** 2
    return HomodyneEstimate(
        q1=float(q1),
        p1=float(p1),
        q2=float(q2),
        p2=float(p2),
        reference_phase=float(np.angle(control)),
        degree_p3=report.degree,
        strong_oscillator=bool(mag**2 >= 100.0 * n12),
    )
