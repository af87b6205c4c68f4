"""Structured-text (JSON-compatible) records for states, networks, and
configs, plus the canonical form used for config hashing.

Floats serialize through Python's shortest round-trip repr, so a record
written and read back reproduces the original values bit for bit, and
the canonical JSON of a config is byte-stable across runs.
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import DomainError
from .fock import FockSpace, QuantumState
from .network import Element, ModeNetwork


def _metadata_to_record(metadata):
    """JSON-safe copy of state metadata; complex entries become
    [real, imag] pairs tagged by key."""
    record = {}
    for key, value in metadata.items():
        if key == "alphas":
            arr = np.asarray(value, dtype=np.complex128)
            record[key] = [[float(a.real), float(a.imag)] for a in arr]
        else:
            record[key] = float(value)
    return record


def _metadata_from_record(record):
    metadata = {}
    for key, value in record.items():
        if key == "alphas":
            metadata[key] = np.array(
                [complex(re, im) for re, im in value], dtype=np.complex128
            )
        else:
            metadata[key] = float(value)
    return metadata


def state_to_record(state):
    """Record form of a state: space descriptor, kind, and the nonzero
    entries (amplitudes for pure states, matrix entries for mixed ones)
    listed in occupation-basis order with occupations spelled out."""
    space = state.space
    record = {
        "space": {
            "n_modes": space.n_modes,
            "cutoff": space.cutoff,
            "cap": space.total_photon_cap,
        },
        "kind": state.kind,
    }
    occ = space.occupations
    if state.vector is not None:
        idx = np.flatnonzero(state.vector)
        record["amplitudes"] = [
            [occ[i].tolist(), float(state.vector[i].real),
             float(state.vector[i].imag)]
            for i in idx
        ]
    else:
        rows, cols = np.nonzero(state.density)
        record["matrix_entries"] = [
            [occ[r].tolist(), occ[c].tolist(),
             float(state.density[r, c].real),
             float(state.density[r, c].imag)]
            for r, c in zip(rows, cols)
        ]
    if state.metadata:
        record["metadata"] = _metadata_to_record(state.metadata)
    return record


def record_to_state(record):
    """Rebuild a state from its record form."""
    try:
        sp = record["space"]
        space = FockSpace(sp["n_modes"], sp["cutoff"],
                          total_photon_cap=sp.get("cap"))
        kind = record["kind"]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed state record: {exc}") from None
    metadata = _metadata_from_record(record.get("metadata", {})) or None
    if kind == "pure":
        vec = np.zeros(space.dim, dtype=np.complex128)
        for occ, re, im in record["amplitudes"]:
            vec[space.index_of(occ)] = complex(re, im)
        return QuantumState(space, vector=vec, metadata=metadata)
    if kind == "mixed":
        rho = np.zeros((space.dim, space.dim), dtype=np.complex128)
        for row_occ, col_occ, re, im in record["matrix_entries"]:
            rho[space.index_of(row_occ), space.index_of(col_occ)] = complex(
                re, im
            )
        return QuantumState(space, density=rho, metadata=metadata)
    raise DomainError(f"unknown state kind {kind!r}")


def network_to_record(network):
    """Record form of a network: ordered element list plus port naming."""
    elements = []
    for el in network.elements:
        if el.kind == "bs":
            elements.append({"bs": list(el.modes)})
        else:
            elements.append({"phase": [el.modes[0], el.angle]})
    record = {
        "n_total_modes": network.n_total_modes,
        "elements": elements,
        "port_labels": dict(network.port_labels),
        "vacuum_ports": list(network.vacuum_ports),
    }
    if network.phases is not None:
        record["phases"] = list(network.phases)
    return record


def record_to_network(record):
    """Rebuild a network from its record form (unitarity is re-checked
    at construction)."""
    elements = []
    try:
        for entry in record["elements"]:
            if "bs" in entry:
                i, j = entry["bs"]
                elements.append(Element(kind="bs", modes=(int(i), int(j))))
            elif "phase" in entry:
                mode, angle = entry["phase"]
                elements.append(
                    Element(kind="phase", modes=(int(mode),),
                            angle=float(angle))
                )
            else:
                raise DomainError(f"unknown element record {entry!r}")
        phases = record.get("phases")
        return ModeNetwork(
            n_total_modes=int(record["n_total_modes"]),
            elements=tuple(elements),
            port_labels={k: int(v) for k, v in record["port_labels"].items()},
            vacuum_ports=tuple(int(v) for v in record["vacuum_ports"]),
            phases=tuple(float(p) for p in phases) if phases else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed network record: {exc}") from None


def canonical_json(obj):
    """Deterministic JSON text: sorted keys, no whitespace variance."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


def config_hash(obj):
    """Hex digest identifying a config (or any JSON-able document)."""
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()
