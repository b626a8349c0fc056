"""Computational-basis diagnostics of the coupler dynamics.

Bridges the Fock-space propagator and the qubit gate family: finds the
interaction times at which the coupler acts as a pure phase pattern, tabulates
that pattern, extracts the effective gate, and quantifies entanglement via
Schmidt spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .coupler import CouplerParams, exact_propagator, factorized_propagator
from .fock import ModeLayout, StateVector
from .gates import (
    QubitGate,
    control_c_phase,
    control_phase_shift,
    identity_gate,
    relative_phase_2,
    relative_phase_3,
    swap_gate,
)

__all__ = [
    "UnequalCouplings",
    "FreePhaseMismatch",
    "TruncationTooSmall",
    "NotNormalized",
    "GateTimeSpec",
    "TruthTableRow",
    "TruthTable",
    "ScanHit",
    "SchmidtSpectrum",
    "gate_time",
    "truth_table",
    "extract_gate",
    "scan_times",
    "schmidt",
    "family_gates",
    "qubit_register_layout",
    "random_product_state",
]

FREE_PHASE_TOL = 1e-9


class UnequalCouplings(ValueError):
    pass


class FreePhaseMismatch(ValueError):
    pass


class TruncationTooSmall(ValueError):
    pass


class NotNormalized(ValueError):
    pass


@dataclass(frozen=True)
class GateTimeSpec:
    """An interaction time at which the coupler is a pure phase gate.

    t satisfies sqrt(N) g t = 2 pi k (the collective interaction winds back to
    the identity) and w t = (2m + 1) pi (odd free phase per excitation).
    c_effective = 2 pi / (t g) back-computes the constant in the t = 2 pi/(c g)
    convention; it equals sqrt(N)/k.
    """

    t: float
    k: int
    m: int
    c_effective: float


def gate_time(params: CouplerParams, k: int = 1) -> GateTimeSpec:
    """Smallest-winding gate times of the equal-coupling coupler.

    Requires g_j = g for all j; raises FreePhaseMismatch when w t misses every
    odd multiple of pi by more than 1e-9.
    """
    if k < 1:
        raise ValueError(f"winding number k must be positive, got {k}")
    g = params.couplings[0]
    if any(abs(gj - g) > 1e-12 * max(1.0, abs(g)) for gj in params.couplings):
        raise UnequalCouplings(
            f"gate times are defined for equal couplings, got {params.couplings}"
        )
    t = 2.0 * math.pi * k / (g * math.sqrt(params.n_outer))
    wt = params.w * t
    m = round((wt / math.pi - 1.0) / 2.0)
    if m < 0 or abs(wt - (2 * m + 1) * math.pi) > FREE_PHASE_TOL:
        raise FreePhaseMismatch(
            f"w*t = {wt:.12g} is not an odd multiple of pi (k={k}, w={params.w})"
        )
    return GateTimeSpec(t=t, k=k, m=m, c_effective=2.0 * math.pi / (t * g))


@dataclass(frozen=True)
class TruthTableRow:
    occupations: tuple[int, ...]
    phase: complex
    fidelity: float


@dataclass(frozen=True)
class TruthTable:
    """Diagonal survival of every computational input under the propagator.

    leakage is the worst case over inputs of sqrt(mass outside the
    computational subspace) plus the off-diagonal mass inside it.
    """

    rows: tuple[TruthTableRow, ...]
    leakage: float

    def to_json_dict(self) -> dict:
        return {
            "rows": [
                {
                    "input": "".join(str(n) for n in r.occupations),
                    "phase_re": float(r.phase.real),
                    "phase_im": float(r.phase.imag),
                    "fidelity": float(r.fidelity),
                }
                for r in self.rows
            ],
            "leakage": float(self.leakage),
        }

    def to_csv_rows(self) -> list[list]:
        out = [["input", "phase_re", "phase_im", "fidelity"]]
        for r in self.rows:
            out.append(
                [
                    "".join(str(n) for n in r.occupations),
                    repr(float(r.phase.real)),
                    repr(float(r.phase.imag)),
                    repr(float(r.fidelity)),
                ]
            )
        return out


def _require_truncation(params: CouplerParams, layout: ModeLayout) -> None:
    modes = layout.mode_count
    if layout.n_max < modes:
        raise TruncationTooSmall(
            f"need n_max >= {modes} so all computational blocks stay below the "
            f"cutoff, got n_max={layout.n_max}"
        )


def _computational_indices(layout: ModeLayout) -> np.ndarray:
    """Flat indices of the occupation-0/1 states, in binary order of the bits."""
    modes = layout.mode_count
    idx = []
    for code in range(2**modes):
        bits = [(code >> (modes - 1 - b)) & 1 for b in range(modes)]
        idx.append(layout.flat_index(bits))
    return np.asarray(idx)


def _propagator_matrix(params, layout, t, method) -> np.ndarray:
    if method == "exact":
        return exact_propagator(params, layout, t).entries
    if method == "factorized":
        return factorized_propagator(params, layout, t).entries
    raise ValueError(f"unknown propagator method {method!r}")


def truth_table(
    params: CouplerParams, layout: ModeLayout, t: float, method: str = "exact"
) -> TruthTable:
    """Evolve each computational basis state and record its diagonal phase."""
    _require_truncation(params, layout)
    u = _propagator_matrix(params, layout, t, method)
    comp = _computational_indices(layout)
    outside = np.setdiff1d(np.arange(layout.dim), comp)
    rows = []
    leakage = 0.0
    for idx in comp:
        col = u[:, idx]
        amp = complex(col[idx])
        fid = min(1.0, abs(amp))  # roundoff can push |amp| epsilon past 1
        phase = amp / abs(amp) if fid > 1e-12 else 1.0 + 0.0j
        # Complement of the computational mass; for unitary u this equals
        # 1 - sum over computational outputs, without the cancellation.
        escaped = math.sqrt(float(np.sum(np.abs(col[outside]) ** 2)))
        off_diag = float(np.sum(np.abs(col[comp]) ** 2) - abs(amp) ** 2)
        leakage = max(leakage, escaped + max(0.0, off_diag))
        rows.append(
            TruthTableRow(
                occupations=layout.occupations(int(idx)), phase=phase, fidelity=fid
            )
        )
    return TruthTable(rows=tuple(rows), leakage=leakage)


def extract_gate(
    params: CouplerParams, layout: ModeLayout, t: float
) -> tuple[QubitGate, float]:
    """Restriction of the exact propagator to the computational subspace.

    Returns the restriction as a QubitGate (one qubit per mode) together with
    its unitarity defect ||R^dag R - I||_F as the leakage figure.
    """
    _require_truncation(params, layout)
    u = exact_propagator(params, layout, t).entries
    comp = _computational_indices(layout)
    restriction = u[np.ix_(comp, comp)]
    gram = restriction.conj().T @ restriction
    leakage = float(np.linalg.norm(gram - np.eye(comp.size)))
    gate = QubitGate(layout.mode_count, restriction, f"extracted(t={t:.6g})")
    return gate, leakage


def family_gates(qubit_count: int) -> list[QubitGate]:
    """Candidate gates the scanner matches against, per register size."""
    candidates = [identity_gate(qubit_count)]
    if qubit_count == 2:
        candidates += [
            relative_phase_2(math.pi),
            control_c_phase(),
            control_phase_shift(),
            swap_gate(),
        ]
    elif qubit_count == 3:
        candidates.append(relative_phase_3())
    return candidates


class ScanHit(NamedTuple):
    t: float
    label: str
    distance: float


def scan_times(
    params: CouplerParams,
    layout: ModeLayout,
    t_min: float,
    t_max: float,
    steps: int,
    tol: float,
) -> list[ScanHit]:
    """Grid search for times where the coupler realizes a family gate.

    A grid point is a hit when the extracted gate has leakage <= tol and sits
    within Frobenius distance tol of one of the family gates.  Results are
    ordered by t.
    """
    if steps < 2:
        raise ValueError(f"need at least 2 grid points, got {steps}")
    if not t_min < t_max:
        raise ValueError(f"need t_min < t_max, got [{t_min}, {t_max}]")
    candidates = family_gates(layout.mode_count)
    hits = []
    for t in np.linspace(t_min, t_max, steps):
        gate, leakage = extract_gate(params, layout, float(t))
        if leakage > tol:
            continue
        best_dist, best_label = min(
            (float(np.linalg.norm(gate.matrix - c.matrix)), c.label)
            for c in candidates
        )
        if best_dist <= tol:
            hits.append(ScanHit(t=float(t), label=best_label, distance=best_dist))
    return hits


class SchmidtSpectrum(NamedTuple):
    singular_values: np.ndarray
    entropy_bits: float


def schmidt(state: StateVector, cut: int) -> SchmidtSpectrum:
    """Schmidt spectrum of a normalized pure state across modes [0, cut).

    Singular values come back descending; the entropy is
    -sum sigma^2 log2 sigma^2 in bits.
    """
    modes = state.layout.mode_count
    if not 1 <= cut < modes:
        raise ValueError(f"cut must satisfy 1 <= cut < {modes}, got {cut}")
    nrm = float(np.linalg.norm(state.amplitudes))
    if abs(nrm - 1.0) > 1e-9:
        raise NotNormalized(f"state norm {nrm:.12g} is not 1")
    d = state.layout.cutoff
    matrix = state.amplitudes.reshape(d**cut, d ** (modes - cut))
    svals = np.linalg.svd(matrix, compute_uv=False)
    probs = svals**2
    positive = probs[probs > 0.0]
    entropy = float(-np.sum(positive * np.log2(positive)))
    return SchmidtSpectrum(singular_values=svals, entropy_bits=entropy)


def qubit_register_layout(n_qubits: int) -> ModeLayout:
    """Layout viewing an n-qubit register as n modes truncated at one quantum."""
    return ModeLayout(mode_count=n_qubits, cutoff=2)


def random_product_state(
    rng: np.random.Generator, n_qubits: int, min_magnitude: float = 0.1
) -> np.ndarray:
    """Random product state whose single-qubit amplitudes all clear a floor.

    Each qubit is drawn Haar-like (normalized complex Gaussian pair) and
    redrawn until both amplitude magnitudes are at least min_magnitude.
    """
    out = np.array([1.0 + 0.0j])
    for _ in range(n_qubits):
        while True:
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            v /= np.linalg.norm(v)
            if float(np.min(np.abs(v))) >= min_magnitude:
                break
        out = np.kron(out, v)
    return out
