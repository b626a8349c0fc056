"""Conditional phase gates on small qubit registers.

Basis order is |j1 j2 ... jn> with j1 most significant, matching the Fock
layout of the coupler (j1 is the central mode).  Everything in the family is
diagonal in the computational basis except SWAP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import phase_distance

__all__ = [
    "QubitGate",
    "one_qubit_phase",
    "control_c_phase",
    "control_phase_shift",
    "swap_gate",
    "relative_phase_2",
    "relative_phase_3",
    "identity_gate",
    "compose",
    "equal_up_to_phase",
]


@dataclass(frozen=True)
class QubitGate:
    """A matrix on an n-qubit register with a human-readable label.

    Family constructors produce exactly unitary matrices; gates extracted
    numerically from dynamics may carry a unitarity defect, which callers
    quantify separately as leakage.
    """

    qubit_count: int
    matrix: np.ndarray
    label: str

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        dim = 2**self.qubit_count
        if mat.shape != (dim, dim):
            raise ValueError(
                f"{self.label}: expected a {dim}x{dim} matrix, got {mat.shape}"
            )
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return 2**self.qubit_count

    def is_unitary(self, tol: float = 1e-12) -> bool:
        gram = self.matrix.conj().T @ self.matrix
        return float(np.linalg.norm(gram - np.eye(self.dim))) <= tol

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(amplitudes, dtype=complex)

    def to_json_matrix(self) -> list:
        """Row-major nested lists of [re, im] pairs."""
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]


def one_qubit_phase(theta: float) -> QubitGate:
    """diag(1, e^{i theta}): phases |1>, leaves |0> alone."""
    return QubitGate(1, np.diag([1.0, np.exp(1j * theta)]), f"one_qubit_phase({theta:g})")


def control_c_phase() -> QubitGate:
    """diag(1, 1, 1, -1): |m,n> -> e^{i m n pi} |m,n>."""
    return QubitGate(2, np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex), "control_c_phase")


def control_phase_shift() -> QubitGate:
    """diag(1, 1, -1, -1): |m,n> -> e^{i m pi} |m,n>, phase set by the control bit."""
    return QubitGate(2, np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex), "control_phase_shift")


def swap_gate() -> QubitGate:
    """|m,n> -> |n,m>."""
    mat = np.zeros((4, 4), dtype=complex)
    for m in (0, 1):
        for n in (0, 1):
            mat[2 * n + m, 2 * m + n] = 1.0
    return QubitGate(2, mat, "swap")


def relative_phase_2(theta: float) -> QubitGate:
    """diag(1, e^{i theta}, e^{i theta}, 1): phases exactly the unequal basis states.

    At theta = pi this is |j1,j2> -> e^{i pi (j1 - j2)} |j1,j2>, the
    conditional gate realized by the coupler at its gate time.
    """
    ph = np.exp(1j * theta)
    return QubitGate(2, np.diag([1.0, ph, ph, 1.0]), f"relative_phase_2({theta:g})")


def relative_phase_3() -> QubitGate:
    """|j1,j2,j3> -> e^{i pi (j1 - j2 - j3)} |j1,j2,j3>.

    Equivalently -1 on odd-parity basis states and +1 on even-parity ones;
    the two readings are checked against each other on construction.
    """
    exponent_form = np.empty(8, dtype=complex)
    parity_form = np.empty(8, dtype=complex)
    for j1 in (0, 1):
        for j2 in (0, 1):
            for j3 in (0, 1):
                idx = 4 * j1 + 2 * j2 + j3
                exponent_form[idx] = np.exp(1j * math.pi * (j1 - j2 - j3))
                parity_form[idx] = -1.0 if (j1 + j2 + j3) % 2 else 1.0
    if not np.allclose(exponent_form, parity_form, atol=1e-14):
        raise AssertionError("parity self-test failed for the three-qubit gate")
    return QubitGate(3, np.diag(parity_form), "relative_phase_3")


def identity_gate(n: int) -> QubitGate:
    return QubitGate(n, np.eye(2**n, dtype=complex), "identity")


def compose(gates: list[QubitGate]) -> QubitGate:
    """Matrix product of the gates; the rightmost gate acts first."""
    if not gates:
        raise ValueError("compose needs at least one gate")
    n = gates[0].qubit_count
    if any(g.qubit_count != n for g in gates):
        raise ValueError("cannot compose gates on different register sizes")
    mat = np.eye(2**n, dtype=complex)
    for g in gates:
        mat = mat @ g.matrix
    return QubitGate(n, mat, "*".join(g.label for g in gates))


def equal_up_to_phase(a: QubitGate, b: QubitGate, tol: float = 1e-10) -> tuple[bool, float]:
    """Whether A = e^{i phi} B within tol, and the aligning phi."""
    aligned = phase_distance(a.matrix, b.matrix)
    return aligned.distance <= tol, aligned.phase
