"""Dense matrix exponentials and distance-up-to-global-phase.

This is the brute-force oracle layer: a Hermitian propagator via
eigendecomposition and a general exponential via scaling and squaring with a
Taylor kernel.  Everything operates on plain complex square ndarrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EngineError",
    "NotHermitian",
    "EigenFailure",
    "NonFinite",
    "ConvergenceFailure",
    "DimensionMismatch",
    "PhaseAlignedDistance",
    "expm_hermitian",
    "expm_general",
    "phase_distance",
    "is_unitary",
]


class EngineError(ValueError):
    pass


class NotHermitian(EngineError):
    pass


class EigenFailure(EngineError):
    pass


class NonFinite(EngineError):
    pass


class ConvergenceFailure(EngineError):
    pass


class DimensionMismatch(EngineError):
    pass


HERMITIAN_TOL = 1e-10

# One-norm below which the Taylor series is summed directly; larger inputs are
# halved until they fit.  0.25 keeps the series under ~20 terms at double eps.
_HALVING_THRESHOLD = 0.25
_MAX_TERMS = 64


def _as_square(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    return a


def expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i t H) for Hermitian H, by eigendecomposition.

    The result is unitary up to a few times machine epsilon.
    """
    h = _as_square(h, "H")
    defect = float(np.linalg.norm(h - h.conj().T))
    if defect > HERMITIAN_TOL * max(1.0, float(np.linalg.norm(h))):
        raise NotHermitian(f"Hermiticity defect {defect:.3e} exceeds {HERMITIAN_TOL}")
    try:
        evals, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    return (vecs * np.exp(-1j * t * evals)) @ vecs.conj().T


def expm_general(a: np.ndarray) -> np.ndarray:
    """Matrix exponential of a general complex matrix.

    Scaling and squaring: halve A until its one-norm is below 0.25, sum the
    Taylor series to machine precision, then square back.  Nilpotent inputs
    terminate the series exactly.
    """
    a = _as_square(a, "A")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix contains non-finite entries")
    n = a.shape[0]
    norm1 = float(np.max(np.sum(np.abs(a), axis=0))) if n else 0.0
    squarings = 0
    if norm1 > _HALVING_THRESHOLD:
        squarings = int(math.ceil(math.log2(norm1 / _HALVING_THRESHOLD)))
    b = a / (2.0**squarings)
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, _MAX_TERMS + 1):
        term = term @ b / k
        result = result + term
        if np.max(np.abs(term)) <= 1e-20 * max(1.0, float(np.max(np.abs(result)))):
            break
    else:
        raise ConvergenceFailure(
            f"Taylor series did not converge within {_MAX_TERMS} terms"
        )
    for _ in range(squarings):
        result = result @ result
    if not np.all(np.isfinite(result)):
        raise ConvergenceFailure("overflow while squaring")
    return result


@dataclass(frozen=True)
class PhaseAlignedDistance:
    """Frobenius distance after removing the optimal global phase."""

    distance: float
    phase: float


def phase_distance(u: np.ndarray, v: np.ndarray) -> PhaseAlignedDistance:
    """min over phi of ||U - e^{i phi} V||_F together with the minimizing phi.

    The optimum is phi = arg tr(V^dag U).  When that trace (essentially)
    vanishes the minimizer is not unique; phi = 0 is reported and the distance
    is then just sqrt(||U||^2 + ||V||^2).
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise DimensionMismatch(f"shape {u.shape} vs {v.shape}")
    overlap = complex(np.trace(v.conj().T @ u))
    scale = max(1.0, float(np.linalg.norm(u)) * float(np.linalg.norm(v)))
    if abs(overlap) <= 1e-14 * scale:
        phase = 0.0
    else:
        phase = float(np.angle(overlap))
    distance = float(np.linalg.norm(u - np.exp(1j * phase) * v))
    return PhaseAlignedDistance(distance=distance, phase=phase)


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = _as_square(u, "U")
    gram = u.conj().T @ u
    return float(np.linalg.norm(gram - np.eye(u.shape[0]))) <= tol
