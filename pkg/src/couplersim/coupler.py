"""Physics core of the bandgap quantum coupler.

A central mode a is linearly coupled, on resonance, to N mutually isolated
outer modes b_j:

    H = w a^dag a + w sum_j b_j^dag b_j + sum_j g_j (a^dag b_j + a b_j^dag)

Because the free part is w times the total number operator and the exchange
interaction conserves excitation, the two parts commute and the propagator
splits into a free phase times a pure interaction factor.  The interaction
factor admits an exact symmetric disentangling into three one-generator
exponentials,

    exp(eps (A+ + A-)) = exp(eps f A+) exp(eps h A-) exp(eps f A+),

with A+ = sum_j g_j a^dag b_j, A- = A+^dag, eps = -i t, and coefficients

    f = tan(sqrt(gamma)/2) / sqrt(gamma),   h = sin(sqrt(gamma)) / sqrt(gamma),

where gamma = t^2 sum_j g_j^2.  The identity is exact on every excitation
block that the truncation represents faithfully (K <= n_max); f diverges when
sqrt(gamma) hits an odd multiple of pi, and evaluation is refused near those
points rather than clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import fock
from .engine import expm_general, expm_hermitian
from .fock import DenseOperator, LayoutMismatch, ModeLayout

__all__ = [
    "NearSingularity",
    "CouplerParams",
    "FactorCoefficients",
    "FactorizationReport",
    "AlgebraCheck",
    "singularity_margin",
    "build_hamiltonian",
    "exact_propagator",
    "factor_coefficients",
    "factorized_propagator",
    "verify_factorization",
    "algebra_check",
]

# Refuse to evaluate tan-based coefficients closer than this to a pole.
DELTA_SINGULARITY = 1e-6

# Below this angle the closed forms are 0/0-prone; use their power series.
_SERIES_CROSSOVER = 1e-4


class NearSingularity(ValueError):
    """sqrt(gamma) is too close to an odd multiple of pi for the tan coefficient."""

    def __init__(self, sqrt_gamma: float, margin: float, limit: float):
        self.sqrt_gamma = sqrt_gamma
        self.margin = margin
        self.limit = limit
        super().__init__(
            f"sqrt(gamma)={sqrt_gamma:.12g} is within {margin:.3e} of an odd "
            f"multiple of pi (limit {limit:.1e})"
        )


@dataclass(frozen=True)
class CouplerParams:
    """Coupler configuration: N outer modes, frequency w, couplings g_1..g_N.

    Couplings are real, at least one nonzero; hbar = 1 throughout.
    """

    n_outer: int
    w: float
    couplings: tuple[float, ...]
    n_max: int

    def __post_init__(self) -> None:
        if self.n_outer < 1:
            raise ValueError(f"need at least one outer mode, got {self.n_outer}")
        gs = tuple(float(g) for g in self.couplings)
        if len(gs) != self.n_outer:
            raise ValueError(
                f"expected {self.n_outer} couplings, got {len(gs)}"
            )
        if not all(math.isfinite(g) for g in gs):
            raise ValueError("couplings must be finite and real")
        if all(g == 0.0 for g in gs):
            raise ValueError("at least one coupling must be nonzero")
        if self.n_max < 1:
            raise ValueError(f"n_max must be at least 1, got {self.n_max}")
        object.__setattr__(self, "couplings", gs)
        object.__setattr__(self, "w", float(self.w))

    @classmethod
    def equal_coupling(cls, n_outer: int, g: float, w: float, n_max: int) -> "CouplerParams":
        """Convenience constructor for the g_j = g (for all j) case."""
        return cls(n_outer=n_outer, w=w, couplings=(g,) * n_outer, n_max=n_max)

    def layout(self) -> ModeLayout:
        return ModeLayout(mode_count=self.n_outer + 1, cutoff=self.n_max + 1)

    @property
    def coupling_norm(self) -> float:
        return math.sqrt(sum(g * g for g in self.couplings))

    def gamma(self, t: float) -> float:
        return t * t * sum(g * g for g in self.couplings)

    def sqrt_gamma(self, t: float) -> float:
        return abs(t) * self.coupling_norm


def singularity_margin(sqrt_gamma: float) -> float:
    """Distance from sqrt_gamma >= 0 to the nearest odd multiple of pi."""
    return abs(sqrt_gamma % (2.0 * math.pi) - math.pi)


def _check_layout(params: CouplerParams, layout: ModeLayout) -> None:
    if layout.mode_count != params.n_outer + 1 or layout.cutoff != params.n_max + 1:
        raise LayoutMismatch(
            f"layout ({layout.mode_count} modes, cutoff {layout.cutoff}) does not "
            f"match params (N={params.n_outer}, n_max={params.n_max})"
        )


def _raising_part(params: CouplerParams, layout: ModeLayout) -> np.ndarray:
    """sum_j g_j a^dag b_j as a dense matrix."""
    a_dag = fock.creation(layout, 0).entries
    out = np.zeros((layout.dim, layout.dim), dtype=complex)
    for j, g in enumerate(params.couplings, start=1):
        if g != 0.0:
            out += g * (a_dag @ fock.annihilation(layout, j).entries)
    return out


def build_hamiltonian(params: CouplerParams, layout: ModeLayout) -> DenseOperator:
    """w * (total number) + sum_j g_j (a^dag b_j + a b_j^dag)."""
    _check_layout(params, layout)
    raising = _raising_part(params, layout)
    h = params.w * fock.total_number(layout).entries + raising + raising.conj().T
    return DenseOperator(h, layout)


def exact_propagator(params: CouplerParams, layout: ModeLayout, t: float) -> DenseOperator:
    """exp(-i t H), the brute-force reference propagator."""
    h = build_hamiltonian(params, layout)
    return DenseOperator(expm_hermitian(h.entries, t), layout)


class FactorCoefficients(NamedTuple):
    """Coefficients of the symmetric three-factor disentangling.

    raising_coeff multiplies the two outer exp(eps . sum g_j a^dag b_j)
    factors, lowering_coeff the middle exp(eps . sum g_j a b_j^dag) one.
    """

    raising_coeff: float
    lowering_coeff: float
    sqrt_gamma: float


def factor_coefficients(
    params: CouplerParams, t: float, delta_sing: float = DELTA_SINGULARITY
) -> FactorCoefficients:
    """tan- and sinc-type coefficients at interaction angle sqrt(gamma).

    Raises NearSingularity when sqrt(gamma) is within delta_sing of an odd
    multiple of pi, where the tan coefficient diverges.
    """
    sg = params.sqrt_gamma(t)
    margin = singularity_margin(sg)
    if margin <= delta_sing:
        raise NearSingularity(sg, margin, delta_sing)
    if sg < _SERIES_CROSSOVER:
        f = 0.5 + sg**2 / 24.0 + sg**4 / 240.0
        h = 1.0 - sg**2 / 6.0 + sg**4 / 120.0
    else:
        f = math.tan(sg / 2.0) / sg
        h = math.sin(sg) / sg
    return FactorCoefficients(raising_coeff=f, lowering_coeff=h, sqrt_gamma=sg)


def factorized_propagator(
    params: CouplerParams, layout: ModeLayout, t: float
) -> DenseOperator:
    """Disentangled propagator: free phase times the three interaction factors."""
    _check_layout(params, layout)
    coeffs = factor_coefficients(params, t)
    raising = _raising_part(params, layout)
    lowering = raising.conj().T
    eps = -1j * t
    outer = expm_general(eps * coeffs.raising_coeff * raising)
    middle = expm_general(eps * coeffs.lowering_coeff * lowering)
    free = expm_hermitian(params.w * fock.total_number(layout).entries, t)
    return DenseOperator(free @ outer @ middle @ outer, layout)


@dataclass(frozen=True)
class FactorizationReport:
    """Per-block distances between the exact and disentangled propagators.

    Only blocks with K <= n_max are reported; higher blocks see truncation
    artifacts by construction.  Distances are plain Frobenius norms, with no
    global-phase allowance: the identity asserts operator equality.
    """

    block_distances: tuple[tuple[int, float], ...]
    max_block_distance: float
    sqrt_gamma: float
    singularity_margin: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_block_distance <= self.tolerance


def verify_factorization(
    params: CouplerParams, layout: ModeLayout, t: float, tol: float = 1e-8
) -> FactorizationReport:
    """Compare the disentangled product against the eigendecomposition oracle."""
    exact = exact_propagator(params, layout, t).entries
    fact = factorized_propagator(params, layout, t).entries
    distances = []
    for k, idx in fock.excitation_blocks(layout):
        if k > layout.n_max:
            continue
        sub = np.ix_(idx, idx)
        distances.append((k, float(np.linalg.norm(exact[sub] - fact[sub]))))
    sg = params.sqrt_gamma(t)
    return FactorizationReport(
        block_distances=tuple(distances),
        max_block_distance=max(d for _, d in distances),
        sqrt_gamma=sg,
        singularity_margin=singularity_margin(sg),
        tolerance=tol,
    )


class AlgebraCheck(NamedTuple):
    """Worst commutator residual and the ladder sign convention that holds.

    sign_convention "+" means [L3, L+] = +kappa L+ (and [L3, L-] = -kappa L-)
    with kappa = eps^2 sum g_j^2; "-" is the overall opposite choice.
    """

    residual: float
    sign_convention: str


def algebra_check(params: CouplerParams, layout: ModeLayout, t: float) -> AlgebraCheck:
    """Residuals of the angular-momentum-type relations among the generators.

    L+ = eps sum_j g_j a^dag b_j, L- carries the transposed mode structure
    with the same eps, and L3 = (eps^2/2)(sum g_j^2 a^dag a -
    sum_ij g_i g_j b_i^dag b_j).  Checks [L+, L-] = 2 L3 plus the L3 ladder
    relations under both sign conventions, restricted to blocks K <= n_max - 1
    so commutator products stay representable, and reports the convention with
    the smaller residual.
    """
    _check_layout(params, layout)
    if t == 0.0:
        raise ValueError("algebra check needs t != 0")
    eps = -1j * t
    raising = _raising_part(params, layout)
    l_plus = eps * raising
    l_minus = eps * raising.conj().T
    gs = params.couplings
    g_sq = sum(g * g for g in gs)
    n_central = fock.number_operator(layout, 0).entries
    cross = np.zeros((layout.dim, layout.dim), dtype=complex)
    for i, gi in enumerate(gs, start=1):
        b_i_dag = fock.creation(layout, i).entries
        for j, gj in enumerate(gs, start=1):
            if gi * gj != 0.0:
                cross += gi * gj * (b_i_dag @ fock.annihilation(layout, j).entries)
    l3 = 0.5 * eps**2 * (g_sq * n_central - cross)
    kappa = eps**2 * g_sq

    def comm(x, y):
        return x @ y - y @ x

    shared = comm(l_plus, l_minus) - 2.0 * l3
    plus_side = (comm(l3, l_plus) - kappa * l_plus, comm(l3, l_minus) + kappa * l_minus)
    minus_side = (comm(l3, l_plus) + kappa * l_plus, comm(l3, l_minus) - kappa * l_minus)

    def block_norm(mat) -> float:
        worst = 0.0
        for k, idx in fock.excitation_blocks(layout):
            if k > layout.n_max - 1:
                continue
            sub = np.ix_(idx, idx)
            worst = max(worst, float(np.linalg.norm(mat[sub])))
        return worst

    base = block_norm(shared)
    resid_plus = max(base, *(block_norm(m) for m in plus_side))
    resid_minus = max(base, *(block_norm(m) for m in minus_side))
    if resid_plus <= resid_minus:
        return AlgebraCheck(residual=resid_plus, sign_convention="+")
    return AlgebraCheck(residual=resid_minus, sign_convention="-")
