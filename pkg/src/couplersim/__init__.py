"""Numerical laboratory for a bandgap quantum coupler and its phase gates.

A central bosonic mode exchanges quanta with N outer modes on resonance.  The
package builds the truncated Fock-space dynamics, verifies an exact symmetric
disentangling of the propagator against a brute-force exponential oracle, and
reproduces the conditional phase-gate action of the coupler on two and three
qubits.
"""

from .analysis import (
    GateTimeSpec,
    ScanHit,
    SchmidtSpectrum,
    TruthTable,
    TruthTableRow,
    extract_gate,
    family_gates,
    gate_time,
    qubit_register_layout,
    random_product_state,
    scan_times,
    schmidt,
    truth_table,
)
from .coupler import (
    AlgebraCheck,
    CouplerParams,
    FactorCoefficients,
    FactorizationReport,
    NearSingularity,
    algebra_check,
    build_hamiltonian,
    exact_propagator,
    factor_coefficients,
    factorized_propagator,
    verify_factorization,
)
from .engine import (
    PhaseAlignedDistance,
    expm_general,
    expm_hermitian,
    is_unitary,
    phase_distance,
)
from .fock import (
    DenseOperator,
    ModeLayout,
    StateVector,
    annihilation,
    apply,
    basis_state,
    creation,
    excitation_blocks,
    inner_product,
    number_operator,
    total_number,
)
from .gates import (
    QubitGate,
    compose,
    control_c_phase,
    control_phase_shift,
    equal_up_to_phase,
    identity_gate,
    one_qubit_phase,
    relative_phase_2,
    relative_phase_3,
    swap_gate,
)

__version__ = "0.1.0"
