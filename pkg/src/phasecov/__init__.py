"""Phase-covariant quantum cloning of qubits with known spin-z and of qudits."""
from .errors import (
    AuditError,
    ContractError,
    DimensionError,
    DomainError,
    InvariantError,
    MachineMismatchError,
    PhaseCovError,
)
from .params import MachineParams
from .qubit import (
    BlochState,
    CloneReport,
    build_isometry,
    clone,
    d1_closed,
    d2_closed,
    fidelity_closed,
    machine_preset,
    optimal_mu,
    ppt_matrix_closed,
)
from .qudit import (
    CartanSet,
    QuditState,
    a_psi,
    a_psi_from_cartan,
    build_isometry_d,
    fidelity_qudit_closed,
    optimal_mu_numeric,
    optimal_mu_qutrit,
    qutrit_state,
    reference_fidelities,
)

__version__ = "0.1.0"
