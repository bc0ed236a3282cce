"""
One-parameter symmetric 1 -> 2 cloner for qubits.

The machine acts on input ``a``, blank ``b`` and ancilla ``x``::

    |0> -> nu |00>|0> + mu (|01> + |10>)|1>
    |1> -> nu |11>|1> + mu (|01> + |10>)|0>

with ``nu**2 + 2*mu**2 == 1``. Two routes are provided for every quantity:
the definitional one (isometry, joint pure state, partial traces, see
:func:`clone`) and the closed forms in ``*_closed``. The definitional route
is treated as ground truth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tensorcore as tc
from .errors import DomainError, MachineMismatchError
from .params import MachineParams, mu_max

UNIVERSAL_MU = 1.0 / math.sqrt(6.0)
EQUATORIAL_MU = 0.5

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BlochState:
    """Pure qubit state ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``.

    ``phi`` is wrapped into ``[0, 2 pi)``.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f"theta={self.theta} outside [0, pi]")
        object.__setattr__(self, "phi", math.fmod(self.phi, _TWO_PI) % _TWO_PI)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array(
            [math.cos(self.theta / 2), np.exp(1j * self.phi) * math.sin(self.theta / 2)],
            dtype=np.complex128,
        )

    @property
    def projector(self) -> np.ndarray:
        v = self.amplitudes
        return np.outer(v, v.conj())

    @property
    def sz(self) -> float:
        """Expectation value of sigma_z."""
        return math.cos(self.theta)


@dataclass(frozen=True)
class CloneReport:
    state: BlochState
    params: MachineParams
    rho_ab: np.ndarray
    rho_a: np.ndarray
    rho_b: np.ndarray
    fidelity: float
    d1: float
    d2: float
    ppt_spectrum: np.ndarray

    @property
    def ppt_min(self) -> float:
        return float(self.ppt_spectrum[0])


def _require_qubit(params: MachineParams) -> None:
    if params.d != 2:
        raise MachineMismatchError(f"qubit machine needs d=2, got d={params.d}")


def _basis_index(a: int, b: int, x: int) -> int:
    return (a * 2 + b) * 2 + x


def build_isometry(params: MachineParams) -> np.ndarray:
    """8x2 isometry ``V`` with column ``j`` holding the image of ``|j>``.

    Rows are ordered as ``a (x) b (x) x`` with the ancilla fastest.
    """
    _require_qubit(params)
    mu, nu = params.mu, params.nu
    v = np.zeros((8, 2), dtype=np.complex128)
    v[_basis_index(0, 0, 0), 0] = nu
    v[_basis_index(0, 1, 1), 0] = mu
    v[_basis_index(1, 0, 1), 0] = mu
    v[_basis_index(1, 1, 1), 1] = nu
    v[_basis_index(0, 1, 0), 1] = mu
    v[_basis_index(1, 0, 0), 1] = mu
    return v


def clone(state: BlochState, params: MachineParams) -> CloneReport:
    """Run the cloner on ``state`` by brute force and collect every figure of merit."""
    _require_qubit(params)
    psi = state.amplitudes
    out = build_isometry(params) @ psi
    joint = np.outer(out, out.conj())
    rho_ab = tc.partial_trace(joint, [2, 2, 2], keep={0, 1})
    rho_a = tc.partial_trace(rho_ab, [2, 2], keep={0})
    rho_b = tc.partial_trace(rho_ab, [2, 2], keep={1})

    proj = state.projector
    fidelity = float(np.real(psi.conj() @ rho_a @ psi))
    d1 = tc.hs_distance_sq(rho_ab, tc.kron(rho_a, rho_b))
    d2 = tc.hs_distance_sq(rho_ab, tc.kron(proj, proj))
    spectrum = tc.hermitian_eigenvalues(tc.partial_transpose(rho_ab, [2, 2], party=0))
    return CloneReport(state, params, rho_ab, rho_a, rho_b, fidelity, d1, d2, spectrum)


def rho_a_closed(state: BlochState, params: MachineParams) -> np.ndarray:
    """Single-copy output state in closed form."""
    _require_qubit(params)
    mu, nu = params.mu, params.nu
    c2 = math.cos(state.theta / 2) ** 2
    return (
        mu * mu * np.eye(2)
        + 2 * mu * nu * state.projector
        + (nu * nu - 2 * mu * nu) * np.diag([c2, 1.0 - c2])
    ).astype(np.complex128)


def fidelity_closed(theta: float, params: MachineParams) -> float:
    """``1/2 + mu nu + (nu^2/2 - mu nu) cos^2 theta``; independent of phi."""
    _require_qubit(params)
    mu, nu = params.mu, params.nu
    return 0.5 + mu * nu + (0.5 * nu * nu - mu * nu) * math.cos(theta) ** 2


def d1_coefficients(params: MachineParams) -> tuple[float, float, float, float, float]:
    """Coefficients ``(A8, A6, A4, A2, A0)`` of the D1 polynomial in cos^2(theta/2)."""
    m = params.mu**2
    a8 = 576 * m**4 - 768 * m**3 + 352 * m**2 - 64 * m + 4
    a6 = -1152 * m**4 + 1536 * m**3 - 704 * m**2 + 128 * m - 8
    a4 = 672 * m**4 - 928 * m**3 + 424 * m**2 - 72 * m + 4
    a2 = -96 * m**4 + 160 * m**3 - 72 * m**2 + 8 * m
    a0 = 4 * m**4 + 2 * m**2
    return a8, a6, a4, a2, a0


def d1_closed(theta: float, params: MachineParams) -> float:
    """Distance between the two-copy output and the product of its marginals."""
    _require_qubit(params)
    c = math.cos(theta / 2) ** 2
    a8, a6, a4, a2, a0 = d1_coefficients(params)
    return (((a8 * c + a6) * c + a4) * c + a2) * c + a0


def d2_closed(theta: float, params: MachineParams) -> float:
    """Distance between the two-copy output and two ideal copies."""
    _require_qubit(params)
    mu, nu = params.mu, params.nu
    return 8 * mu**4 - (6 * mu**4 + mu**2 + 2 * mu * nu - 1) * math.sin(theta) ** 2


def ppt_matrix_closed(state: BlochState, params: MachineParams) -> np.ndarray:
    """Partial transpose (on copy ``a``) of the two-copy output, entry by entry."""
    _require_qubit(params)
    mu, nu = params.mu, params.nu
    c = math.cos(state.theta / 2)
    s = math.sin(state.theta / 2)
    e = np.exp(1j * state.phi)
    ec = e.conjugate()
    m = mu * nu * s * c
    mu2 = mu * mu
    return np.array(
        [
            [nu * nu * c * c, m * ec, m * e, mu2],
            [m * e, mu2, 0.0, m * e],
            [m * ec, 0.0, mu2, m * ec],
            [mu2, m * ec, m * e, nu * nu * s * s],
        ],
        dtype=np.complex128,
    )


def optimal_mu_branches(theta: float) -> tuple[MachineParams, MachineParams]:
    """Both stationary points ``(plus, minus)`` of the fidelity at fixed theta.

    ``mu^2 = (1 +- 1/sqrt(1 + 2 tan^4 theta)) / 4``, rewritten as
    ``(1 +- cos^2 / sqrt(cos^4 + 2 sin^4)) / 4`` so it stays finite at pi/2.
    """
    if not (0.0 <= theta <= math.pi):
        raise DomainError(f"theta={theta} outside [0, pi]")
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    root = c2 / math.sqrt(c2 * c2 + 2.0 * s2 * s2)
    plus = MachineParams.from_mu_sq(0.25 * (1.0 + root))
    minus = MachineParams.from_mu_sq(0.25 * (1.0 - root))
    return plus, minus


def optimal_mu(theta: float) -> MachineParams:
    """Machine maximizing the fidelity for states with polar angle ``theta``.

    Both stationary branches are evaluated and the better one is returned;
    ties go to the minus branch.
    """
    plus, minus = optimal_mu_branches(theta)
    if fidelity_closed(theta, plus) > fidelity_closed(theta, minus):
        return plus
    return minus


def machine_preset(kind: str, *, theta: float | None = None, mu: float | None = None) -> MachineParams:
    """Named qubit machines: ``universal``, ``equatorial``, ``optimal`` (needs
    ``theta``) and ``custom`` (needs ``mu``)."""
    if kind == "universal":
        return MachineParams.from_mu(UNIVERSAL_MU)
    if kind == "equatorial":
        return MachineParams.from_mu(EQUATORIAL_MU)
    if kind == "optimal":
        if theta is None:
            raise DomainError("optimal machine needs theta")
        return optimal_mu(theta)
    if kind == "custom":
        if mu is None:
            raise DomainError("custom machine needs mu")
        if not (0.0 <= mu <= mu_max(2)):
            raise DomainError(f"mu={mu} outside [0, 1/sqrt(2)]")
        return MachineParams.from_mu(mu)
    raise DomainError(f"unknown machine kind {kind!r}")
