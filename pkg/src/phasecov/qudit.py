"""
Symmetric 1 -> 2 cloner for d-level systems.

    |j> -> nu |j,j>|j> + mu sum_{l != j} (|j,l> + |l,j>) |l>

with ``nu**2 + 2*(d-1)*mu**2 == 1``. The single-copy fidelity depends on the
input only through ``A = sum_k |alpha_k|**4``, which is also expressible via
expectation values of the diagonal (Cartan) generators of su(d).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import tensorcore as tc
from .errors import DimensionError, DomainError, InvariantError
from .params import CONSTRAINT_TOL, MachineParams, mu_max

NORM_TOL = 1e-12
_A_TOL = 1e-12
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class QuditState:
    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if self.d < 2 or amps.size != self.d:
            raise DimensionError(f"expected {self.d} amplitudes (d >= 2), got {amps.size}")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvariantError(f"state is not normalized (sum |alpha|^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex], normalize: bool = False) -> "QuditState":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if normalize:
            n = np.linalg.norm(amps)
            if n == 0:
                raise InvariantError("zero vector cannot be normalized")
            amps = amps / n
        return cls(amps.size, amps)

    @classmethod
    def basis(cls, d: int, k: int) -> "QuditState":
        amps = np.zeros(d, dtype=np.complex128)
        amps[k] = 1.0
        return cls(d, amps)

    @classmethod
    def equatorial(cls, d: int, phases: Sequence[float] | None = None) -> "QuditState":
        phases = np.zeros(d) if phases is None else np.asarray(phases, dtype=float)
        return cls(d, np.exp(1j * phases) / math.sqrt(d))

    @property
    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class CartanSet:
    """Diagonal traceless generators ``H_1 .. H_{d-1}`` with ``tr H_i H_j = delta_ij``."""

    d: int
    generators: tuple[np.ndarray, ...]

    @classmethod
    def standard(cls, d: int) -> "CartanSet":
        if d < 2:
            raise DimensionError(f"d must be >= 2, got {d}")
        gens = []
        for k in range(1, d):
            diag = np.zeros(d)
            diag[:k] = 1.0
            diag[k] = -k
            gens.append(np.diag(diag) / math.sqrt(k * (k + 1)))
        return cls(d, tuple(gens))

    def expectations(self, state: QuditState) -> np.ndarray:
        if state.d != self.d:
            raise DimensionError(f"state has d={state.d}, generators have d={self.d}")
        probs = np.abs(state.amplitudes) ** 2
        return np.array([float(probs @ np.diag(h)) for h in self.generators])


@dataclass(frozen=True)
class QuditCloneReport:
    state: QuditState
    params: MachineParams
    rho_ab: np.ndarray
    rho_a: np.ndarray
    rho_b: np.ndarray
    fidelity: float


def qutrit_state(theta: float, phi: float, alpha: float = 0.0, beta: float = 0.0) -> QuditState:
    """General qutrit ``cos t|0> + sin t cos p e^{ia}|1> + sin t sin p e^{ib}|2>``."""
    amps = np.array(
        [
            math.cos(theta),
            math.sin(theta) * math.cos(phi) * np.exp(1j * alpha),
            math.sin(theta) * math.sin(phi) * np.exp(1j * beta),
        ],
        dtype=np.complex128,
    )
    return QuditState(3, amps)


def state_with_a(a: float, d: int) -> QuditState:
    """A real state with the prescribed ``A`` (weight x on |0>, rest spread evenly)."""
    _check_a(a, d)
    x = (1.0 + math.sqrt(max(0.0, (d - 1) * (d * a - 1.0)))) / d
    probs = np.full(d, (1.0 - x) / (d - 1))
    probs[0] = x
    return QuditState.from_amplitudes(np.sqrt(np.clip(probs, 0.0, None)), normalize=True)


def _basis_index(a: int, b: int, x: int, d: int) -> int:
    return (a * d + b) * d + x


def build_isometry_d(params: MachineParams) -> np.ndarray:
    """``d^3 x d`` isometry of the d-level cloner, ancilla index fastest."""
    d, mu, nu = params.d, params.mu, params.nu
    resid = nu * nu + 2 * (d - 1) * mu * mu - 1.0
    if abs(resid) > CONSTRAINT_TOL:
        raise InvariantError(f"unitarity constraint violated by {resid:.3e}")
    v = np.zeros((d**3, d), dtype=np.complex128)
    for j in range(d):
        v[_basis_index(j, j, j, d), j] = nu
        for l in range(d):
            if l != j:
                v[_basis_index(j, l, l, d), j] += mu
                v[_basis_index(l, j, l, d), j] += mu
    return v


def clone_qudit(state: QuditState, params: MachineParams) -> QuditCloneReport:
    """Brute-force route: isometry, joint pure state, trace out the ancilla."""
    _match(state, params)
    d = params.d
    psi = state.amplitudes
    out = build_isometry_d(params) @ psi
    joint = np.outer(out, out.conj())
    rho_ab = tc.partial_trace(joint, [d, d, d], keep={0, 1})
    rho_a = tc.partial_trace(rho_ab, [d, d], keep={0})
    rho_b = tc.partial_trace(rho_ab, [d, d], keep={1})
    fidelity = float(np.real(psi.conj() @ rho_a @ psi))
    return QuditCloneReport(state, params, rho_ab, rho_a, rho_b, fidelity)


def _match(state: QuditState, params: MachineParams) -> None:
    if state.d != params.d:
        raise DimensionError(f"state has d={state.d}, machine has d={params.d}")


def rho_a_closed(state: QuditState, params: MachineParams) -> np.ndarray:
    _match(state, params)
    d, mu, nu = params.d, params.mu, params.nu
    probs = np.abs(state.amplitudes) ** 2
    return (
        mu * mu * np.eye(d)
        + ((d - 2) * mu * mu + 2 * mu * nu) * state.projector
        + (nu * nu - 2 * mu * nu) * np.diag(probs)
    ).astype(np.complex128)


def a_psi(state: QuditState) -> float:
    return float(np.sum(np.abs(state.amplitudes) ** 4))


def a_psi_from_cartan(state: QuditState, cartan: CartanSet | None = None) -> float:
    """``1/d + sum_k <H_k>^2``; equals :func:`a_psi` for every pure state."""
    if cartan is None:
        cartan = CartanSet.standard(state.d)
    h = cartan.expectations(state)
    return 1.0 / state.d + float(np.sum(h * h))


def _check_a(a: float, d: int) -> None:
    if not (1.0 / d - _A_TOL <= a <= 1.0 + _A_TOL):
        raise DomainError(f"A={a} outside [1/{d}, 1]")


def fidelity_qudit_closed(a: float, params: MachineParams) -> float:
    """Single-copy fidelity ``(d-1)mu^2 + 2 mu nu + (nu^2 - 2 mu nu) A``."""
    d, mu, nu = params.d, params.mu, params.nu
    _check_a(a, d)
    return (d - 1) * mu * mu + 2 * mu * nu + (nu * nu - 2 * mu * nu) * a


def qutrit_branches(a: float) -> tuple[MachineParams, MachineParams]:
    """The two stationary machines ``(plus, minus)`` for a qutrit with given A.

    ``mu^2 = (1 +- sqrt(eta/(eta+4))) / 8`` with ``eta = (1-2A)^2/(1-A)^2``.
    The ratio is evaluated as ``(1-2A)^2 / ((1-2A)^2 + 4(1-A)^2)`` so the
    A -> 1 limit (ratio 1) needs no special case.
    """
    _check_a(a, 3)
    num = (1.0 - 2.0 * a) ** 2
    ratio = num / (num + 4.0 * (1.0 - a) ** 2)
    root = math.sqrt(ratio)
    plus = MachineParams.from_mu_sq((1.0 + root) / 8.0, d=3)
    minus = MachineParams.from_mu_sq((1.0 - root) / 8.0, d=3)
    return plus, minus


def optimal_mu_qutrit(a: float) -> MachineParams:
    plus, minus = qutrit_branches(a)
    if fidelity_qudit_closed(a, plus) >= fidelity_qudit_closed(a, minus):
        return plus
    return minus


def branch_crossing(lo: float = 1.0 / 3.0, hi: float = 0.99, tol: float = 1e-13) -> float:
    """Locate the A where the fidelity-maximizing sign branch switches, by bisection."""

    def gap(a: float) -> float:
        plus, minus = qutrit_branches(a)
        return fidelity_qudit_closed(a, plus) - fidelity_qudit_closed(a, minus)

    g_lo = gap(lo)
    if g_lo * gap(hi) > 0:
        raise DomainError(f"branch fidelity gap has the same sign at A={lo} and A={hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = gap(mid)
        if g_mid == 0.0:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10) -> float:
    """Maximizer of a unimodal ``f`` on ``[lo, hi]``, bracket shrunk below ``tol``."""
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    best = max((lo, hi, 0.5 * (lo + hi)), key=f)
    return best


def fidelity_qudit_dmu(a: float, mu: float, d: int) -> float:
    """Derivative of :func:`fidelity_qudit_closed` along the constraint curve."""
    nu = math.sqrt(max(0.0, 1.0 - 2 * (d - 1) * mu * mu))
    if nu == 0.0:
        return -math.inf
    dnu = -2 * (d - 1) * mu / nu
    return 2 * (d - 1) * mu * (1.0 - 2.0 * a) + 2 * (1.0 - a) * (nu + mu * dnu)


def optimal_mu_numeric(d: int, a: float) -> MachineParams:
    """Fidelity-maximizing machine for dimension ``d`` at fixed A.

    Golden-section search brackets the maximizer to 1e-10; since the
    fidelity is flat there (roundoff limits mu to ~1e-8), the bracket
    midpoint is then polished by secant steps on the analytic derivative.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    _check_a(a, d)
    top = mu_max(d)

    def fid(mu: float) -> float:
        return fidelity_qudit_closed(a, MachineParams.from_mu(mu, d))

    mu = golden_section_max(fid, 0.0, top)
    mu = _polish(lambda m: fidelity_qudit_dmu(a, m, d), mu, 0.0, top)
    # the optimum can sit on either end (A = 1 gives mu = 0)
    mu = max((0.0, mu, top), key=fid)
    return MachineParams.from_mu(mu, d)


def _polish(df: Callable[[float], float], x: float, lo: float, hi: float, h: float = 1e-7) -> float:
    x0, x1 = max(lo, x - h), min(hi, x + h)
    if not (lo < x0 < x1 < hi):
        return x
    g0, g1 = df(x0), df(x1)
    best, g_best = x, abs(df(x))
    for _ in range(8):
        if g1 == g0:
            break
        x2 = x1 - g1 * (x1 - x0) / (g1 - g0)
        if not (lo < x2 < hi):
            break
        x0, g0, x1, g1 = x1, g1, x2, df(x2)
        if abs(g1) < g_best:
            best, g_best = x1, abs(g1)
    return best


def reference_fidelities(d: int) -> tuple[float, float]:
    """``(phase-covariant, universal)`` optimal fidelities for d-level cloning."""
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    f_pc = 1.0 / d + (d - 2 + math.sqrt(d * d + 4 * d - 4)) / (4.0 * d)
    f_univ = (d + 3) / (2.0 * (d + 1))
    return f_pc, f_univ


def qudit_machine(kind: str, d: int, *, a: float | None = None, mu: float | None = None) -> MachineParams:
    """Named d-level machines.

    ``universal`` cancels the state-dependent term (nu = 2 mu), ``equatorial``
    is the optimum at A = 1/d, ``optimal`` the optimum at the given ``a`` and
    ``custom`` takes ``mu`` directly.
    """
    if kind == "universal":
        return MachineParams.from_mu(1.0 / math.sqrt(2.0 * (d + 1)), d)
    if kind == "equatorial":
        return optimal_mu_qutrit(1.0 / 3.0) if d == 3 else optimal_mu_numeric(d, 1.0 / d)
    if kind == "optimal":
        if a is None:
            raise DomainError("optimal machine needs A")
        return optimal_mu_qutrit(a) if d == 3 else optimal_mu_numeric(d, a)
    if kind == "custom":
        if mu is None:
            raise DomainError("custom machine needs mu")
        if not (0.0 <= mu <= mu_max(d)):
            raise DomainError(f"mu={mu} outside [0, {mu_max(d):.12g}]")
        return MachineParams.from_mu(mu, d)
    raise DomainError(f"unknown machine kind {kind!r}")
