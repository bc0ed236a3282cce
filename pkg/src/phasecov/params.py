"""Cloning-machine parameters shared by the qubit and qudit machines."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InvariantError

CONSTRAINT_TOL = 1e-12


def mu_max(d: int) -> float:
    """Largest admissible mu for dimension ``d`` (the nu = 0 machine)."""
    return 1.0 / math.sqrt(2 * (d - 1))


@dataclass(frozen=True)
class MachineParams:
    """Parameter pair (mu, nu) of the symmetric cloner on d-level systems.

    Unitarity ties the two together, ``nu**2 + 2*(d-1)*mu**2 == 1``; use
    :meth:`from_mu` to derive nu rather than passing both by hand.
    """

    mu: float
    nu: float
    d: int = 2

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise InvariantError(f"dimension must be an integer >= 2, got {self.d}")
        if self.mu < 0 or self.nu < 0:
            raise InvariantError(f"mu and nu must be nonnegative, got mu={self.mu}, nu={self.nu}")
        resid = self.nu**2 + 2 * (self.d - 1) * self.mu**2 - 1.0
        if abs(resid) > CONSTRAINT_TOL:
            raise InvariantError(
                f"unitarity constraint violated: nu^2 + 2(d-1)mu^2 - 1 = {resid:.3e}"
            )

    @classmethod
    def from_mu(cls, mu: float, d: int = 2) -> "MachineParams":
        mu = float(mu)
        top = mu_max(d)
        if not (0.0 <= mu <= top + CONSTRAINT_TOL) or math.isnan(mu):
            raise DomainError(f"mu={mu} outside [0, {top:.12g}] for d={d}")
        mu = min(mu, top)
        nu = math.sqrt(max(0.0, 1.0 - 2 * (d - 1) * mu * mu))
        return cls(mu=mu, nu=nu, d=d)

    @classmethod
    def from_mu_sq(cls, mu_sq: float, d: int = 2) -> "MachineParams":
        if mu_sq < -CONSTRAINT_TOL:
            raise DomainError(f"mu^2={mu_sq} is negative")
        return cls.from_mu(math.sqrt(max(0.0, mu_sq)), d)
