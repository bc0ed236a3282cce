"""
Figure sweeps, single-point evaluations and the D1 discrepancy report.

Everything here returns plain Python data (dicts, lists, dataclasses) and
renders to CSV or JSON with 12 significant digits, so identical inputs give
byte-identical output.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import qubit, qudit
from . import tensorcore as tc
from .errors import AuditError, DomainError
from .params import MachineParams

TARGETS = ("fig1", "fig2", "fig3", "fig4", "fig5", "custom")
MACHINES = ("universal", "equatorial", "optimal", "custom")

F_UNIVERSAL = 5.0 / 6.0
D1_UNIVERSAL = 19.0 / 324.0
D2_UNIVERSAL = 2.0 / 9.0
PPT_MIN_UNIVERSAL = 1.0 / 3.0 - math.sqrt(5.0) / 6.0
F_UNIVERSAL_QUTRIT = 0.75
D1_PRINTED_EQUATORIAL = 9.0 / 64.0

AUDIT_SAMPLES = 16
AUDIT_TOL = 1e-10
SIG_DIGITS = 12


def fmt(x: float) -> str:
    s = f"{float(x):.{SIG_DIGITS}g}"
    return "0" if s == "-0" else s


def _round(x: float) -> float:
    return float(fmt(x))


def _clean(obj):
    """Round every float in a nested structure to 12 significant digits."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(obj)
    return obj


def to_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


@dataclass(frozen=True)
class SweepSpec:
    target: str
    grid_points: int = 400
    theta_range: tuple[float, float] = (0.0, math.pi)
    a_range: tuple[float, float] = (1.0 / 3.0, 1.0)
    machine: str = "optimal"
    mu: float | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.target not in TARGETS:
            raise DomainError(f"unknown target {self.target!r}; choose from {', '.join(TARGETS)}")
        if self.machine not in MACHINES:
            raise DomainError(f"unknown machine {self.machine!r}")
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"unknown format {self.output_format!r}")
        if self.grid_points < 2:
            raise DomainError("grid needs at least 2 points")
        lo, hi = self.theta_range
        if not (0.0 <= lo < hi <= math.pi):
            raise DomainError(f"theta range [{lo}, {hi}] must satisfy 0 <= lo < hi <= pi")
        lo, hi = self.a_range
        if not (1.0 / 3.0 - 1e-12 <= lo < hi <= 1.0):
            raise DomainError(f"A range [{lo}, {hi}] must satisfy 1/3 <= lo < hi <= 1")
        if self.machine == "custom" and self.mu is None:
            raise DomainError("custom machine needs mu")

    @property
    def abscissa_name(self) -> str:
        return "a" if self.target == "fig5" else "theta"

    def grid(self) -> np.ndarray:
        lo, hi = self.a_range if self.target == "fig5" else self.theta_range
        return np.linspace(lo, hi, self.grid_points)

    def seed(self) -> int:
        key = repr((self.target, self.grid_points, self.theta_range, self.a_range, self.machine, self.mu))
        return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "little")


@dataclass
class SweepRow:
    abscissa: float
    columns: dict[str, float] = field(default_factory=dict)


@dataclass
class SweepTable:
    spec: SweepSpec
    columns: list[str]
    rows: list[SweepRow]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([self.spec.abscissa_name, *self.columns])
        for row in self.rows:
            writer.writerow([fmt(row.abscissa), *(fmt(row.columns[c]) for c in self.columns)])
        return buf.getvalue()

    def to_json(self) -> str:
        name = self.spec.abscissa_name
        doc = {
            "target": self.spec.target,
            "columns": [name, *self.columns],
            "rows": [{name: r.abscissa, **r.columns} for r in self.rows],
        }
        return to_json(doc)

    def render(self) -> str:
        return self.to_csv() if self.spec.output_format == "csv" else self.to_json()


def _qubit_machine(spec: SweepSpec, theta: float) -> MachineParams:
    return qubit.machine_preset(spec.machine, theta=theta, mu=spec.mu)


def _ppt_min_closed(state: qubit.BlochState, params: MachineParams) -> float:
    return float(tc.hermitian_eigenvalues(qubit.ppt_matrix_closed(state, params))[0])


def _qubit_row(spec: SweepSpec, theta: float) -> dict[str, float]:
    params = _qubit_machine(spec, theta)
    t = spec.target
    if t == "fig1":
        return {"f_opt": qubit.fidelity_closed(theta, params), "f_universal": F_UNIVERSAL, "mu_star": params.mu}
    if t == "fig2":
        return {"d1": qubit.d1_closed(theta, params), "d1_universal": D1_UNIVERSAL, "mu_star": params.mu}
    if t == "fig3":
        return {"d2": qubit.d2_closed(theta, params), "d2_universal": D2_UNIVERSAL, "mu_star": params.mu}
    if t == "fig4":
        state = qubit.BlochState(theta)
        return {
            "ppt_min": _ppt_min_closed(state, params),
            "ppt_min_universal": PPT_MIN_UNIVERSAL,
            "mu_star": params.mu,
        }
    state = qubit.BlochState(theta)
    return {
        "fidelity": qubit.fidelity_closed(theta, params),
        "d1": qubit.d1_closed(theta, params),
        "d2": qubit.d2_closed(theta, params),
        "ppt_min": _ppt_min_closed(state, params),
        "mu": params.mu,
    }


def _qutrit_row(a: float) -> dict[str, float]:
    plus, minus = qudit.qutrit_branches(a)
    f_plus = qudit.fidelity_qudit_closed(a, plus)
    f_minus = qudit.fidelity_qudit_closed(a, minus)
    best = plus if f_plus >= f_minus else minus
    return {
        "f_plus_branch": f_plus,
        "f_minus_branch": f_minus,
        "f_opt": max(f_plus, f_minus),
        "f_universal": F_UNIVERSAL_QUTRIT,
        "mu_star": best.mu,
    }


def _oracle_row(spec: SweepSpec, x: float) -> dict[str, float]:
    """Brute-force recomputation of the closed-form columns of one row."""
    if spec.target == "fig5":
        state = qudit.state_with_a(x, 3)
        plus, minus = qudit.qutrit_branches(x)
        return {
            "f_plus_branch": qudit.clone_qudit(state, plus).fidelity,
            "f_minus_branch": qudit.clone_qudit(state, minus).fidelity,
        }
    rep = qubit.clone(qubit.BlochState(x), _qubit_machine(spec, x))
    return {
        "f_opt": rep.fidelity,
        "fidelity": rep.fidelity,
        "d1": rep.d1,
        "d2": rep.d2,
        "ppt_min": rep.ppt_min,
    }


def audit(table: SweepTable, samples: int = AUDIT_SAMPLES, tol: float = AUDIT_TOL) -> list[int]:
    """Check sampled rows against the brute-force route; returns the audited row indices.

    The sample is drawn from a generator seeded by the spec, so it is
    reproducible.
    """
    spec = table.spec
    rng = np.random.default_rng(spec.seed())
    n = len(table.rows)
    picks = sorted(int(i) for i in rng.choice(n, size=min(samples, n), replace=False))
    for i in picks:
        row = table.rows[i]
        oracle = _oracle_row(spec, row.abscissa)
        for name, value in oracle.items():
            if name not in row.columns:
                continue
            if abs(row.columns[name] - value) > tol:
                raise AuditError(
                    f"{spec.target} row {i} ({spec.abscissa_name}={row.abscissa!r}): "
                    f"{name} closed={row.columns[name]!r} oracle={value!r}"
                )
    return picks


def run_sweep(spec: SweepSpec, check: bool = True) -> SweepTable:
    rows = []
    for x in spec.grid():
        x = float(x)
        cols = _qutrit_row(x) if spec.target == "fig5" else _qubit_row(spec, x)
        rows.append(SweepRow(x, cols))
    table = SweepTable(spec, list(rows[0].columns), rows)
    if check:
        audit(table)
    return table


def run_point(theta: float, phi: float = 0.0, machine: str = "optimal", mu: float | None = None) -> dict:
    """Evaluate one qubit state on one machine by both routes."""
    state = qubit.BlochState(theta, phi)
    params = qubit.machine_preset(machine, theta=theta, mu=mu)
    rep = qubit.clone(state, params)
    closed_spec = tc.hermitian_eigenvalues(qubit.ppt_matrix_closed(state, params))
    return {
        "system": "qubit",
        "state": {"theta": state.theta, "phi": state.phi},
        "machine": {"kind": machine, "mu": params.mu, "nu": params.nu, "d": params.d},
        "fidelity": rep.fidelity,
        "fidelity_closed": qubit.fidelity_closed(theta, params),
        "d1": rep.d1,
        "d1_closed": qubit.d1_closed(theta, params),
        "d2": rep.d2,
        "d2_closed": qubit.d2_closed(theta, params),
        "ppt_spectrum": list(rep.ppt_spectrum),
        "ppt_spectrum_closed": list(closed_spec),
    }


def run_point_qudit(amplitudes, machine: str = "optimal", mu: float | None = None) -> dict:
    state = qudit.QuditState.from_amplitudes(amplitudes, normalize=True)
    d = state.d
    a = qudit.a_psi(state)
    params = qudit.qudit_machine(machine, d, a=a, mu=mu)
    rep = qudit.clone_qudit(state, params)
    closed_rho = qudit.rho_a_closed(state, params)
    f_pc, f_univ = qudit.reference_fidelities(d)
    return {
        "system": "qudit",
        "d": d,
        "a_psi": a,
        "a_psi_cartan": qudit.a_psi_from_cartan(state),
        "machine": {"kind": machine, "mu": params.mu, "nu": params.nu, "d": d},
        "fidelity": rep.fidelity,
        "fidelity_closed": qudit.fidelity_qudit_closed(min(max(a, 1.0 / d), 1.0), params),
        "rho_a_max_deviation": float(np.max(np.abs(rep.rho_a - closed_rho))),
        "rho_ab_rho_b_max_deviation": float(np.max(np.abs(rep.rho_a - rep.rho_b))),
        "reference": {"f_phase_covariant": f_pc, "f_universal": f_univ},
    }


def optimize_qubit(theta: float) -> dict:
    plus, minus = qubit.optimal_mu_branches(theta)
    best = qubit.optimal_mu(theta)
    return {
        "system": "qubit",
        "theta": theta,
        "mu_star": best.mu,
        "nu_star": best.nu,
        "fidelity": qubit.fidelity_closed(theta, best),
        "branches": {
            "plus": {"mu": plus.mu, "fidelity": qubit.fidelity_closed(theta, plus)},
            "minus": {"mu": minus.mu, "fidelity": qubit.fidelity_closed(theta, minus)},
        },
    }


def optimize_qudit(d: int, a: float) -> dict:
    numeric = qudit.optimal_mu_numeric(d, a)
    doc = {
        "system": "qudit",
        "d": d,
        "a": a,
        "mu_star": numeric.mu,
        "nu_star": numeric.nu,
        "fidelity": qudit.fidelity_qudit_closed(a, numeric),
        "method": "golden-section",
    }
    if d == 3:
        plus, minus = qudit.qutrit_branches(a)
        best = qudit.optimal_mu_qutrit(a)
        doc.update(
            mu_star=best.mu,
            nu_star=best.nu,
            fidelity=qudit.fidelity_qudit_closed(a, best),
            method="closed-form",
            mu_numeric=numeric.mu,
            branches={
                "plus": {"mu": plus.mu, "fidelity": qudit.fidelity_qudit_closed(a, plus)},
                "minus": {"mu": minus.mu, "fidelity": qudit.fidelity_qudit_closed(a, minus)},
            },
        )
    return doc


def discrepancy_report(tol: float = 1e-12) -> dict:
    """D1 for equatorial states on the mu = 1/2 machine, three ways.

    The polynomial in cos^2(theta/2), the printed constant 9/64 and the
    definition ``Tr[(rho_ab - rho_a (x) rho_b)^2]`` evaluated by brute force.
    """
    theta = math.pi / 2
    params = qubit.machine_preset("equatorial")
    poly = qubit.d1_closed(theta, params)
    oracle = qubit.clone(qubit.BlochState(theta), params).d1
    printed = D1_PRINTED_EQUATORIAL
    poly_ok = abs(poly - oracle) <= tol
    printed_ok = abs(printed - oracle) <= tol
    if poly_ok and not printed_ok:
        verdict = "polynomial"
    elif printed_ok and not poly_ok:
        verdict = "printed"
    elif poly_ok and printed_ok:
        verdict = "both"
    else:
        verdict = "neither"
    return {
        "theta": theta,
        "mu": params.mu,
        "polynomial": poly,
        "printed": printed,
        "oracle": oracle,
        "polynomial_matches_oracle": poly_ok,
        "printed_matches_oracle": printed_ok,
        "tolerance": tol,
        "verdict": verdict,
    }
