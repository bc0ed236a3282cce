import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phasecov import qubit
from phasecov import tensorcore as tc
from phasecov.errors import DimensionError, DomainError, InvariantError
from phasecov.params import MachineParams, mu_max
from phasecov.qudit import (
    CartanSet,
    QuditState,
    a_psi,
    a_psi_from_cartan,
    branch_crossing,
    build_isometry_d,
    clone_qudit,
    fidelity_qudit_closed,
    golden_section_max,
    optimal_mu_numeric,
    optimal_mu_qutrit,
    qudit_machine,
    qutrit_branches,
    qutrit_state,
    reference_fidelities,
    rho_a_closed,
    state_with_a,
)

F_QUTRIT_PC = (5 + math.sqrt(17)) / 12
MU_QUTRIT_PC = math.sqrt((1 + 1 / math.sqrt(17)) / 8)


def random_state(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return QuditState.from_amplitudes(v, normalize=True)


def grid_search_qudit(a, d, step=1e-6):
    """Dense scan of the fidelity written out from <psi|rho_a|psi> by hand."""
    mu = np.arange(0.0, mu_max(d) + step, step)
    mu = mu[mu <= mu_max(d)]
    nu = np.sqrt(np.clip(1 - 2 * (d - 1) * mu**2, 0, None))
    # <psi|rho_a|psi> = mu^2 + ((d-2)mu^2 + 2 mu nu) + (nu^2 - 2 mu nu) A
    f = mu**2 + (d - 2) * mu**2 + 2 * mu * nu + (nu**2 - 2 * mu * nu) * a
    i = int(np.argmax(f))
    return mu[i], f[i]


class TestQuditState:
    def test_normalization_enforced(self):
        with pytest.raises(InvariantError):
            QuditState(3, np.array([1, 1, 0]))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            QuditState(3, np.array([1, 0]))

    def test_immutable(self):
        s = QuditState.basis(3, 1)
        with pytest.raises(ValueError):
            s.amplitudes[0] = 1


class TestCartan:
    @pytest.mark.parametrize("d", range(2, 9))
    def test_orthonormal_traceless(self, d):
        gens = CartanSet.standard(d).generators
        assert len(gens) == d - 1
        for i, hi in enumerate(gens):
            assert abs(np.trace(hi)) < 1e-14
            assert np.count_nonzero(hi - np.diag(np.diag(hi))) == 0
            for j, hj in enumerate(gens):
                assert abs(np.trace(hi @ hj) - (i == j)) < 1e-12

    def test_qutrit_matrices(self):
        h1, h2 = CartanSet.standard(3).generators
        np.testing.assert_allclose(h1, np.diag([1, -1, 0]) / math.sqrt(2), atol=1e-15)
        np.testing.assert_allclose(h2, np.diag([1, 1, -2]) / math.sqrt(6), atol=1e-15)

    def test_qubit_is_sigma_z(self):
        (h,) = CartanSet.standard(2).generators
        np.testing.assert_allclose(h, np.diag([1, -1]) / math.sqrt(2), atol=1e-15)


class TestIsometry:
    def test_reduces_to_qubit(self):
        for mu in (0.0, 0.2, 0.5, 1 / math.sqrt(6)):
            p = MachineParams.from_mu(mu)
            np.testing.assert_array_equal(build_isometry_d(p), qubit.build_isometry(p))

    def test_qutrit_trivial(self):
        v = build_isometry_d(MachineParams.from_mu(0.0, d=3))
        for j in range(3):
            expect = np.zeros(27)
            expect[(j * 3 + j) * 3 + j] = 1
            np.testing.assert_array_equal(v[:, j], expect)

    def test_qutrit_optimum_unitarity(self):
        v = build_isometry_d(MachineParams.from_mu_sq((1 + 1 / math.sqrt(17)) / 8, d=3))
        np.testing.assert_allclose(v.conj().T @ v, np.eye(3), atol=1e-12)

    @given(st.integers(2, 6), st.floats(0, 1))
    def test_unitarity_all_d(self, d, frac):
        v = build_isometry_d(MachineParams.from_mu(frac * mu_max(d), d))
        np.testing.assert_allclose(v.conj().T @ v, np.eye(d), atol=1e-12)

    def test_rejects_broken_params(self):
        bad = object.__new__(MachineParams)
        object.__setattr__(bad, "mu", 0.5)
        object.__setattr__(bad, "nu", 0.5)
        object.__setattr__(bad, "d", 3)
        with pytest.raises(InvariantError):
            build_isometry_d(bad)


class TestRhoA:
    def test_qubit_reduction(self):
        state = qubit.BlochState(math.pi / 2, 0.9)
        p = MachineParams.from_mu(0.5)
        qs = QuditState(2, state.amplitudes)
        np.testing.assert_allclose(rho_a_closed(qs, p), qubit.clone(state, p).rho_a, atol=1e-12)

    def test_trivial_qutrit(self):
        rho = rho_a_closed(QuditState.basis(3, 0), MachineParams.from_mu(0.0, d=3))
        np.testing.assert_allclose(rho, np.diag([1, 0, 0]), atol=1e-15)

    def test_against_oracle(self, rng):
        s = random_state(rng, 3)
        p = MachineParams.from_mu(0.3, d=3)
        np.testing.assert_allclose(rho_a_closed(s, p), clone_qudit(s, p).rho_a, atol=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_oracle_properties(self, rng, d):
        for _ in range(100):
            s = random_state(rng, d)
            p = MachineParams.from_mu(rng.uniform(0, mu_max(d)), d)
            rep = clone_qudit(s, p)
            closed = rho_a_closed(s, p)
            np.testing.assert_allclose(closed, rep.rho_a, atol=1e-12)
            np.testing.assert_allclose(rep.rho_a, rep.rho_b, atol=1e-12)
            assert abs(np.trace(closed) - 1) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            rho_a_closed(QuditState.basis(3, 0), MachineParams.from_mu(0.1))


class TestAPsi:
    def test_equatorial(self):
        assert a_psi(QuditState.equatorial(3, [0, 1, 2])) == pytest.approx(1 / 3, abs=1e-15)

    def test_basis(self):
        assert a_psi(QuditState.basis(4, 2)) == pytest.approx(1.0)

    def test_printed_qutrit_formula(self):
        t, f = 0.5, 0.9
        expect = math.cos(t) ** 4 + math.sin(t) ** 4 * (math.cos(f) ** 4 + math.sin(f) ** 4)
        assert a_psi(qutrit_state(t, f, 0.3, 1.7)) == pytest.approx(expect, abs=1e-15)

    def test_cartan_equatorial(self):
        s = QuditState.equatorial(3, [0.1, 0.2, 0.3])
        np.testing.assert_allclose(CartanSet.standard(3).expectations(s), [0, 0], atol=1e-15)
        assert a_psi_from_cartan(s) == pytest.approx(1 / 3, abs=1e-15)

    @pytest.mark.parametrize("d", range(2, 7))
    def test_cartan_top_basis_state(self, d):
        assert a_psi_from_cartan(QuditState.basis(d, d - 1)) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("d", range(2, 7))
    def test_cartan_identity(self, rng, d):
        cartan = CartanSet.standard(d)
        for _ in range(500):
            s = random_state(rng, d)
            a = a_psi(s)
            assert 1 / d - 1e-15 <= a <= 1 + 1e-15
            assert abs(a - a_psi_from_cartan(s, cartan)) < 1e-12

    def test_cartan_mismatch(self):
        with pytest.raises(DimensionError):
            a_psi_from_cartan(QuditState.basis(3, 0), CartanSet.standard(4))

    def test_state_with_a(self):
        for d in (2, 3, 5):
            for a in np.linspace(1 / d, 1, 11):
                assert a_psi(state_with_a(a, d)) == pytest.approx(a, abs=1e-12)


class TestQutritState:
    def test_north(self):
        np.testing.assert_allclose(qutrit_state(0, 1.0, 2.0, 3.0).amplitudes, [1, 0, 0], atol=1e-15)

    def test_equatorial(self):
        s = qutrit_state(math.acos(1 / math.sqrt(3)), math.pi / 4, 0, 0)
        np.testing.assert_allclose(np.abs(s.amplitudes) ** 2, [1 / 3] * 3, atol=1e-15)

    def test_normalized(self, rng):
        for angles in rng.uniform(-7, 7, size=(100, 4)):
            s = qutrit_state(*angles)
            assert abs(np.linalg.norm(s.amplitudes) - 1) < 1e-12


class TestFidelity:
    def test_qutrit_optimum(self):
        p = MachineParams.from_mu_sq((1 + 1 / math.sqrt(17)) / 8, d=3)
        assert fidelity_qudit_closed(1 / 3, p) == pytest.approx(F_QUTRIT_PC, abs=1e-12)

    def test_qubit_equatorial(self):
        assert fidelity_qudit_closed(0.5, MachineParams.from_mu(0.5)) == pytest.approx(
            0.5 * (1 + 1 / math.sqrt(2)), abs=1e-12
        )

    def test_against_rho_a(self, rng):
        s = random_state(rng, 3)
        p = MachineParams.from_mu(0.25, d=3)
        psi = s.amplitudes
        expect = (psi.conj() @ rho_a_closed(s, p) @ psi).real
        assert fidelity_qudit_closed(a_psi(s), p) == pytest.approx(expect, abs=1e-12)

    def test_qutrit_printed_form(self, rng):
        # the d = 3 form 2 mu^2 + 2 mu nu + (nu^2 - 2 mu nu) A
        for _ in range(50):
            a, mu = rng.uniform(1 / 3, 1), rng.uniform(0, 0.5)
            p = MachineParams.from_mu(mu, d=3)
            expect = 2 * mu**2 + 2 * mu * p.nu + (p.nu**2 - 2 * mu * p.nu) * a
            assert fidelity_qudit_closed(a, p) == pytest.approx(expect, abs=1e-15)

    def test_qubit_reduction(self, rng):
        for theta in rng.uniform(0, math.pi, 30):
            p = MachineParams.from_mu(rng.uniform(0, 1 / math.sqrt(2)))
            a = 0.5 + math.cos(theta) ** 2 / 2
            assert fidelity_qudit_closed(a, p) == pytest.approx(qubit.fidelity_closed(theta, p), abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            fidelity_qudit_closed(0.2, MachineParams.from_mu(0.1, d=3))
        with pytest.raises(DomainError):
            fidelity_qudit_closed(1.01, MachineParams.from_mu(0.1, d=3))


class TestQutritOptimum:
    def test_equatorial(self):
        plus, minus = qutrit_branches(1 / 3)
        assert plus.mu**2 == pytest.approx((1 + 1 / math.sqrt(17)) / 8, abs=1e-15)
        assert minus.mu**2 == pytest.approx((1 - 1 / math.sqrt(17)) / 8, abs=1e-15)
        best = optimal_mu_qutrit(1 / 3)
        assert best == plus
        assert fidelity_qudit_closed(1 / 3, best) == pytest.approx(F_QUTRIT_PC, abs=1e-12)

    def test_branches_collapse_at_half(self):
        plus, minus = qutrit_branches(0.5)
        assert plus.mu**2 == minus.mu**2 == pytest.approx(1 / 8, abs=1e-15)

    def test_a_equals_one(self):
        # eta diverges at A = 1; the bounded ratio form gives mu = 0, F = 1
        plus, minus = qutrit_branches(1.0)
        assert minus.mu == 0.0
        assert plus.mu == pytest.approx(0.5)
        assert fidelity_qudit_closed(1.0, optimal_mu_qutrit(1.0)) == 1.0

    @pytest.mark.parametrize("a", [0.7, 1 / 3, 0.45, 0.55, 0.9, 0.999])
    def test_grid_search(self, a):
        mu_grid, f_grid = grid_search_qudit(a, 3)
        best = optimal_mu_qutrit(a)
        assert abs(best.mu - mu_grid) < 1e-5
        assert abs(fidelity_qudit_closed(a, best) - f_grid) < 1e-10

    def test_branch_choice_at_0_7(self):
        plus, minus = qutrit_branches(0.7)
        assert optimal_mu_qutrit(0.7) == minus
        assert fidelity_qudit_closed(0.7, minus) > fidelity_qudit_closed(0.7, plus)

    def test_above_universal(self):
        for a in np.linspace(1 / 3, 1, 500):
            assert fidelity_qudit_closed(a, optimal_mu_qutrit(a)) >= 0.75 - 1e-12

    def test_branch_crossing(self):
        a_star = branch_crossing()
        assert 1 / 3 < a_star < 1
        assert abs(a_star - 0.5) < 1e-6
        plus, minus = qutrit_branches(0.4)
        assert fidelity_qudit_closed(0.4, plus) > fidelity_qudit_closed(0.4, minus)
        plus, minus = qutrit_branches(0.6)
        assert fidelity_qudit_closed(0.6, plus) < fidelity_qudit_closed(0.6, minus)

    def test_domain(self):
        with pytest.raises(DomainError):
            qutrit_branches(0.3)
        with pytest.raises(DomainError):
            qutrit_branches(1.1)


class TestNumericOptimum:
    def test_qubit_equatorial(self):
        assert optimal_mu_numeric(2, 0.5).mu == pytest.approx(0.5, abs=1e-8)

    def test_qutrit_equatorial(self):
        assert optimal_mu_numeric(3, 1 / 3).mu == pytest.approx(MU_QUTRIT_PC, abs=1e-8)

    def test_d4_attains_phase_covariant_bound(self):
        f_pc = 1 / 4 + (2 + math.sqrt(28)) / 16
        assert fidelity_qudit_closed(0.25, optimal_mu_numeric(4, 0.25)) == pytest.approx(f_pc, abs=1e-8)

    @pytest.mark.parametrize("d", range(2, 9))
    def test_equatorial_bound_all_d(self, d):
        f_pc, _ = reference_fidelities(d)
        assert fidelity_qudit_closed(1 / d, optimal_mu_numeric(d, 1 / d)) == pytest.approx(f_pc, abs=1e-10)

    def test_agrees_with_qutrit_closed_form(self):
        for a in np.linspace(1 / 3, 1, 101):
            assert abs(optimal_mu_numeric(3, a).mu - optimal_mu_qutrit(a).mu) < 1e-8

    def test_agrees_with_qubit_optimum(self):
        for theta in np.linspace(0, math.pi, 101):
            a = min(1.0, 0.5 + math.cos(theta) ** 2 / 2)
            assert abs(optimal_mu_numeric(2, a).mu - qubit.optimal_mu(theta).mu) < 1e-8

    @pytest.mark.parametrize("d,a", [(4, 0.4), (5, 0.2), (6, 0.9)])
    def test_grid_search(self, d, a):
        mu_grid, f_grid = grid_search_qudit(a, d)
        p = optimal_mu_numeric(d, a)
        assert abs(p.mu - mu_grid) < 1e-5
        assert fidelity_qudit_closed(a, p) >= f_grid - 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            optimal_mu_numeric(1, 0.5)
        with pytest.raises(DomainError):
            optimal_mu_numeric(4, 0.2)

    def test_golden_section_parabola(self):
        x = golden_section_max(lambda t: -((t - 0.3) ** 2), 0.0, 1.0)
        assert abs(x - 0.3) < 1e-7


class TestReferenceFidelities:
    def test_qubit(self):
        f_pc, f_u = reference_fidelities(2)
        assert f_pc == pytest.approx(0.5 * (1 + 1 / math.sqrt(2)), abs=1e-12)
        assert f_u == pytest.approx(5 / 6, abs=1e-12)

    def test_qutrit(self):
        f_pc, f_u = reference_fidelities(3)
        assert f_pc == pytest.approx(F_QUTRIT_PC, abs=1e-12)
        assert f_u == pytest.approx(0.75, abs=1e-12)

    def test_ordering(self):
        for d in range(2, 17):
            f_pc, f_u = reference_fidelities(d)
            assert f_pc > f_u

    def test_universal_machine_hits_universal_bound(self, rng):
        for d in (2, 3, 4, 5):
            p = qudit_machine("universal", d)
            _, f_u = reference_fidelities(d)
            for _ in range(5):
                s = random_state(rng, d)
                assert clone_qudit(s, p).fidelity == pytest.approx(f_u, abs=1e-12)


class TestQuditMachine:
    def test_kinds(self):
        assert qudit_machine("equatorial", 3) == optimal_mu_qutrit(1 / 3)
        assert qudit_machine("optimal", 4, a=0.5) == optimal_mu_numeric(4, 0.5)
        assert qudit_machine("custom", 3, mu=0.2).mu == 0.2

    def test_errors(self):
        with pytest.raises(DomainError):
            qudit_machine("custom", 3, mu=0.6)
        with pytest.raises(DomainError):
            qudit_machine("optimal", 3)
        with pytest.raises(DomainError):
            qudit_machine("nope", 3)
