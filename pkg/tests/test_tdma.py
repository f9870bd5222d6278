"""TDMA baseline: exhaustive split search vs continuous oracle, saturation."""

import pytest

from noma_fbl import (
    ChannelPair,
    InfeasibleReason,
    PowerBudget,
    UserSpec,
    required_sinr,
    solve_tdma,
)

from oracles import tdma_golden_section

S160 = dict(payload_bits=160, error_target=1e-7)


def spec(deadline: int, **overrides) -> UserSpec:
    return UserSpec(**{**S160, "deadline": deadline, **overrides})


def brute_force_best(ch, s1, s2, budget):
    """Plain-python re-enumeration of every split (the solver vectorizes)."""
    best = None
    for m1 in range(s1.min_blocklength, min(s1.deadline, s2.deadline - s2.min_blocklength) + 1):
        m2 = s2.deadline - m1
        gamma1, gamma2 = required_sinr(s1, m1), required_sinr(s2, m2)
        if gamma1 > budget.p_max * ch.g1 or gamma2 > budget.p_max * ch.g2:
            continue
        energy = m1 * gamma1 / ch.g1 + m2 * gamma2 / ch.g2
        if best is None or energy < best[1]:
            best = (m1, energy)
    return best


class TestSolveTdma:
    def test_symmetric_instance_splits_in_half(self):
        ch = ChannelPair(2.0, 2.0)
        out = solve_tdma(ch, spec(200), spec(300), PowerBudget(10.0))
        assert out.allocation.m1 == 150.0  # D2/2 for identical users/channels
        assert out.allocation.m2 == 150.0

    def test_matches_plain_enumeration(self):
        ch = ChannelPair(1.0, 4.0)
        s1, s2 = spec(200), spec(300)
        budget = PowerBudget(2.5)
        out = solve_tdma(ch, s1, s2, budget)
        m1, energy = brute_force_best(ch, s1, s2, budget)
        assert out.allocation.m1 == m1
        assert out.allocation.energy == pytest.approx(energy, rel=1e-12)

    def test_matches_golden_section_oracle(self):
        ch = ChannelPair(1.0, 4.0)
        s1, s2 = spec(200), spec(300)
        out = solve_tdma(ch, s1, s2, PowerBudget(2.5))
        m1_cont, energy_cont = tdma_golden_section(ch.g1, ch.g2, s1, s2, 2.5)
        assert abs(out.allocation.m1 - m1_cont) <= 1.0 or out.allocation.energy <= energy_cont * 1.005
        assert out.allocation.energy >= energy_cont * 0.995
        assert out.allocation.energy <= energy_cont * 1.005

    def test_allocation_invariants(self):
        ch = ChannelPair(1.0, 4.0)
        s1, s2 = spec(200), spec(300)
        budget = PowerBudget(2.5)
        a = solve_tdma(ch, s1, s2, budget).allocation
        assert a.m1 + a.m2 == s2.deadline
        assert a.m1 <= s1.deadline
        assert max(a.p1, a.p2) <= budget.p_max + 1e-12
        assert a.gamma1 == pytest.approx(a.p1 * ch.g1, rel=1e-12)
        assert a.gamma2 == pytest.approx(a.p2 * ch.g2, rel=1e-12)
        assert a.energy == pytest.approx(a.m1 * a.p1 + a.m2 * a.p2, rel=1e-15)

    def test_user2_exhausting_remaining_time_is_optimal(self):
        # handing back any slack from user 2's slot costs energy
        ch = ChannelPair(1.0, 4.0)
        s1, s2 = spec(200), spec(300)
        a = solve_tdma(ch, s1, s2, PowerBudget(2.5)).allocation
        for slack in (1, 5, 10):  # keep m2 above the model's minimum
            m2 = int(a.m2) - slack
            shorter = a.m1 * a.p1 + m2 * required_sinr(s2, m2) / ch.g2
            assert shorter > a.energy

    def test_m1_saturates_as_d1_grows(self):
        ch = ChannelPair(4.0, 1.0)  # weak user 2 wants the long slot
        budget = PowerBudget(10.0)
        s2 = spec(300)
        m1_stars, energies = [], []
        for d1 in range(100, 291, 10):
            a = solve_tdma(ch, spec(d1), s2, budget).allocation
            m1_stars.append(a.m1)
            energies.append(a.energy)
        assert all(x <= y for x, y in zip(energies[1:], energies[:-1]))
        # once d1 passes the unconstrained optimum, m1* stops moving
        assert m1_stars[-1] == m1_stars[-2] == m1_stars[-3]
        saturated = m1_stars[-1]
        assert saturated < 290
        k = m1_stars.index(saturated)
        assert all(m == saturated for m in m1_stars[k:])
        assert all(e == energies[-1] for e in energies[k:])

    def test_window_empty_when_deadline_tight(self):
        out = solve_tdma(ChannelPair(1.0, 1.0), spec(100), spec(150), PowerBudget(1.0))
        assert out.verdict == InfeasibleReason.BLOCKLENGTH_WINDOW_EMPTY

    def test_budget_verdict(self):
        out = solve_tdma(ChannelPair(1.0, 4.0), spec(200), spec(300), PowerBudget(0.1))
        assert out.verdict == InfeasibleReason.POWER_BUDGET_EXCEEDED

    def test_rejects_wrong_deadline_order(self):
        with pytest.raises(ValueError):
            solve_tdma(ChannelPair(1.0, 4.0), spec(300), spec(200), PowerBudget(2.5))

    def test_deadline_tie_allowed(self):
        out = solve_tdma(ChannelPair(1.0, 4.0), spec(300), spec(300), PowerBudget(2.5))
        assert out.feasible
        assert out.allocation.m1 <= 200.0  # window capped at d2 - m_hat

    def test_budget_trims_split_choices(self):
        # with a binding budget the cheapest unconstrained split may be
        # power-infeasible; the solver must return the best feasible one
        ch = ChannelPair(0.9, 4.0)
        s1, s2 = spec(200), spec(300)
        unconstrained = solve_tdma(ch, s1, s2, PowerBudget(100.0)).allocation
        p_needed = max(unconstrained.p1, unconstrained.p2)
        tight = PowerBudget(p_needed * 0.97)
        out = solve_tdma(ch, s1, s2, tight)
        if out.feasible:
            a = out.allocation
            assert max(a.p1, a.p2) <= tight.p_max
            assert a.energy >= unconstrained.energy
            assert brute_force_best(ch, s1, s2, tight)[1] == pytest.approx(
                a.energy, rel=1e-12
            )
