"""Closed-form energy-optimal solvers for superposed two-user transmission.

A transmitter sends both users' codewords simultaneously as a power-domain
superposition.  User 1 always has the shorter deadline (D1 <= D2).  Which
receiver, if any, can run successive interference cancellation (SIC) depends
on the channel ordering and on whether both codewords fit inside the shorter
deadline, giving three formulations:

  solve_sic_rx2  (g1 <= g2): receiver 2 hears everything receiver 1 must
      decode, so it cancels codeword 1 first and decodes its own signal
      interference-free.  SINR maps: gamma1 = p1*g1/(p2*g1 + 1),
      gamma2 = p2*g2.
  solve_tin      (g1 >  g2): codeword 2 may outlast D1, so neither receiver
      can cancel; both treat the other signal as noise.  SINR maps:
      gamma1 = p1*g1/(p2*g1 + 1), gamma2 = p2*g2/(p1*g2 + 1).
  solve_sic_rx1  (g1 >  g2): both codewords are confined to D1, so receiver
      1 (the stronger channel) cancels codeword 2 first.  SINR maps:
      gamma1 = p1*g1, gamma2 = p2*g2/(p1*g2 + 1).

Spending more channel uses on a codeword lowers both its required SINR and
its blocklength-energy product (see fbl.energy_monotone), so every
formulation pins the optimal blocklengths at the largest values its
constraints allow and solves the SINR maps for the powers in closed form.
solve_noma dispatches on the channel ordering and, in the g1 > g2 regime,
keeps the cheaper of the two candidate formulations.
"""

from .fbl import BracketError, UserSpec, required_sinr
from .types import (
    Allocation,
    ChannelPair,
    InfeasibleReason,
    PowerBudget,
    Scheme,
    SolveOutcome,
    feasible_outcome,
    infeasible_outcome,
)

__all__ = [
    "overall_sic_error",
    "sic_stage_error",
    "order_by_deadline",
    "solve_sic_rx2",
    "solve_tin",
    "solve_sic_rx1",
    "solve_noma",
]


def overall_sic_error(eps_stage1: float, eps_stage2: float) -> float:
    """End-to-end error of a decode that sits behind an SIC stage.

    The receiver fails if the cancellation stage fails, or if it succeeds
    and the receiver's own decode then fails:
    eps_stage1 + (1 - eps_stage1) * eps_stage2.
    """
    return eps_stage1 + (1.0 - eps_stage1) * eps_stage2


def sic_stage_error(eps_stage1: float, eps_overall: float) -> float:
    """Per-decode error budget that composes to a given end-to-end target.

    Inverse of overall_sic_error in its second argument.  Requires
    eps_overall > eps_stage1, otherwise no achievable per-decode budget
    exists (the cancellation stage alone already exhausts the target).
    """
    if eps_overall <= eps_stage1:
        raise ValueError(
            f"end-to-end target {eps_overall} not achievable behind an SIC "
            f"stage with error {eps_stage1}"
        )
    return (eps_overall - eps_stage1) / (1.0 - eps_stage1)


def order_by_deadline(
    ch: ChannelPair, s1: UserSpec, s2: UserSpec
) -> tuple[ChannelPair, UserSpec, UserSpec, bool]:
    """Label the user with the shorter deadline as user 1.

    Deadline ties are broken by giving label 1 to the weaker channel, which
    keeps the SIC-at-receiver-2 formulation applicable.  Returns the
    (possibly swapped) channel pair and specs plus a flag saying whether a
    swap happened.
    """
    if s1.deadline < s2.deadline:
        return ch, s1, s2, False
    if s2.deadline < s1.deadline:
        return ChannelPair(ch.g2, ch.g1), s2, s1, True
    if ch.g1 <= ch.g2:
        return ch, s1, s2, False
    return ChannelPair(ch.g2, ch.g1), s2, s1, True


def _require_deadline_order(s1: UserSpec, s2: UserSpec) -> None:
    if s1.deadline > s2.deadline:
        raise ValueError(
            f"user 1 must have the shorter deadline ({s1.deadline} > {s2.deadline}); "
            "see order_by_deadline"
        )


def _powers_sic_rx2(
    gamma1: float, gamma2: float, g1: float, g2: float
) -> tuple[float, float]:
    """Invert the SIC-at-receiver-2 SINR maps for the transmit powers."""
    p2 = gamma2 / g2
    p1 = gamma1 * gamma2 / g2 + gamma1 / g1
    return p1, p2


def _powers_tin(
    gamma1: float, gamma2: float, g1: float, g2: float
) -> tuple[float, float]:
    """Invert the mutual-interference SINR maps; requires gamma1*gamma2 < 1."""
    denom = g1 * g2 * (1.0 - gamma1 * gamma2)
    p1 = (gamma1 * g2 + gamma1 * gamma2 * g1) / denom
    p2 = (gamma2 * g1 + gamma1 * gamma2 * g2) / denom
    return p1, p2


def _powers_sic_rx1(
    gamma1: float, gamma2: float, g1: float, g2: float
) -> tuple[float, float]:
    """Invert the SIC-at-receiver-1 SINR maps for the transmit powers."""
    p1 = gamma1 / g1
    p2 = gamma1 * gamma2 / g1 + gamma2 / g2
    return p1, p2


def solve_sic_rx2(
    ch: ChannelPair, s1: UserSpec, s2: UserSpec, budget: PowerBudget
) -> SolveOutcome:
    """Minimum-energy allocation with SIC at receiver 2 (needs g1 <= g2).

    Both codewords span their full deadlines; the required SINRs follow,
    and the powers invert the SINR maps:

        m_k = D_k,  gamma_k = required_sinr(s_k, D_k),
        p1 = gamma1*gamma2/g2 + gamma1/g1,  p2 = gamma2/g2.

    Infeasible when a required SINR exceeds what the full budget could ever
    produce on that link (rate unreachable) or when p1 + p2 > p_max.
    """
    _require_deadline_order(s1, s2)
    if ch.g1 > ch.g2:
        raise ValueError(
            f"SIC at receiver 2 needs g1 <= g2, got g1={ch.g1} > g2={ch.g2}"
        )
    try:
        gamma1 = required_sinr(s1, s1.deadline)
        gamma2 = required_sinr(s2, s2.deadline)
    except BracketError:
        return infeasible_outcome(InfeasibleReason.RATE_UNREACHABLE)
    if gamma1 > budget.p_max * ch.g1 or gamma2 > budget.p_max * ch.g2:
        return infeasible_outcome(InfeasibleReason.RATE_UNREACHABLE)
    p1, p2 = _powers_sic_rx2(gamma1, gamma2, ch.g1, ch.g2)
    if p1 + p2 > budget.p_max:
        return infeasible_outcome(InfeasibleReason.POWER_BUDGET_EXCEEDED)
    m1, m2 = float(s1.deadline), float(s2.deadline)
    return feasible_outcome(
        Allocation(
            m1=m1,
            m2=m2,
            p1=p1,
            p2=p2,
            gamma1=gamma1,
            gamma2=gamma2,
            energy=m1 * p1 + m2 * p2,
            scheme=Scheme.SIC_RX2,
            sic_overall_error=overall_sic_error(s1.error_target, s2.error_target),
        )
    )


def solve_tin(
    ch: ChannelPair, s1: UserSpec, s2: UserSpec, budget: PowerBudget
) -> SolveOutcome:
    """Minimum-energy allocation with interference treated as noise.

    Both codewords span their full deadlines.  With gamma_k =
    required_sinr(s_k, D_k), the mutual-interference maps invert to

        p1 = (gamma1*g2 + gamma1*gamma2*g1) / (g1*g2*(1 - gamma1*gamma2)),
        p2 = (gamma2*g1 + gamma1*gamma2*g2) / (g1*g2*(1 - gamma1*gamma2)),

    which only exists when gamma1*gamma2 < 1 (otherwise each user's power
    feeds the other's interference faster than it can be outrun).
    """
    _require_deadline_order(s1, s2)
    try:
        gamma1 = required_sinr(s1, s1.deadline)
        gamma2 = required_sinr(s2, s2.deadline)
    except BracketError:
        return infeasible_outcome(InfeasibleReason.RATE_UNREACHABLE)
    if gamma1 > budget.p_max * ch.g1 or gamma2 > budget.p_max * ch.g2:
        return infeasible_outcome(InfeasibleReason.RATE_UNREACHABLE)
    if gamma1 * gamma2 >= 1.0:
        return infeasible_outcome(InfeasibleReason.SIC_PRODUCT_GE_ONE)
    p1, p2 = _powers_tin(gamma1, gamma2, ch.g1, ch.g2)
    if p1 + p2 > budget.p_max:
        return infeasible_outcome(InfeasibleReason.POWER_BUDGET_EXCEEDED)
    m1, m2 = float(s1.deadline), float(s2.deadline)
    return feasible_outcome(
        Allocation(
            m1=m1,
            m2=m2,
            p1=p1,
            p2=p2,
            gamma1=gamma1,
            gamma2=gamma2,
            energy=m1 * p1 + m2 * p2,
            scheme=Scheme.TIN,
        )
    )


def solve_sic_rx1(
    ch: ChannelPair, s1: UserSpec, s2: UserSpec, budget: PowerBudget
) -> SolveOutcome:
    """Minimum-energy allocation with both codewords inside D1, SIC at rx 1.

    Needs g1 >= g2 so that receiver 1 decodes codeword 2 at least as
    reliably as its intended receiver does.  Both blocklengths sit at D1
    (user 2's deadline is looser, so only D1 binds), giving

        m1 = m2 = D1,  gamma_k = required_sinr(s_k, D1),
        p1 = gamma1/g1,  p2 = gamma1*gamma2/g1 + gamma2/g2.

    The result does not depend on D2.
    """
    _require_deadline_order(s1, s2)
    if ch.g1 < ch.g2:
        raise ValueError(
            f"SIC at receiver 1 needs g1 >= g2, got g1={ch.g1} < g2={ch.g2}"
        )
    d1 = s1.deadline
    if s2.min_blocklength > d1:
        return infeasible_outcome(InfeasibleReason.BLOCKLENGTH_WINDOW_EMPTY)
    try:
        gamma1 = required_sinr(s1, d1)
        gamma2 = required_sinr(s2, d1)
    except BracketError:
        return infeasible_outcome(InfeasibleReason.RATE_UNREACHABLE)
    if gamma1 > budget.p_max * ch.g1 or gamma2 > budget.p_max * ch.g2:
        return infeasible_outcome(InfeasibleReason.RATE_UNREACHABLE)
    p1, p2 = _powers_sic_rx1(gamma1, gamma2, ch.g1, ch.g2)
    if p1 + p2 > budget.p_max:
        return infeasible_outcome(InfeasibleReason.POWER_BUDGET_EXCEEDED)
    m = float(d1)
    return feasible_outcome(
        Allocation(
            m1=m,
            m2=m,
            p1=p1,
            p2=p2,
            gamma1=gamma1,
            gamma2=gamma2,
            energy=m * p1 + m * p2,
            scheme=Scheme.SIC_RX1,
            sic_overall_error=overall_sic_error(s2.error_target, s1.error_target),
        )
    )


_VERDICT_PRECEDENCE = (
    InfeasibleReason.POWER_BUDGET_EXCEEDED,
    InfeasibleReason.SIC_PRODUCT_GE_ONE,
    InfeasibleReason.RATE_UNREACHABLE,
    InfeasibleReason.BLOCKLENGTH_WINDOW_EMPTY,
)


def solve_noma(
    ch: ChannelPair, s1: UserSpec, s2: UserSpec, budget: PowerBudget
) -> SolveOutcome:
    """Best superposed-transmission allocation for arbitrary user order.

    Users are relabeled so user 1 has the shorter deadline (ties: weaker
    channel first).  With g1 <= g2 the SIC-at-receiver-2 formulation is the
    scheme; with g1 > g2 both remaining formulations are solved and the
    cheaper feasible one wins (ties prefer TIN).  When everything fails the
    verdict lists each subproblem's reason, headlined by the first reason in
    budget/product/rate/window order.
    """
    ch, s1, s2, relabeled = order_by_deadline(ch, s1, s2)
    if ch.g1 <= ch.g2:
        outcome = solve_sic_rx2(ch, s1, s2, budget)
        if outcome.feasible:
            return feasible_outcome(outcome.allocation, relabeled=relabeled)
        return infeasible_outcome(
            outcome.verdict,
            sub_verdicts=((Scheme.SIC_RX2, outcome.verdict),),
            relabeled=relabeled,
        )
    tin = solve_tin(ch, s1, s2, budget)
    sic = solve_sic_rx1(ch, s1, s2, budget)
    candidates = [o for o in (tin, sic) if o.feasible]
    if candidates:
        best = min(candidates, key=lambda o: o.energy)
        return feasible_outcome(best.allocation, relabeled=relabeled)
    subs = ((Scheme.TIN, tin.verdict), (Scheme.SIC_RX1, sic.verdict))
    reasons = {tin.verdict, sic.verdict}
    verdict = next(v for v in _VERDICT_PRECEDENCE if v in reasons)
    return infeasible_outcome(verdict, sub_verdicts=subs, relabeled=relabeled)
