"""Direct evolution of dP-II over P1(F_p) through the seven confined cases.

Between singularities the recurrence is evaluated with plain field
arithmetic (case 1).  When the dependent variable hits 1 or p-1 with a
nonzero coefficient, the whole confined excursion is emitted at once as a
fixed pattern of intermediate values ending in the closed-form exit value
(cases 2 through 7).  Which pattern applies is decided by exact zero tests
on the coefficient tables, never by residues alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

from .errors import (
    InfiniteInitialError,
    NoPeriodFoundError,
    UndefinedCaseError,
)
from .maps import DP2Params
from .padic import FpElem, FpProj, reduce_mod


@dataclass(frozen=True)
class FpState:
    """The pair (u_{n-1}, u_n) plus the time index n of u_n.

    u_prev is finite by invariant: every way the variable reaches infinity
    is internal to one of the emitted patterns.
    """

    u_prev: FpProj
    u_cur: FpProj
    n: int

    def __post_init__(self):
        if self.u_prev.is_infinity:
            raise InfiniteInitialError("u_{n-1} = inf is not a valid state")


@dataclass(frozen=True)
class PatternOutput:
    """Values u_{n+1} .. u_{n+m} plus the state positioned after them."""

    emitted: tuple
    next_state: FpState


def _as_proj(value, p: int) -> FpProj:
    if isinstance(value, FpProj):
        if value.p != p:
            raise ValueError("projective point has the wrong modulus")
        return value
    return FpProj(p, int(value))


def dp2_fp_pattern(state: FpState, params: DP2Params) -> PatternOutput:
    """Emit the confined continuation of the orbit from one state.

    Case dispatch (exact coefficient zero tests throughout):

      1. generic u (including 0), or u = 1 with alpha_n = 0, or u = p-1
         with beta_n = 0: one step of the recurrence, terms with an exactly
         zero coefficient dropped;
      2. u = 1, alpha_n != 0, beta_{n+2} != 0: three steps;
      3. u = 1, alpha_n != 0, beta_{n+2} = 0, a != -delta: five steps;
      4. as 3 but a = -delta: seven steps;
      5-7. the mirror images at u = p-1 driven by beta_n, alpha_{n+2} and
         the sign of a - delta.
    """
    p = params.p
    if state.u_cur.is_infinity:
        raise InfiniteInitialError("evolution cannot start at u_n = inf")
    u = state.u_cur.residue
    n = state.n
    t = state.u_prev.elem()
    inf = FpProj.infinity(p)

    def fin(elem: FpElem) -> FpProj:
        return FpProj.finite(elem)

    def red(value) -> FpElem:
        return reduce_mod(value, p)

    alpha_n = params.alpha(n)
    beta_n = params.beta(n)

    if u == 1 and alpha_n != 0:
        beta_n2 = params.beta(n + 2)
        if beta_n2 != 0:
            den = red(2 * beta_n2)
            assert den, "unit table entry reduced to zero"
            exit_val = (2 * red(alpha_n) * t + red(2 * params.delta * params.beta(n + 1))
                        + red((2 - params.delta) * params.a)) / den
            emitted = (inf, fin(red(-1)), fin(exit_val))
        elif params.a != -params.delta:
            den = red(params.a + params.delta)
            if not den:
                raise UndefinedCaseError(
                    "a + delta reduces to zero while a != -delta exactly; "
                    "the five-step pattern is outside the covered cases")
            exit_val = -(red(params.a * params.delta)
                         - red(params.a - params.delta) * t) / den
            emitted = (inf, fin(red(-1)), inf, fin(red(1)), fin(exit_val))
        else:
            exit_val = (1 + 2 * t) / red(2)
            emitted = (inf, fin(red(-1)), inf, fin(red(1)), inf, fin(red(-1)),
                       fin(exit_val))
    elif u == p - 1 and beta_n != 0:
        alpha_n2 = params.alpha(n + 2)
        if alpha_n2 != 0:
            den = red(2 * alpha_n2)
            assert den, "unit table entry reduced to zero"
            exit_val = (red(params.a * (params.delta - 2))
                        - red(2 * params.delta * params.alpha(n + 1))
                        + 2 * red(beta_n) * t) / den
            emitted = (inf, fin(red(1)), fin(exit_val))
        elif params.a != params.delta:
            den = red(params.a - params.delta)
            if not den:
                raise UndefinedCaseError(
                    "a - delta reduces to zero while a != delta exactly; "
                    "the five-step pattern is outside the covered cases")
            exit_val = (red(params.a * params.delta)
                        + red(params.a + params.delta) * t) / den
            emitted = (inf, fin(red(1)), inf, fin(red(-1)), fin(exit_val))
        else:
            exit_val = (2 * t - 1) / red(2)
            emitted = (inf, fin(red(1)), inf, fin(red(-1)), inf, fin(red(1)),
                       fin(exit_val))
    else:
        # Case 1.  u = 0 is generic: 1 - u^2 = 1 there, so the formula is
        # regular even though the listed range starts at 2.
        u_elem = FpElem(u, p)
        total = -t
        if alpha_n != 0:
            total = total + red(alpha_n) / (1 - u_elem)
        if beta_n != 0:
            total = total + red(beta_n) / (1 + u_elem)
        emitted = (fin(total),)

    m = len(emitted)
    prev = emitted[-2] if m >= 2 else state.u_cur
    next_state = FpState(u_prev=prev, u_cur=emitted[-1], n=n + m)
    return PatternOutput(emitted=emitted, next_state=next_state)


def iterate_dp2_fp(u0, u1, params: DP2Params, start_n: int = 1):
    """Infinite generator of u_1, u_2, ... from finite seeds u_0, u_1."""
    p = params.p
    u0, u1 = _as_proj(u0, p), _as_proj(u1, p)
    if u0.is_infinity or u1.is_infinity:
        raise InfiniteInitialError("orbit seeds must both be finite")
    yield u1
    state = FpState(u_prev=u0, u_cur=u1, n=start_n)
    while True:
        out = dp2_fp_pattern(state, params)
        yield from out.emitted
        state = out.next_state


def dp2_fp_orbit(u0, u1, steps: int, params: DP2Params) -> list:
    """The values u_1 .. u_steps given (u_0, u_1)."""
    if steps < 1:
        return []
    return list(islice(iterate_dp2_fp(u0, u1, params), steps))


def detect_period(values, p: int) -> int:
    """Least period of an eventually periodic projective sequence.

    The full non-autonomous state (u_{k-1}, u_k, k mod p) is hashed until
    it repeats, which the finite state space guarantees; the cycle length
    is then refined to the least divisor that already repeats the values
    (a constant orbit has period 1, not p).
    """
    cap = (p + 1) * (p + 1) * p + p + 4
    seen: dict = {}
    history: list = []
    prev = None
    for k, value in enumerate(values):
        value = _as_proj(value, p)
        history.append(value)
        if prev is not None:
            state = (prev, value, k % p)
            if state in seen:
                k1 = seen[state]
                cycle_len = k - k1
                cycle = history[k1:k]
                for d in range(1, cycle_len + 1):
                    if cycle_len % d == 0 and all(
                            cycle[i] == cycle[(i + d) % cycle_len]
                            for i in range(cycle_len)):
                        return d
                return cycle_len
            seen[state] = k
        prev = value
        if k > cap:
            raise NoPeriodFoundError(
                f"no state repeat within {cap} steps; generator misbehaving")
    raise NoPeriodFoundError("sequence ended before a state repeated")
