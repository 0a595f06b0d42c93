"""Closed-form bounds, recursions and parameter schedules for f_N(n, c).

f_N(n, c) is the smallest cube dimension forced on subsets of [N]^n of
density at least c.  This module evaluates the inductive lower-bound step,
its iteration and closed form, the feasibility inequalities behind the
probabilistic constructions, and the density/dimension schedules those
constructions use.  All logarithms are base N unless a base is written
explicitly; every floor/ceil that decides a branch is settled by exact
rational comparisons, never by a bare float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactmath import as_fraction, ceil_log, floor_log, floor_log_log, log_float

# Bit budget for exact big-integer fallbacks in boundary decisions; beyond
# this a genuinely ambiguous comparison raises instead of guessing.
_EXACT_BITS_CAP = 10 ** 8


@dataclass(frozen=True)
class BoundParams:
    """Parameter bundle (N, c, eps, alpha) with alpha = 2 + eps/3."""

    N: int
    c: Fraction
    eps: Fraction
    alpha: Fraction

    @classmethod
    def make(cls, N: int, c, eps) -> "BoundParams":
        c = as_fraction(c)
        eps = as_fraction(eps)
        if N < 2:
            raise ValueError(f"N must be >= 2, got {N}")
        if not 0 < c <= 1:
            raise ValueError(f"c must lie in (0, 1], got {c}")
        if eps <= 0:
            raise ValueError(f"eps must be positive, got {eps}")
        return cls(N=N, c=c, eps=eps, alpha=2 + eps / 3)


def inductive_step(n: int, c, N: int) -> tuple[int, Fraction]:
    """One application of the density-increment recursion.

    Maps (n, c) to (n - ceil(log_N(8 c^-2)), 2 c^2 / (c+4)^2); requires n
    strictly above the ceiling so the new dimension stays positive.
    """
    c = as_fraction(c)
    if not 0 < c <= 1:
        raise ValueError(f"c must lie in (0, 1], got {c}")
    r = ceil_log(8 / c ** 2, N)
    if n <= r:
        raise ValueError(f"n={n} too small: need n > ceil(log_{N}(8 c^-2)) = {r}")
    return n - r, 2 * c ** 2 / (c + 4) ** 2


def lower_bound_iterated(n: int, c, N: int) -> int:
    """Number of inductive steps possible from (n, c): a lower bound on f."""
    c = as_fraction(c)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    steps = 0
    while True:
        try:
            n, c = inductive_step(n, c, N)
        except ValueError:
            return steps
        steps += 1


@dataclass(frozen=True)
class ClosedFormBound:
    value: int  # clamped at 0
    raw: int  # pre-clamp formula value
    clamped: bool
    alpha: Fraction
    initial_step: bool  # one inductive step was taken first (c > 1/2)


def _c_is_power_of_n(c: Fraction, N: int) -> Optional[int]:
    e = floor_log(c, N)
    return e if Fraction(N) ** e == c else None


def _alpha_pow_le_x(k: int, n: int, c: Fraction, N: int, alpha: Fraction) -> bool:
    """Exact test alpha^k <= x for x = 1 + (1-n)(alpha-1)/log_N(c).

    For k >= 1 this reduces to c^v >= N^u with u/v = (1-n)(alpha-1)/(alpha^k - 1)
    (the sign flip absorbs log_N(c) < 0), which is a big-integer comparison.
    """
    if k <= 0:
        return True  # x >= 1 always
    ratio = ((1 - n) * (alpha - 1)) / (alpha ** k - 1)  # = u/v, exact
    u, v = ratio.numerator, ratio.denominator
    bits = v * max(c.numerator.bit_length(), c.denominator.bit_length()) + abs(u) * N.bit_length()
    if bits > _EXACT_BITS_CAP:
        raise ArithmeticError(
            "closed-form floor is within float noise of a boundary and the exact "
            "fallback would need infeasibly large integers"
        )
    return c.numerator ** v * N ** max(0, -u) >= c.denominator ** v * N ** max(0, u)


def lower_bound_closed_form(n: int, c, N: int, alpha) -> ClosedFormBound:
    """Closed-form lower bound floor(log_alpha((1-n)(alpha-1)/log_N(c) + 1)) - 1.

    Exact for any rational c: the floor is seeded by floats and settled by
    rational power comparisons.  For c > 1/2 one inductive step is applied
    first so the iteration map stays inside its stated domain, and the step
    contributes +1 to the bound.
    """
    c = as_fraction(c)
    alpha = as_fraction(alpha)
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if c == 1:
        raise ValueError("c = 1 has log c = 0; the closed form does not apply")
    if not 0 < c < 1:
        raise ValueError(f"c must lie in (0, 1), got {c}")
    if alpha <= 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")

    initial_step = c > Fraction(1, 2)
    bonus = 0
    if initial_step:
        try:
            n, c = inductive_step(n, c, N)
            bonus = 1
        except ValueError:
            return ClosedFormBound(0, 0, False, alpha, True)
        if n < 2:
            return ClosedFormBound(bonus, bonus, False, alpha, True)

    e = _c_is_power_of_n(c, N)
    if e is not None:
        x = 1 + Fraction(1 - n, e) * (alpha - 1)
        k = floor_log(x, alpha)
    else:
        log_c = log_float(c) / math.log(N)
        x_f = 1.0 + (1 - n) * (float(alpha) - 1.0) / log_c
        y = math.log(x_f) / log_float(alpha)
        k = math.floor(y)
        # Trust the float only away from integer boundaries; candidates on
        # either side of a near-integer y are settled exactly.
        tol = 1e-9 * max(1.0, abs(y))
        if y - k < tol:
            if not _alpha_pow_le_x(k, n, c, N, alpha):
                k -= 1
        elif y - k > 1 - tol:
            if _alpha_pow_le_x(k + 1, n, c, N, alpha):
                k += 1
    raw = k - 1 + bonus
    return ClosedFormBound(max(0, raw), raw, raw < 0, alpha, initial_step)


def beta(c, N: int, alpha) -> float:
    """The additive constant in f >= log_alpha(n) - beta(c), reporting only."""
    c = as_fraction(c)
    alpha = as_fraction(alpha)
    if not 0 < c < 1:
        raise ValueError(f"c must lie in (0, 1), got {c}")
    if alpha <= 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    la = log_float(alpha)
    log_inv_c = log_float(1 / c) / math.log(N)
    return math.log(2) / la + math.log(log_inv_c) / la - log_float(alpha - 1) / la + 2


@dataclass(frozen=True)
class EpsilonCheck:
    holds: bool
    lhs: float  # 1 / (1 + log2(1 + eps/6))
    rhs: float  # 1 - eps/2
    margin: float  # lhs - rhs


def epsilon_small_check(eps) -> EpsilonCheck:
    """Exact decision of 1/(1 + log2(1 + eps/6)) >= 1 - eps/2.

    For eps < 2 this is equivalent to (1 + eps/6)^v <= 2^u where u/v =
    eps/(2 - eps), an exact power comparison; for eps >= 2 the right side is
    nonpositive and the inequality is immediate.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    t = 1 + eps / 6
    lhs = 1.0 / (1.0 + math.log2(float(t)))
    rhs = 1.0 - float(eps) / 2.0
    if eps >= 2:
        return EpsilonCheck(True, lhs, rhs, lhs - rhs)
    bound = eps / (2 - eps)
    u, v = bound.numerator, bound.denominator
    holds = t.numerator ** v * 2 ** max(0, -u) <= t.denominator ** v * 2 ** max(0, u)
    return EpsilonCheck(holds, lhs, rhs, lhs - rhs)


def c_n_schedule(n: int, N: int) -> Fraction:
    """Density schedule 1 - N^(-floor(log_N log_N n)), exact.

    Needs n >= N so the inner logarithm is at least 1.  Degenerates to 0 for
    n < N^N (the floor is 0 there), which callers must tolerate.
    """
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if n < N:
        raise ValueError(f"need n >= N for a nonnegative exponent, got n={n}")
    k = floor_log_log(n, N)
    return 1 - Fraction(1, N ** k)


@dataclass(frozen=True)
class EqEpReport:
    holds: bool  # base-N reading (the module-wide log convention)
    lhs: float
    rhs: float
    holds_natural: bool  # same inequality with natural logs on both log terms
    lhs_natural: float
    rhs_natural: float
    c_n: Fraction


def check_eq_ep(n: int, eps, N: int) -> EqEpReport:
    """Feasibility inequality for the dense construction at scale n.

    log(4) + n((1+eps) log2(n) + 1) < n^(1+eps/2) log(1/c_n), logs base N on
    the two unmarked log terms (the natural-log reading is also reported).
    The log2(n) factor groups with (1+eps): that is the only reading under
    which the inequality follows from n(r+1) with r < (1+eps) log2(n).
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    c_n = c_n_schedule(n, N)
    middle = n * ((1 + float(eps)) * math.log2(n) + 1)
    power = float(n) ** (1 + float(eps) / 2)
    if c_n == 0:
        # log(1/c_n) is +infinity; the inequality holds vacuously.
        return EqEpReport(True, math.inf, math.inf, True, math.inf, math.inf, c_n)
    log_inv_c_nat = log_float(1 / c_n)
    lhs_nat = math.log(4) + middle
    rhs_nat = power * log_inv_c_nat
    ln_n = math.log(N)
    lhs_base = math.log(4) / ln_n + middle
    rhs_base = power * log_inv_c_nat / ln_n
    return EqEpReport(
        holds=lhs_base < rhs_base,
        lhs=lhs_base,
        rhs=rhs_base,
        holds_natural=lhs_nat < rhs_nat,
        lhs_natural=lhs_nat,
        rhs_natural=rhs_nat,
        c_n=c_n,
    )


def choose_r_dense(n: int, eps) -> Optional[int]:
    """Smallest integer strictly inside ((1+eps/2) log2(n), (1+eps) log2(n)).

    Exact: with eps = p/q, r > (1+eps/2) log2(n) iff 2^(2qr) > n^(2q+p) and
    r < (1+eps) log2(n) iff 2^(qr) < n^(q+p).  Returns None when the open
    interval contains no integer (small n).
    """
    eps = as_fraction(eps)
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    p, q = eps.numerator, eps.denominator
    r = 1
    while not 2 ** (2 * q * r) > n ** (2 * q + p):
        r += 1
    if 2 ** (q * r) < n ** (q + p):
        return r
    return None


def choose_r_sparse(eps) -> int:
    """Smallest r with 2^(r-1)/(r+3) > 1/eps, by exact upward scan."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    r = 1
    while not eps * 2 ** (r - 1) > r + 3:
        r += 1
    return r


def lll_condition(L: int, p, r: int) -> bool:
    """Exact decision of 4 L p^(2^r) < 1.

    Decided by logarithms with a safety margin; anything within float noise
    of the boundary falls back to exact rational arithmetic.
    """
    p = as_fraction(p)
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    exp = 2 ** r
    log_total = math.log(4) + math.log(L) + exp * log_float(p)
    scale = abs(math.log(4) + math.log(L)) + abs(exp * log_float(p))
    if abs(log_total) > 1e-9 * max(scale, 1.0):
        return log_total < 0
    # Boundary-tight: decide exactly (small exponents only; a tie with an
    # astronomically large exponent is not decidable within memory).
    bits = exp * max(p.numerator.bit_length(), p.denominator.bit_length())
    if bits > _EXACT_BITS_CAP:
        raise ArithmeticError("LLL comparison too close to the boundary for exact fallback")
    return 4 * L * p.numerator ** exp < p.denominator ** exp


def count_affine_maps_bound(N: int, n: int, r: int) -> int:
    """Upper bound N^(n(r+1)) on the number of injective affine cube maps."""
    if N < 2 or n < 0 or r < 0:
        raise ValueError("need N >= 2, n >= 0, r >= 0")
    return N ** (n * (r + 1))


def bound_table_rows(N: int, ns, c, eps) -> list[dict]:
    """Rows (N, n, c, iterated_bound, closed_form_bound, alpha, beta) for CSV."""
    c = as_fraction(c)
    params = BoundParams.make(N, c, eps)
    rows = []
    for n in ns:
        iterated = lower_bound_iterated(n, c, N)
        if c == 1 or n < 2:
            closed: Optional[int] = None
            b: Optional[float] = None
        else:
            closed = lower_bound_closed_form(n, c, N, params.alpha).value
            b = beta(c, N, params.alpha)
        rows.append(
            {
                "N": N,
                "n": n,
                "c": str(c),
                "iterated_bound": iterated,
                "closed_form_bound": closed,
                "alpha": str(params.alpha),
                "beta": b,
            }
        )
    return rows
