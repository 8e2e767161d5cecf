"""Critical values and survival probabilities for rumor spread on trees.

The homogeneous-tree threshold is ``p_c(d) = 1 / E(X)``; the hub-tree
threshold multiplies it by a power of the path-traversal probability.  The
survival probability comes from the smallest fixed point of the offspring
generating function.  Criticality decisions are made in exact rational
arithmetic before any floating-point root finding, so "theta equals zero at
or below threshold" is an identity rather than a tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import NumericFault
from .laws import (
    _as_fraction,
    beta_value,
    mean_X,
    pgf_N_prime,
    pgf_X_prime,
)
from .specfun import ExactScalar

_BISECT_HI = 1.0 - 1e-9
_BISECT_TOL = 1e-12
_BISECT_MAX_ITER = 200
_RESIDUAL_BOUND = 1e-10


@dataclass(frozen=True)
class ThresholdReport:
    """A critical value with exact, float, and asymptotic views."""

    value: ExactScalar | None
    float_value: float
    asymptotic_value: float | None
    feasible: bool


@dataclass(frozen=True)
class RootResult:
    """Smallest non-negative fixed point of the offspring pgf."""

    psi: float
    iterations: int
    residual: float


def _check_d(d: int, minimum: int = 2) -> None:
    if d < minimum:
        raise ValueError(f"d must be at least {minimum}, got {d}")


def _check_p(p) -> None:
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1], got {p}")


def is_subcritical(d: int, p) -> bool:
    """Exact test of p * E(X) <= 1 (extinction is almost sure)."""
    _check_d(d)
    _check_p(p)
    m = mean_X(d)
    if m.is_exact:
        return _as_fraction(p) * m.fraction <= 1
    return math.log(float(p)) + m.log_value <= 0.0


def p_critical(d: int, exact: bool | None = None) -> ThresholdReport:
    """p_c(d) = (d+1)^d / (d! S(d, d+1)), with asymptote sqrt(2/(pi d)).

    For d = 2 the value is 9/8 >= 1 and the report is flagged infeasible:
    the rumor dies for every p, matching E(X) <= 1.
    """
    _check_d(d)
    value = mean_X(d, exact=exact) ** (-1)
    float_value = value.as_float()
    return ThresholdReport(
        value=value,
        float_value=float_value,
        asymptotic_value=math.sqrt(2.0 / (math.pi * d)),
        feasible=value < 1,
    )


def psi_root(d: int, p: float) -> RootResult:
    """Smallest non-negative root of G_{X'}(s) = s.

    Subcritical/critical inputs (decided exactly) return psi = 1.  Otherwise
    the root in [0, 1) is bracketed by bisection and cross-checked against
    fixed-point iteration from 0; disagreement beyond 1e-10 raises
    NumericFault.
    """
    _check_d(d)
    _check_p(p)
    if is_subcritical(d, p):
        return RootResult(psi=1.0, iterations=0, residual=0.0)

    def f(s: float) -> float:
        return pgf_X_prime(d, p, s) - s

    lo, hi = 0.0, _BISECT_HI
    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo <= 0.0 or f_hi >= 0.0:
        raise NumericFault(
            f"pgf fixed-point bracket failed for d={d}, p={p}: f(0)={f_lo}, f(hi)={f_hi}"
        )
    iterations = 0
    while hi - lo > _BISECT_TOL and iterations < _BISECT_MAX_ITER:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    psi = 0.5 * (lo + hi)
    residual = abs(f(psi))
    if residual > _RESIDUAL_BOUND:
        raise NumericFault(f"bisection residual {residual} exceeds bound")

    # independent fixed-point pass from below; converges monotonically to the
    # smallest root because the pgf is increasing and convex
    s = 0.0
    for _ in range(1_000_000):
        s_next = pgf_X_prime(d, p, s)
        if abs(s_next - s) < 1e-13:
            s = s_next
            break
        s = s_next
    else:
        raise NumericFault(f"fixed-point iteration did not converge for d={d}, p={p}")
    if abs(s - psi) > _RESIDUAL_BOUND:
        raise NumericFault(
            f"bisection ({psi}) and fixed-point ({s}) roots disagree for d={d}, p={p}"
        )
    return RootResult(psi=psi, iterations=iterations, residual=residual)


def theta(d: int, p: float) -> float:
    """Survival probability theta(d, p) = 1 - G_{N'}(psi); 0 when subcritical."""
    _check_d(d)
    _check_p(p)
    if is_subcritical(d, p):
        return 0.0
    root = psi_root(d, p)
    return 1.0 - pgf_N_prime(d, p, root.psi)


def theta_double_sum(d: int, p: float, psi: float | None = None) -> float:
    """The printed double-sum form of theta, regrouped to avoid 1/(1-p).

    Combining (p psi/(1-p))^i with (1-p)^k gives (p psi)^i (1-p)^(k-i), which
    is finite for all p in (0, 1]; the published expression is recovered
    verbatim for p < 1.
    """
    _check_d(d)
    _check_p(p)
    if psi is None:
        psi = psi_root(d, p).psi
    q = 1.0 - p
    total = 0.0
    for i in range(d + 2):
        inner = 0.0
        for k in range(max(i, 1), d + 2):
            inner += (
                k
                * math.factorial(k)
                * math.comb(k, i)
                * math.comb(d + 1, k)
                * q ** (k - i)
                / (d + 1) ** k
            )
        total += (p * psi) ** i * inner
    return 1.0 - total / (d + 1)


def alpha_critical(
    d: int, k: int, h: int, beta_form: str = "paper", exact: bool | None = None
) -> ThresholdReport:
    """alpha_c(d, k, h) = p_c(d) * beta(k-1)^(1-h).

    ``beta_form`` selects the published closed form ('paper', default) or the
    first-principles series ('series'); see the beta audit.  Values >= 1 are
    reported with feasible = False (the rumor dies for every alpha).
    """
    _check_d(d, minimum=3)
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if h < 1:
        raise ValueError(f"h must be at least 1, got {h}")
    if k >= d:
        warnings.warn(
            f"alpha_critical assumes k < d; got k={k}, d={d}", stacklevel=2
        )
    pc = p_critical(d, exact=exact).value
    if h == 1:
        value = pc
    else:
        beta = beta_value(k - 1, form=beta_form, exact=exact)
        if beta.fraction == 0:
            # paper-form beta(1) = 0 (k = 2): no hub is ever reached through
            # a path, so the threshold is infinite for h >= 2.
            return ThresholdReport(
                value=None,
                float_value=math.inf,
                asymptotic_value=None,
                feasible=False,
            )
        value = pc * beta ** (1 - h)
    return ThresholdReport(
        value=value,
        float_value=value.as_float(),
        asymptotic_value=None,
        feasible=value < 1,
    )


def max_h(d: int, k: int, beta_form: str = "paper", exact: bool | None = None) -> int:
    """Largest h with alpha_c(d, k, h) < 1, i.e. h < log p_c / log beta(k-1) + 1.

    Evaluated by direct comparison (exact rationals when available) rather
    than through logs, so the strict inequality carries no float fuzz for
    moderate d.
    """
    _check_d(d, minimum=3)
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    pc = p_critical(d, exact=exact).value
    if not pc < 1:
        raise ValueError(f"p_c({d}) >= 1: no feasible h exists")
    beta = beta_value(k - 1, form=beta_form, exact=exact)
    if beta.fraction == 0:
        return 1  # paper-form beta(1) = 0: only h = 1 is feasible
    # alpha_c(h) < 1  <=>  p_c < beta^(h-1); beta < 1 so the power decreases
    h = 1
    power = beta
    while pc < power:
        h += 1
        power = power * beta
        if h > 10_000:  # pragma: no cover
            raise NumericFault("max_h failed to terminate")
    return h


def asymptotic_h_bound(d: int, k: int) -> float:
    """The large-d feasibility scale log d / log k for the path length h."""
    _check_d(d, minimum=3)
    if k < 2:
        raise ValueError(f"k must be at least 2 (log k must be positive), got {k}")
    return math.log(d) / math.log(k)
