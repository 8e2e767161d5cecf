"""Closed-form offspring laws and generating functions for rumor spread on trees.

``X`` counts the new spreaders generated by a non-root spreader on the degree
``d+1`` tree; ``N`` the spreaders generated by the root.  Primed variants
thin every successful contact by the spread probability ``p``.  All laws are
exact rationals; the generating functions are evaluated through their finite
polynomial forms, which stay bounded and well-defined at every point of
``[0, 1]`` (including s = 0 with p = 1, where the closed gamma-function forms
are singular).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .specfun import (
    EXACT_LIMIT,
    ExactScalar,
    log_partial_exp_sum,
    partial_exp_sum,
)

_SUM_TOL = 1e-9


def _as_fraction(p) -> Fraction:
    """Exact rational view of a probability (floats use their binary value)."""
    return p if isinstance(p, Fraction) else Fraction(p)


def _check_d(d: int) -> None:
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")


def _check_p(p) -> None:
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1], got {p}")


def _check_s(s: float) -> None:
    if not 0 <= s <= 1:
        raise ValueError(f"s must lie in [0, 1], got {s}")


@dataclass(frozen=True)
class Pmf:
    """Probability mass function on a contiguous integer support."""

    support_min: int
    probs: tuple

    def __post_init__(self) -> None:
        if len(self.probs) == 0:
            raise ValueError("empty pmf")
        if any(q < 0 for q in self.probs):
            raise ValueError("negative probability mass")
        total = sum(self.probs)
        if self.is_exact:
            if total != 1:
                raise ValueError(f"exact pmf sums to {total}, not 1")
        elif abs(float(total) - 1.0) > _SUM_TOL:
            raise ValueError(f"pmf sums to {float(total)!r}, not 1")

    @property
    def is_exact(self) -> bool:
        return all(isinstance(q, (Fraction, int)) for q in self.probs)

    @property
    def support_max(self) -> int:
        return self.support_min + len(self.probs) - 1

    def support(self) -> range:
        return range(self.support_min, self.support_max + 1)

    def p(self, value: int):
        """Mass at ``value`` (zero outside the support)."""
        if self.support_min <= value <= self.support_max:
            return self.probs[value - self.support_min]
        return Fraction(0) if self.is_exact else 0.0

    def mean(self):
        return sum(v * q for v, q in zip(self.support(), self.probs))

    def to_floats(self) -> np.ndarray:
        return np.array([float(q) for q in self.probs], dtype=float)

    def pgf(self, s: float) -> float:
        """Evaluate ``E[s^V]`` directly from the masses (reference path)."""
        acc = 0.0
        for q in reversed([float(x) for x in self.probs]):
            acc = acc * s + q
        return acc * s ** self.support_min if self.support_min else acc


def tv_distance(a: Pmf | Sequence[float], b: Pmf | Sequence[float]) -> float:
    """Total-variation distance between two finite distributions."""

    def as_map(x) -> dict[int, float]:
        if isinstance(x, Pmf):
            return {v: float(q) for v, q in zip(x.support(), x.probs)}
        return dict(enumerate(float(q) for q in x))

    ma, mb = as_map(a), as_map(b)
    keys = set(ma) | set(mb)
    return 0.5 * sum(abs(ma.get(k, 0.0) - mb.get(k, 0.0)) for k in keys)


def law_X(d: int) -> Pmf:
    """Exact law of X on {0, ..., d}: P(X=i) = C(d,i) (i+1)! / (d+1)^(i+1)."""
    _check_d(d)
    probs = tuple(
        Fraction(math.comb(d, i) * math.factorial(i + 1), (d + 1) ** (i + 1))
        for i in range(d + 1)
    )
    return Pmf(0, probs)


def mean_X(d: int, exact: bool | None = None) -> ExactScalar:
    """E(X) = d! S(d, d+1) / (d+1)^d, exact for moderate d, log-space beyond."""
    _check_d(d)
    s = partial_exp_sum(d, d + 1, exact=exact)
    if s.is_exact:
        return ExactScalar.from_fraction(
            Fraction(math.factorial(d)) * s.fraction / (d + 1) ** d
        )
    return ExactScalar.from_log(math.lgamma(d + 1) + s.log_value - d * math.log(d + 1))


def law_N(d: int) -> Pmf:
    """Exact law of N on {1, ..., d+1}: P(N=i) = i! C(d+1,i) i / (d+1)^(i+1)."""
    _check_d(d)
    probs = tuple(
        Fraction(math.factorial(i) * math.comb(d + 1, i) * i, (d + 1) ** (i + 1))
        for i in range(1, d + 2)
    )
    return Pmf(1, probs)


def mean_N(d: int) -> Fraction:
    _check_d(d)
    return Fraction(law_N(d).mean())


def _thinned(base: Pmf, p, support_min: int, size: int) -> Pmf:
    """Binomial thinning of an exact integer law by retention probability p."""
    pf = _as_fraction(p)
    qf = 1 - pf
    out = [Fraction(0)] * size
    for k, mass in zip(base.support(), base.probs):
        for i in range(k + 1):
            out[i] += math.comb(k, i) * pf ** i * qf ** (k - i) * mass
    return Pmf(support_min, tuple(out))


def law_X_prime(d: int, p) -> Pmf:
    """Law of X' on {0, ..., d}: X given X=i thinned by Binomial(i, p)."""
    _check_d(d)
    _check_p(p)
    if p == 1:
        return law_X(d)
    return _thinned(law_X(d), p, 0, d + 1)


def law_N_prime(d: int, p) -> Pmf:
    """Law of N' on {0, ..., d+1}; at p = 1 this is law_N with P(N'=0) = 0.

    Computed by binomial mixing of law_N, which regroups the printed
    (p/(1-p))^i form into an expression that stays finite for every p.
    """
    _check_d(d)
    _check_p(p)
    if p == 1:
        return Pmf(0, (Fraction(0),) + law_N(d).probs)
    return _thinned(law_N(d), p, 0, d + 2)


def law_N_prime_printed(d: int, p) -> Pmf:
    """Literal evaluation of the published N' formula (requires p < 1).

    P(N'=i) = (p/(1-p))^i (d+1)^{-1} sum_{k>=i} k k! C(k,i) C(d+1,k) ((1-p)/(d+1))^k.
    Kept as an independent cross-check of the regrouped form.
    """
    _check_d(d)
    _check_p(p)
    if p == 1:
        raise ValueError("printed form is undefined at p = 1; use law_N_prime")
    pf = _as_fraction(p)
    ratio = pf / (1 - pf)
    probs = []
    for i in range(d + 2):
        inner = Fraction(0)
        for k in range(max(i, 1), d + 2):
            inner += (
                k
                * math.factorial(k)
                * math.comb(k, i)
                * math.comb(d + 1, k)
                * ((1 - pf) / (d + 1)) ** k
            )
        probs.append(ratio ** i * inner / (d + 1))
    return Pmf(0, tuple(probs))


def beta_paper(d: int, exact: bool | None = None) -> ExactScalar:
    """Published traversal probability (e^{d+1} Gamma(d, d+1) - Gamma(d)) / (d+1)^d.

    Equals (d-1)! (S(d, d+1) - 1) / (d+1)^d.  See ``beta_series`` for the
    first-principles contact-sequence sum; the two differ by the final term
    (d-1)!/(d+1)^d, and downstream thresholds default to this published form.

    d = 1 (a path vertex of degree 2) is admitted for the hub-tree k = 2
    degenerate case; the closed form gives exactly 0 there.
    """
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    if d == 1:
        return ExactScalar.from_fraction(0)
    use_exact = exact if exact is not None else d <= EXACT_LIMIT
    if use_exact:
        s = partial_exp_sum(d, d + 1, exact=True)
        return ExactScalar.from_fraction(
            math.factorial(d - 1) * (s.fraction - 1) / Fraction((d + 1) ** d)
        )
    log_s = log_partial_exp_sum(d, d + 1)
    log_s_minus_1 = log_s + math.log1p(-math.exp(-log_s))
    return ExactScalar.from_log(math.lgamma(d) + log_s_minus_1 - d * math.log(d + 1))


def beta_series(d: int, exact: bool | None = None) -> ExactScalar:
    """First-principles traversal probability: sum over all d contact paths.

    P(first contact with the target on attempt i) = [(d-1)!/(d-i)!]/(d+1)^i,
    summed for i = 1..d.  Equals (d-1)! S(d, d+1) / (d+1)^d.
    """
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    use_exact = exact if exact is not None else d <= EXACT_LIMIT
    if use_exact:
        total = Fraction(0)
        term = Fraction(1)
        for i in range(1, d + 1):
            # term enters as (d-1)(d-2)...(d-i+1) / (d+1)^(i-1)
            total += term / (d + 1)
            term *= Fraction(d - i, d + 1)
        return ExactScalar.from_fraction(total)
    # same series accumulated in log space
    log_term = -math.log(d + 1)
    log_sum = log_term
    for i in range(2, d + 1):
        log_term += math.log(d - i + 1) - math.log(d + 1)
        hi = max(log_sum, log_term)
        log_sum = hi + math.log1p(math.exp(-abs(log_sum - log_term)))
    return ExactScalar.from_log(log_sum)


def beta_value(d: int, form: str = "paper", exact: bool | None = None) -> ExactScalar:
    """Traversal probability in the requested form ('paper' or 'series')."""
    if form == "paper":
        return beta_paper(d, exact=exact)
    if form == "series":
        return beta_series(d, exact=exact)
    raise ValueError(f"unknown beta form {form!r}")


def beta_gap(d: int) -> Fraction:
    """Exact gap beta_series(d) - beta_paper(d) = (d-1)!/(d+1)^d."""
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    return Fraction(math.factorial(d - 1), (d + 1) ** d)


def pgf_X_prime(d: int, p: float, s: float) -> float:
    """G_{X'}(s) = (d!/(d+1)) sum_{n=0}^{d} (n+1) zeta^n / (d-n)!.

    zeta = (s p + 1 - p)/(d+1).  Accumulated as a product of factors
    (d-n+1)*zeta <= 1, so the evaluation is stable for any d.
    """
    _check_d(d)
    _check_p(p)
    _check_s(s)
    zeta = (s * p + 1.0 - p) / (d + 1)
    g = 1.0 / (d + 1)  # n = 0 contribution factor
    total = g
    for n in range(1, d + 1):
        g *= (d - n + 1) * zeta
        total += (n + 1) * g
    return total


def pgf_N_prime(d: int, p: float, s: float) -> float:
    """G_{N'}(s) = d! sum_{n=1}^{d+1} n zeta^n / (d+1-n)!, same stable scheme.

    At p = 1 this is exactly the pgf of N; no separate branch is needed
    because the finite sum never divides by 1 - p.
    """
    _check_d(d)
    _check_p(p)
    _check_s(s)
    zeta = (s * p + 1.0 - p) / (d + 1)
    g = zeta  # n = 1: d!/d! * zeta
    total = g
    for n in range(2, d + 2):
        g *= (d + 2 - n) * zeta
        total += n * g
    return total


@dataclass(frozen=True)
class PgfSpec:
    """Parameter bundle selecting one of the two generating functions."""

    d: int
    p: float
    kind: str = "offspring"  # 'offspring' (X') or 'root' (N')

    def __post_init__(self) -> None:
        _check_d(self.d)
        _check_p(self.p)
        if self.kind not in ("offspring", "root"):
            raise ValueError(f"kind must be 'offspring' or 'root', got {self.kind!r}")

    def __call__(self, s: float) -> float:
        if self.kind == "offspring":
            return pgf_X_prime(self.d, self.p, s)
        return pgf_N_prime(self.d, self.p, s)


def enumerate_traversal_probability(d: int) -> Fraction:
    """Brute-force oracle for beta(d): exhaust all contact sequences.

    A spreader has d+1 neighbors (one informer, d ignorants, one of them the
    designated target).  Contacts pick uniformly among the d+1 neighbors;
    the race ends at the first repeat/informer contact.  Sums the exact
    probability of every sequence that touches the target.  Linear recursion
    depth in d; intended for small d.
    """
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    total = Fraction(0)
    # state: number of fresh non-target ignorants remaining, target fresh
    def recurse(fresh_others: int, prob: Fraction) -> None:
        nonlocal total
        # contact the target now
        total += prob / (d + 1)
        # or contact one of the fresh others, then continue
        if fresh_others > 0:
            recurse(fresh_others - 1, prob * Fraction(fresh_others, d + 1))

    recurse(d - 1, Fraction(1))
    return total


def pmf_from_counts(counts: Iterable[int], support_min: int = 0) -> Pmf:
    """Empirical Pmf from raw outcome counts."""
    counts = list(counts)
    n = sum(counts)
    if n <= 0:
        raise ValueError("no observations")
    return Pmf(support_min, tuple(c / n for c in counts))
