"""Partial exponential sums and the integer-argument incomplete gamma function.

For integer arguments the incomplete gamma function factors as
``Gamma(m, n) = (m-1)! * exp(-n) * S(m, n)`` with ``S(m, n) = sum_{i<m} n^i/i!``.
Everything downstream (offspring means, critical thresholds, traversal
probabilities) consumes the *scaled* value ``exp(n) * Gamma(m, n)``, which is
rational, so this module works with exact rationals whenever feasible and
falls back to log-space floats for large arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

#: largest first argument for which operations default to exact rationals
EXACT_LIMIT = 500

#: relative accuracy target documented for log-mode evaluation
LOG_MODE_RTOL = 1e-10

_LN2 = math.log(2.0)


def log_int(n: int) -> float:
    """Natural log of a positive integer, safe for arbitrarily large values."""
    if n <= 0:
        raise ValueError("log_int requires a positive integer")
    shift = max(n.bit_length() - 64, 0)
    return math.log(n >> shift) + shift * _LN2


def log_fraction(value: Fraction) -> float:
    """Natural log of a positive rational."""
    if value <= 0:
        raise ValueError("log_fraction requires a positive value")
    return log_int(value.numerator) - log_int(value.denominator)


@dataclass(frozen=True)
class ExactScalar:
    """A scalar carried as an exact rational, a log-space float, or both.

    ``fraction`` is the exact value when representable; ``log_value`` is its
    natural log when the value is positive.  Large-argument code paths drop
    the rational and keep only ``log_value`` (relative target 1e-10).
    """

    fraction: Fraction | None
    log_value: float | None

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> "ExactScalar":
        fr = Fraction(value)
        log_value = log_fraction(fr) if fr > 0 else None
        return cls(fr, log_value)

    @classmethod
    def from_log(cls, log_value: float) -> "ExactScalar":
        return cls(None, float(log_value))

    @property
    def is_exact(self) -> bool:
        return self.fraction is not None

    @property
    def numerator(self) -> int:
        if self.fraction is None:
            raise ValueError("value is not held exactly")
        return self.fraction.numerator

    @property
    def denominator(self) -> int:
        if self.fraction is None:
            raise ValueError("value is not held exactly")
        return self.fraction.denominator

    def as_float(self) -> float:
        if self.fraction is not None:
            try:
                return float(self.fraction)
            except OverflowError:
                pass
        if self.log_value is not None:
            try:
                return math.exp(self.log_value)
            except OverflowError:
                return math.inf
        return 0.0 if self.fraction == 0 else float(self.fraction)  # pragma: no cover

    def __float__(self) -> float:
        return self.as_float()

    def _require_positive(self) -> float:
        if self.log_value is None:
            raise ValueError("operation requires a positive value")
        return self.log_value

    def __mul__(self, other: "ExactScalar | int | Fraction") -> "ExactScalar":
        if not isinstance(other, ExactScalar):
            other = ExactScalar.from_fraction(Fraction(other))
        if self.fraction is not None and other.fraction is not None:
            return ExactScalar.from_fraction(self.fraction * other.fraction)
        if self.fraction == 0 or other.fraction == 0:
            return ExactScalar.from_fraction(0)
        return ExactScalar.from_log(self._require_positive() + other._require_positive())

    __rmul__ = __mul__

    def __truediv__(self, other: "ExactScalar | int | Fraction") -> "ExactScalar":
        if not isinstance(other, ExactScalar):
            other = ExactScalar.from_fraction(Fraction(other))
        if self.fraction is not None and other.fraction is not None:
            return ExactScalar.from_fraction(self.fraction / other.fraction)
        if self.fraction == 0:
            other._require_positive()
            return ExactScalar.from_fraction(0)
        return ExactScalar.from_log(self._require_positive() - other._require_positive())

    def __pow__(self, exponent: int) -> "ExactScalar":
        if self.fraction is not None:
            return ExactScalar.from_fraction(self.fraction ** exponent)
        return ExactScalar.from_log(self._require_positive() * exponent)

    def _cmp_key(self, other) -> tuple[float, float]:
        """Comparable pair (self, other) in a common scale."""
        if isinstance(other, ExactScalar):
            if self.fraction is not None and other.fraction is not None:
                return float(self.fraction - other.fraction), 0.0
            return self._require_positive(), other._require_positive()
        other = Fraction(other)
        if self.fraction is not None:
            return float(self.fraction - other), 0.0
        if other <= 0:
            return 1.0, 0.0  # log-mode values are positive
        return self._require_positive(), log_fraction(other)

    def __lt__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a > b

    def __ge__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a >= b

    def __repr__(self) -> str:  # pragma: no cover
        if self.fraction is not None:
            return f"ExactScalar({self.fraction})"
        return f"ExactScalar(log={self.log_value!r})"


@dataclass(frozen=True)
class GammaArgs:
    """Integer argument pair (m, n) with the domain checks applied once."""

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")
        if self.n < 0:
            raise ValueError(f"n must be a non-negative integer, got {self.n}")


def _use_exact(m: int, exact: bool | None) -> bool:
    return exact if exact is not None else m <= EXACT_LIMIT


def _partial_exp_sum_scaled_int(m: int, n: int) -> int:
    """``(m-1)! * S(m, n)`` as an exact integer, via a Horner recurrence.

    The coefficients ``(m-1)!/i!`` are built by the same descending product
    that Horner consumes, so no division or gcd happens until the caller
    normalizes the final Fraction.
    """
    acc = 1  # coefficient ladder starts at i = m-1
    coeff = 1
    for i in range(m - 2, -1, -1):
        coeff *= i + 1
        acc = acc * n + coeff
    return acc


def log_partial_exp_sum(m: int, n: int) -> float:
    """``log S(m, n)`` by stable log-space accumulation (n >= 1)."""
    if n == 0:
        return 0.0
    log_n = math.log(n)
    log_term = 0.0
    log_sum = 0.0
    for i in range(1, m):
        log_term += log_n - math.log(i)
        hi = max(log_sum, log_term)
        log_sum = hi + math.log1p(math.exp(-abs(log_sum - log_term)))
    return log_sum


def partial_exp_sum(m: int, n: int, exact: bool | None = None) -> ExactScalar:
    """``S(m, n) = sum_{i=0}^{m-1} n^i / i!`` as an ExactScalar.

    Exact rational for ``m <= EXACT_LIMIT`` (or when forced), log-space float
    otherwise.
    """
    args = GammaArgs(m, n)
    if _use_exact(args.m, exact):
        scaled = _partial_exp_sum_scaled_int(args.m, args.n)
        return ExactScalar.from_fraction(Fraction(scaled, math.factorial(args.m - 1)))
    return ExactScalar.from_log(log_partial_exp_sum(args.m, args.n))


def scaled_incomplete_gamma(m: int, n: int, exact: bool | None = None) -> ExactScalar:
    """``exp(n) * Gamma(m, n) = (m-1)! * S(m, n)``, always a rational."""
    args = GammaArgs(m, n)
    if _use_exact(args.m, exact):
        return ExactScalar.from_fraction(Fraction(_partial_exp_sum_scaled_int(args.m, args.n)))
    return ExactScalar.from_log(math.lgamma(args.m) + log_partial_exp_sum(args.m, args.n))


def gamma_recurrence_residual(m: int, n: int) -> ExactScalar:
    """Residual of the recurrence ``Gamma(m+1, n) = m Gamma(m, n) + n^m exp(-n)``.

    Evaluated in the scaled (exp(n)-multiplied) form, so the result is an
    exact rational and must be exactly zero for all valid inputs.
    """
    args = GammaArgs(m, n)
    # e^n Gamma(m+1, n) = m! S(m+1, n) and e^n Gamma(m, n) = (m-1)! S(m, n),
    # both integers in the scaled representation.
    value = (
        _partial_exp_sum_scaled_int(args.m + 1, args.n)
        - args.m * _partial_exp_sum_scaled_int(args.m, args.n)
        - args.n ** args.m
    )
    return ExactScalar.from_fraction(Fraction(value))


def gamma_asymptotic_log(m: int) -> float:
    """Log of the large-m approximation ``Gamma(m, m+1) ~ (m/e)^m sqrt(pi/(2m))``.

    The ratio to the exact value tends to 1 slowly (relative error of order
    1/sqrt(m)); this is a display/validation aid, never used in thresholds.
    """
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    return m * (math.log(m) - 1.0) + 0.5 * math.log(math.pi / (2.0 * m))


def log_scaled_incomplete_gamma(m: int, n: int) -> float:
    """``log(exp(n) * Gamma(m, n))`` without constructing big integers."""
    GammaArgs(m, n)
    return math.lgamma(m) + log_partial_exp_sum(m, n)
