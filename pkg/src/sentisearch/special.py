"""Tail probabilities built from first principles.

The chi-squared upper tail is evaluated through the regularized incomplete
gamma function: a power series for x < a + 1 and a Lentz-style continued
fraction otherwise. Both converge to well below 1e-10 in double precision.
"""

import math

_MAX_ITERATIONS = 1000
_EPS = 2.220446049250313e-16  # double-precision machine epsilon
_FPMIN = 1e-300


def _gamma_series_p(a: float, x: float) -> float:
    """Lower regularized gamma P(a, x) by series expansion (x < a + 1)."""
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_MAX_ITERATIONS):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ArithmeticError(f"gamma series failed to converge for a={a}, x={x}")


def _gamma_cf_q(a: float, x: float) -> float:
    """Upper regularized gamma Q(a, x) by continued fraction (x >= a + 1)."""
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITERATIONS + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ArithmeticError(f"gamma continued fraction failed for a={a}, x={x}")


def regularized_gamma_p(a: float, x: float) -> float:
    """P(a, x) = gamma(a, x) / Gamma(a), the lower regularized incomplete gamma."""
    if a <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"argument must be non-negative, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return min(1.0, _gamma_series_p(a, x))
    return max(0.0, 1.0 - _gamma_cf_q(a, x))


def regularized_gamma_q(a: float, x: float) -> float:
    """Q(a, x) = 1 - P(a, x), the upper regularized incomplete gamma."""
    if a <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"argument must be non-negative, got {x}")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series_p(a, x))
    return min(1.0, _gamma_cf_q(a, x))


def chi2_sf(x: float, df: int) -> float:
    """P(chi-squared with df degrees of freedom >= x)."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if x <= 0.0:
        return 1.0
    return regularized_gamma_q(df / 2.0, x / 2.0)


def normal_sf(z: float) -> float:
    """P(standard normal >= z)."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))
