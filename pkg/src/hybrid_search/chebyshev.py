"""Chebyshev polynomials of the first kind, evaluated through the
trigonometric / hyperbolic representation.

Expanding T_L into monomials overflows long before L reaches the lengths
used by fixed-point search, so everything here goes through arccos/arcosh.
"""
import math

EPS_CLAMP = 1e-12


def _is_integer(order):
    return float(order).is_integer()


def chebyshev_t(order, x):
    """Evaluate T_order(x).

    Integer orders are defined on the whole real line.  Fractional orders
    are only supported for x >= 1, where T_a(x) = cosh(a * arcosh(x)).
    Arguments within ``EPS_CLAMP`` of +-1 are snapped onto the boundary.
    """
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    x = float(x)
    integer = _is_integer(order)
    if not integer and x < 1.0 - EPS_CLAMP:
        raise ValueError(f"fractional order {order} needs x >= 1, got {x}")

    if abs(x - 1.0) <= EPS_CLAMP:
        x = 1.0
    elif abs(x + 1.0) <= EPS_CLAMP:
        x = -1.0

    if x >= 1.0:
        return math.cosh(order * math.acosh(x))
    if x >= -1.0:
        return math.cos(order * math.acos(x))
    sign = -1.0 if int(order) % 2 else 1.0
    return sign * math.cosh(order * math.acosh(-x))


def inverse_t_fractional(L, y):
    """Reciprocal of T_{1/L}(y), i.e. ``1 / cosh(arcosh(y) / L)``.

    This is the ``gamma`` parameter of the matched phase schedule.  It is
    the reciprocal, not the functional inverse: the latter would exceed 1
    and make sqrt(1 - gamma**2) imaginary.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if y < 1.0:
        raise ValueError(f"y must be >= 1, got {y}")
    return 1.0 / chebyshev_t(1.0 / L, y)


def cosh_product_gap(x, theta):
    """cosh(x sin t) cosh(x cos t) - cosh(x); nonnegative for t in [0, pi/2]."""
    return math.cosh(x * math.sin(theta)) * math.cosh(x * math.cos(theta)) - math.cosh(x)
