"""Scalar values for operator entries.

Entries are plain Python numbers: ``int``/``Fraction`` for exact values,
``float``/``complex`` for inexact ones.  Python's own coercion rules already
implement the demotion policy (Fraction * float -> float), so no wrapper
class is needed.  Exact values arise only from angles that are integer
multiples of pi/2, where cos and sin lie in {-1, 0, 1}.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction, float, complex]

TWO_PI = 2.0 * math.pi

# Angles closer than this to a multiple of pi/2 take the exact path.
EXACT_ANGLE_TOL = 1e-12

_COS_QUARTER = (1, 0, -1, 0)
_SIN_QUARTER = (0, 1, 0, -1)


def normalize_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    return t


def trig_values(theta: float) -> tuple[Scalar, Scalar]:
    """(cos, sin) of an angle, exact integers at multiples of pi/2."""
    t = normalize_angle(theta)
    k = round(t / (math.pi / 2.0))
    if abs(t - k * (math.pi / 2.0)) < EXACT_ANGLE_TOL or abs(t - TWO_PI) < EXACT_ANGLE_TOL:
        k %= 4
        return _COS_QUARTER[k], _SIN_QUARTER[k]
    return math.cos(t), math.sin(t)


def is_exact(value: Scalar) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def parse_angle(token: str) -> float:
    """Parse a CLI angle: decimal radians or one of 0, pi/2, pi, 3pi/2."""
    text = token.strip().lower().replace(" ", "")
    named = {
        "0": 0.0,
        "pi/2": math.pi / 2.0,
        "pi": math.pi,
        "3pi/2": 3.0 * math.pi / 2.0,
    }
    if text in named:
        return named[text]
    try:
        return normalize_angle(float(text))
    except ValueError:
        raise ValueError(f"cannot parse angle {token!r}") from None


def scalar_to_json(value: Scalar):
    """One real scalar -> JSON: exact values as {"num": p, "den": q}."""
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return {"num": value, "den": 1}
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, float):
        return value
    raise TypeError(f"not a real scalar: {value!r}")


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, dict):
        num, den = int(obj["num"]), int(obj["den"])
        if den == 1:
            return num
        return Fraction(num, den)
    return float(obj)


def entry_to_json(value: Scalar) -> list:
    """One matrix entry -> [re, im] with exact parts as {"num","den"}."""
    if isinstance(value, complex):
        return [scalar_to_json(value.real), scalar_to_json(value.imag)]
    return [scalar_to_json(value), scalar_to_json(0)]


def entry_from_json(pair) -> Scalar:
    re = scalar_from_json(pair[0])
    im = scalar_from_json(pair[1])
    if im == 0:
        return re
    return complex(re, im)
