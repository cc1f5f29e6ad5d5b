"""Clebsch-Gordan coefficients via the Racah closed form.

Only small integer (or half-integer) angular momenta are ever needed here, so
the coefficients are evaluated with exact rational arithmetic and converted to
float at the end.  Condon-Shortley phase convention throughout.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = ["clebsch_gordan"]


def _as_half_integer(x, name: str) -> Fraction:
    q = Fraction(x).limit_denominator(2)
    if q != Fraction(x) or q.denominator not in (1, 2):
        raise ValueError(f"{name} must be integer or half-integer, got {x!r}")
    return q


def clebsch_gordan(j1, m1, j2, m2, j, m) -> float:
    """Return <j1 m1; j2 m2 | j m>.

    Raises ValueError for non-(half-)integer arguments or |m| > j.
    Returns 0.0 when m != m1 + m2 or the triangle rule fails.
    """
    j1, m1 = _as_half_integer(j1, "j1"), _as_half_integer(m1, "m1")
    j2, m2 = _as_half_integer(j2, "j2"), _as_half_integer(m2, "m2")
    j, m = _as_half_integer(j, "j"), _as_half_integer(m, "m")

    for jj, mm, tag in ((j1, m1, "1"), (j2, m2, "2"), (j, m, "")):
        if abs(mm) > jj or (jj - mm).denominator != 1:
            if abs(mm) > jj:
                raise ValueError(f"|m{tag}| exceeds j{tag}")
            raise ValueError(f"m{tag} incompatible with j{tag}")

    if m != m1 + m2:
        return 0.0
    if j < abs(j1 - j2) or j > j1 + j2 or (j1 + j2 - j).denominator != 1:
        return 0.0

    def fact(x: Fraction) -> int:
        assert x.denominator == 1
        if x < 0:
            raise ValueError("negative factorial argument")
        return math.factorial(int(x))

    pref = (
        Fraction(2 * j + 1)
        * fact(j1 + j2 - j) * fact(j1 - j2 + j) * fact(-j1 + j2 + j)
        / fact(j1 + j2 + j + 1)
        * fact(j + m) * fact(j - m)
        * fact(j1 - m1) * fact(j1 + m1)
        * fact(j2 - m2) * fact(j2 + m2)
    )

    k_min = int(max(0, j2 - j - m1, j1 + m2 - j))
    k_max = int(min(j1 + j2 - j, j1 - m1, j2 + m2))
    total = Fraction(0)
    for k in range(k_min, k_max + 1):
        term = Fraction(
            (-1) ** k,
            fact(Fraction(k)) * fact(j1 + j2 - j - k) * fact(j1 - m1 - k)
            * fact(j2 + m2 - k) * fact(j - j2 + m1 + k) * fact(j - j1 - m2 + k),
        )
        total += term

    if total == 0:
        return 0.0
    value = math.sqrt(float(pref * total * total))
    return math.copysign(value, float(total))
