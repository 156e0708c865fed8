"""Exact ranks by reduction to a prime field.

Q(i, sqrt 2) is the eighth cyclotomic field, so it embeds into F_p for
every prime ``p = 1 (mod 8)``.  The formal symbols ``v`` and ``exp(v/2)``
are replaced by fixed pseudo-random field elements; a rank computed this
way never exceeds the generic rank and equals it except on a
hypersurface of evaluation points, which a fixed seed avoids in practice.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .nilpotent import ExpPoly, Q2i

__all__ = ["PRIME", "EvalPoint", "DEFAULT_POINT", "q2i_mod", "exppoly_mod", "rank_mod"]

PRIME = 2147483497
_ZETA8 = 291288225  # primitive 8th root of unity mod PRIME
I_MOD = _ZETA8 * _ZETA8 % PRIME
SQRT2_MOD = (_ZETA8 + pow(_ZETA8, -1, PRIME)) % PRIME


def _frac_mod(x: Fraction) -> int:
    return x.numerator % PRIME * pow(x.denominator, -1, PRIME) % PRIME


def q2i_mod(x: Q2i) -> int:
    re = _frac_mod(x.a) + _frac_mod(x.b) * SQRT2_MOD
    im = _frac_mod(x.c) + _frac_mod(x.d) * SQRT2_MOD
    return (re + im * I_MOD) % PRIME


class EvalPoint:
    """Values standing in for ``v`` and ``exp(v/2)``."""

    def __init__(self, seed: int = 20240607):
        rng = random.Random(seed)
        self.v = rng.randrange(2, PRIME - 1)
        self.s = rng.randrange(2, PRIME - 1)
        self._spow: dict[int, int] = {}

    def half_exp(self, e2: int) -> int:
        """``exp(e2 * v / 2)``."""
        x = self._spow.get(e2)
        if x is None:
            x = pow(self.s, e2, PRIME) if e2 >= 0 else pow(pow(self.s, -1, PRIME), -e2, PRIME)
            self._spow[e2] = x
        return x


DEFAULT_POINT = EvalPoint()


def exppoly_mod(p: ExpPoly, point: EvalPoint = DEFAULT_POINT) -> int:
    total = 0
    for (m, e2), c in p.terms.items():
        total += q2i_mod(c) * pow(point.v, m, PRIME) * point.half_exp(e2)
    return total % PRIME


def rank_mod(rows) -> int:
    """Rank over F_p of sparse rows given as ``{column: int}`` dicts."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        row = {c: x % PRIME for c, x in row.items() if x % PRIME}
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                inv = pow(row[lead], -1, PRIME)
                pivots[lead] = {c: x * inv % PRIME for c, x in row.items()}
                rank += 1
                break
            f = row[lead]
            for c, x in piv.items():
                y = (row.get(c, 0) - f * x) % PRIME
                if y:
                    row[c] = y
                else:
                    row.pop(c, None)
    return rank
