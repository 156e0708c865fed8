"""Exact arithmetic in the Pimenov algebra D_n(iota).

Three layers live here:

* :class:`Q2i` -- the coefficient field Q(i, sqrt 2), stored exactly;
* :class:`ExpPoly` -- finite sums ``c * v**m * exp(e*v)`` with half-integer
  rates ``e`` (stored doubled, so keys are integers);
* :class:`Pim` -- elements of D_n(iota) over ExpPoly, i.e. linear
  combinations of square-free monomials in commuting nilpotent generators.

Nilpotent monomials are plain ``int`` bitmasks: bit ``k`` set means the
factor ``iota_k`` is present.  ``0`` is the empty monomial (the unit).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

__all__ = [
    "Q2i",
    "ExpPoly",
    "Pim",
    "NotDivisible",
    "UnsupportedExponent",
    "VACUOUS",
    "monomial",
    "mono_indices",
    "format_monomial",
    "pim_mul",
    "extract_factor",
    "pim_exp",
    "substitute_unit",
    "is_homogeneous",
]


class NotDivisible(ArithmeticError):
    """Raised when a division by a nilpotent monomial is not defined."""


class UnsupportedExponent(ValueError):
    """Raised by :func:`pim_exp` for a non-nilpotent part that is not ``c*v``."""


# --------------------------------------------------------------------------
# nilpotent monomials


def monomial(*indices: int) -> int:
    """Bitmask of ``iota_{k1} ... iota_{kp}``; a repeated index raises ValueError."""
    mask = 0
    for k in indices:
        if k < 1 or k > 62:
            raise ValueError(f"generator index out of range: {k}")
        bit = 1 << k
        if mask & bit:
            raise ValueError(f"iota_{k} repeated; the monomial is zero")
        mask |= bit
    return mask


def mono_indices(mask: int) -> tuple[int, ...]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def format_monomial(mask: int) -> str:
    if not mask:
        return "1"
    return "".join(f"i{k}" for k in mono_indices(mask))


# --------------------------------------------------------------------------
# the coefficient field Q(i, sqrt 2)


def _frac(x) -> Fraction:
    return x if type(x) is Fraction else Fraction(x)


class Q2i:
    """``a + b*sqrt2 + (c + d*sqrt2)*i`` with rational a, b, c, d."""

    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = _frac(a)
        self.b = _frac(b)
        self.c = _frac(c)
        self.d = _frac(d)
        self._hash = None

    @classmethod
    def coerce(cls, x) -> "Q2i":
        if isinstance(x, Q2i):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return cls(x)

    # constants filled in after the class body
    ZERO: "Q2i"
    ONE: "Q2i"
    I: "Q2i"
    SQRT2: "Q2i"

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def __eq__(self, other):
        if not isinstance(other, Q2i):
            try:
                other = Q2i.coerce(other)
            except TypeError:
                return NotImplemented
        return (self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def __hash__(self):
        if self._hash is None:
            if not (self.b or self.c or self.d):
                self._hash = hash(self.a)
            else:
                self._hash = hash((self.a, self.b, self.c, self.d))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, Q2i):
            other = Q2i.coerce(other)
        return Q2i(self.a + other.a, self.b + other.b,
                   self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __neg__(self):
        return Q2i(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        if not isinstance(other, Q2i):
            other = Q2i.coerce(other)
        return Q2i(self.a - other.a, self.b - other.b,
                   self.c - other.c, self.d - other.d)

    def __rsub__(self, other):
        return Q2i.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Q2i):
            if isinstance(other, (int, Fraction)):
                o = _frac(other)
                return Q2i(self.a * o, self.b * o, self.c * o, self.d * o)
            other = Q2i.coerce(other)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        if not (b1 or d1 or b2 or d2):
            # Gaussian rationals: the common case in the checker
            return Q2i(a1 * a2 - c1 * c2, 0, a1 * c2 + c1 * a2, 0)
        # (x1 + y1 i)(x2 + y2 i) with x, y in Q(sqrt2)
        re_a = a1 * a2 + 2 * b1 * b2 - (c1 * c2 + 2 * d1 * d2)
        re_b = a1 * b2 + b1 * a2 - (c1 * d2 + d1 * c2)
        im_a = a1 * c2 + 2 * b1 * d2 + c1 * a2 + 2 * d1 * b2
        im_b = a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2
        return Q2i(re_a, re_b, im_a, im_b)

    __rmul__ = __mul__

    def conj(self) -> "Q2i":
        """Complex conjugate (sqrt 2 is fixed)."""
        return Q2i(self.a, self.b, -self.c, -self.d)

    def _sqrt2_conj(self) -> "Q2i":
        return Q2i(self.a, -self.b, self.c, -self.d)

    def inverse(self) -> "Q2i":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(i, sqrt2)")
        # multiply by the three Galois conjugates; the norm is rational
        s = self._sqrt2_conj()
        p = self * s  # lies in Q(i)
        pc = p.conj()
        norm = (p * pc).a
        return s * pc * (1 / norm)

    def __truediv__(self, other):
        return self * Q2i.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Q2i.coerce(other) * self.inverse()

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def __complex__(self):
        r2 = 2 ** 0.5
        return complex(float(self.a) + float(self.b) * r2,
                       float(self.c) + float(self.d) * r2)

    def __repr__(self):
        return f"Q2i({self})"

    def __str__(self):
        parts = []
        for val, unit in ((self.a, ""), (self.b, "r2"),
                          (self.c, "i"), (self.d, "r2*i")):
            if not val:
                continue
            if unit and val == 1:
                parts.append(unit)
            elif unit and val == -1:
                parts.append("-" + unit)
            else:
                parts.append(f"{val}{'*' + unit if unit else ''}")
        if not parts:
            return "0"
        return "+".join(parts).replace("+-", "-")


Q2i.ZERO = Q2i()
Q2i.ONE = Q2i(1)
Q2i.I = Q2i(0, 0, 1)
Q2i.SQRT2 = Q2i(0, 1)


# --------------------------------------------------------------------------
# exponential polynomials in v


def _clean(terms: dict) -> dict:
    return {k: c for k, c in terms.items() if c}


class ExpPoly:
    """Finite sum of ``c * v**m * exp(e*v)``.

    ``terms`` maps ``(m, 2e)`` to a nonzero :class:`Q2i` coefficient.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        if terms is None:
            self.terms = {}
        else:
            self.terms = {k: Q2i.coerce(c) for k, c in terms.items()}
            self.terms = _clean(self.terms)

    @classmethod
    def const(cls, c) -> "ExpPoly":
        return cls({(0, 0): c})

    @classmethod
    def exp(cls, rate) -> "ExpPoly":
        """``exp(rate * v)``; ``rate`` must be a half-integer."""
        twice = Fraction(rate) * 2
        if twice.denominator != 1:
            raise UnsupportedExponent(f"rate {rate} is not a half-integer")
        return cls({(0, int(twice)): 1})

    @classmethod
    def v(cls, power: int = 1) -> "ExpPoly":
        return cls({(power, 0): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            try:
                other = ExpPoly.const(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.const(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Q2i.ZERO) + c
        return ExpPoly._raw(_clean(out))

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return ExpPoly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            c = Q2i.coerce(other)
            if not c:
                return ExpPoly()
            return ExpPoly._raw({k: x * c for k, x in self.terms.items()})
        out: dict = {}
        for (m1, e1), c1 in self.terms.items():
            for (m2, e2), c2 in other.terms.items():
                key = (m1 + m2, e1 + e2)
                out[key] = out.get(key, Q2i.ZERO) + c1 * c2
        return ExpPoly._raw(_clean(out))

    __rmul__ = __mul__

    @classmethod
    def _raw(cls, terms: dict) -> "ExpPoly":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    def is_unit(self) -> bool:
        """True for a single nonzero term ``c * exp(e*v)`` (no power of v)."""
        return len(self.terms) == 1 and next(iter(self.terms))[0] == 0

    def inverse(self) -> "ExpPoly":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not invertible in ExpPoly")
        (m, e2), c = next(iter(self.terms.items()))
        return ExpPoly._raw({(0, -e2): c.inverse()})

    def drop_exponentials(self) -> Q2i:
        """The ring map exp(e*v) -> 1, v -> 0."""
        total = Q2i.ZERO
        for (m, _), c in self.terms.items():
            if m == 0:
                total = total + c
        return total

    def evaluate(self, q, v=None):
        """Substitute ``exp(v) = q`` (and ``v`` itself if powers of v occur).

        Integer rates with rational ``q`` stay exact (a :class:`Q2i`);
        half-integer rates or float inputs give a Python complex.
        """
        exact = Q2i.ZERO
        inexact = 0j
        for (m, e2), c in self.terms.items():
            if m and v is None:
                raise ValueError("powers of v present; pass v explicitly")
            if e2 % 2 == 0 and not isinstance(q, float) \
                    and not isinstance(v, float):
                factor = Fraction(q) ** (e2 // 2)
                if m:
                    factor *= Fraction(v) ** m
                exact = exact + c * factor
            else:
                factor = float(q) ** (e2 / 2)
                if m:
                    factor *= float(v) ** m
                inexact += complex(c) * factor
        if inexact:
            return complex(exact) + inexact
        return exact

    def __repr__(self):
        return f"ExpPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (m, e2), c in sorted(self.terms.items()):
            bits = []
            if m:
                bits.append("v" if m == 1 else f"v^{m}")
            if e2:
                rate = Fraction(e2, 2)
                bits.append(f"e^({rate}v)")
            mono = "*".join(bits)
            cs = str(c)
            if mono:
                if cs == "1":
                    parts.append(mono)
                elif cs == "-1":
                    parts.append("-" + mono)
                else:
                    parts.append(f"({cs})*{mono}")
            else:
                parts.append(cs)
        return " + ".join(parts).replace("+ -", "- ")


# --------------------------------------------------------------------------
# elements of D_n(iota)

_ZERO_KEY = (0, 0, 0)


class Pim:
    """Element of the Pimenov algebra over :class:`ExpPoly` scalars.

    Internally a flat map ``(mask, m, 2e) -> Q2i``; :meth:`coefficient`
    gives the ExpPoly sitting in front of one monomial.  Instances are
    treated as immutable.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int, int], object] | None = None):
        self.terms = {} if terms is None else _clean(
            {k: Q2i.coerce(c) for k, c in terms.items()})
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Pim":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def scalar(cls, c) -> "Pim":
        if isinstance(c, ExpPoly):
            return cls._raw({(0, m, e): x for (m, e), x in c.terms.items()})
        c = Q2i.coerce(c)
        return cls._raw({_ZERO_KEY: c} if c else {})

    @classmethod
    def mono(cls, mask: int, c=1) -> "Pim":
        c = Q2i.coerce(c)
        return cls._raw({(mask, 0, 0): c} if c else {})

    @classmethod
    def iota(cls, *indices: int) -> "Pim":
        return cls.mono(monomial(*indices))

    @classmethod
    def v(cls, power: int = 1, c=1) -> "Pim":
        c = Q2i.coerce(c)
        return cls._raw({(0, power, 0): c} if c else {})

    @classmethod
    def exp_rate(cls, rate) -> "Pim":
        return cls.scalar(ExpPoly.exp(rate))

    @classmethod
    def from_monomials(cls, parts: Mapping[int, ExpPoly | object]) -> "Pim":
        out = {}
        for mask, c in parts.items():
            if not isinstance(c, ExpPoly):
                c = ExpPoly.const(c)
            for (m, e), x in c.terms.items():
                out[(mask, m, e)] = x
        return cls._raw(out)

    # ring structure ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Pim):
            try:
                other = Pim.scalar(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, Pim):
            other = Pim.scalar(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            x = out.get(k)
            if x is None:
                out[k] = c
            else:
                s = x + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Pim._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Pim._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Pim):
            other = Pim.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return Pim.scalar(other) - self

    def __mul__(self, other):
        if not isinstance(other, Pim):
            if isinstance(other, ExpPoly):
                other = Pim.scalar(other)
            else:
                c = Q2i.coerce(other)
                if not c:
                    return Pim._raw({})
                return Pim._raw({k: x * c for k, x in self.terms.items()})
        return pim_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Pim":
        if k < 0:
            return self.inverse() ** (-k)
        out = Pim.scalar(1)
        for _ in range(k):
            out = out * self
        return out

    # structure ------------------------------------------------------------
    def monomials(self) -> set[int]:
        return {mask for (mask, _, _) in self.terms}

    def coefficient(self, mask: int) -> ExpPoly:
        return ExpPoly._raw({(m, e): c for (k, m, e), c in self.terms.items()
                             if k == mask})

    def by_monomial(self) -> dict[int, ExpPoly]:
        out: dict[int, dict] = {}
        for (k, m, e), c in self.terms.items():
            out.setdefault(k, {})[(m, e)] = c
        return {k: ExpPoly._raw(t) for k, t in out.items()}

    def constant_part(self) -> ExpPoly:
        return self.coefficient(0)

    def nilpotent_part(self) -> "Pim":
        return Pim._raw({k: c for k, c in self.terms.items() if k[0]})

    def is_invertible(self) -> bool:
        return self.constant_part().is_unit()

    def inverse(self) -> "Pim":
        """Inverse via ``d0^-1 * sum (-d0^-1 nu)^k``; terminates by nilpotency."""
        d0 = self.constant_part()
        if not d0.is_unit():
            raise ZeroDivisionError("empty-monomial part is not invertible")
        inv0 = Pim.scalar(d0.inverse())
        nu = inv0 * self.nilpotent_part()
        out = Pim.scalar(1)
        power = Pim.scalar(1)
        while True:
            power = power * (-nu)
            if not power:
                break
            out = out + power
        return out * inv0

    def drop_exponentials(self) -> "Pim":
        out: dict = {}
        for (k, m, e), c in self.terms.items():
            if m == 0:
                key = (k, 0, 0)
                out[key] = out.get(key, Q2i.ZERO) + c
        return Pim._raw(_clean(out))

    def __repr__(self):
        return f"Pim({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mask, poly in sorted(self.by_monomial().items()):
            ps = str(poly)
            if mask == 0:
                parts.append(ps)
            elif ps == "1":
                parts.append(format_monomial(mask))
            else:
                parts.append(f"({ps})*{format_monomial(mask)}")
        return " + ".join(parts)


VACUOUS = "vacuous"
"""Return value of :func:`is_homogeneous` for the zero element."""


def pim_mul(a: Pim, b: Pim) -> Pim:
    """Product in D_n(iota); terms sharing a generator vanish."""
    out: dict = {}
    get = out.get
    for (k1, m1, e1), c1 in a.terms.items():
        for (k2, m2, e2), c2 in b.terms.items():
            if k1 & k2:
                continue
            key = (k1 | k2, m1 + m2, e1 + e2)
            x = get(key)
            out[key] = c1 * c2 if x is None else x + c1 * c2
    return Pim._raw(_clean(out))


def extract_factor(a: Pim, mask: int) -> Pim:
    """The only legal division: strip the monomial ``mask`` off every term.

    Raises :class:`NotDivisible` if a term of ``a`` lacks some generator of
    ``mask`` (e.g. ``iota_1 / iota_2`` or ``1 / iota_1``).
    """
    out = {}
    for (k, m, e), c in a.terms.items():
        if k & mask != mask:
            raise NotDivisible(
                f"term {format_monomial(k)} is not divisible by "
                f"{format_monomial(mask)}")
        out[(k & ~mask, m, e)] = c
    return Pim._raw(out)


def pim_exp(x: Pim) -> Pim:
    """Exponential of ``x = c*v + nu`` with ``nu`` nilpotent.

    The series in ``nu`` stops after at most ``n + 1`` terms.
    """
    x0 = x.constant_part()
    if x0:
        if len(x0.terms) != 1:
            raise UnsupportedExponent(f"constant part {x0} is not c*v")
        (m, e2), c = next(iter(x0.terms.items()))
        if m != 1 or e2 != 0 or not c.is_rational():
            raise UnsupportedExponent(f"constant part {x0} is not c*v")
        head = Pim.exp_rate(c.a)
    else:
        head = Pim.scalar(1)
    nu = x.nilpotent_part()
    total = Pim.scalar(1)
    power = Pim.scalar(1)
    k = 0
    while True:
        k += 1
        power = power * nu
        if not power:
            break
        total = total + power * Fraction(1, factorial(k))
    return head * total


def substitute_unit(a: Pim, indices: Iterable[int]) -> Pim:
    """Replace every ``iota_k`` with ``k`` in ``indices`` by 1."""
    drop = 0
    for k in indices:
        drop |= 1 << k
    if not drop:
        return a
    out: dict = {}
    for (k, m, e), c in a.terms.items():
        key = (k & ~drop, m, e)
        out[key] = out.get(key, Q2i.ZERO) + c
    return Pim._raw(_clean(out))


def is_homogeneous(a: Pim):
    """The common monomial of all terms, :data:`VACUOUS` for zero, else None."""
    masks = a.monomials()
    if not masks:
        return VACUOUS
    if len(masks) == 1:
        return next(iter(masks))
    return None
