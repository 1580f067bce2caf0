"""Dense univariate polynomials over an arbitrary field-like scalar.

Coefficients are stored in ascending order.  The same class serves the
exact backend (``fractions.Fraction``), plain floats and ``mpmath.mpf``;
nothing here assumes a particular scalar type beyond ``+ - * /``.
Polynomials are also valid *scalars* for the propagation routines, which
is how characteristic polynomials are produced symbolically in lambda.
"""

import math
from fractions import Fraction
from numbers import Number

import mpmath

from .errors import DegenerateSpectrum


def to_mpf(value):
    """Convert an int/float/Fraction/mpf to ``mpmath.mpf`` exactly."""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def to_fraction(value):
    """Exact rational from a user-supplied number.

    Floats go through their shortest repr so that ``0.3`` means ``3/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(str(value))


def reciprocal(value):
    """1 / value, staying exact for ints and Fractions."""
    if isinstance(value, (int, Fraction)):
        return Fraction(1) / value
    return 1 / value


class Poly:
    __slots__ = ("c",)

    def __init__(self, coeffs=(0,)):
        c = list(coeffs) or [0]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def x(cls):
        return cls((0, 1))

    @property
    def degree(self):
        if len(self.c) == 1 and self.c[0] == 0:
            return -1
        return len(self.c) - 1

    @property
    def lead(self):
        return self.c[-1]

    def coeff(self, k):
        return self.c[k] if 0 <= k < len(self.c) else 0

    def __repr__(self):
        return f"Poly({list(self.c)!r})"

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, Number):
            return self.c == (other,) or (other == 0 and self.degree < 0)
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def _lift(self, other):
        return other if isinstance(other, Poly) else Poly((other,))

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.c), len(o.c))
        return Poly([self.coeff(k) + o.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([a * other for a in self.c])
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, Poly):
            if scalar.degree > 0:
                raise TypeError("use divmod for polynomial division")
            scalar = scalar.c[0]
        return Poly([a / scalar for a in self.c])

    def __call__(self, x):
        acc = 0 * x
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def deriv(self):
        if len(self.c) == 1:
            return Poly((0,))
        return Poly([k * self.c[k] for k in range(1, len(self.c))])

    def reflect(self):
        """p(x) -> p(-x)."""
        return Poly([a if k % 2 == 0 else -a for k, a in enumerate(self.c)])

    def map(self, fn):
        return Poly([fn(a) for a in self.c])

    def __divmod__(self, other):
        if other.degree < 0:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dd = other.degree
        if self.degree < dd:
            return Poly((0,)), Poly(rem)
        quot = [0] * (self.degree - dd + 1)
        for k in range(self.degree - dd, -1, -1):
            f = rem[k + dd] / other.lead
            quot[k] = f
            for j, b in enumerate(other.c):
                rem[k + j] = rem[k + j] - f * b
            rem[k + dd] = 0 * f
        return Poly(quot), Poly(rem[:dd] if dd > 0 else [0])


def _integer_coeffs(p):
    """Coefficients scaled by a positive integer so they are all integers."""
    cs = [Fraction(c) for c in p.c]
    scale = 1
    for c in cs:
        scale = scale * c.denominator // math.gcd(scale, c.denominator)
    return [int(c * scale) for c in cs]


def _sign(ic, x):
    """Sign of the integer polynomial ``ic`` at the rational x, in integer arithmetic."""
    n, d = x.numerator, x.denominator
    acc = ic[-1]
    dp = d
    for c in reversed(ic[:-1]):
        acc = acc * n + c * dp
        dp *= d
    return (acc > 0) - (acc < 0)


def sturm_sequence(p):
    seq = [p, p.deriv()]
    while seq[-1].degree > 0:
        _, r = divmod(seq[-2], seq[-1])
        if r.degree < 0:
            break
        seq.append(-r)
    return seq


def _sign_changes(iseq, x):
    signs = [v for v in (_sign(ic, x) for ic in iseq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def cauchy_bound(p):
    return 1 + max(abs(Fraction(a) / p.lead) for a in p.c[:-1]) if p.degree > 0 else Fraction(1)


def isolate_roots(p, lo, hi):
    """Disjoint intervals (a, b], each holding exactly one root of ``p``.

    ``p`` must have exact (rational) coefficients.  A repeated root raises
    :class:`DegenerateSpectrum`.
    """
    seq = sturm_sequence(p)
    if seq[-1].degree > 0:
        raise DegenerateSpectrum(f"repeated root: gcd(p, p') has degree {seq[-1].degree}")
    seq = [_integer_coeffs(q) for q in seq]
    out = []
    stack = [(Fraction(lo), Fraction(hi))]
    while stack:
        a, b = stack.pop()
        n = _sign_changes(seq, a) - _sign_changes(seq, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((mid, b))
        stack.append((a, mid))
    out.sort()
    return out


def _snap(ic, a, b, guess):
    for den in (1, 10, 100, 1000, 10**4, 10**6):
        c = Fraction(guess).limit_denominator(den)
        if a < c <= b and _sign(ic, c) == 0:
            return c
    return None


def refine_root(p, a, b, bits=128):
    """Root of ``p`` in (a, b] as a Fraction.

    Rational roots are returned exactly; irrational ones to relative width
    ``2**-bits`` by bisection.
    """
    ic = _integer_coeffs(p)
    if _sign(ic, b) == 0:
        return b
    fa = _sign(ic, a)
    # float Newton for a snapping guess
    pf = p.map(float)
    dpf = pf.deriv()
    g = float(a + b) / 2
    for _ in range(60):
        d = dpf(g)
        if d == 0:
            break
        step = pf(g) / d
        g -= step
        if abs(step) <= 1e-15 * max(1.0, abs(g)):
            break
    if float(a) < g <= float(b):
        c = _snap(ic, a, b, g)
        if c is not None:
            return c
    width = (b - a)
    scale = max(abs(a), abs(b), Fraction(1))
    while width > scale / (Fraction(2) ** bits):
        mid = a + width / 2
        fm = _sign(ic, mid)
        if fm == 0:
            return mid
        if fm == fa:
            a, fa = mid, fm
        else:
            b = mid
        width = b - a
    return a + width / 2


def positive_roots(p, bits=128):
    """All positive real roots of an exact polynomial, ascending."""
    if p.degree <= 0:
        return []
    if p.degree == 1:
        r = -Fraction(p.c[0]) / Fraction(p.c[1])
        return [r] if r > 0 else []
    hi = cauchy_bound(p)
    return [refine_root(p, a, b, bits) for a, b in isolate_roots(p, Fraction(0), hi)]
