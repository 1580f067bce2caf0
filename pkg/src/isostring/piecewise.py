"""Piecewise polynomials with breakpoints at the mass positions.

Each segment is stored as a :class:`~isostring.poly.Poly` in the *global*
coordinate x, so products and linear combinations of fields are exact and
one-sided derivatives at a breakpoint are just derivatives of the
neighbouring segments.
"""

from fractions import Fraction

from .poly import Poly


class PiecewisePoly:
    """Polynomial segments on ``[breakpoints[k], breakpoints[k+1]]``.

    ``breakpoints`` includes 0 and 1.  Segment ``k`` covers the k-th interval,
    so a string with N masses has N + 1 segments.
    """

    __slots__ = ("breakpoints", "segments")

    def __init__(self, breakpoints, segments):
        if len(segments) != len(breakpoints) - 1:
            raise ValueError("need exactly one segment per interval")
        self.breakpoints = tuple(breakpoints)
        self.segments = tuple(s if isinstance(s, Poly) else Poly(s) for s in segments)

    def __repr__(self):
        return f"PiecewisePoly({list(self.breakpoints)!r}, {list(self.segments)!r})"

    def _compatible(self, other):
        if self.breakpoints != other.breakpoints:
            raise ValueError("piecewise polynomials live on different meshes")

    def __add__(self, other):
        if isinstance(other, PiecewisePoly):
            self._compatible(other)
            return PiecewisePoly(self.breakpoints, [a + b for a, b in zip(self.segments, other.segments)])
        return PiecewisePoly(self.breakpoints, [a + other for a in self.segments])

    __radd__ = __add__

    def __neg__(self):
        return PiecewisePoly(self.breakpoints, [-a for a in self.segments])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PiecewisePoly):
            self._compatible(other)
            return PiecewisePoly(self.breakpoints, [a * b for a, b in zip(self.segments, other.segments)])
        return PiecewisePoly(self.breakpoints, [a * other for a in self.segments])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return PiecewisePoly(self.breakpoints, [a / scalar for a in self.segments])

    def map_coefficients(self, fn):
        return PiecewisePoly(self.breakpoints, [s.map(fn) for s in self.segments])

    def segment_index(self, x, side="right"):
        """Index of the segment used to evaluate at ``x`` from ``side``."""
        bp = self.breakpoints
        n = len(self.segments)
        if x < bp[0] or x > bp[-1]:
            raise ValueError(f"x={x} outside [{bp[0]}, {bp[-1]}]")
        for k in range(n):
            lo, hi = bp[k], bp[k + 1]
            if side == "right":
                if lo <= x < hi:
                    return k
            elif lo < x <= hi:
                return k
        return n - 1 if side == "right" else 0

    def derivative(self, x, order=0, side="right"):
        seg = self.segments[self.segment_index(x, side)]
        for _ in range(order):
            seg = seg.deriv()
        return seg(x)

    def __call__(self, x):
        return self.derivative(x, 0, "right")

    def jump(self, x, order=0):
        """f^(order)(x+) - f^(order)(x-)."""
        return self.derivative(x, order, "right") - self.derivative(x, order, "left")

    def average(self, x, order=1):
        return (self.derivative(x, order, "right") + self.derivative(x, order, "left")) * Fraction(1, 2)

    def max_degree(self):
        return max(s.degree for s in self.segments)
