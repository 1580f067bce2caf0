"""Weyl function of a string with a Neumann right end, in three forms.

For ``H = 0`` the left-normalised solution gives

    W(z) = v(1; z) / v_x(1; z) = B1(z) / A1(z)
         = l_N + 1 / (-z m_N + 1 / (l_{N-1} + ... + 1 / (-z m_1 + 1 / (l_0 + 1/h))))
         = W_inf + sum_i a_i / (z_i - z)

and the residues a_i are all positive.  This module computes each form from
the string; inverse_spectral goes back from the last one to the first.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import PoleAtZ, ValidationError
from .poly import Poly, reciprocal, to_fraction
from .string_core import BoundaryConditions, eigenvalues, is_dirichlet, propagate


def _left_param(bc):
    """h from a BoundaryConditions (which must be Neumann on the right) or a bare h."""
    if isinstance(bc, BoundaryConditions):
        if is_dirichlet(bc.right) or bc.right != 0:
            raise ValidationError("the Weyl function is defined here for a Neumann right end (H = 0)")
        return bc.left
    return bc


def tail_value(h, like=Fraction(0)):
    """1/h, exactly 0 at a Dirichlet end."""
    if is_dirichlet(h):
        return 0 * like
    if h == 0:
        raise ValidationError("h = 0 (Neumann-Neumann) has a pole of W at z = 0")
    return reciprocal(h) if isinstance(like, Fraction) else 1 / h


def weyl_zero(h):
    """W(0) for any string: c0(1) / c0'(1), i.e. (h + 1)/h, or 1 at a Dirichlet end."""
    if is_dirichlet(h):
        return Fraction(1)
    return (h + 1) * reciprocal(h)


def terminal_polys(string, h):
    """A1(z), B1(z) as polynomials in z."""
    sol = propagate(string, h, Poly((0, -1)))
    return sol.A1, sol.B1


def weyl_eval(string, bc, z):
    h = _left_param(bc)
    sol = propagate(string, h, -z)
    if sol.A1 == 0:
        raise PoleAtZ(f"W has a pole at z={z}")
    return sol.B1 / sol.A1


@dataclass(frozen=True)
class ContinuedFraction:
    """W(z) as a Stieltjes fraction.

    ``masses`` is (m_N, ..., m_1) and ``lengths`` is (l_{N-1}, ..., l_0),
    i.e. the order in which they appear reading the fraction from the top.
    ``l_last`` is l_N (``None`` when only the proper part is known).
    """

    masses: tuple
    lengths: tuple
    tail: object
    l_last: object = None

    @property
    def n(self):
        return len(self.masses)

    def _proper_inverse(self, z):
        # value of  -z m_N + 1/(l_{N-1} + 1/(... + 1/(l_0 + tail)))
        acc = self.lengths[-1] + self.tail
        for k in range(self.n - 1, 0, -1):
            acc = self.lengths[k - 1] + 1 / (-z * self.masses[k] + 1 / acc)
        return -z * self.masses[0] + 1 / acc

    def evaluate(self, z):
        if self.l_last is None:
            raise ValueError("l_N unknown")
        if self.n == 0:
            return self.l_last + self.tail
        return self.l_last + 1 / self._proper_inverse(z)

    def proper_part(self):
        """(num, den) with W - l_N = num / den as polynomials in lam = -z.

        Built bottom-up; den is normalised to be monic.
        """
        if self.n == 0:
            return Poly((0,)), Poly((1,))
        lam = Poly((0, 1))
        # f = p / q runs through the tails of the fraction, starting at l_0 + 1/h
        p, q = Poly((self.lengths[-1] + self.tail,)), Poly((1,))
        for k in range(self.n - 1, -1, -1):
            # 1/f, then add lam m_k: (q + lam m p) / p
            p, q = q + lam * self.masses[k] * p, p
            if k > 0:
                # 1/(...), then add l_{k-1}
                p, q = q + p * self.lengths[k - 1], p
        # now f = p / q = 1/(W - l_N)
        lead = p.lead
        return q / lead, p / lead


def cf_expand(string, bc):
    """Read the fraction coefficients straight off the string geometry."""
    h = _left_param(bc)
    lengths = string.lengths
    like = string.masses[0] if string.n else Fraction(0)
    return ContinuedFraction(masses=tuple(reversed(string.masses)),
                             lengths=tuple(reversed(lengths[:-1])),
                             tail=tail_value(h, like),
                             l_last=lengths[-1])


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: tuple
    residues: tuple
    w_infinity: object
    h: object

    def weyl(self, z):
        return self.w_infinity + sum(a / (zi - z) for zi, a in zip(self.eigenvalues, self.residues))

    def w_zero(self):
        return self.weyl(0 * self.w_infinity)

    def proper_part(self):
        """(num, den) of sum_i a_i / (lam + z_i); den monic."""
        one = 0 * self.w_infinity + 1
        den = Poly((one,))
        for zi in self.eigenvalues:
            den = den * Poly((zi, one))
        num = Poly((0 * one,))
        for i, (zi, a) in enumerate(zip(self.eigenvalues, self.residues)):
            term = Poly((a,))
            for k, zk in enumerate(self.eigenvalues):
                if k != i:
                    term = term * Poly((zk, one))
            num = num + term
        return num, den


def partial_fractions(string, bc, backend="rational"):
    """Eigenvalues, residues a_i = -B1(z_i) / A1'(z_i) and W_inf = l_N (= 1 + 1/h if N = 0).

    ``backend="rational"`` works in Fractions (irrational eigenvalues are
    128-bit rational approximations); ``"float"`` in doubles.
    """
    h = _left_param(bc)
    bcx = BoundaryConditions(h, 0)
    if backend == "rational":
        s = string.as_exact()
        h = h if is_dirichlet(h) else to_fraction(h)
        zs = eigenvalues(s, BoundaryConditions(h, 0), "rational")
        A1, B1 = terminal_polys(s, h)
    elif backend == "float":
        s = string.as_float()
        h = h if is_dirichlet(h) else float(h)
        zs = [float(z) for z in eigenvalues(s, bcx, "float")]
        A1, B1 = terminal_polys(s, h)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if zs and zs[0] == 0:
        raise ValidationError("z = 0 is an eigenvalue; need h > 0")
    dA = A1.deriv()
    residues = tuple(-B1(z) / dA(z) for z in zs)
    w_inf = s.lengths[-1]
    if s.n == 0:
        # no masses: W is the constant l_0 + 1/h
        w_inf = w_inf + tail_value(h, Fraction(0) if backend == "rational" else 0.0)
    return SpectralData(tuple(zs), residues, w_inf, h)
