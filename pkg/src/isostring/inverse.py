"""Exact solution of the flow through the spectral data of the Weyl function.

Under a flow with constant beta(z) the eigenvalues stay put and the residues
of W move as ``a_i(t) = a_i(0) exp(2 beta(z_i) t)``.  The string at time t is
recovered by expanding sum_i a_i(t) / (lam + z_i) back into a Stieltjes
fraction with the Euclidean algorithm and then laying the lengths end to end.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import LengthOverflow, NotAStieltjesFraction, ValidationError
from .fields import FlowSpec, beta, build_fields
from .poly import Poly, to_mpf
from .string_core import BoundaryConditions, DiscreteString, is_dirichlet, propagate
from .weyl_cf import ContinuedFraction, SpectralData, partial_fractions, tail_value, weyl_zero

DPS = 50


@dataclass(frozen=True)
class EvolvedMeasure:
    eigenvalues: tuple
    residues: tuple
    t: object
    betas: tuple
    h: object

    def proper_part(self):
        zero = 0 * self.residues[0] if self.residues else Fraction(0)
        return SpectralData(self.eigenvalues, self.residues, zero, self.h).proper_part()


def evolve_measure(data, beta_fn, t):
    """Residues scaled by exp(2 beta(z_i) t); exact at t = 0, mpmath otherwise."""
    betas = tuple(beta_fn(z) for z in data.eigenvalues)
    if t == 0:
        return EvolvedMeasure(data.eigenvalues, data.residues, t, betas, data.h)
    with mpmath.workdps(DPS):
        tt = to_mpf(t)
        zs = tuple(to_mpf(z) for z in data.eigenvalues)
        res = tuple(to_mpf(a) * mpmath.exp(2 * to_mpf(b) * tt) for a, b in zip(data.residues, betas))
    return EvolvedMeasure(zs, res, t, betas, data.h)


def _positive(value, what):
    if not value > 0:
        raise NotAStieltjesFraction(f"{what} = {value} is not positive")
    return value


def _tail_like(h, like):
    if isinstance(like, (int, Fraction)):
        return tail_value(h, Fraction(0))
    if is_dirichlet(h):
        return 0 * like
    if isinstance(like, float):
        return 1 / float(h)
    return 1 / to_mpf(h)


def weyl_proper_part(string, h):
    """(num, den) of W - l_N in lam, straight from the terminal values.

    With lam = -z, B1 - l_N A1 is the value q_N at the last mass and A1 the
    slope p_N, so no eigenvalues are needed; exact for rational strings.
    """
    sol = propagate(string, h, Poly((0, 1)))
    den = sol.p[-1]
    return sol.q[-1] / den.lead, den / den.lead


def euclidean_cf(num, den, h):
    """Expand num/den = sum a_i / (lam + z_i) into (m_N..m_1, l_{N-1}..l_0).

    Repeatedly: 1/R = m lam + U with m the leading ratio, U proper; the
    value of U at infinity is 1/l; recurse on 1/(1/U - l).  At the bottom the
    last constant is l_0 + 1/h.
    """
    n = den.degree
    if num.degree >= n:
        raise NotAStieltjesFraction("numerator degree must be below denominator degree")
    if isinstance(den.lead, int):
        num, den = num.map(Fraction), den.map(Fraction)
    like = den.lead
    tail = _tail_like(h, like)
    masses, lengths = [], []
    q = list(den.c)   # 1/R = q / p
    p = list(num.c) + [0 * like] * (n - len(num.c))
    while n > 0:
        if p[n - 1] == 0:
            raise NotAStieltjesFraction("degenerate division in the continued fraction")
        m = _positive(q[n] / p[n - 1], "mass")
        masses.append(m)
        # q1 = q - m lam p, forced to degree n - 1
        q1 = [q[k] - (m * p[k - 1] if k >= 1 else 0) for k in range(n)]
        c = q1[n - 1] / p[n - 1]
        _positive(c, "1/length")
        if n == 1:
            lengths.append(_positive(1 / c - tail, "length l_0"))
            break
        l = _positive(1 / c, "length")
        lengths.append(l)
        # next 1/R = q1 / (p - l q1), which has degree n - 2
        r = [p[k] - l * q1[k] for k in range(n - 1)]
        q, p = q1, r
        n -= 1
    if den.degree == 0:
        return ContinuedFraction((), (), tail)
    return ContinuedFraction(tuple(masses), tuple(lengths), tail)


def reassemble(cf):
    """String from fraction coefficients; l_N comes from the total length."""
    if cf.n == 0:
        return DiscreteString((), ())
    ls = list(reversed(cf.lengths))   # l_0 .. l_{N-1}
    ms = list(reversed(cf.masses))    # m_1 .. m_N
    total = sum(ls[1:], ls[0])
    if not total < 1:
        raise LengthOverflow(f"lengths l_0..l_(N-1) sum to {total} >= 1")
    xs = []
    x = 0 * ls[0]
    for l in ls:
        x = x + l
        xs.append(x)
    return DiscreteString(tuple(xs), tuple(ms))


@dataclass(frozen=True)
class ExactResult:
    string: DiscreteString
    measure: EvolvedMeasure
    w_zero: object
    w_zero_expected: object


def _family(bc):
    if not isinstance(bc, BoundaryConditions):
        bc = BoundaryConditions(bc, 0)
    if is_dirichlet(bc.right) or bc.right != 0:
        raise ValidationError("the inverse spectral solution needs a Neumann right end (H = 0)")
    if not is_dirichlet(bc.left) and not bc.left > 0:
        raise ValidationError("the inverse spectral solution needs h in (0, inf]")
    return bc


def exact_solution(string0, bc, spec=FlowSpec(), t=0):
    """The string at time t with the W(0) consistency data attached."""
    bc = _family(bc).as_exact()
    s0 = string0.as_exact()
    data = partial_fractions(s0, bc, "rational")
    bfn = beta(build_fields(s0, bc, spec), bc)
    meas = evolve_measure(data, bfn, t)
    with mpmath.workdps(DPS):
        if t == 0:
            num, den = weyl_proper_part(s0, bc.left)
        else:
            num, den = meas.proper_part()
        cf = euclidean_cf(num, den, bc.left)
        s = reassemble(cf)
        l_last = 1 - sum(s.lengths[:-1]) if s.n else 1
        wz = l_last + num(0 * den.lead) / den(0 * den.lead)
    return ExactResult(s, meas, wz, weyl_zero(bc.left))


def exact_state(string0, bc, spec=FlowSpec(), t=0):
    """Partial fractions -> evolve residues -> Euclidean expansion -> string."""
    return exact_solution(string0, bc, spec, t).string


def exact_state_float(string0, bc, spec=FlowSpec(), t=0):
    s = exact_state(string0, bc, spec, t)
    return DiscreteString(tuple(float(x) for x in s.positions), tuple(float(m) for m in s.masses))
