"""Deformation fields b_0, b_{-1}, the constant beta(z) and boundary diagnostics.

Every field is built from products ``omega = phi * psi`` of the left- and
right-normalised solutions of ``D^2 f = lam rho f``.  ``omega`` is computed
once as a piecewise quadratic in x whose coefficients are polynomials in lam;
single-pole fields evaluate it at ``lam = eps``, the limit flow takes
``-d omega / d lam`` at ``lam = 0``.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BetaZero, DegenerateBC
from .piecewise import PiecewisePoly
from .poly import Poly, reciprocal, to_fraction
from .string_core import char_poly, is_dirichlet, left_linear, right_pieces

HALF = Fraction(1, 2)

LIMIT = "limit"
SINGLE_POLE = "single_pole"
MULTI_POLE = "multi_pole"


@dataclass(frozen=True)
class FlowSpec:
    """Which rational flow ``b = b_0 + sum_k b_{-1}^(k) / (z + eps_k)`` to build.

    ``rescaled=None`` picks the default: Green's-function normalisation
    (division by W(c0, c0_hat)) for the limit flow, raw products otherwise.
    """

    kind: str = LIMIT
    epsilon: object = None
    poles: tuple = ()
    mu0: object = 1
    rescaled: object = None

    def __post_init__(self):
        if self.kind not in (LIMIT, SINGLE_POLE, MULTI_POLE):
            raise ValueError(f"unknown flow kind {self.kind!r}")
        if self.kind == SINGLE_POLE and not (self.epsilon is not None and self.epsilon > 0):
            raise ValueError("single_pole flow needs epsilon > 0")
        if self.kind == MULTI_POLE:
            eps = [e for e, _ in self.poles]
            if not eps or any(e <= 0 for e in eps) or len(set(eps)) != len(eps):
                raise ValueError("multi_pole flow needs distinct positive poles")

    @classmethod
    def limit(cls, rescaled=True):
        return cls(LIMIT, rescaled=rescaled)

    @classmethod
    def single_pole(cls, epsilon, rescaled=False):
        return cls(SINGLE_POLE, epsilon=epsilon, rescaled=rescaled)

    @classmethod
    def multi_pole(cls, poles, mu0=1, rescaled=False):
        return cls(MULTI_POLE, poles=tuple((e, m) for e, m in poles), mu0=mu0, rescaled=rescaled)

    @property
    def is_rescaled(self):
        return self.kind == LIMIT if self.rescaled is None else bool(self.rescaled)

    def pole_list(self):
        """[(eps_k, mu_k)]; the limit flow has the single pole 0."""
        if self.kind == LIMIT:
            return [(0, 1)]
        if self.kind == SINGLE_POLE:
            return [(self.epsilon, 1)]
        return list(self.poles)


@dataclass(frozen=True)
class FieldSet:
    b0: PiecewisePoly
    b_minus: tuple  # ((eps_k, PiecewisePoly), ...)
    rescale: object
    spec: FlowSpec = field(default_factory=FlowSpec)

    def at(self, z):
        """The full field b(x; z) = b0 + sum b_k / (z + eps_k)."""
        b = self.b0
        for eps, bk in self.b_minus:
            b = b + bk * reciprocal(z + eps)
        return b


@dataclass(frozen=True)
class BetaFunction:
    """beta(z) = constant + sum_k coeff_k / (z + eps_k)."""

    poles: tuple
    constant: object

    def __call__(self, z):
        return self.constant + sum(c * reciprocal(z + e) for e, c in self.poles)


def _like(value, ref):
    return to_fraction(value) if isinstance(ref, Fraction) else value


def _scalar_ref(string):
    return string.masses[0] if string.n else Fraction(0)


def omega_family(string, bc):
    """omega(x; lam) per interval as (c0, c1, c2) with c_k polynomials in lam."""
    lam = Poly((0, 1))
    phi = left_linear(string, bc.left, lam)
    psi = right_pieces(string, bc, lam)
    return [(a0 * b0, a0 * b1 + a1 * b0, a1 * b1) for (a0, a1), (b0, b1) in zip(phi, psi)]


def _evaluate_family(string, family, fn):
    return PiecewisePoly(string.breakpoints, [Poly([fn(c) for c in seg]) for seg in family])


def omega(string, bc, lam):
    """The product phi(.; lam) psi(.; lam) as a piecewise quadratic."""
    return _evaluate_family(string, omega_family(string, bc), lambda c: c(lam))


def _omega_lam_derivative(string, family):
    return _evaluate_family(string, family, lambda c: c.coeff(1))


def rescale_factor(bc):
    w = bc.wronskian()
    if w == 0:
        raise DegenerateBC("rescaling needs W(c0, c0_hat) != 0; Neumann-Neumann ends give 0")
    return reciprocal(w)


def build_fields(string, bc, spec=FlowSpec()):
    """Construct b_0 and the pole fields b_{-1}^(k) for ``spec``."""
    ref = _scalar_ref(string)
    family = omega_family(string, bc)
    scale = rescale_factor(bc) if spec.is_rescaled else _like(1, ref)
    if spec.kind == LIMIT:
        b_minus = [(_like(0, ref), _evaluate_family(string, family, lambda c: c(0)))]
        b0 = -_omega_lam_derivative(string, family)
    else:
        mu0 = _like(spec.mu0, ref)
        omega0 = _evaluate_family(string, family, lambda c: c(0))
        b_minus = []
        b0 = None
        for eps, mu in spec.pole_list():
            eps, mu = _like(eps, ref), _like(mu, ref)
            om = _evaluate_family(string, family, lambda c, e=eps: c(e))
            b_minus.append((eps, om * mu))
            term = (omega0 * mu0 - om * mu) / eps
            b0 = term if b0 is None else b0 + term
    return FieldSet(b0 * scale, tuple((e, b * scale) for e, b in b_minus), scale, spec)


def green_sum_b0(string, bc):
    """-sum_j |x - x_j| G(x, x_j) m_j as a piecewise quadratic (limit-flow b_0)."""
    c0, c0h = bc.c0(), bc.c0_hat()
    w = bc.wronskian()
    if w == 0:
        raise DegenerateBC("Green's function needs W(c0, c0_hat) != 0")
    x = Poly((0, 1))
    bp = string.breakpoints
    segs = []
    for k in range(len(bp) - 1):
        acc = Poly((0,))
        for j, (xj, mj) in enumerate(zip(string.positions, string.masses)):
            if j < k:   # x_j < x on this segment
                acc = acc + (x - xj) * c0h * (c0(xj) * mj)
            else:
                acc = acc + (x * -1 + xj) * c0 * (c0h(xj) * mj)
        segs.append(acc * -reciprocal(w))
    return PiecewisePoly(bp, segs)


def left_functional(f, h):
    """beta contribution of a field component: its left-end functional."""
    if is_dirichlet(h):
        return -HALF * f.derivative(0, 1)
    return HALF * f.derivative(0, 1) - h * f.derivative(0, 0)


def beta(fields, bc):
    return BetaFunction(tuple((e, left_functional(b, bc.left)) for e, b in fields.b_minus),
                        left_functional(fields.b0, bc.left))


def beta_closed_form(string, bc, spec=FlowSpec()):
    """beta(z) from the characteristic polynomial D instead of the fields.

    Limit flow: beta = (D_1 - D_0 / z) / 2 times the rescale factor, i.e.
    ``(1/2) sum_j m_j G(x_j, x_j) + 1 / (2 z)`` when rescaled.
    """
    ref = _scalar_ref(string)
    d = char_poly(string, bc)
    scale = rescale_factor(bc) if spec.is_rescaled else _like(1, ref)
    if spec.kind == LIMIT:
        return BetaFunction(((_like(0, ref), -HALF * d.coeff(0) * scale),), HALF * d.coeff(1) * scale)
    mu0 = _like(spec.mu0, ref)
    const = 0 * ref
    poles = []
    for eps, mu in spec.pole_list():
        eps, mu = _like(eps, ref), _like(mu, ref)
        de = d(eps)
        const = const + HALF * (mu * de - mu0 * d.coeff(0)) / eps
        poles.append((eps, -HALF * mu * de * scale))
    return BetaFunction(tuple(poles), const * scale)


def _bc_left(f, h):
    if is_dirichlet(h):
        return f.derivative(0, 0)
    return HALF * f.derivative(0, 2) - h * f.derivative(0, 1) + h * h * f.derivative(0, 0)


def _bc_right(f, H):
    if is_dirichlet(H):
        return f.derivative(1, 0, "left")
    return (HALF * f.derivative(1, 2, "left") + H * f.derivative(1, 1, "left")
            + H * H * f.derivative(1, 0, "left"))


def bc_residuals(fields, bc):
    """Endpoint conditions for every component, b_0 first; all must vanish."""
    comps = [fields.b0] + [b for _, b in fields.b_minus]
    return {"left": [_bc_left(f, bc.left) for f in comps],
            "right": [_bc_right(f, bc.right) for f in comps]}


def k_diagnostic(fields, bc, z):
    """K = (right-end functional of b) / beta; equals -1 for constructed fields."""
    b = fields.at(z)
    bz = beta(fields, bc)(z)
    if bz == 0:
        raise BetaZero(f"beta vanishes at z={z}")
    H = bc.right
    bx1 = b.derivative(1, 1, "left")
    if is_dirichlet(H):
        kb = -HALF * bx1
    else:
        kb = HALF * bx1 + H * b.derivative(1, 0, "left")
    return kb / bz


def endpoint_brackets(om, bc):
    """The four endpoint expressions of ``om``; ``None`` where undefined.

    For omega = phi psi they satisfy
    ``left_inv == -left_h == -right_inv == right_H``.
    """
    h, H = bc.left, bc.right
    d0 = [om.derivative(0, k) for k in range(3)]
    d1 = [om.derivative(1, k, "left") for k in range(3)]
    out = {"left_h": None, "left_inv": None, "right_H": None, "right_inv": None}
    if not is_dirichlet(h):
        out["left_h"] = HALF * d0[1] - h * d0[0]
    if is_dirichlet(h):
        out["left_inv"] = HALF * d0[1]
    elif h != 0:
        out["left_inv"] = HALF * d0[1] - HALF * d0[2] * reciprocal(h)
    if not is_dirichlet(H):
        out["right_H"] = HALF * d1[1] + H * d1[0]
    if is_dirichlet(H):
        out["right_inv"] = HALF * d1[1]
    elif H != 0:
        out["right_inv"] = HALF * d1[1] + HALF * d1[2] * reciprocal(H)
    return out


def zs_matrix_entries(fields, bc, z, x, side="right"):
    """(a, c, d) of the time half of the Lax pair at ``x`` (regular part of c)."""
    b = fields.at(z)
    bz = beta(fields, bc)(z)
    bx = b.derivative(x, 1, side)
    a = -HALF * bx + bz
    c = -HALF * b.derivative(x, 2, side)
    d = HALF * bx + bz
    return a, c, d
