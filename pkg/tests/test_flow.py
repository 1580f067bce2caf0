from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helpers import ALL_FAMILIES, bcs, strings
from isostring import (DIRICHLET, BoundaryConditions, FlowSpec, OrderingViolation, ValidationError,
                       build_fields, eigenvalues, flow_rhs, flow_rhs_float, integrate, invariants,
                       lax_residuals, new_string)
from isostring.flow import beta_drift

DD = BoundaryConditions()
DN = BoundaryConditions(DIRICHLET, F(0))
RN = BoundaryConditions(F(1), F(0))
ONE = new_string([F(1, 2)], [F(1)])
TWO = new_string([F(1, 3), F(2, 3)], [F(1), F(1)])


def dd_double_sums(xs, ms):
    """Velocities from the explicit Dirichlet-Dirichlet sums with G(x, y) = -x(1 - y), x < y."""
    n = len(xs)
    xdot, mdot = [], []
    for j in range(n):
        v, slope = 0, 0
        for k in range(n):
            if k == j:
                continue
            x, y = xs[j], xs[k]
            if x < y:
                v += ms[k] * (y - x) * (-x * (1 - y))
                slope += ms[k] * (1 - y) * (y - 2 * x)
            else:
                v += ms[k] * (x - y) * (-y * (1 - x))
                slope += ms[k] * y * (1 - 2 * x + y)
        xdot.append(v)
        mdot.append(ms[j] * slope)
    return xdot, mdot


def test_rhs_matches_explicit_sums():
    assert flow_rhs(TWO, DD, FlowSpec.limit()) == dd_double_sums(TWO.positions, TWO.masses)
    assert flow_rhs(TWO, DD)[0] == [F(-1, 27), F(-1, 27)]


@given(strings(max_n=5))
def test_rhs_matches_explicit_sums_random(s):
    assert flow_rhs(s, DD, FlowSpec.limit()) == dd_double_sums(s.positions, s.masses)


@pytest.mark.parametrize("bc", [DD, DN, RN])
@pytest.mark.parametrize("spec", [FlowSpec.limit(), FlowSpec.limit(rescaled=False), FlowSpec.single_pole(F(1, 4))])
def test_single_mass_fixed_point(bc, spec):
    for x, m in [(F(1, 2), F(1)), (F(1, 7), F(5, 2)), (F(9, 10), F(1, 3))]:
        xdot, mdot = flow_rhs(new_string([x], [m]), bc, spec)
        assert xdot == [0] and mdot == [0]


@given(strings(), bcs(), st.sampled_from([FlowSpec.limit(), FlowSpec.single_pole(F(1, 3)),
                                         FlowSpec.multi_pole([(F(1, 2), F(1)), (F(3), F(2))])]))
def test_float_kernel_matches_exact_rhs(s, bc, spec):
    exact = np.array(flow_rhs(s, bc, spec), dtype=float)
    fast = np.array(flow_rhs_float(s.positions, s.masses, bc, spec))
    assert np.allclose(fast, exact, rtol=1e-11, atol=1e-13)


def test_invariant_examples():
    assert invariants(ONE, DD) == [F(-1, 4)]
    assert invariants(TWO, DD) == [F(-4, 9), F(-1, 27)]
    assert invariants(new_string([], []), DD) == []


def test_lax_residual_example():
    fs = build_fields(ONE, DD, FlowSpec.limit())
    b = fs.at(F(4))
    assert b.jump(F(1, 2), 1) == F(1, 2)
    assert b(F(1, 2)) == F(-1, 16)
    assert lax_residuals(ONE, DD, fs, [F(4)]) == [[(0, 0)]]


@given(strings(), bcs(), st.sampled_from([FlowSpec.limit(), FlowSpec.single_pole(F(2)),
                                         FlowSpec.multi_pole([(F(1, 3), F(2)), (F(5), F(1))], mu0=F(1, 2))]))
def test_lax_residuals_vanish_exactly(s, bc, spec):
    fs = build_fields(s, bc, spec)
    rows = lax_residuals(s, bc, fs, [F(1, 5), F(2), F(-3, 7), F(9), F(31, 3)])
    assert all(v == 0 for row in rows for pair in row for v in pair)


def test_integrate_fixed_point():
    traj = integrate(ONE.as_float(), DD, FlowSpec.limit(), t_end=1.0, dt=0.1)
    assert traj.final().positions[0] == pytest.approx(0.5, abs=1e-12)
    assert traj.final().masses[0] == pytest.approx(1.0, abs=1e-12)
    assert traj.times[-1] == 1.0


def test_integrate_isospectral_two_masses():
    traj = integrate(TWO.as_float(), DD, FlowSpec.limit(), t_end=0.05, dt=0.01)
    zs = eigenvalues(traj.final(), DD, "float")
    assert np.allclose(zs, [3, 9], rtol=1e-8)
    assert not traj.drift_alarm


@pytest.mark.parametrize("bc", ALL_FAMILIES)
def test_invariants_and_beta_constant(bc):
    s = new_string([0.2, 0.45, 0.7], [1.0, 0.5, 1.5])
    spec = FlowSpec.limit()
    traj = integrate(s, bc, spec, t_end=0.05, dt=0.01, tol=1e-11)
    inv0 = np.array(traj.invariants[0])
    for inv in traj.invariants[1:]:
        assert np.allclose(inv, inv0, rtol=1e-9)
    assert beta_drift(s, traj.final(), bc, spec, [0.5, 2.0, 9.0]) < 1e-9


def test_lax_residuals_along_trajectory():
    s = new_string([0.2, 0.45, 0.7], [1.0, 0.5, 1.5])
    bc = BoundaryConditions(2.0, 1.0)
    traj = integrate(s, bc, FlowSpec.limit(), t_end=0.04, dt=0.01)
    for st_ in traj.states:
        fs = build_fields(st_, bc, FlowSpec.limit())
        rows = lax_residuals(st_, bc, fs, [0.3, 4.0, 11.0])
        assert max(abs(v) for row in rows for pair in row for v in pair) < 1e-10


def test_breakdown_is_reported():
    s = new_string([0.3, 0.6], [1.0, 1.0])
    with pytest.raises(OrderingViolation) as info:
        integrate(s, RN, FlowSpec.limit(), t_end=2.0, dt=0.01)
    err = info.value
    assert 0.5 < err.last_state.t < 0.6
    assert err.trajectory.times[-1] <= err.last_state.t
    assert all(0 < x < 1 for x in err.last_state.string.positions)


def test_integrate_rejects_bad_step():
    with pytest.raises(ValidationError):
        integrate(TWO.as_float(), DD, FlowSpec.limit(), t_end=1.0, dt=0.0)


def test_stride_controls_sampling():
    traj = integrate(TWO.as_float(), DD, FlowSpec.limit(), t_end=0.1, dt=0.01, stride=5, monitor=False)
    assert traj.times[0] == 0.0 and traj.times[-1] == pytest.approx(0.1)
    assert len(traj.times) == 3
