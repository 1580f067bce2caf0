from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given

from helpers import strings
from isostring import (DIRICHLET, BoundaryConditions, FlowSpec, LengthOverflow, NotAStieltjesFraction, Poly,
                       ValidationError, beta, build_fields, cf_expand, euclidean_cf, evolve_measure,
                       exact_solution, exact_state, integrate, new_string, partial_fractions, reassemble)
from isostring.weyl_cf import ContinuedFraction

RN = BoundaryConditions(F(1), F(0))
ONE = new_string([F(1, 2)], [F(1)])


def test_euclidean_example():
    cf = euclidean_cf(Poly((1,)), Poly((F(2, 3), 1)), F(1))
    assert cf.masses == (1,) and cf.lengths == (F(1, 2),)
    assert reassemble(cf) == ONE


def test_reassemble_edge_cases():
    assert reassemble(ContinuedFraction((), (), F(0))).n == 0
    with pytest.raises(LengthOverflow):
        reassemble(ContinuedFraction((F(1), F(1)), (F(1, 2), F(1, 2)), F(0)))


def test_non_stieltjes_data_rejected():
    # a negative residue
    with pytest.raises(NotAStieltjesFraction):
        euclidean_cf(Poly((-1,)), Poly((F(2, 3), 1)), F(1))
    # l_0 would have to absorb more than 1/h
    with pytest.raises(NotAStieltjesFraction):
        euclidean_cf(Poly((1,)), Poly((F(2), 1)), F(1))


@given(strings(max_n=8))
def test_roundtrip_exact(s):
    for h in (DIRICHLET, F(1, 2), F(7, 3)):
        num, den = cf_expand(s, h).proper_part()
        assert reassemble(euclidean_cf(num, den, h)) == s


def test_evolve_identity_and_fixed_point():
    data = partial_fractions(ONE, RN)
    b = beta(build_fields(ONE, RN, FlowSpec.limit()), RN)
    assert evolve_measure(data, b, 0).residues == data.residues
    assert b(F(2, 3)) == 0
    for t in (F(1, 2), 3, 10):
        assert float(evolve_measure(data, b, t).residues[0]) == 1.0


def test_single_mass_never_moves():
    for h in (DIRICHLET, F(1), F(5)):
        for t in (F(1, 10), F(2)):
            s = exact_state(new_string([F(2, 7)], [F(3)]), BoundaryConditions(h, F(0)), FlowSpec.limit(), t)
            assert abs(float(s.positions[0]) - 2 / 7) < 1e-40
            assert abs(float(s.masses[0]) - 3) < 1e-40


def test_t_zero_is_bit_exact():
    for s in (new_string([F(3, 10), F(3, 5)], [F(1), F(1)]),
              new_string([F(1, 9), F(2, 5), F(7, 8)], [F(2), F(1, 3), F(5, 2)])):
        res = exact_solution(s, RN, FlowSpec.limit(), 0)
        assert res.string == s
        assert res.w_zero == 2


def test_residue_factors_match_recomputed_residues():
    s = new_string([F(1, 3), F(2, 3)], [F(1), F(1)])
    bc = BoundaryConditions(DIRICHLET, F(0))
    t = 0.01
    data = partial_fractions(s, bc)
    b = beta(build_fields(s, bc, FlowSpec.limit()), bc)
    predicted = [float(a) * np.exp(2 * float(b(z)) * t) for z, a in zip(data.eigenvalues, data.residues)]
    traj = integrate(s.as_float(), bc, FlowSpec.limit(), t_end=t, dt=1e-3)
    observed = partial_fractions(traj.final(), bc, "float").residues
    assert np.allclose(observed, predicted, rtol=1e-8)


@pytest.mark.parametrize("h", [DIRICHLET, F(1, 2), F(1), F(4)])
@pytest.mark.parametrize("spec", [FlowSpec.limit(), FlowSpec.limit(rescaled=False),
                                  FlowSpec.single_pole(F(1, 2)),
                                  FlowSpec.multi_pole([(F(1, 3), F(1)), (F(2), F(1, 2))])])
def test_exact_solution_matches_integration(h, spec):
    s = new_string([F(3, 10), F(3, 5)], [F(1), F(1)])
    bc = BoundaryConditions(h, F(0))
    traj = integrate(s.as_float(), bc, spec, t_end=0.05, dt=0.01, tol=1e-12, stride=1)
    for t, st_ in list(zip(traj.times, traj.states))[1::2]:
        ex = exact_solution(s, bc, spec, F(repr(t)))
        got = np.array([float(v) for v in ex.string.positions + ex.string.masses])
        assert np.allclose(got, st_.positions + st_.masses, atol=1e-9)
        assert abs(float(ex.w_zero) - float(ex.w_zero_expected)) < 1e-12


def test_existence_window_is_detected():
    s = new_string([F(3, 10), F(3, 5)], [F(1), F(1)])
    with pytest.raises(NotAStieltjesFraction):
        exact_state(s, RN, FlowSpec.limit(), 1)


def test_family_guard():
    with pytest.raises(ValidationError):
        exact_state(ONE, BoundaryConditions(), FlowSpec.limit(), 0)
    with pytest.raises(ValidationError):
        exact_state(ONE, BoundaryConditions(F(0), F(0)), FlowSpec.limit(rescaled=False), 0)
