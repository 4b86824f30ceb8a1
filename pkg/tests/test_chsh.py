import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bellfusion.chsh import (
    TSIRELSON_BOUND,
    chsh_from_document_pair,
    chsh_s_values,
    chsh_statistic,
    correlation_matrix,
    expectation_independent,
    maximize_quantum_chsh,
    quantum_chsh,
    quantum_expectation,
)
from bellfusion.composite import BellStateKind, CompositeState, bell_state, tensor_product
from bellfusion.errors import DomainError
from bellfusion.hilbert import BasisAngle, DocumentState, state_from_probability
from bellfusion.retrieval import ScoredDocument

from oracles import dense_expectation, four_term_chsh, four_term_expectation, horodecki_max

probs = st.floats(0.0, 1.0)
angles = st.floats(0.0, math.pi)
PI = math.pi


def test_expectation_examples():
    assert expectation_independent(1.0, 1.0) == 1.0
    for p in (0.0, 0.3, 1.0):
        assert expectation_independent(0.5, p) == 0.0
    assert four_term_expectation(0.9, 0.8) == pytest.approx(0.72 - 0.18 - 0.08 + 0.02, abs=1e-15)
    assert expectation_independent(0.9, 0.8) == pytest.approx(0.48, abs=1e-15)


def test_expectation_rejects_bad_probability():
    with pytest.raises(DomainError):
        expectation_independent(1.2, 0.5)


@given(probs, probs)
def test_expectation_matches_four_term_sum(pa, pb):
    e = expectation_independent(pa, pb)
    assert e == pytest.approx(four_term_expectation(pa, pb), abs=1e-12)
    assert -1.0 <= e <= 1.0
    assert e == expectation_independent(pb, pa)
    assert expectation_independent(1 - pa, pb) == pytest.approx(-e, abs=1e-12)


def test_chsh_statistic_examples():
    r = chsh_statistic(1, 1, 1, 1)
    assert r.s_value == 2 and not r.violates_classical and not r.exceeds_tsirelson
    r = chsh_statistic(1, 1, 1, -1)
    assert r.s_value == 4 and r.violates_classical and r.exceeds_tsirelson
    h = math.sqrt(2) / 2
    r = chsh_statistic(h, h, h, -h)
    assert r.s_value == pytest.approx(2.82843, abs=1e-5)
    assert r.violates_classical and not r.exceeds_tsirelson


def test_chsh_threshold_is_strict():
    assert not chsh_statistic(1, 1, 1, 1 - 1e-10).violates_classical
    assert chsh_statistic(1, 1, 1, 1 - 1e-7).violates_classical
    assert not chsh_statistic(1, 1, 1, 1 - 1e-7, tol=1e-6).violates_classical
    assert chsh_statistic(1, 1, 1, -1e-6).violates_classical


def test_chsh_statistic_rejects_out_of_range():
    with pytest.raises(DomainError, match="e_ii"):
        chsh_statistic(0, 0, 0, 1.1)
    chsh_statistic(0, 0, 0, 1 + 1e-10)


def pair(pt1, pi1, pt2, pi2):
    return ScoredDocument("a", pt1, pi1), ScoredDocument("b", pt2, pi2)


def test_document_pair_examples():
    r = chsh_from_document_pair(*pair(1, 1, 1, 1))
    assert (r.e_tt, r.e_ti, r.e_it, r.e_ii) == (1, 1, 1, 1) and r.s_value == 2 and not r.violates_classical
    assert chsh_from_document_pair(*pair(0.5, 0.5, 0.5, 0.5)).s_value == 0
    r = chsh_from_document_pair(*pair(0.9, 0.2, 0.7, 0.6))
    assert (r.e_tt, r.e_ti, r.e_it, r.e_ii) == pytest.approx((0.32, -0.24, 0.16, -0.12), abs=1e-12)
    assert r.s_value == pytest.approx(0.36, abs=1e-12)
    assert four_term_chsh(0.9, 0.2, 0.7, 0.6) == pytest.approx(0.36, abs=1e-12)


def test_document_pair_missing_modality():
    with pytest.raises(DomainError, match="'x'.*image"):
        chsh_from_document_pair(SimpleNamespace(doc_id="x", p_text=0.5, p_image=None), ScoredDocument("y", 0.5, 0.5))


@given(probs, probs, probs, probs)
def test_document_pair_matches_oracle_and_vector_form(pt1, pi1, pt2, pi2):
    r = chsh_from_document_pair(*pair(pt1, pi1, pt2, pi2))
    assert r.s_value == pytest.approx(four_term_chsh(pt1, pi1, pt2, pi2), abs=1e-12)
    assert r.s_value == pytest.approx(float(chsh_s_values(pt1, pi1, pt2, pi2)), abs=1e-15)
    assert r.s_value <= 2 + 1e-12


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_algebraic_identity(x1, y1, x2, y2):
    s = abs(x1 * x2 + x2 * y1 + x1 * y2 - y1 * y2)
    assert s == pytest.approx(abs(x1 * (x2 + y2) + y1 * (x2 - y2)), abs=1e-12)
    assert s <= 2 + 1e-12


def test_quantum_expectation_examples():
    phi = bell_state()
    assert quantum_expectation(phi, 0, 0) == pytest.approx(1.0, abs=1e-15)
    assert quantum_expectation(phi, 0, PI / 8) == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert dense_expectation(phi.coeffs, 0, PI / 8) == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    e = CompositeState((1.0, 0.0, 0.0, 0.0))
    for a, b in [(0.1, 0.7), (1.0, 2.5), (PI / 3, PI / 5)]:
        assert quantum_expectation(e, a, b) == pytest.approx(math.cos(2 * a) * math.cos(2 * b), abs=1e-12)


@given(st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(lambda v: sum(x * x for x in v) > 1e-3),
       angles, angles)
def test_quantum_expectation_matches_dense_operator(v, a, b):
    c = CompositeState.normalized(v)
    e = quantum_expectation(c, a, b)
    assert e == pytest.approx(dense_expectation(c.coeffs, a, b), abs=1e-12)
    assert -1.0 <= e <= 1.0


@given(angles, angles)
def test_phi_plus_closed_form(a, b):
    assert quantum_expectation(bell_state(), a, b) == pytest.approx(math.cos(2 * (a - b)), abs=1e-12)


def test_measurement_settings_accept_basis_angles():
    phi = bell_state()
    assert quantum_expectation(phi, BasisAngle(PI / 8 + PI), BasisAngle(0)) == pytest.approx(math.sqrt(2) / 2)


def test_quantum_chsh_examples():
    r = quantum_chsh(bell_state(), 0, PI / 4, PI / 8, 3 * PI / 8)
    assert abs(r.s_value - 2 * math.sqrt(2)) <= 1e-9
    assert r.violates_classical and not r.exceeds_tsirelson
    r = quantum_chsh(bell_state(), 0.3, 0.3, 0.3, 0.3)
    assert r.s_value == pytest.approx(2.0, abs=1e-12) and not r.violates_classical


@given(probs, probs, angles, angles, angles, angles)
def test_product_states_never_violate(p1, p2, a, ap, b, bp):
    c = tensor_product(state_from_probability(p1), state_from_probability(p2))
    assert quantum_chsh(c, a, ap, b, bp).s_value <= 2 + 1e-9


def test_grid_maximum_matches_analytic_optimum():
    best = maximize_quantum_chsh(bell_state(), steps=72)
    assert best.s_value == pytest.approx(horodecki_max(bell_state().coeffs), abs=1e-12)
    again = quantum_chsh(bell_state(), best.a, best.a_prime, best.b, best.b_prime).s_value
    assert again == pytest.approx(best.s_value, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_grid_maximum_close_to_horodecki_for_random_states(seed):
    rng = np.random.default_rng(seed)
    c = CompositeState.normalized(rng.normal(size=4))
    best = maximize_quantum_chsh(c, steps=90)
    top = horodecki_max(c.coeffs)
    assert best.s_value <= top + 1e-9
    assert best.s_value >= top - 5e-3


def test_grid_maximum_brute_force_small_grid():
    rng = np.random.default_rng(42)
    c = CompositeState.normalized(rng.normal(size=4))
    steps = 8
    grid = [k * PI / steps for k in range(steps)]
    brute = max(
        quantum_chsh(c, a, ap, b, bp).s_value for a in grid for ap in grid for b in grid for bp in grid
    )
    assert maximize_quantum_chsh(c, steps=steps).s_value == pytest.approx(brute, abs=1e-12)


def test_correlation_matrix_of_phi_plus_is_identity():
    assert correlation_matrix(bell_state()) == pytest.approx(np.eye(2), abs=1e-15)
    assert correlation_matrix(bell_state(BellStateKind.PSI_PLUS)) == pytest.approx(np.diag([-1.0, 1.0]), abs=1e-15)


@pytest.mark.parametrize("p1, p2", [(1.0, 1.0), (0.3, 0.8), (0.5, 0.5)])
def test_separable_grid_maximum_stays_classical(p1, p2):
    c = tensor_product(state_from_probability(p1), state_from_probability(p2))
    assert maximize_quantum_chsh(c, steps=720).s_value <= 2 + 1e-9
