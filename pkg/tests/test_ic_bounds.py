import math

import numpy as np
import pytest
from conftest import VERTICES, random_ns_box

from hardyic.box import mix, pr_box, vertex
from hardyic.errors import DomainError
from hardyic.ic_bounds import (
    HARDY_IC_BOUND,
    cabello_x_of_p2,
    hardy_c6_bound,
    hardy_witness,
    ic_stats,
    max_cabello_under_ic,
    max_cabello_under_ns,
    max_chsh_under_ic,
    max_hardy_under_ic,
    max_hardy_under_ns,
    numeric_cabello_under_ic,
    scan_chsh_under_ic,
    scan_hardy_bound,
    violates_ic_sufficient,
)
from hardyic.nonlocality import cabello_success, hardy_success
from hardyic.polytope import cabello_vertex_set, hardy_face_vertices

SQRT2 = math.sqrt(2)
HARDY = [vertex(v) for v in hardy_face_vertices()]
CABELLO = [vertex(v) for v in cabello_vertex_set()]


def test_pr_stats():
    st = ic_stats(pr_box())
    assert (st.P1, st.P2, st.E1, st.E2, st.Q) == (1.0, 1.0, 1.0, 1.0, 2.0)


def test_hardy_face_stats(rng):
    for c in rng.dirichlet(np.ones(6), size=300):
        st = ic_stats(mix(c, HARDY))
        assert st.P1 == pytest.approx((c[4] + c[3]) / 2, abs=1e-12)
        assert st.P2 == pytest.approx((c[0] + c[1] + c[2]) / 2, abs=1e-12)


def test_cabello_set_biases(rng):
    for c in rng.dirichlet(np.ones(11), size=300):
        st = ic_stats(mix(c, CABELLO))
        c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11 = c
        assert st.E1 == pytest.approx(c7 + c8 - c1 - c2 - c3 - c6, abs=1e-12)
        assert st.E2 == pytest.approx(c9 - c4 - c5 - c6 - c10, abs=1e-12)
        C = c7 + c8 + c9 + c10 + c11 / 2
        assert st.P1 == pytest.approx((C + c5 + c11 / 2 + c4 + c7 + c8) / 2, abs=1e-12)
        assert st.P2 == pytest.approx((1 + c9 - (c4 + c5 + c6 + c10)) / 2, abs=1e-12)


def test_stats_invariants(rng):
    for _ in range(500):
        st = ic_stats(random_ns_box(rng))
        assert st.E1 == pytest.approx(2 * st.P1 - 1) and st.E2 == pytest.approx(2 * st.P2 - 1)
        assert st.Q == pytest.approx(st.E1**2 + st.E2**2)
        assert -1e-12 <= st.Q <= 2 + 1e-12


def test_violation_flags():
    assert violates_ic_sufficient(pr_box())
    for _, B in VERTICES[:16]:
        assert ic_stats(B).Q == 1.0
        assert not violates_ic_sufficient(B)
    assert not violates_ic_sufficient(hardy_witness())


def test_c6_bound_examples():
    assert hardy_c6_bound(0.0) == 0.0
    assert hardy_c6_bound(1 - 1 / SQRT2) == pytest.approx(SQRT2 - 1, abs=1e-15)
    assert hardy_c6_bound(0.5) == pytest.approx((math.sqrt(3) - 1) / 2, abs=1e-15)
    assert hardy_c6_bound(1.0) == 0.0
    for bad in (-0.1, 1.1):
        with pytest.raises(DomainError):
            hardy_c6_bound(bad)


def test_c6_bound_is_tight_on_the_face():
    # at the bound, the best box with that s sits exactly on Q = 1
    for s in np.linspace(0.01, 0.99, 25):
        c6 = hardy_c6_bound(s)
        st_E1, st_E2 = s - 1, -(s + c6)
        assert st_E1**2 + st_E2**2 == pytest.approx(1.0, abs=1e-12)


def test_quadratic_form_identity(rng):
    for c in rng.dirichlet(np.ones(6), size=1000):
        st = ic_stats(mix(c, HARDY))
        s, c6 = c[3] + c[4], c[5]
        lhs = c6**2 + 2 * s * c6 + 2 * s * (s - 1)
        assert abs(lhs - (st.Q - 1)) < 1e-12


def test_cabello_x_identity(rng):
    for c in rng.dirichlet(np.ones(11), size=1000):
        st = ic_stats(mix(c, CABELLO))
        C = c[6] + c[7] + c[8] + c[9] + c[10] / 2
        x = (c[9] + c[5] / 2) - C
        assert abs(st.E1 + st.E2 + (1 + 2 * x)) < 1e-12


def test_max_hardy_under_ic():
    res = max_hardy_under_ic()
    assert res.value == pytest.approx((SQRT2 - 1) / 2, abs=1e-12)
    W = res.witness()
    assert ic_stats(W).Q == pytest.approx(1.0, abs=1e-9)
    assert res.saturates_ic
    assert hardy_success(W) == pytest.approx(res.value, abs=1e-9)
    assert res.details["scan_value"] == pytest.approx(res.value, abs=1e-9)


def test_scan_hardy_bound_independent_of_closed_form():
    value, s = scan_hardy_bound()
    assert value == pytest.approx(HARDY_IC_BOUND, abs=1e-9)
    assert s == pytest.approx(1 - 1 / SQRT2, abs=1e-4)


def test_cabello_x_of_p2():
    grid = np.linspace(0, 0.5, 200001)
    best = max(cabello_x_of_p2(p) for p in grid)
    assert best == pytest.approx(HARDY_IC_BOUND, abs=1e-9)
    assert cabello_x_of_p2(0.0) == 0.0 and cabello_x_of_p2(0.5) == 0.0
    with pytest.raises(DomainError):
        cabello_x_of_p2(0.6)


def test_max_cabello_under_ic():
    res = max_cabello_under_ic()
    assert res.value == pytest.approx((SQRT2 - 1) / 2, abs=1e-12)
    assert res.details["numeric_value"] == pytest.approx(res.value, abs=1e-6)
    W = res.witness()
    st = ic_stats(W)
    assert st.E1 + st.E2 == pytest.approx(-(1 + 2 * res.value), abs=1e-9)
    assert cabello_success(W) == pytest.approx(res.value, abs=1e-9)
    assert res.saturates_ic


def test_numeric_cabello_respects_constraint():
    value, c = numeric_cabello_under_ic(starts=4, seed=3)
    assert c.min() >= 0 and c.sum() == pytest.approx(1.0)
    B = mix(c, CABELLO)
    assert ic_stats(B).Q <= 1 + 1e-9
    assert cabello_success(B) == pytest.approx(value, abs=1e-12)


def test_no_signalling_maxima():
    h, c = max_hardy_under_ns(), max_cabello_under_ns()
    assert h.value == 0.5 and c.value == 0.5
    assert h.details["vertex"] == c.details["vertex"] == "nonlocal:001"


def test_max_chsh_under_ic():
    value, (E1, E2) = max_chsh_under_ic()
    assert value == pytest.approx(2 * SQRT2, abs=1e-12)
    assert (E1, E2) == pytest.approx((1 / SQRT2, 1 / SQRT2), abs=1e-12)
    assert scan_chsh_under_ic() == pytest.approx(value, abs=1e-9)
    assert max_chsh_under_ic(SQRT2)[0] == pytest.approx(4.0, abs=1e-12)


def test_q_maximum_over_mixtures_is_at_a_vertex(rng):
    worst = max(ic_stats(B).Q for _, B in VERTICES)
    for _ in range(500):
        idx = rng.choice(24, size=5, replace=False)
        boxes = [VERTICES[i][1] for i in idx]
        B = mix(rng.dirichlet(np.ones(5)), boxes)
        assert ic_stats(B).Q <= max(ic_stats(b).Q for b in boxes) + 1e-12 <= worst + 1e-12
