import itertools
import json

import numpy as np
import pytest

from hardyic.box import (
    Behavior,
    Local,
    Nonlocal,
    VertexId,
    correlator_box,
    load_behavior,
    make_local_vertex,
    make_nonlocal_vertex,
    marginal,
    mix,
    pr_box,
    resolve_box,
    save_behavior,
    validate,
    vertex,
    white_noise,
)
from hardyic.errors import DomainError, NegativeWeightError, WeightSumError
from hardyic.ic_bounds import ic_stats

BITS = (0, 1)


def test_local_vertex_0001_outputs_a0_b1():
    B = make_local_vertex(0, 0, 0, 1)
    for X, Y in itertools.product(BITS, BITS):
        assert B.p(0, 1, X, Y) == 1.0
        assert B.table[X, Y].sum() == 1.0


def test_local_vertex_0000():
    B = make_local_vertex(0, 0, 0, 0)
    for X, Y in itertools.product(BITS, BITS):
        assert B.p(0, 0, X, Y) == 1.0


def test_local_vertex_1010_copies_inputs():
    B = make_local_vertex(1, 0, 1, 0)
    for X, Y, a, b in itertools.product(BITS, repeat=4):
        assert B.p(a, b, X, Y) == float(a == X and b == Y)


def test_pr_box_definition():
    B = make_nonlocal_vertex(0, 0, 0)
    for X, Y, a, b in itertools.product(BITS, repeat=4):
        assert B.p(a, b, X, Y) == (0.5 if a ^ b == X & Y else 0.0)
    assert pr_box() == B


def test_nonlocal_001():
    B = make_nonlocal_vertex(0, 0, 1)
    for X, Y, a, b in itertools.product(BITS, repeat=4):
        assert B.p(a, b, X, Y) == (0.5 if a ^ b == (X & Y) ^ 1 else 0.0)
    assert B.p(1, 1, 1, 1) == 0.5


def test_nonlocal_110():
    B = make_nonlocal_vertex(1, 1, 0)
    for X, Y, a, b in itertools.product(BITS, repeat=4):
        assert B.p(a, b, X, Y) == (0.5 if a ^ b == (X & Y) ^ X ^ Y else 0.0)


@pytest.mark.parametrize("vid", [Local(*b) for b in itertools.product(BITS, repeat=4)]
                         + [Nonlocal(*b) for b in itertools.product(BITS, repeat=3)], ids=str)
def test_vertices_exact(vid):
    B = vertex(vid)
    cert = validate(B)
    assert cert.aToB_deviation == cert.bToA_deviation == cert.normalization_deviation == 0.0
    assert cert.min_entry == 0.0
    assert set(np.unique(B.table)) <= {0.0, 0.5, 1.0}


def test_behavior_is_immutable():
    B = pr_box()
    with pytest.raises(ValueError):
        B.table[0, 0, 0, 0] = 1.0


def test_behavior_shape_checked():
    with pytest.raises(DomainError):
        Behavior(np.zeros((2, 2, 4)))


def test_mix_identity():
    assert mix([1.0], [pr_box()]) == pr_box()


def test_uniform_local_mixture_is_white_noise():
    locals_ = [make_local_vertex(*b) for b in itertools.product(BITS, repeat=4)]
    B = mix([1 / 16] * 16, locals_)
    assert np.allclose(B.table, 0.25, atol=1e-15)


def test_mix_errors():
    with pytest.raises(WeightSumError):
        mix([0.5, 0.4], [pr_box(), white_noise()])
    with pytest.raises(NegativeWeightError):
        mix([1.5, -0.5], [pr_box(), white_noise()])
    with pytest.raises(DomainError):
        mix([1.0], [pr_box(), white_noise()])


def test_hardy_witness_mixture_saturates_ic():
    s = 1 - 1 / np.sqrt(2)
    B = mix([s, np.sqrt(2) - 1, s], [vertex(Local(1, 1, 0, 0)), vertex(Nonlocal(0, 0, 1)), vertex(Local(0, 0, 0, 1))])
    assert validate(B).ok()
    assert ic_stats(B).Q == pytest.approx(1.0, abs=1e-12)


def test_mix_is_affine_for_ic_stats(rng):
    boxes = [vertex(Local(*b)) for b in itertools.product(BITS, repeat=4)] + [
        vertex(Nonlocal(*b)) for b in itertools.product(BITS, repeat=3)
    ]
    for _ in range(200):
        w = rng.dirichlet(np.ones(len(boxes)))
        B = mix(w, boxes)
        P1 = sum(wi * ic_stats(Bi).P1 for wi, Bi in zip(w, boxes))
        P2 = sum(wi * ic_stats(Bi).P2 for wi, Bi in zip(w, boxes))
        st = ic_stats(B)
        assert abs(st.P1 - P1) < 1e-12 and abs(st.P2 - P2) < 1e-12


def test_validate_normalization_violation():
    t = white_noise().table.copy()
    t[0, 0] = [[1.1, 0.0], [0.0, 0.0]]
    cert = validate(Behavior(t))
    assert cert.normalization_deviation > 0
    assert not cert.ok()


def test_validate_a_equals_y_signals_from_bob():
    t = np.zeros((2, 2, 2, 2))
    for X, Y in itertools.product(BITS, BITS):
        t[X, Y, Y, 0] = 1.0
    cert = validate(Behavior(t))
    assert cert.bToA_deviation == 1.0
    assert cert.aToB_deviation == 0.0
    assert not cert.ok()


def test_validate_negative_entry():
    t = white_noise().table.copy()
    t[1, 1] = [[-0.1, 0.35], [0.35, 0.4]]
    cert = validate(Behavior(t))
    assert cert.min_entry == pytest.approx(-0.1)
    assert not cert.ok()


def test_marginals():
    assert marginal(pr_box(), "A", 0, 0) == 0.5
    assert marginal(make_local_vertex(0, 0, 0, 1), "B", 1, 1) == 1.0
    for party, x, o in itertools.product("AB", BITS, BITS):
        assert marginal(white_noise(), party, x, o) == 0.5
    with pytest.raises(DomainError):
        marginal(pr_box(), "C", 0, 0)


def test_correlator_box():
    E = [[0.3, -0.2], [0.5, 0.1]]
    B = correlator_box(E)
    assert validate(B).ok()
    for X, Y in itertools.product(BITS, BITS):
        t = B.table[X, Y]
        assert t[0, 0] + t[1, 1] - t[0, 1] - t[1, 0] == pytest.approx(E[X][Y])


def test_vertex_id_roundtrip():
    for text in ("local:0110", "nonlocal:101"):
        assert str(VertexId.parse(text)) == text
    for bad in ("local:011", "nonlocal:0102", "foo:01", "local"):
        with pytest.raises(DomainError):
            VertexId.parse(bad)


def test_resolve_builtins_and_files(tmp_path):
    assert resolve_box("pr") == pr_box()
    assert resolve_box("white") == white_noise()
    assert resolve_box("local:0001") == make_local_vertex(0, 0, 0, 1)
    assert resolve_box("nonlocal:110") == make_nonlocal_vertex(1, 1, 0)
    path = tmp_path / "box.json"
    save_behavior(Behavior(pr_box().table, name="mine"), path)
    data = json.loads(path.read_text())
    assert data["name"] == "mine" and np.array(data["table"]).shape == (2, 2, 2, 2)
    loaded = load_behavior(path)
    assert loaded == pr_box() and loaded.name == "mine"
    with pytest.raises(DomainError):
        resolve_box(str(tmp_path / "missing.json"))
    (tmp_path / "bad.json").write_text("[1, 2]")
    with pytest.raises(DomainError):
        load_behavior(tmp_path / "bad.json")
