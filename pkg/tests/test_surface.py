﻿"""曲面、箭图、群胚字与表示簇坐标的测试"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core.errors import ConfigError, IndexMismatchError, WordError
from src.core.liegroup import MatrixGroup
from src.core.surface import (GroupoidWord, Representation, SurfaceData, boundary_monodromies, build_quiver,
                              eval_word, gauge_act_rep, match_generalized_double, rep_space,
                              verify_polygon_relation, verify_rep_chart)
from src.core.verification import run_axiom_suite

TORUS_TWO_HOLES = SurfaceData(1, (2, 1))

loop_steps = st.lists(st.tuples(st.sampled_from(["a1", "b1"]), st.sampled_from([1, -1])), max_size=6)


def test_surface_counts():
    assert TORUS_TWO_HOLES.r == 1
    assert TORUS_TWO_HOLES.base_point_count == 3
    assert TORUS_TWO_HOLES.free_rank == 3
    assert SurfaceData.annulus(3, 2).boundaries == (3, 2)
    assert SurfaceData.disk().describe() == "Σ(g=0, β=[1])"


@pytest.mark.parametrize("genus,boundaries,field", [
    (-1, (1,), "surface.genus"),
    (0, (), "surface.boundaries"),
    (1, (1, 0), "surface.boundaries[1]"),
])
def test_invalid_surface(genus, boundaries, field):
    with pytest.raises(ConfigError) as info:
        SurfaceData(genus, boundaries)
    assert info.value.field == field


def test_quiver_layout():
    quiver = build_quiver(TORUS_TWO_HOLES)
    assert quiver.vertices == ("β0.1", "β0.2", "β1.1")
    assert [e.name for e in quiver.stored] == ["γ1", "∂1.1", "a1", "b1", "∂0.1"]
    assert quiver.derived.name == "∂0.2"
    assert quiver.n_stored == TORUS_TWO_HOLES.free_rank + TORUS_TWO_HOLES.base_point_count - 1
    gamma = quiver.edge("γ1")
    assert (gamma.source, gamma.target) == ("β1.1", "β0.1")
    boundary = quiver.edge("∂0.1")
    assert (boundary.source, boundary.target) == ("β0.2", "β0.1")
    assert quiver.polygon.endpoints(quiver) == ("β0.1", "β0.1")


def test_word_composability():
    quiver = build_quiver(TORUS_TWO_HOLES)
    with pytest.raises(WordError):
        (GroupoidWord.generator("γ1") + GroupoidWord.generator("γ1")).endpoints(quiver)
    with pytest.raises(WordError):
        GroupoidWord.generator("c9").endpoints(quiver)
    with pytest.raises(WordError):
        GroupoidWord((("a1", 2),))
    assert GroupoidWord().endpoints(quiver) is None
    assert str(GroupoidWord((("a1", 1), ("b1", -1)))) == "a1·b1⁻¹"


@settings(max_examples=30, deadline=None)
@given(first=loop_steps, second=loop_steps)
def test_eval_word_is_functorial(first, second):
    su2 = MatrixGroup('su', 2)
    quiver = build_quiver(TORUS_TWO_HOLES)
    rho = Representation.random(quiver, su2, np.random.default_rng(len(first) + 7 * len(second)))
    w1, w2 = GroupoidWord(tuple(first)), GroupoidWord(tuple(second))
    assert np.allclose(eval_word(rho, w1 + w2), eval_word(rho, w1) @ eval_word(rho, w2), atol=1e-10)
    assert np.allclose(eval_word(rho, w1 + w1.inverse()), np.eye(2), atol=1e-10)


@pytest.mark.parametrize("surface", [SurfaceData(0, (3,)), SurfaceData(0, (2, 2)), TORUS_TWO_HOLES,
                                     SurfaceData(2, (1,))])
def test_polygon_relation(surface, su2, s3, rng):
    assert verify_polygon_relation(surface, su2, rng, samples=5).passed
    assert verify_polygon_relation(surface, s3[0], rng, samples=5).passed


def test_rep_chart(su2, rng):
    reports = verify_rep_chart(TORUS_TWO_HOLES, su2, rng, samples=5)
    assert [r.check for r in reports] == ['rep_chart', 'rep_gauge', 'rep_moment']
    assert all(r.passed for r in reports), [(r.check, r.max_residual) for r in reports]


def test_rep_chart_finite(s3, rng):
    reports = verify_rep_chart(SurfaceData(1, (1, 2)), s3[0], rng, samples=5)
    assert all(r.passed for r in reports)


def test_rep_space_is_quasi_hamiltonian(su2, rng):
    space = rep_space(TORUS_TWO_HOLES, su2)
    assert space.n_coords == 5
    assert [s.name for s in space.slots] == ["β1", "β0"]
    reports = run_axiom_suite(space, rng, 2, ('qh1', 'qh2', 'qh3', 'equivariance', 'action'))
    assert all(r.passed for r in reports), [(r.check, r.max_residual) for r in reports]


def test_boundary_monodromies_on_identity(so3):
    quiver = build_quiver(TORUS_TWO_HOLES)
    mono = boundary_monodromies(Representation.identity(quiver, so3))
    assert mono["β0"].shape == (2, 3, 3)
    assert np.allclose(mono["β1"], np.eye(3))


def test_gauge_action_size_mismatch(su2, rng):
    quiver = build_quiver(TORUS_TWO_HOLES)
    rho = Representation.random(quiver, su2, rng)
    with pytest.raises(IndexMismatchError):
        gauge_act_rep(rho, su2.identity(2))
    with pytest.raises(IndexMismatchError):
        Representation(quiver, su2, su2.identity(4))


@pytest.mark.parametrize("m_inf,m_zero", [(1, 1), (2, 3)])
def test_annulus_matches_generalized_double(m_inf, m_zero, su2, rng):
    surface = SurfaceData.annulus(m0=m_zero, m_inf=m_inf)
    report = match_generalized_double(surface, su2, rng, samples=5)
    assert report.passed, report.max_residual
    assert report.details == {'m_inf': m_inf, 'm_zero': m_zero}


def test_generalized_double_needs_annulus(su2, rng):
    with pytest.raises(ConfigError) as info:
        match_generalized_double(TORUS_TWO_HOLES, su2, rng)
    assert info.value.field == "construction.surface"
