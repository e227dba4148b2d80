﻿"""双旋子、乘积与逆、Γ 作用与不动子双旋子的测试"""

import numpy as np
import pytest

from src.core.bitorsor import (Bitorsor, BitorsorGamma, CoordinateMap, FixedSubtorsor, NoFixedPoints, Twist,
                               all_tuples, canonical_fixed_product_iso, check_bitorsor, check_gamma_compat,
                               check_simple_transitivity, cyclic_shift_bitorsor, fixed_subtorsor, inverse,
                               product)
from src.core.errors import CompatibilityError, IndexMismatchError, ResourceGuardError
from src.core.finite_group import AutomorphismAction, FiniteAutomorphism, FiniteGroup
from src.core.liegroup import MatrixGroup, preset_automorphism


def _diag_action(group):
    return AutomorphismAction.cyclic(FiniteGroup.cyclic(2), preset_automorphism(group, 'diag'))


def _twisted(group, twist_name, k=2, name="bG"):
    action = _diag_action(group)
    return Bitorsor(group, Twist.uniform(group, k, preset_automorphism(group, twist_name)),
                    BitorsorGamma.diagonal(action, group, k), name=name)


@pytest.mark.parametrize("twist_name", ['identity', 'diag', 'outer'])
def test_bitorsor_axioms(twist_name, rng):
    group = MatrixGroup('su', 3)
    b = _twisted(group, twist_name)
    assert check_bitorsor(b, rng, samples=10).passed
    assert check_gamma_compat(b, rng, samples=10).passed


def test_product_and_inverse_are_bitorsors(rng):
    group = MatrixGroup('su', 3)
    b1, b2 = _twisted(group, 'outer', name="b1"), _twisted(group, 'diag', name="b2")
    for b in (product(b1, b2), inverse(b1), inverse(inverse(b2))):
        assert check_bitorsor(b, rng, samples=10).passed
        assert check_gamma_compat(b, rng, samples=10).passed


def test_product_representative_is_well_defined(su2, rng):
    b1, b2 = _twisted(su2, 'diag', name="b1"), _twisted(su2, 'identity', name="b2")
    x, y = b1.random_point(rng), b2.random_point(rng)
    g = su2.random_elements(rng, 2)
    # r(x·g, y) = r(x, g·y)
    assert np.allclose(b1.compose(b1.right_act(x, g), y), b1.compose(x, b2.left_act(g, y)), atol=1e-12)


def test_inverse_representative(su2, rng):
    b = _twisted(su2, 'diag')
    x = b.random_point(rng)
    g, h = su2.random_elements(rng, 2), su2.random_elements(rng, 2)
    # ι(g·x·h) = h⁻¹·ι(x)·g⁻¹ in the inverse bitorsor
    inv = inverse(b)
    lhs = b.invert(b.right_act(b.left_act(g, x), h))
    rhs = inv.right_act(inv.left_act(su2.inv(h), b.invert(x)), su2.inv(g))
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_index_mismatch(su2, rng):
    b = Bitorsor.trivial(su2, 2)
    with pytest.raises(IndexMismatchError):
        b.left_act(su2.identity(3), su2.identity(3))
    with pytest.raises(IndexMismatchError):
        product(b, Bitorsor.trivial(su2, 3))


def test_product_rejects_different_groups(su2):
    with pytest.raises(CompatibilityError):
        product(Bitorsor.trivial(su2), Bitorsor.trivial(MatrixGroup('su', 3)))


def test_coordinate_map_rejects_non_bijection(su2):
    aut = preset_automorphism(su2, 'identity')
    with pytest.raises(CompatibilityError):
        CoordinateMap(su2, [0, 0], [aut, aut])


def test_shift_twist_right_action(su2, rng):
    twist = Twist.shift(su2, [3])
    g = su2.random_elements(rng, 3)
    assert np.allclose(twist.apply(g), g[[1, 2, 0]])
    assert np.allclose(twist.compose(twist.inverse()).apply(g), g)


def test_fixed_subtorsor_matrix(su2, rng):
    f = fixed_subtorsor(_twisted(su2, 'identity'))
    assert isinstance(f, FixedSubtorsor)
    # diag fixes a maximal torus: one dimension per index
    assert f.tangent_basis.shape[1] == 2
    assert check_simple_transitivity(f, rng, samples=10).passed


def test_fixed_subtorsor_missing_base_point(su2):
    b = _twisted(su2, 'identity')
    off = su2.exp(su2.basis[0])[None].repeat(2, axis=0)
    result = fixed_subtorsor(b, base_point=off)
    assert isinstance(result, NoFixedPoints)
    assert result.empty


def test_fixed_subtorsor_finite(s3, rng):
    group, images = s3
    action = AutomorphismAction.cyclic(FiniteGroup.cyclic(2), FiniteAutomorphism(group, images[0]))
    b = Bitorsor(group, Twist.identity(group, 1), BitorsorGamma.diagonal(action, group, 1))
    f = fixed_subtorsor(b)
    # centralizer of a transposition in S3 has order 2
    assert len(f.points) == 2
    assert len(f.group_elements) == 2
    assert check_simple_transitivity(f, rng).passed


def test_canonical_product_iso_finite(s3, rng):
    group, images = s3
    action = AutomorphismAction.cyclic(FiniteGroup.cyclic(2), FiniteAutomorphism(group, images[0]))
    b1 = Bitorsor(group, Twist.identity(group, 1), BitorsorGamma.diagonal(action, group, 1), name="b1")
    b2 = Bitorsor(group, Twist.identity(group, 1), BitorsorGamma.diagonal(action, group, 1), name="b2")
    report = canonical_fixed_product_iso(b1, b2, fixed_subtorsor(b1), fixed_subtorsor(b2), rng)
    assert report.passed
    assert report.details['codomain'] == 2


def test_canonical_product_iso_matrix(rng):
    group = MatrixGroup('su', 3)
    b1, b2 = _twisted(group, 'identity', name="b1"), _twisted(group, 'diag', name="b2")
    f1, f2 = fixed_subtorsor(b1), fixed_subtorsor(b2)
    report = canonical_fixed_product_iso(b1, b2, f1, f2, rng, samples=10)
    assert report.passed


def test_shift_gamma_action(su2, rng):
    action = _diag_action(su2)
    b = cyclic_shift_bitorsor(su2, action)
    assert b.size == 2
    assert check_gamma_compat(b, rng, samples=10).passed


def test_enumeration_guard(s3):
    group, _ = s3
    assert all_tuples(group, 2).shape == (36, 2)
    with pytest.raises(ResourceGuardError):
        all_tuples(group, 10)
