﻿"""有限群、有限群自同构与 Γ 作用的测试"""

import os

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core.errors import CompatibilityError, ConfigError
from src.core.finite_group import (AutomorphismAction, FiniteAutomorphism, FiniteGroup, cyclic_generator_order,
                                   load_cayley_table)


def test_s3_file_matches_builtin(s3):
    group, images = s3
    assert group == FiniteGroup.symmetric3()
    assert group.order == 6
    assert not group.is_abelian()
    assert group.identity_index == 0
    assert len(images) == 2


def test_s3_gamma_images(s3):
    group, images = s3
    transposition = FiniteAutomorphism(group, images[0])
    rotation = FiniteAutomorphism(group, images[1])
    assert transposition.order == 2
    assert rotation.order == 3
    assert np.array_equal(rotation.images, FiniteAutomorphism.conjugation(group, 1).images)
    assert np.array_equal(transposition.images, FiniteAutomorphism.conjugation(group, 3).images)


@given(st.integers(min_value=1, max_value=9), st.data())
def test_cyclic_group_axioms(m, data):
    group = FiniteGroup.cyclic(m)
    a, b, c = (data.draw(st.integers(0, m - 1)) for _ in range(3))
    assert group.mul(group.mul(a, b), c) == group.mul(a, group.mul(b, c))
    assert group.mul(a, group.inv(a)) == group.identity_index
    assert group.is_abelian()
    assert group.power(a, m) == group.identity_index


def test_element_order_and_subgroups(s3):
    group, _ = s3
    assert group.element_order(1) == 3
    assert group.element_order(3) == 2
    assert group.generated_subgroup([1]) == [0, 1, 2]
    assert group.generated_subgroup([1, 3]) == list(range(6))


@pytest.mark.parametrize("table", [
    [[0, 1], [1, 1]],
    [[0, 1, 2], [1, 0, 2], [2, 2, 0]],
    [[0, 1], [1, 0], [0, 1]],
])
def test_invalid_tables(table):
    with pytest.raises(CompatibilityError):
        FiniteGroup([str(i) for i in range(len(table))], table)


def test_automorphism_validation(z3):
    group, images = z3
    assert FiniteAutomorphism(group, images[0]).order == 2
    with pytest.raises(CompatibilityError):
        FiniteAutomorphism(group, [0, 1, 1])
    with pytest.raises(CompatibilityError):
        FiniteAutomorphism(group, [1, 2, 0])


def test_automorphism_compose_and_inverse(s3):
    group, images = s3
    rotation = FiniteAutomorphism(group, images[1])
    assert rotation.compose(rotation.inverse()).is_identity()
    assert rotation.power(3).is_identity()
    with pytest.raises(CompatibilityError):
        rotation.apply_tangent(np.zeros(3))


def test_cyclic_action(s3, rng):
    group, images = s3
    action = AutomorphismAction.cyclic(FiniteGroup.cyclic(2), FiniteAutomorphism(group, images[0]))
    assert action.homomorphism_residual(rng) == 0.0
    assert action(0).is_identity()
    with pytest.raises(CompatibilityError):
        AutomorphismAction.cyclic(FiniteGroup.cyclic(2), FiniteAutomorphism(group, images[1]))


def test_trivial_action(su2):
    action = AutomorphismAction.trivial(FiniteGroup.cyclic(3), su2)
    assert all(aut.is_identity() for aut in action.auts)


def test_load_missing_table(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_cayley_table(os.path.join(str(tmp_path), "missing.json"))
    assert info.value.field == "group.table"


def test_load_rejects_non_group(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"elements": ["a", "b"], "table": [[0, 1], [1, 1]]}', encoding='utf-8')
    with pytest.raises(ConfigError) as info:
        load_cayley_table(str(path))
    assert info.value.field == "group.table"


def test_cyclic_generation():
    z4 = FiniteGroup.cyclic(4)
    assert cyclic_generator_order(z4, [1])
    assert cyclic_generator_order(z4, [2, 3])
    assert not cyclic_generator_order(z4, [2])
    assert not cyclic_generator_order(z4, [])
    assert cyclic_generator_order(FiniteGroup.cyclic(1), [])
