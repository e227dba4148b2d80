﻿"""循环覆叠：提升箭图、单值表示、推送与提升、有限群穷举"""

import numpy as np
import pytest

from src.core.covering import (CoveringSpec, RepresentativeChoice, bijection_report, boundary_lifts,
                               check_gamma_action, check_roundtrip, cyclic_cover, enumerate_finite,
                               fixed_residual, lift_twisted_rep, monodromy_rep, push_fixed_rep,
                               random_fixed_rep, representative_dependence, semidirect_inverse, semidirect_mul,
                               verify_monodromy_hom, verify_push_hom)
from src.core.errors import CompatibilityError, ConfigError, IndexMismatchError, ResourceGuardError
from src.core.finite_group import AutomorphismAction, FiniteAutomorphism, FiniteGroup
from src.core.liegroup import preset_automorphism
from src.core.surface import SurfaceData

ANNULUS = SurfaceData(0, (1, 1))
TORUS = SurfaceData(1, (1,))


def _inversion_action(z3):
    group, images = z3
    return group, AutomorphismAction.cyclic(FiniteGroup.cyclic(2), FiniteAutomorphism(group, images[0]))


def _rotation_action(s3):
    group, images = s3
    return group, AutomorphismAction.cyclic(FiniteGroup.cyclic(3), FiniteAutomorphism(group, images[1]))


@pytest.mark.parametrize("hom,components", [({"∂1.1": 1}, 1), ({"∂1.1": 0}, 2), ({"γ1": 1}, 2)])
def test_annulus_cover_components(hom, components, z3):
    _, action = _inversion_action(z3)
    lifted = cyclic_cover(ANNULUS, 2, hom, action)
    assert lifted.n_edges == 4
    assert lifted.n_vertices == 4
    assert lifted.components() == components
    assert lifted.deck_is_free()
    assert lifted.polygon_closes()


def test_derived_edge_closes_polygon(z3):
    _, action = _inversion_action(z3)
    lifted = cyclic_cover(ANNULUS, 2, {"∂1.1": 1}, action)
    assert lifted.hom["∂0.1"] == 1
    broken = cyclic_cover(ANNULUS, 2, {"∂1.1": 1, "∂0.1": 0}, action)
    assert not broken.polygon_closes()


def test_boundary_lifts(z3):
    _, action = _inversion_action(z3)
    lifts = boundary_lifts(cyclic_cover(ANNULUS, 2, {"∂1.1": 1}, action))
    assert [b.circles for b in lifts] == [1, 1]
    assert all(b.orbit_stabilizer_ok and b.stabilizer_cyclic for b in lifts)
    split = boundary_lifts(cyclic_cover(ANNULUS, 2, {"γ1": 1}, action))
    assert [(b.circles, b.stabilizer_order) for b in split] == [(2, 1), (2, 1)]


def test_cover_rejects_bad_input(s3, z3):
    group, _ = s3
    with pytest.raises(CompatibilityError):
        CoveringSpec(ANNULUS, group, {}, AutomorphismAction.trivial(group, z3[0]))
    _, action = _inversion_action(z3)
    with pytest.raises(ConfigError) as info:
        cyclic_cover(ANNULUS, 2, {"a1": 1}, action)
    assert info.value.field == "construction.hom.a1"
    with pytest.raises(IndexMismatchError):
        cyclic_cover(ANNULUS, 3, {}, action)


def test_monodromy_is_homomorphism(s3):
    _, action = _rotation_action(s3)
    lifted = cyclic_cover(TORUS, 3, {"a1": 1}, action)
    choice = RepresentativeChoice.default(lifted.quiver, lifted.gamma)
    assert monodromy_rep(lifted, choice)["a1"] == 1
    assert verify_monodromy_hom(lifted, choice).passed
    assert verify_monodromy_hom(lifted, RepresentativeChoice((2,))).passed


def test_representative_change_is_conjugation(z3):
    _, action = _inversion_action(z3)
    lifted = cyclic_cover(ANNULUS, 2, {"∂1.1": 1, "γ1": 1}, action)
    first = RepresentativeChoice.default(lifted.quiver, lifted.gamma)
    result = representative_dependence(lifted, first, RepresentativeChoice((0, 1)))
    assert result['conjugation_by_constants']
    assert "γ1" in result['changed_edges']


def test_semidirect_product_is_associative(s3):
    group, action = _rotation_action(s3)
    gamma = action.gamma
    elements = [(phi, g) for phi in range(3) for g in range(6)]
    for x in elements[::4]:
        for y in elements[::5]:
            for z in elements[::7]:
                left = semidirect_mul(action, gamma, group, semidirect_mul(action, gamma, group, x, y), z)
                right = semidirect_mul(action, gamma, group, x, semidirect_mul(action, gamma, group, y, z))
                assert left == right
        inv = semidirect_inverse(action, gamma, group, x)
        assert semidirect_mul(action, gamma, group, x, inv) == (0, group.identity_index)


def test_push_and_lift_finite(s3, rng):
    group, action = _rotation_action(s3)
    lifted = cyclic_cover(TORUS, 3, {"a1": 1}, action)
    rho = random_fixed_rep(lifted, group, rng)
    assert fixed_residual(lifted, group, rho) == 0
    twisted = push_fixed_rep(lifted, group, rho)
    assert np.array_equal(lift_twisted_rep(twisted), rho)
    assert verify_push_hom(lifted, group, rho).passed
    assert check_roundtrip(lifted, group, rng, samples=10).passed
    assert check_gamma_action(lifted, group, rng, samples=3).passed


def test_push_rejects_non_fixed_rep(s3):
    group, action = _rotation_action(s3)
    lifted = cyclic_cover(TORUS, 3, {"a1": 1}, action)
    values = np.zeros(lifted.n_edges, dtype=np.int64)
    values[0] = 1
    with pytest.raises(CompatibilityError):
        push_fixed_rep(lifted, group, values)


def test_push_and_lift_matrix_group(su2, rng):
    action = AutomorphismAction.cyclic(FiniteGroup.cyclic(2), preset_automorphism(su2, 'diag'))
    lifted = cyclic_cover(ANNULUS, 2, {"γ1": 1}, action)
    rho = random_fixed_rep(lifted, su2, rng)
    assert fixed_residual(lifted, su2, rho) < 1e-12
    assert verify_push_hom(lifted, su2, rho).passed
    assert check_roundtrip(lifted, su2, rng, samples=5).passed
    assert check_gamma_action(lifted, su2, rng, samples=3).passed


@pytest.mark.parametrize("workers", [1, 3])
def test_enumeration_bijection_annulus(workers, z3):
    group, action = _inversion_action(z3)
    lifted = cyclic_cover(ANNULUS, 2, {"∂1.1": 1}, action)
    result = enumerate_finite(lifted, group, workers=workers)
    assert result.hom_x == 81
    assert result.fixed == result.twisted == 9
    assert result.bijection
    assert bijection_report(result).passed
    assert result.to_dict()['components'] == 1


def test_enumeration_bijection_torus(s3):
    group, action = _rotation_action(s3)
    lifted = cyclic_cover(TORUS, 3, {"a1": 1}, action)
    result = enumerate_finite(lifted, group, RepresentativeChoice((2,)))
    assert result.fixed == result.twisted == 36
    assert result.bijection


def test_enumeration_guard(s3):
    group, action = _rotation_action(s3)
    lifted = cyclic_cover(SurfaceData(2, (1,)), 3, {"a1": 1}, action)
    with pytest.raises(ResourceGuardError):
        enumerate_finite(lifted, group)


def test_enumeration_needs_finite_group(su2):
    action = AutomorphismAction.cyclic(FiniteGroup.cyclic(2), preset_automorphism(su2, 'diag'))
    lifted = cyclic_cover(ANNULUS, 2, {"γ1": 1}, action)
    with pytest.raises(CompatibilityError):
        enumerate_finite(lifted, su2)
