﻿"""准哈密顿空间构造子的测试：双空间、融合、广义双空间、不动点轨迹与两个反例"""

import numpy as np
import pytest

from src.core.bitorsor import Bitorsor, BitorsorGamma, Twist
from src.core.errors import CompatibilityError, IndexMismatchError
from src.core.finite_group import AutomorphismAction, FiniteAutomorphism, FiniteGroup
from src.core.liegroup import MatrixGroup, preset_automorphism
from src.core.qham import (degenerate_space, double, enumerate_fixed_points, fixed_locus, fuse, fused_double,
                           generalized_double, internal_fuse, planted_nonequivariant, split_boundary)
from src.core.verification import run_axiom_suite

ALL_AXIOMS = ('qh1', 'qh2', 'qh3', 'invariance', 'equivariance', 'action', 'generating_vector',
              'mu_differential')


def _gamma_bitorsor(group, twist_name='identity', name="bG"):
    action = AutomorphismAction.cyclic(FiniteGroup.cyclic(2), preset_automorphism(group, 'diag'))
    return Bitorsor(group, Twist.uniform(group, 1, preset_automorphism(group, twist_name)),
                    BitorsorGamma.diagonal(action, group, 1), name=name)


def _all_pass(reports):
    failed = [(r.check, r.max_residual) for r in reports if not r.passed]
    assert not failed, failed


def test_double_satisfies_axioms(su2, rng):
    trivial = Bitorsor.trivial(su2)
    _all_pass(run_axiom_suite(double(trivial, trivial), rng, 5, ALL_AXIOMS))


def test_twisted_double_satisfies_axioms(rng):
    group = MatrixGroup('su', 3)
    m = double(_gamma_bitorsor(group, 'outer', "b1"), _gamma_bitorsor(group, 'identity', "b2"))
    _all_pass(run_axiom_suite(m, rng, 3, ALL_AXIOMS + ('gamma_compat',)))


def test_double_moment_map_values(su2, rng):
    trivial = Bitorsor.trivial(su2)
    m = double(trivial, trivial)
    p = su2.random_elements(rng, 2)
    a, b = p
    mu = m.mu_components(p)
    assert np.allclose(mu["G1"][0], a @ b, atol=1e-12)
    assert np.allclose(mu["G2"][0], su2.inv(a) @ su2.inv(b), atol=1e-12)


def test_double_rejects_mismatched_bitorsors(su2):
    with pytest.raises(IndexMismatchError):
        double(Bitorsor.trivial(su2, 1), Bitorsor.trivial(su2, 2))
    with pytest.raises(CompatibilityError):
        double(Bitorsor.trivial(su2), _gamma_bitorsor(su2))


def test_fused_double_satisfies_axioms(su2, rng):
    m = fused_double(_gamma_bitorsor(su2, name="b1"), _gamma_bitorsor(su2, name="b2"))
    assert [s.name for s in m.slots] == ["G"]
    _all_pass(run_axiom_suite(m, rng, 5, ALL_AXIOMS + ('gamma_compat',)))


def test_fusion_of_two_doubles(su2, rng):
    trivial = Bitorsor.trivial(su2)
    m = fuse(double(trivial, trivial, names=("A", "B")), double(trivial, trivial, names=("C", "D")), "A", "C")
    assert [s.name for s in m.slots] == ["A", "B", "D"]
    _all_pass(run_axiom_suite(m, rng, 3, ALL_AXIOMS))


def test_fusion_renames_clashing_slots(su2, rng):
    trivial = Bitorsor.trivial(su2)
    d = double(trivial, trivial)
    m = fuse(d, d, "G1", "G1")
    assert [s.name for s in m.slots] == ["G1", "G2", "G2.2"]
    p = m.sample_point(rng)
    mu = m.mu_components(p)
    assert np.allclose(mu["G2"], d.mu_components(p[:2])["G2"], atol=1e-12)
    assert np.allclose(mu["G2.2"], d.mu_components(p[2:])["G2"], atol=1e-12)
    _all_pass(run_axiom_suite(m, rng, 3, ALL_AXIOMS))
    # 再融合一次，G2.2 已被占用
    assert [s.name for s in fuse(m, d, "G1", "G1").slots] == ["G1", "G2", "G2.2", "G2.3"]


def test_duplicate_slot_names_name_the_space(su2):
    trivial = Bitorsor.trivial(su2)
    d = double(trivial, trivial)
    with pytest.raises(CompatibilityError) as info:
        d.with_slots([d.slots[0], d.slots[0]])
    assert str(info.value).startswith(d.name)


def test_internal_fusion_requires_distinct_slots(su2):
    trivial = Bitorsor.trivial(su2)
    with pytest.raises(CompatibilityError):
        internal_fuse(double(trivial, trivial), "G1", "G1")


@pytest.mark.parametrize("m_inf,m_zero", [(1, 1), (2, 3), (3, 1)])
def test_generalized_double_satisfies_axioms(m_inf, m_zero, su2, rng):
    m = generalized_double(su2, m_inf, m_zero)
    assert m.n_coords == m_inf + m_zero
    _all_pass(run_axiom_suite(m, rng, 3, ALL_AXIOMS))


def test_generalized_double_rejects_empty_cycle(su2):
    with pytest.raises(CompatibilityError):
        generalized_double(su2, 0, 2)


def test_split_boundary(su2, rng):
    trivial = Bitorsor.trivial(su2)
    m = split_boundary(double(trivial, trivial), "G1", 3)
    assert m.slot("G1").size == 3
    _all_pass(run_axiom_suite(m, rng, 3, ALL_AXIOMS))


def test_fixed_locus_is_quasi_hamiltonian(su2, rng):
    m = double(_gamma_bitorsor(su2, name="b1"), _gamma_bitorsor(su2, name="b2"))
    locus = fixed_locus(m, su2.identity(2))
    # the diag twist fixes a maximal torus in each coordinate
    assert locus.tangent_basis().shape[0] == 2
    _all_pass(run_axiom_suite(locus, rng, 3, ('qh1', 'qh2', 'qh3', 'invariance', 'equivariance')))


def test_fixed_locus_requires_fixed_base_point(su2):
    m = double(_gamma_bitorsor(su2, name="b1"), _gamma_bitorsor(su2, name="b2"))
    off = su2.exp(su2.basis[0])[None].repeat(2, axis=0)
    with pytest.raises(CompatibilityError):
        fixed_locus(m, off)
    trivial = Bitorsor.trivial(su2)
    with pytest.raises(CompatibilityError):
        fixed_locus(double(trivial, trivial), su2.identity(2))


def test_enumerate_fixed_points_finite(s3):
    group, images = s3
    action = AutomorphismAction.cyclic(FiniteGroup.cyclic(2), FiniteAutomorphism(group, images[0]))
    b = Bitorsor(group, Twist.identity(group, 1), BitorsorGamma.diagonal(action, group, 1))
    fixed = enumerate_fixed_points(double(b, b))
    assert fixed.shape == (4, 2)
    with pytest.raises(CompatibilityError):
        enumerate_fixed_points(double(_gamma_bitorsor(MatrixGroup('su', 2)), _gamma_bitorsor(MatrixGroup('su', 2))))


def test_degenerate_space_fails_only_nondegeneracy(su2, rng):
    reports = {r.check: r for r in run_axiom_suite(degenerate_space(su2), rng, 3, ('qh1', 'qh2', 'qh3'))}
    assert reports['qh1'].passed
    assert reports['qh2'].passed
    assert not reports['qh3'].passed
    assert reports['qh3'].details['null_dimension'] == 3


def test_planted_space_breaks_gamma_moment(su2, rng):
    m = double(_gamma_bitorsor(su2, name="b1"), _gamma_bitorsor(su2, name="b2"))
    w = su2.exp(0.5 * su2.basis.sum(axis=0))
    planted = planted_nonequivariant(m, "G1", w)
    reports = {r.check: r for r in run_axiom_suite(planted, rng, 3, ('gamma_compat',))}
    assert not reports["gamma_moment"].passed
    assert reports["gamma_omega"].passed
