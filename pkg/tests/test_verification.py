﻿"""数值检验函数本身的测试：Cartan 三形式、平均投影、融合与不动点的交换、广义双空间匹配"""

import numpy as np
import pytest

from src.core.bitorsor import Bitorsor, BitorsorGamma, Twist
from src.core.errors import CompatibilityError
from src.core.finite_group import AutomorphismAction, FiniteAutomorphism, FiniteGroup
from src.core.liegroup import preset_automorphism
from src.core.qham import double
from src.core.verification import (CARTAN_NORMALIZATION, DEFAULT_TOLERANCES, averaging_projector,
                                   cartan_three_form, check_fusion_fixed_iso, check_fusion_fixed_iso_finite,
                                   check_gd_double, run_axiom_suite, verify_averaging)


def _diag_double(group):
    action = AutomorphismAction.cyclic(FiniteGroup.cyclic(2), preset_automorphism(group, 'diag'))
    b = Bitorsor(group, Twist.identity(group, 1), BitorsorGamma.diagonal(action, group, 1), name="bG")
    return double(b, b)


def test_cartan_form_is_alternating(su2, rng):
    u, v, w = su2.random_algebra(rng, (3,))
    chi = cartan_three_form(su2, u, v, w)
    assert cartan_three_form(su2, v, u, w) == pytest.approx(-chi, abs=1e-12)
    assert cartan_three_form(su2, u, u, w) == pytest.approx(0.0, abs=1e-12)
    assert cartan_three_form(su2, v, w, u) == pytest.approx(chi, abs=1e-12)


def test_wrong_normalization_is_detected(su2, rng):
    trivial = Bitorsor.trivial(su2)
    m = double(trivial, trivial)
    good = run_axiom_suite(m, np.random.default_rng(3), 4, ('qh1',))
    bad = run_axiom_suite(m, np.random.default_rng(3), 4, ('qh1',), normalization=2 * CARTAN_NORMALIZATION)
    assert good[0].passed
    assert not bad[0].passed
    assert bad[0].max_residual > 100 * DEFAULT_TOLERANCES['qh1']


def test_reports_are_sorted_by_name(su2, rng):
    trivial = Bitorsor.trivial(su2)
    reports = run_axiom_suite(double(trivial, trivial), rng, 1, ('qh3', 'action', 'qh1'))
    assert [r.check for r in reports] == ['action', 'qh1', 'qh3']


def test_averaging_projector_on_reflection(rng):
    flip = np.diag([1.0, -1.0, -1.0])
    action = [np.eye(3), flip]
    v = np.array([2.0, 3.0, -1.0])
    assert np.allclose(averaging_projector(action, v), [2.0, 0.0, 0.0])
    report = verify_averaging(action, rng, samples=8)
    assert report.passed
    assert report.details['fixed_dimension'] == 1


def test_averaging_over_cyclic_permutation(rng):
    cycle = np.roll(np.eye(4), 1, axis=0)
    action = [np.linalg.matrix_power(cycle, k) for k in range(4)]
    report = verify_averaging(action, rng, samples=8)
    assert report.passed
    assert report.details['fixed_dimension'] == 1


def test_fusion_commutes_with_fixed_points(su2, rng):
    m1, m2 = _diag_double(su2), _diag_double(su2)
    report = check_fusion_fixed_iso(m1, m2, "G1", "G1", su2.identity(2), su2.identity(2), rng, samples=5)
    assert report.passed, report.max_residual
    assert report.details['fixed_dimension'] == 4


def test_fusion_commutes_with_fixed_points_finite(s3):
    group, images = s3
    action = AutomorphismAction.cyclic(FiniteGroup.cyclic(2), FiniteAutomorphism(group, images[0]))
    b = Bitorsor(group, Twist.identity(group, 1), BitorsorGamma.diagonal(action, group, 1))
    m = double(b, b)
    report = check_fusion_fixed_iso_finite(m, m, "G1", "G1")
    assert report.passed
    assert report.details['fixed_left'] == 4
    assert report.details['fixed_fused'] == 16


@pytest.mark.parametrize("fixture", ["su2", "so3", "s3"])
def test_generalized_double_matches_double(fixture, request, rng):
    group = request.getfixturevalue(fixture)
    if isinstance(group, tuple):
        group = group[0]
    report = check_gd_double(group, rng, samples=10)
    assert report.passed, report.max_residual


def _finite_double(s3):
    group, images = s3
    action = AutomorphismAction.cyclic(FiniteGroup.cyclic(2), FiniteAutomorphism(group, images[0]))
    b = Bitorsor(group, Twist.identity(group, 1), BitorsorGamma.diagonal(action, group, 1))
    return double(b, b)


def test_point_axioms_run_on_finite_group(s3, rng):
    reports = run_axiom_suite(_finite_double(s3), rng, 10, ('equivariance', 'action'))
    assert [r.check for r in reports] == ['action', 'equivariance']
    assert all(r.passed and r.samples == 10 for r in reports)


def test_differential_axioms_rejected_on_finite_group(s3, rng):
    with pytest.raises(CompatibilityError):
        run_axiom_suite(_finite_double(s3), rng, 2, ('equivariance', 'qh1'))
