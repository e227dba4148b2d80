﻿"""回路群离散化：网格、和乐、规范作用与 ϖ 的性质"""

import numpy as np
import pytest
from scipy.linalg import expm

from src.core.errors import GridError
from src.core.liegroup import MatrixAutomorphism, preset_automorphism
from src.core.loopdisc import (DiscreteConnection, DiscreteGauge, LoopGrid, LoopSampler, TwistedLoopSampler,
                               check_holonomy_gauge, convergence_report,
                               convergence_study, gauge_act, holonomy, pairing, varpi, varpi_matrix,
                               verify_loop_props, verify_variation_formulas)


@pytest.mark.parametrize("m,N", [(0, 4), (2, 5), (3, 0), (1, -8)])
def test_invalid_grid(m, N):
    with pytest.raises(GridError):
        LoopGrid(m, N)


def test_grid_geometry():
    grid = LoopGrid(2, 8)
    assert grid.delta == pytest.approx(0.25)
    assert grid.per_segment == 4
    assert grid.segment_node(3) == 4
    assert np.allclose(grid.midpoints()[:2], [0.125, 0.375])
    with pytest.raises(GridError):
        grid.check_same(LoopGrid(2, 16))


def test_constant_connection_holonomy(su2):
    grid = LoopGrid(1, 32)
    a = su2.basis[0] + 0.5 * su2.basis[2]
    A = DiscreteConnection(su2, grid, np.repeat(a[None], grid.N, axis=0))
    assert np.allclose(holonomy(A, 0, grid.N), expm(-a), atol=1e-12)
    assert np.allclose(holonomy(A, 5, 5), np.eye(2))
    assert np.allclose(holonomy(A, 10, 10 + grid.N), holonomy(A, 0, grid.N), atol=1e-12)


def test_holonomy_rejects_bad_endpoints(su2):
    grid = LoopGrid(1, 16)
    A = DiscreteConnection.zero(su2, grid)
    with pytest.raises(GridError):
        holonomy(A, 0, grid.N + 1)
    with pytest.raises(GridError):
        holonomy(A, 3, 2)
    with pytest.raises(GridError):
        holonomy(A, 0.5, 3)
    with pytest.raises(GridError):
        DiscreteConnection(su2, grid, np.zeros((grid.N + 1, 2, 2), dtype=complex))


def test_constant_gauge_is_exact(su2, rng):
    grid = LoopGrid(1, 64)
    A = LoopSampler(su2, 1, rng).connection(grid)
    g = DiscreteGauge(su2, grid, np.repeat(su2.random_elements(rng, 1), grid.N, axis=0))
    assert check_holonomy_gauge(A, g) < 1e-12
    assert check_holonomy_gauge(A, g, b=7, t=40) < 1e-12


def test_gauge_on_zero_connection_is_exact(su2, rng):
    grid = LoopGrid(1, 64)
    g = LoopSampler(su2, 1, rng).gauge(grid)
    moved = gauge_act(g, DiscreteConnection.zero(su2, grid))
    assert check_holonomy_gauge(DiscreteConnection.zero(su2, grid), g) < 1e-10
    assert su2.algebra_residual(moved.values) < 1e-10


def test_varpi_is_antisymmetric(su2, rng):
    grid = LoopGrid(1, 64)
    sampler = LoopSampler(su2, 1, rng)
    A = sampler.connection(grid)
    tangents = [LoopSampler(su2, 1, rng).connection(grid) for _ in range(3)]
    matrix = varpi_matrix(A, tangents)
    assert np.allclose(matrix, -matrix.T)
    assert varpi(A, tangents[0], tangents[0]) == pytest.approx(0.0, abs=1e-12)
    xi = sampler.algebra(grid)
    assert pairing(A, xi) == pytest.approx(pairing(A, xi, segments=(0,)))


def test_loop_properties(su2, rng):
    reports = verify_loop_props(su2, LoopGrid(1, 256), rng, samples=1)
    assert [r.check for r in reports] == ['loop_differential', 'loop_invariance', 'loop_moment']
    assert all(r.passed for r in reports), [(r.check, r.max_residual) for r in reports]
    assert reports[0].details['sign_flip_cures'] is False


def test_wrong_normalization_breaks_differential(su2, rng):
    reports = verify_loop_props(su2, LoopGrid(1, 256), rng, samples=1, normalization=1 / 6)
    differential = reports[0]
    assert not differential.passed
    assert differential.details['sign_flip_cures'] is False


def test_twisted_loop_properties(su2, rng):
    twist = preset_automorphism(su2, 'diag')
    reports = verify_loop_props(su2, LoopGrid(2, 256), rng, samples=1, twist=twist)
    assert [r.check for r in reports] == ['loop_differential', 'loop_invariance', 'loop_moment',
                                          'twist_preserved', 'twisted_restriction']
    assert all(r.passed for r in reports), [(r.check, r.max_residual) for r in reports]


def test_twisted_sampler_respects_twist(su2, rng):
    twist = preset_automorphism(su2, 'diag')
    grid = LoopGrid(2, 32)
    sampler = TwistedLoopSampler(su2, 2, twist, rng)
    assert sampler.connection(grid).twist_residual() < 1e-12
    assert sampler.algebra(grid).twist_residual() < 1e-12
    with pytest.raises(GridError):
        TwistedLoopSampler(su2, 3, twist, rng)
    with pytest.raises(GridError):
        TwistedLoopSampler(su2, 2, MatrixAutomorphism.inner(su2, su2.exp(0.3 * su2.basis[0]), order=0), rng)


def test_variation_formulas(su2, rng):
    reports = verify_variation_formulas(su2, LoopGrid(1, 256), rng, samples=2)
    assert [r.check for r in reports] == ['hol_variation_conn', 'hol_variation_field']
    assert all(r.passed for r in reports), [(r.check, r.max_residual) for r in reports]


def test_convergence_is_second_order(su2):
    rows = convergence_study(su2, 1, seed=11)
    assert [row.quantity for row in rows] == ['holonomy_gauge', 'gauge_action_law', 'hol_variation_conn',
                                              'hol_variation_field']
    report = convergence_report(rows, seed=11)
    assert report.passed, report.details
    assert all(len(row.to_dict()['orders']) == 2 for row in rows)
