﻿"""
公理检验模块
QH1–QH3、结构群不变性与等变性、生成向量、Γ 相容性、平均投影，
以及不动点与融合交换的检验。每项检验返回 VerificationReport
"""

from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import svdvals

from src.core.bitorsor import Bitorsor, FixedSubtorsor, NoFixedPoints, averaging_matrix, fixed_subtorsor
from src.core.errors import CompatibilityError
from src.core.liegroup import Jet
from src.core.qham import (QHamSpace, double, enumerate_fixed_points, fixed_locus, fuse,
                            generalized_double)
from src.core.report import VerificationReport

# Cartan 3-形式 (1/12)(θ,[θ,θ]) 的正规化系数
CARTAN_NORMALIZATION = 1.0 / 12.0
# QH3 数值秩阈值（相对最大奇异值）
RANK_THRESHOLD = 1e-8

DEFAULT_TOLERANCES = {
    'qh1': 1e-6,
    'qh2': 1e-6,
    'qh3': 0.0,
    'invariance': 1e-10,
    'equivariance': 1e-12,
    'action': 1e-12,
    'generating_vector': 1e-8,
    'mu_differential': 1e-6,
    'gamma_compat': 1e-10,
    'fixed_iso': 1e-10,
}

# 不依赖切空间、有限群上也可运行的公理检验
POINT_CHECKS = ('equivariance', 'action')


def cartan_three_form(group, u: np.ndarray, v: np.ndarray, w: np.ndarray,
                      normalization: float = CARTAN_NORMALIZATION) -> float:
    """
    双不变 3-形式 χ 在左平凡化切向量上的取值
    全反对称化后 χ(u, v, w) = 6·c·(u, [v, w])，c = 1/12 时为 ½(u, [v, w])
    :param u: 形状 (K, n, n)，对各指标求和
    """
    return float(6.0 * normalization * np.sum(group.inner(u, group.bracket(v, w))))


def _chart_tangent(m: QHamSpace, z: np.ndarray, v: np.ndarray) -> np.ndarray:
    """坐标向量场 ∂/∂z 在 p·exp(z) 处的左平凡化取值"""
    return np.stack([m.group.dexp(z[i], v[i]) for i in range(m.n_coords)])


def _omega_in_chart(m: QHamSpace, p: np.ndarray, z: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    q = m.chart_point(p, z)
    return m.eval_omega(q, _chart_tangent(m, z, a), _chart_tangent(m, z, b))


def _relative(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / (1.0 + abs(rhs))


def verify_qh1(m: QHamSpace, p: np.ndarray, u: np.ndarray, v: np.ndarray, w: np.ndarray,
               h: float = 1e-4, tol: float = DEFAULT_TOLERANCES['qh1'],
               normalization: float = CARTAN_NORMALIZATION, seed: int = 0) -> VerificationReport:
    """
    dω = μ*χ：在指数坐标卡 p·exp(z) 中用常系数向量场（卡括号为零）与中心差分计算 dω，
    右端 χ 通过 Jet 闭式给出的 dμ 拉回
    """
    lhs = 0.0
    for a, b, c in ((u, v, w), (v, w, u), (w, u, v)):
        forward = _omega_in_chart(m, p, h * a, b, c)
        backward = _omega_in_chart(m, p, -h * a, b, c)
        lhs += (forward - backward) / (2.0 * h)
    mu = m.mu_jet(Jet(m.group, p, np.stack([u, v, w])))
    t = mu.theta()
    rhs = cartan_three_form(m.group, t[0], t[1], t[2], normalization)
    return VerificationReport('qh1', 1, _relative(lhs, rhs), tol, seed, 0, {'lhs': lhs, 'rhs': rhs})


def verify_qh2(m: QHamSpace, p: np.ndarray, xi: np.ndarray, v: np.ndarray,
               tol: float = DEFAULT_TOLERANCES['qh2'], seed: int = 0) -> VerificationReport:
    """ι(ξ#)ω = ½ μ*(θ + θ̄, ξ)"""
    lhs = m.eval_omega(p, m.generating_vector(p, xi), v)
    theta, theta_bar = m.target_theta(m.mu_jet(Jet(m.group, p, v[None])))
    rhs = 0.5 * float(np.sum(m.group.inner(theta[0] + theta_bar[0], xi)))
    return VerificationReport('qh2', 1, _relative(lhs, rhs), tol, seed, 0, {'lhs': lhs, 'rhs': rhs})


def null_dimension(m: QHamSpace, p: np.ndarray, threshold: float = RANK_THRESHOLD) -> Tuple[int, np.ndarray]:
    """
    映射 v ↦ (ω_p(v, ·), dμ_p v) 的零空间维数
    :return: (维数, 奇异值)
    """
    basis = m.tangent_basis()
    dim = basis.shape[0]
    if dim == 0:
        return 0, np.zeros(0)
    omega = m.omega_matrix(p, basis)
    dmu = m.mu_jet(Jet(m.group, p, basis)).theta()
    dmu_coords = m.group.to_coords(dmu).reshape(dim, -1)
    stacked = np.vstack([omega, dmu_coords.T])
    singular = svdvals(stacked)
    smax = singular[0] if len(singular) else 0.0
    rank = int(np.sum(singular > threshold * smax)) if smax > 0 else 0
    return dim - rank, singular


def verify_qh3(m: QHamSpace, p: np.ndarray, threshold: float = RANK_THRESHOLD,
               seed: int = 0) -> VerificationReport:
    """ker ω_p ∩ ker dμ_p = {0}：零空间维数作为残差，容差 0"""
    nullity, singular = null_dimension(m, p, threshold)
    smallest = float(singular[-1]) if len(singular) else 0.0
    return VerificationReport('qh3', 1, float(nullity), 0.0, seed, 0,
                              {'null_dimension': nullity, 'tangent_dimension': int(m.tangent_basis().shape[0]),
                               'smallest_singular_value': smallest})


def verify_invariance(m: QHamSpace, p: np.ndarray, g: np.ndarray, u: np.ndarray, v: np.ndarray,
                      tol: float = DEFAULT_TOLERANCES['invariance'], seed: int = 0) -> VerificationReport:
    """ω_{g·p}(dg·u, dg·v) = ω_p(u, v)"""
    moved = m.act_jet(g, Jet(m.group, p, np.stack([u, v])))
    lhs = float(m.omega_fn(moved)[0, 1])
    rhs = m.eval_omega(p, u, v)
    return VerificationReport('invariance', 1, _relative(lhs, rhs), tol, seed, 0)


def verify_equivariance(m: QHamSpace, p: np.ndarray, g: np.ndarray,
                        tol: float = DEFAULT_TOLERANCES['equivariance'], seed: int = 0) -> VerificationReport:
    """μ(g·p) = g·μ(p)·g⁻¹（按各分量的双旋子作用）"""
    lhs = m.eval_mu(m.act(g, p))
    rhs = m.target_conjugate_act(g, m.eval_mu(p))
    return VerificationReport('equivariance', 1, m.group.distance(lhs, rhs), tol, seed, 0)


def verify_action_law(m: QHamSpace, p: np.ndarray, g: np.ndarray, h: np.ndarray,
                      tol: float = DEFAULT_TOLERANCES['action'], seed: int = 0) -> VerificationReport:
    """(gh)·p = g·(h·p)"""
    lhs = m.act(m.group.mul(g, h), p)
    rhs = m.act(g, m.act(h, p))
    return VerificationReport('action', 1, m.group.distance(lhs, rhs), tol, seed, 0)


def verify_generating_vector(m: QHamSpace, p: np.ndarray, xi: np.ndarray, step: float = 1e-5,
                             tol: float = DEFAULT_TOLERANCES['generating_vector'],
                             seed: int = 0) -> VerificationReport:
    """闭式 ξ# 与 t ↦ exp(−tξ)·p 的中心差分比较"""
    group = m.group
    closed = m.generating_vector(p, xi)
    forward = m.act(group.exp(-step * xi), p)
    backward = m.act(group.exp(step * xi), p)
    fd = group.mul(group.inv(p), forward - backward) / (2.0 * step)
    return VerificationReport('generating_vector', 1, group.distance(closed, group.project_algebra(fd)), tol, seed, 0)


def verify_mu_differential(m: QHamSpace, p: np.ndarray, v: np.ndarray, step: float = 1e-5,
                           tol: float = DEFAULT_TOLERANCES['mu_differential'],
                           seed: int = 0) -> VerificationReport:
    """Jet 闭式 dμ 与 s ↦ μ(p·exp(sv)) 的中心差分比较"""
    group = m.group
    closed = m.mu_jet(Jet(group, p, v[None])).theta()[0]
    mu0 = m.eval_mu(p)
    forward = m.eval_mu(m.chart_point(p, step * v))
    backward = m.eval_mu(m.chart_point(p, -step * v))
    fd = group.project_algebra(group.mul(group.inv(mu0), forward - backward) / (2.0 * step))
    return VerificationReport('mu_differential', 1, group.distance(closed, fd), tol, seed, 0)


def verify_gamma_compat(m: QHamSpace, p: np.ndarray, g: np.ndarray, u: np.ndarray, v: np.ndarray,
                        tol: float = DEFAULT_TOLERANCES['gamma_compat'], seed: int = 0) -> List[VerificationReport]:
    """
    Γ 相容性三条：
    (1) φ·(g·p) = (φ·g)·(φ·p)；(2) φ*ω = ω；(3) μ(φ·p) = φ·μ(p)
    """
    if m.gamma is None:
        raise CompatibilityError(f"{m.name} 没有 Γ 作用")
    group = m.group
    action, form, moment = 0.0, 0.0, 0.0
    omega = m.eval_omega(p, u, v)
    for phi in range(m.gamma.gamma.order):
        lhs = m.gamma_act(phi, m.act(g, p))
        rhs = m.act(m.gamma_group(phi, g), m.gamma_act(phi, p))
        action = max(action, group.distance(lhs, rhs))
        moved = m.gamma_act_jet(phi, Jet(group, p, np.stack([u, v])))
        form = max(form, _relative(float(m.omega_fn(moved)[0, 1]), omega))
        moment = max(moment, group.distance(m.eval_mu(m.gamma_act(phi, p)), m.gamma_target(phi, m.eval_mu(p))))
    return [VerificationReport('gamma_action', 1, action, tol, seed, 0),
            VerificationReport('gamma_omega', 1, form, tol, seed, 0),
            VerificationReport('gamma_moment', 1, moment, tol, seed, 0)]


def _merge(reports: Sequence[VerificationReport]) -> VerificationReport:
    merged = reports[0]
    for report in reports[1:]:
        merged = merged.merge(report)
    return merged


def run_axiom_suite(m: QHamSpace, rng: np.random.Generator, samples: int, checks: Sequence[str],
                    h: float = 1e-4, fd_step: float = 1e-5, tolerances: Optional[Dict[str, float]] = None,
                    normalization: float = CARTAN_NORMALIZATION, seed: int = 0) -> List[VerificationReport]:
    """
    在 samples 个随机点上运行一组检验
    :param checks: 检验名称，取自 qh1 / qh2 / qh3 / invariance / equivariance / action /
                   generating_vector / mu_differential / gamma_compat
    :return: 每项检验合并后的报告，按名称排序
    """
    tols = dict(DEFAULT_TOLERANCES)
    tols.update(tolerances or {})
    collected: Dict[str, List[VerificationReport]] = {}
    finite = m.group.is_finite
    if finite:
        differential = sorted(set(checks) - set(POINT_CHECKS))
        if differential:
            raise CompatibilityError(f"有限群上只有点层面的检验 {list(POINT_CHECKS)}，不能运行 {differential}")

    def add(report: VerificationReport):
        collected.setdefault(report.check, []).append(report)

    for _ in range(samples):
        p = m.sample_point(rng)
        if not finite:
            u, v, w = m.sample_tangents(rng, 3)
            xi = m.sample_structure_algebra(rng)
        g, k = m.sample_structure_group(rng), m.sample_structure_group(rng)
        if 'qh1' in checks:
            add(verify_qh1(m, p, u, v, w, h, tols['qh1'], normalization, seed))
        if 'qh2' in checks:
            add(verify_qh2(m, p, xi, v, tols['qh2'], seed))
        if 'qh3' in checks:
            add(verify_qh3(m, p, seed=seed))
        if 'invariance' in checks:
            add(verify_invariance(m, p, g, u, v, tols['invariance'], seed))
        if 'equivariance' in checks:
            add(verify_equivariance(m, p, g, tols['equivariance'], seed))
        if 'action' in checks:
            add(verify_action_law(m, p, g, k, tols['action'], seed))
        if 'generating_vector' in checks:
            add(verify_generating_vector(m, p, xi, fd_step, tols['generating_vector'], seed))
        if 'mu_differential' in checks:
            add(verify_mu_differential(m, p, v, fd_step, tols['mu_differential'], seed))
        if 'gamma_compat' in checks and m.gamma is not None:
            for report in verify_gamma_compat(m, p, g, u, v, tols['gamma_compat'], seed):
                add(report)
    return [_merge(collected[name]) for name in sorted(collected)]


def averaging_projector(action: Sequence[np.ndarray], v: np.ndarray) -> np.ndarray:
    """
    平均投影 ave(v) = (1/|Γ|) Σ φ·v
    :param action: Γ 各元素在线性空间上的矩阵
    :param v: 向量（或以列为向量的矩阵）
    """
    return averaging_matrix(action) @ v


def verify_averaging(action: Sequence[np.ndarray], rng: np.random.Generator, samples: int = 32,
                     tol: float = 1e-12, seed: int = 0) -> VerificationReport:
    """幂等性、像是不动子空间、核与像直和分解"""
    ave = averaging_matrix(action)
    dim = ave.shape[0]
    residuals = []
    for _ in range(samples):
        v = rng.standard_normal(dim)
        a = averaging_projector(action, v)
        idempotent = np.max(np.abs(averaging_projector(action, a) - a))
        fixed = max(np.max(np.abs(mat @ a - a)) for mat in action)
        # v − ave(v) 落在核中
        kernel = np.max(np.abs(ave @ (v - a)))
        residuals.append(float(max(idempotent, fixed, kernel)))
    rank = int(np.linalg.matrix_rank(ave))
    nullity = dim - int(np.linalg.matrix_rank(np.eye(dim) - ave))
    residuals.append(float(abs(rank - nullity)))
    return VerificationReport.from_residuals('averaging', residuals, tol, seed, fixed_dimension=rank)


def check_fusion_fixed_iso(m1: QHamSpace, m2: QHamSpace, c1: str, c2: str, p1: np.ndarray, p2: np.ndarray,
                           rng: np.random.Generator, samples: int = 100,
                           tol: float = DEFAULT_TOLERANCES['fixed_iso'], seed: int = 0) -> VerificationReport:
    """
    M₁^Γ ⊛ M₂^Γ ≃ (M₁ ⊛ M₂)^Γ：比较两侧的切空间、结构李代数，
    以及对应点与平均切向量上的 ω 与 μ
    """
    left = fuse(fixed_locus(m1, p1), fixed_locus(m2, p2), c1, c2)
    right = fixed_locus(fuse(m1, m2, c1, c2), np.concatenate([p1, p2], axis=0))
    group = m1.group
    structural = max(float(np.max(np.abs(left.tangent_projector - right.tangent_projector))),
                     float(np.max(np.abs(left.structure_projector() - right.structure_projector()))))
    residuals = [structural]
    fused_slot = right.slot(c1)
    fixed_target = fixed_subtorsor(fused_slot.target, base_point=right.mu_components(right.sample_point(rng))[c1])
    for _ in range(samples):
        p = right.sample_point(rng)
        u, v = right.sample_tangents(rng, 2)
        omega = abs(left.eval_omega(p, u, v) - right.eval_omega(p, u, v))
        moment = group.distance(left.eval_mu(p), right.eval_mu(p))
        landed = 0.0
        if isinstance(fixed_target, FixedSubtorsor):
            landed = fixed_target.fixed_residual(right.mu_components(p)[c1])
        residuals.append(max(omega, moment, landed))
    details = {'fixed_dimension': int(right.tangent_basis().shape[0])}
    if isinstance(fixed_target, NoFixedPoints):
        details['target'] = fixed_target.reason
        residuals.append(1.0)
    return VerificationReport.from_residuals('fusion_fixed_iso', residuals, tol, seed, **details)


def check_fusion_fixed_iso_finite(m1: QHamSpace, m2: QHamSpace, c1: str, c2: str,
                                  seed: int = 0) -> VerificationReport:
    """
    有限群上的穷举版本：(M₁ ⊛ M₂)^Γ 恰为 M₁^Γ × M₂^Γ，
    且融合后的矩量映射等于两侧矩量映射的双旋子乘积并落在不动子双旋子中
    """
    fused = fuse(m1, m2, c1, c2)
    fixed1, fixed2 = enumerate_fixed_points(m1), enumerate_fixed_points(m2)
    fixed = enumerate_fixed_points(fused)
    pairs = {tuple(np.concatenate([x1, x2]).tolist()) for x1 in fixed1 for x2 in fixed2}
    found = {tuple(x.tolist()) for x in fixed}
    mismatches = len(pairs ^ found)
    target = fused.slot(c1).target
    fixed_target = fixed_subtorsor(target)
    fixed_target_points = set() if isinstance(fixed_target, NoFixedPoints) else \
        {tuple(x.tolist()) for x in fixed_target.points}
    for x in fixed:
        x1, x2 = x[:m1.n_coords], x[m1.n_coords:]
        mu = fused.mu_components(x)[c1]
        expected = m1.slot(c1).target.compose(m1.mu_components(x1)[c1], m2.mu_components(x2)[c2])
        if not np.array_equal(mu, expected) or tuple(mu.tolist()) not in fixed_target_points:
            mismatches += 1
    return VerificationReport('fusion_fixed_iso', max(1, len(fixed)), float(mismatches), 0.0, seed,
                              details={'fixed_left': len(fixed1), 'fixed_right': len(fixed2),
                                       'fixed_fused': len(fixed)})


def check_gd_double(group, rng: np.random.Generator, samples: int = 100, tol: float = 1e-10,
                    seed: int = 0) -> VerificationReport:
    """
    ₁D₁ 与 D(G, G) 在坐标变换 (C, h) ↦ (a, b) = (C, C⁻¹h⁻¹) 下 μ 与 ω 一致
    两侧 μ 分别为 (h⁻¹, C⁻¹hC) 与 (ab, a⁻¹b⁻¹)
    """
    gd = generalized_double(group, 1, 1)
    d = double(Bitorsor.trivial(group, 1, "G"), Bitorsor.trivial(group, 1, "G"))
    residuals = []
    for _ in range(samples):
        point = group.random_elements(rng, 2)
        tangent = None if group.is_finite else group.random_algebra(rng, (3, 2))
        jet = Jet(group, point, tangent)
        c, h = jet.select([0]), jet.select([1])
        moved = Jet.concat([c, c.inverse() * h.inverse()])
        residual = group.distance(gd.mu_fn(jet).point, d.mu_fn(moved).point)
        if not group.is_finite:
            residual = max(residual, float(np.max(np.abs(gd.omega_fn(jet) - d.omega_fn(moved)))))
        residuals.append(residual)
    return VerificationReport.from_residuals('gd_match', residuals, 0.0 if group.is_finite else tol, seed,
                                             m_inf=1, m_zero=1)
