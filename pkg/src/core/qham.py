﻿"""
准哈密顿空间模块
以 Jet 上的三个函数（矩量映射、群作用、2-形式）描述空间，
构造子：点空间、双空间、融合、内融合、广义双空间、边界细分、不动点轨迹与反例空间
"""

from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag, orth

from src.core.bitorsor import (Bitorsor, BitorsorGamma, CoordinateMap, FixedSubtorsor, NoFixedPoints,
                               averaging_matrix, direct_sum, fixed_subtorsor, inverse, product,
                               shift_bitorsor)
from src.core.errors import CompatibilityError, IndexMismatchError
from src.core.finite_group import FiniteGroup
from src.core.liegroup import GroupBase, Jet, MatrixAutomorphism, wedge_matrix

# 不动点判定容差
FIXED_TOL = 1e-10

MuFn = Callable[[Jet], Jet]
ActFn = Callable[[Jet, Jet], Jet]
OmegaFn = Callable[[Jet], np.ndarray]


@dataclass(frozen=True)
class CoordinateSlot:
    """
    结构群的一个分量 ∏_{I}G 及其矩量映射的目标双旋子
    projector 为不动点轨迹上的李代数投影（None 表示整个李代数）
    """
    name: str
    target: Bitorsor
    projector: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return self.target.size


@dataclass(frozen=True)
class GammaAction:
    """有限群 Γ 在点空间上的作用，每个 φ 对应一个坐标映射"""
    gamma: FiniteGroup
    point_maps: Tuple[CoordinateMap, ...]


def slot_slices(slots: Sequence[CoordinateSlot]) -> Dict[str, range]:
    """各分量在结构群指标中的位置"""
    offsets = np.cumsum([0] + [s.size for s in slots])
    return {s.name: range(int(offsets[i]), int(offsets[i + 1])) for i, s in enumerate(slots)}


def jet_batch(jet: Jet) -> int:
    return 0 if jet.tangent is None else jet.tangent.shape[0]


def is_trivial_twist(b: Bitorsor) -> bool:
    return (np.array_equal(b.twist.perm, np.arange(b.size))
            and all(aut.is_identity() for aut in b.twist.auts))


class QHamSpace:
    """
    准哈密顿空间
    点为 G 的 n_coords 元组，切向量左平凡化；结构群为各分量之积
    """

    def __init__(self, group: GroupBase, labels: Sequence[str], slots: Sequence[CoordinateSlot],
                 mu_fn: MuFn, act_fn: ActFn, omega_fn: OmegaFn, gamma: Optional[GammaAction] = None,
                 tangent_projector: Optional[np.ndarray] = None,
                 point_sampler: Optional[Callable[[np.random.Generator], np.ndarray]] = None,
                 name: str = "M"):
        """
        :param group: 基群
        :param labels: 点坐标的名称
        :param slots: 结构群分量
        :param mu_fn: 矩量映射（Jet → 目标各分量拼接的 Jet）
        :param act_fn: 群作用（群 Jet, 点 Jet → 点 Jet）
        :param omega_fn: 2-形式（点 Jet → 切向量两两配对的反对称矩阵）
        :param gamma: Γ 在点上的作用
        :param tangent_projector: 切空间投影（不动点轨迹），None 表示全切空间
        :param point_sampler: 随机点生成器，缺省为 Haar 随机
        """
        self.group = group
        self.labels = tuple(labels)
        self.slots = tuple(slots)
        self.mu_fn = mu_fn
        self.act_fn = act_fn
        self.omega_fn = omega_fn
        self.gamma = gamma
        self.tangent_projector = tangent_projector
        self.point_sampler = point_sampler
        self.name = name
        names = [s.name for s in self.slots]
        if len(set(names)) != len(names):
            raise CompatibilityError(f"{name}: 结构群分量名称重复 {names}")
        self.slot_slices = slot_slices(slots)

    @property
    def n_coords(self) -> int:
        return len(self.labels)

    @property
    def structure_size(self) -> int:
        return sum(s.size for s in self.slots)

    def slot(self, name: str) -> CoordinateSlot:
        for s in self.slots:
            if s.name == name:
                return s
        raise CompatibilityError(f"{self.name} 没有结构群分量 '{name}'，现有 {[s.name for s in self.slots]}")

    def _check_point(self, p: np.ndarray):
        length = p.shape[-1] if self.group.is_finite else p.shape[-3]
        if length != self.n_coords:
            raise IndexMismatchError(f"{self.name}: 点应有 {self.n_coords} 个坐标，实际 {length} 个")

    # ---- 求值 ----

    def mu_jet(self, jet: Jet) -> Jet:
        return self.mu_fn(jet)

    def eval_mu(self, p: np.ndarray) -> np.ndarray:
        self._check_point(p)
        return self.mu_fn(Jet.constant(self.group, p, 0)).point

    def mu_components(self, p: np.ndarray) -> Dict[str, np.ndarray]:
        mu = self.eval_mu(p)
        return {name: mu[list(idx)] for name, idx in self.slot_slices.items()}

    def omega_matrix(self, p: np.ndarray, tangents: np.ndarray) -> np.ndarray:
        """
        2-形式在一批切向量上的 Gram 矩阵
        :param p: 点，形状 (n_coords, n, n)
        :param tangents: 形状 (b, n_coords, n, n)
        :return: 反对称矩阵 (b, b)
        """
        self._check_point(p)
        return self.omega_fn(Jet(self.group, p, tangents))

    def eval_omega(self, p: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
        if u.shape != v.shape:
            raise IndexMismatchError("两个切向量形状不一致")
        return float(self.omega_matrix(p, np.stack([u, v]))[0, 1])

    def act_jet(self, g: np.ndarray, jet: Jet) -> Jet:
        """常值群元素作用在点及其切向量上"""
        return self.act_fn(Jet.constant(self.group, g, jet_batch(jet)), jet)

    def act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        self._check_point(p)
        return self.act_jet(g, Jet.constant(self.group, p, 0)).point

    def generating_vector(self, p: np.ndarray, xi: np.ndarray) -> np.ndarray:
        """
        生成向量 ξ#|_p = d/dt (e^{−tξ}·p)，由作用的 Jet 形式闭式求得
        :param xi: 结构李代数元素，形状 (K, n, n)
        :return: 左平凡化切向量 (n_coords, n, n)
        """
        group_jet = Jet(self.group, self.group.identity(self.structure_size), -xi[None])
        return self.act_fn(group_jet, Jet.constant(self.group, p, 1)).tangent[0]

    def gamma_act(self, phi: int, p: np.ndarray) -> np.ndarray:
        return self.gamma.point_maps[phi].apply(p)

    def gamma_act_jet(self, phi: int, jet: Jet) -> Jet:
        return self.gamma.point_maps[phi].apply_jet(jet)

    def gamma_group(self, phi: int, g: np.ndarray) -> np.ndarray:
        """Γ 在结构群上的作用，由各目标双旋子的 Γ 作用诱导"""
        maps = [s.target.gamma.group_maps[phi] for s in self.slots]
        return direct_sum(maps).apply(g)

    def gamma_target(self, phi: int, x: np.ndarray) -> np.ndarray:
        maps = [s.target.gamma.point_maps[phi] for s in self.slots]
        return direct_sum(maps).apply(x)

    def target_conjugate_act(self, g: np.ndarray, mu: np.ndarray) -> np.ndarray:
        """各分量上 g_c·μ_c·g_c⁻¹"""
        parts = []
        for s in self.slots:
            idx = list(self.slot_slices[s.name])
            parts.append(s.target.conjugate_act(g[idx], mu[idx]))
        return np.concatenate(parts, axis=0)

    def target_theta(self, mu: Jet) -> Tuple[np.ndarray, np.ndarray]:
        """目标双旋子上的 Maurer–Cartan 形式 (θ, θ̄)，按分量拼接"""
        thetas, bars = [], []
        for s in self.slots:
            piece = mu.select(self.slot_slices[s.name])
            thetas.append(s.target.theta(piece))
            bars.append(s.target.theta_bar(piece))
        return np.concatenate(thetas, axis=1), np.concatenate(bars, axis=1)

    # ---- 切空间与采样 ----

    def tangent_basis(self) -> np.ndarray:
        """切空间的标准正交基，形状 (D, n_coords, n, n)"""
        k, d = self.n_coords, self.group.dim
        coords = np.eye(k * d) if self.tangent_projector is None else orth(self.tangent_projector).T
        return self.group.from_coords(coords.reshape(-1, k, d))

    def structure_projector(self) -> np.ndarray:
        d = self.group.dim
        return block_diag(*[np.eye(s.size * d) if s.projector is None else s.projector for s in self.slots])

    def structure_basis(self) -> np.ndarray:
        K, d = self.structure_size, self.group.dim
        return self.group.from_coords(orth(self.structure_projector()).T.reshape(-1, K, d))

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        if self.point_sampler is not None:
            return self.point_sampler(rng)
        return self.group.random_elements(rng, self.n_coords)

    def sample_tangents(self, rng: np.random.Generator, count: int) -> np.ndarray:
        basis = self.tangent_basis()
        coeffs = rng.standard_normal((count, basis.shape[0]))
        return np.einsum('cb,bkij->ckij', coeffs, basis)

    def sample_structure_algebra(self, rng: np.random.Generator) -> np.ndarray:
        basis = self.structure_basis()
        return np.einsum('b,bkij->kij', rng.standard_normal(basis.shape[0]), basis)

    def sample_structure_group(self, rng: np.random.Generator) -> np.ndarray:
        if self.group.is_finite:
            return self.group.random_elements(rng, self.structure_size)
        if all(s.projector is None for s in self.slots):
            return self.group.random_elements(rng, self.structure_size)
        return self.group.exp(self.sample_structure_algebra(rng))

    def chart_point(self, p: np.ndarray, z: np.ndarray) -> np.ndarray:
        """指数坐标卡 z ↦ p·exp(z)"""
        return self.group.mul(p, self.group.exp(z))

    def with_slots(self, slots: Sequence[CoordinateSlot], name: Optional[str] = None) -> 'QHamSpace':
        return QHamSpace(self.group, self.labels, slots, self.mu_fn, self.act_fn, self.omega_fn,
                         self.gamma, self.tangent_projector, self.point_sampler, name or self.name)

    def __repr__(self) -> str:
        return f"QHamSpace({self.name}, coords={self.n_coords}, slots={[s.name for s in self.slots]})"


def _split_group_jet(jet: Jet, space: QHamSpace, source: Dict[str, range]) -> Jet:
    """按 space 的分量顺序，从 source 指定的指标段拼出群 Jet"""
    return Jet.concat([jet.select(source[s.name]) for s in space.slots])


def _tangent_block(space: QHamSpace) -> np.ndarray:
    d = space.group.dim
    return np.eye(space.n_coords * d) if space.tangent_projector is None else space.tangent_projector


def point_space(group: GroupBase, name: str = "G", size: int = 1) -> QHamSpace:
    """单点空间：矩量映射恒为单位元，2-形式为零"""
    slot = CoordinateSlot(name, Bitorsor.trivial(group, size, name=name))

    def mu_fn(jet: Jet) -> Jet:
        return Jet.constant(group, group.identity(size), jet_batch(jet))

    def act_fn(g: Jet, p: Jet) -> Jet:
        return p

    def omega_fn(p: Jet) -> np.ndarray:
        b = jet_batch(p)
        return np.zeros((b, b))

    return QHamSpace(group, [], [slot], mu_fn, act_fn, omega_fn, name="pt",
                     point_sampler=lambda rng: group.identity(0))


def double(b1: Bitorsor, b2: Bitorsor, names: Tuple[str, str] = ("G1", "G2"),
           labels: Tuple[str, str] = ("a", "b"), name: Optional[str] = None) -> QHamSpace:
    """
    双空间 D(bG₁, bG₂) = bG₁ × bG₂
    作用 (g₁, g₂)·(a, b) = (g₁·a·g₂⁻¹, g₂·b·g₁⁻¹)（右作用按各自扭曲）
    ω = −½(a*θ, b*θ̄) − ½(a*θ̄, b*θ)，μ(a, b) = (r(a, b), r(ι(a), ι(b)))
    """
    if b1.group != b2.group:
        raise CompatibilityError(f"双空间的两个双旋子基群不同: {b1.group.get_name()} vs {b2.group.get_name()}")
    if b1.size != b2.size:
        raise IndexMismatchError(f"双空间的两个双旋子指标数不同: {b1.size} vs {b2.size}")
    if (b1.gamma is None) != (b2.gamma is None):
        raise CompatibilityError("只有一个双旋子带有 Γ 作用")
    group, k = b1.group, b1.size
    inv1 = inverse(b1)
    first, second = range(k), range(k, 2 * k)

    def mu_fn(jet: Jet) -> Jet:
        ja, jb = jet.select(first), jet.select(second)
        m1 = b1.compose_jet(ja, jb)
        m2 = inv1.compose_jet(b1.invert_jet(ja), b2.invert_jet(jb))
        return Jet.concat([m1, m2])

    def act_fn(g: Jet, jet: Jet) -> Jet:
        g1, g2 = g.select(first), g.select(second)
        ja, jb = jet.select(first), jet.select(second)
        a = g1 * ja * b1.twist.apply_jet(g2).inverse()
        b = g2 * jb * b2.twist.apply_jet(g1).inverse()
        return Jet.concat([a, b])

    def omega_fn(jet: Jet) -> np.ndarray:
        ja, jb = jet.select(first), jet.select(second)
        return -0.5 * (wedge_matrix(group, b1.theta(ja), b2.theta_bar(jb))
                       + wedge_matrix(group, b1.theta_bar(ja), b2.theta(jb)))

    slots = [CoordinateSlot(names[0], product(b1, b2)), CoordinateSlot(names[1], product(inv1, inverse(b2)))]
    gamma = None
    if b1.gamma is not None:
        maps = tuple(direct_sum([b1.gamma.point_maps[phi], b2.gamma.point_maps[phi]])
                     for phi in range(b1.gamma.order))
        gamma = GammaAction(b1.gamma.gamma, maps)
    point_labels = [f"{labels[0]}{i}" if k > 1 else labels[0] for i in range(k)]
    point_labels += [f"{labels[1]}{i}" if k > 1 else labels[1] for i in range(k)]
    return QHamSpace(group, point_labels, slots, mu_fn, act_fn, omega_fn, gamma,
                     name=name or f"D({b1.name},{b2.name})")


def _fuse_slot(s1: CoordinateSlot, s2: CoordinateSlot, name: str) -> CoordinateSlot:
    if s1.target.group != s2.target.group or s1.size != s2.size:
        raise CompatibilityError(f"分量 {s1.name} 与 {s2.name} 的群不一致，无法融合")
    return CoordinateSlot(name, product(s1.target, s2.target), s1.projector)


def _fresh_name(name: str, taken: set) -> str:
    """name 已被占用时依次尝试 name.2、name.3 …"""
    if name not in taken:
        return name
    k = 2
    while f"{name}.{k}" in taken:
        k += 1
    return f"{name}.{k}"


def fuse(m1: QHamSpace, m2: QHamSpace, c1: str, c2: str, name: Optional[str] = None,
         slot_name: Optional[str] = None) -> QHamSpace:
    """
    融合积 M₁ ⊛ M₂：共享分量 c1 / c2 上的作用取对角，矩量映射取双旋子乘积，
    ω = ω₁ + ω₂ − ½((μ₁)*θ, (μ₂)*θ̄)
    M₂ 中与 M₁ 重名的其余分量改名为 name.2（仍冲突则 name.3 …）
    """
    if m1.group != m2.group:
        raise CompatibilityError("融合的两个空间基群不同")
    s1, s2 = m1.slot(c1), m2.slot(c2)
    fused = _fuse_slot(s1, s2, slot_name or c1)
    taken = {s.name for s in m1.slots if s.name != c1} | {fused.name}
    renamed: Dict[str, str] = {}
    for s in m2.slots:
        if s.name != c2:
            renamed[s.name] = _fresh_name(s.name, taken)
            taken.add(renamed[s.name])
    slots = ([fused if s.name == c1 else s for s in m1.slots]
             + [replace(s, name=renamed[s.name]) for s in m2.slots if s.name != c2])
    # 每个新分量的来源：('fused', None) / (1, 原名) / (2, 原名)
    origins = ([('fused', None) if s.name == c1 else (1, s.name) for s in m1.slots]
               + [(2, s.name) for s in m2.slots if s.name != c2])
    group = m1.group
    n1, n2 = m1.n_coords, m2.n_coords
    first, second = range(n1), range(n1, n1 + n2)
    new = slot_slices(slots)
    src1 = {s.name: new[fused.name] if s.name == c1 else new[s.name] for s in m1.slots}
    src2 = {s.name: new[fused.name] if s.name == c2 else new[renamed[s.name]] for s in m2.slots}

    def act_fn(g: Jet, jet: Jet) -> Jet:
        p1 = m1.act_fn(_split_group_jet(g, m1, src1), jet.select(first))
        p2 = m2.act_fn(_split_group_jet(g, m2, src2), jet.select(second))
        return Jet.concat([p1, p2])

    def _components(jet: Jet):
        mu1, mu2 = m1.mu_fn(jet.select(first)), m2.mu_fn(jet.select(second))
        return mu1.select(m1.slot_slices[c1]), mu2.select(m2.slot_slices[c2]), mu1, mu2

    def mu_fn(jet: Jet) -> Jet:
        x1, x2, mu1, mu2 = _components(jet)
        parts = []
        for side, original in origins:
            if side == 'fused':
                parts.append(s1.target.compose_jet(x1, x2))
            elif side == 1:
                parts.append(mu1.select(m1.slot_slices[original]))
            else:
                parts.append(mu2.select(m2.slot_slices[original]))
        return Jet.concat(parts)

    def omega_fn(jet: Jet) -> np.ndarray:
        x1, x2, _, _ = _components(jet)
        correction = wedge_matrix(group, s1.target.theta(x1), s2.target.theta_bar(x2))
        return m1.omega_fn(jet.select(first)) + m2.omega_fn(jet.select(second)) - 0.5 * correction

    gamma = None
    if m1.gamma is not None and m2.gamma is not None:
        maps = tuple(direct_sum([m1.gamma.point_maps[phi], m2.gamma.point_maps[phi]])
                     for phi in range(m1.gamma.gamma.order))
        gamma = GammaAction(m1.gamma.gamma, maps)
    projector = None
    if m1.tangent_projector is not None or m2.tangent_projector is not None:
        projector = block_diag(_tangent_block(m1), _tangent_block(m2))

    def sampler(rng: np.random.Generator) -> np.ndarray:
        return np.concatenate([m1.sample_point(rng), m2.sample_point(rng)], axis=0)

    return QHamSpace(group, list(m1.labels) + list(m2.labels), slots, mu_fn, act_fn, omega_fn, gamma,
                     projector, sampler, name or f"{m1.name}⊛{m2.name}")


def internal_fuse(m: QHamSpace, c1: str, c2: str, name: Optional[str] = None,
                  slot_name: Optional[str] = None) -> QHamSpace:
    """
    内融合：分量 c1、c2 沿对角合并，矩量映射取 μ_{c1}·μ_{c2}，ω 加上与融合相同的修正项
    """
    if c1 == c2:
        raise CompatibilityError("内融合需要两个不同的分量")
    s1, s2 = m.slot(c1), m.slot(c2)
    fused = _fuse_slot(s1, s2, slot_name or c1)
    slots = [fused if s.name == c1 else s for s in m.slots if s.name != c2]
    group = m.group
    new = slot_slices(slots)
    source = {s.name: new[fused.name] if s.name in (c1, c2) else new[s.name] for s in m.slots}

    def act_fn(g: Jet, jet: Jet) -> Jet:
        return m.act_fn(_split_group_jet(g, m, source), jet)

    def mu_fn(jet: Jet) -> Jet:
        mu = m.mu_fn(jet)
        parts = []
        for s in slots:
            if s.name == fused.name:
                parts.append(s1.target.compose_jet(mu.select(m.slot_slices[c1]), mu.select(m.slot_slices[c2])))
            else:
                parts.append(mu.select(m.slot_slices[s.name]))
        return Jet.concat(parts)

    def omega_fn(jet: Jet) -> np.ndarray:
        mu = m.mu_fn(jet)
        x1, x2 = mu.select(m.slot_slices[c1]), mu.select(m.slot_slices[c2])
        correction = wedge_matrix(group, s1.target.theta(x1), s2.target.theta_bar(x2))
        return m.omega_fn(jet) - 0.5 * correction

    return QHamSpace(group, m.labels, slots, mu_fn, act_fn, omega_fn, m.gamma, m.tangent_projector,
                     m.point_sampler, name or f"𝔻[{m.name}]")


def fused_double(b1: Bitorsor, b2: Bitorsor, slot_name: str = "G", labels: Tuple[str, str] = ("a", "b"),
                 name: Optional[str] = None) -> QHamSpace:
    """融合双空间 𝔻(bG₁, bG₂)"""
    d = double(b1, b2, names=(f"{slot_name}.1", f"{slot_name}.2"), labels=labels)
    return internal_fuse(d, f"{slot_name}.1", f"{slot_name}.2", slot_name=slot_name,
                         name=name or f"𝔻({b1.name},{b2.name})")


def _boundary_omega(group: GroupBase, hs: Sequence[Jet]) -> np.ndarray:
    """½ Σ_i (k_i*θ̄, h_i*θ)，k_i = h_{i−1}⋯h₁"""
    b = jet_batch(hs[0])
    total = np.zeros((b, b))
    partial = hs[0]
    for h in hs[1:]:
        total += 0.5 * wedge_matrix(group, partial.theta_bar(), h.theta())
        partial = h * partial
    return total


def _close_cycle(total: Jet, hs: Sequence[Jet]) -> Jet:
    """由 h_m⋯h₁ = total 解出 h_m"""
    if not hs:
        return total
    partial = hs[0]
    for h in hs[1:]:
        partial = h * partial
    return total * partial.inverse()


def _cycle_action(g: Jet, hs: Sequence[Jet]) -> List[Jet]:
    """h_λ ↦ g_{λ+1}·h_λ·g_λ⁻¹"""
    return [g.select([lam + 1]) * h * g.select([lam]).inverse() for lam, h in enumerate(hs)]


def split_boundary(m: QHamSpace, slot_name: str, count: int, name: Optional[str] = None) -> QHamSpace:
    """
    把只含一个基点的边界分量细分为 count 个基点
    新坐标 h₁…h_{count−1}，h_count = μ_c⁻¹(h_{count−1}⋯h₁)⁻¹；
    矩量映射 (h_λ⁻¹) 落在平移扭曲双旋子 bH 中，ω 增加 ½Σ(k_i*θ̄, h_i*θ)
    """
    old = m.slot(slot_name)
    if old.size != 1 or not is_trivial_twist(old.target):
        raise CompatibilityError(f"分量 {slot_name} 不是单基点分量")
    if count < 1:
        raise CompatibilityError(f"基点数必须为正: {count}")
    if count == 1:
        return m
    group = m.group
    n_old = m.n_coords
    old_coords, new_coords = range(n_old), range(n_old, n_old + count - 1)
    slots = [CoordinateSlot(slot_name, shift_bitorsor(group, [count], name=f"bH[{slot_name}]"))
             if s.name == slot_name else s for s in m.slots]
    new = slot_slices(slots)
    first_point = new[slot_name][0]
    source = {s.name: range(first_point, first_point + 1) if s.name == slot_name else new[s.name]
              for s in m.slots}

    def _cycle(jet: Jet) -> Tuple[Jet, List[Jet]]:
        mu = m.mu_fn(jet.select(old_coords))
        total = mu.select(m.slot_slices[slot_name]).inverse()
        hs = [jet.select([i]) for i in new_coords]
        return mu, hs + [_close_cycle(total, hs)]

    def mu_fn(jet: Jet) -> Jet:
        mu, hs = _cycle(jet)
        parts = []
        for s in slots:
            if s.name == slot_name:
                parts.append(Jet.concat([h.inverse() for h in hs]))
            else:
                parts.append(mu.select(m.slot_slices[s.name]))
        return Jet.concat(parts)

    def act_fn(g: Jet, jet: Jet) -> Jet:
        moved = m.act_fn(_split_group_jet(g, m, source), jet.select(old_coords))
        g_cycle = g.select(new[slot_name])
        hs = [jet.select([i]) for i in new_coords]
        return Jet.concat([moved] + _cycle_action(g_cycle, hs))

    def omega_fn(jet: Jet) -> np.ndarray:
        _, hs = _cycle(jet)
        return m.omega_fn(jet.select(old_coords)) + _boundary_omega(group, hs)

    projector = None
    if m.tangent_projector is not None:
        projector = block_diag(m.tangent_projector, np.eye((count - 1) * group.dim))
    labels = list(m.labels) + [f"{slot_name}.h{lam + 1}" for lam in range(count - 1)]

    def sampler(rng: np.random.Generator) -> np.ndarray:
        return np.concatenate([m.sample_point(rng), group.random_elements(rng, count - 1)], axis=0)

    return QHamSpace(group, labels, slots, mu_fn, act_fn, omega_fn, None, projector, sampler,
                     name or f"{m.name}[{slot_name}÷{count}]")


def generalized_double(group: GroupBase, m_inf: int, m_zero: int, name: Optional[str] = None) -> QHamSpace:
    """
    广义双空间 ₘ∞D_{m₀}
    坐标 (C, h₁…h_{m∞}, h⁰₁…h⁰_{m₀−1})，由 C⁻¹h_{m∞}⋯h₁C·h⁰_{m₀}⋯h⁰₁ = 1 解出 h⁰_{m₀}；
    μ = (h⁻¹, (h⁰)⁻¹)，
    ω = ½(C*θ̄, Ad_H C*θ̄) + ½(C*θ̄, H*θ̄ + H*θ) + ½Σ(k_i*θ̄, h_i*θ) + ½Σ(k⁰_j*θ̄, h⁰_j*θ)，H = h_{m∞}⋯h₁
    """
    if m_inf < 1 or m_zero < 1:
        raise CompatibilityError(f"基点数必须至少为 1: ({m_inf}, {m_zero})")
    c_idx = 0
    inf_idx = list(range(1, 1 + m_inf))
    zero_idx = list(range(1 + m_inf, m_inf + m_zero))
    slots = [CoordinateSlot("inf", shift_bitorsor(group, [m_inf], name="bH∞")),
             CoordinateSlot("0", shift_bitorsor(group, [m_zero], name="bH⁰"))]

    def _coords(jet: Jet) -> Tuple[Jet, Jet, List[Jet], List[Jet]]:
        c = jet.select([c_idx])
        hs = [jet.select([i]) for i in inf_idx]
        big_h = _close_cycle_product(hs)
        zeros = [jet.select([i]) for i in zero_idx]
        total = c.inverse() * big_h.inverse() * c
        return c, big_h, hs, zeros + [_close_cycle(total, zeros)]

    def mu_fn(jet: Jet) -> Jet:
        _, _, hs, zeros = _coords(jet)
        return Jet.concat([h.inverse() for h in hs] + [h.inverse() for h in zeros])

    def act_fn(g: Jet, jet: Jet) -> Jet:
        g_inf, g_zero = g.select(range(m_inf)), g.select(range(m_inf, m_inf + m_zero))
        c = g_inf.select([0]) * jet.select([c_idx]) * g_zero.select([0]).inverse()
        hs = _cycle_action(g_inf, [jet.select([i]) for i in inf_idx[:-1]]) if m_inf > 1 else []
        h_last = g_inf.select([0]) * jet.select([inf_idx[-1]]) * g_inf.select([m_inf - 1]).inverse()
        zeros = _cycle_action(g_zero, [jet.select([i]) for i in zero_idx])
        return Jet.concat([c] + hs + [h_last] + zeros)

    def omega_fn(jet: Jet) -> np.ndarray:
        c, big_h, hs, zeros = _coords(jet)
        c_bar = c.theta_bar()
        value = 0.5 * wedge_matrix(group, c_bar, group.ad(big_h.point, c_bar))
        value += 0.5 * wedge_matrix(group, c_bar, big_h.theta_bar() + big_h.theta())
        return value + _boundary_omega(group, hs) + _boundary_omega(group, zeros)

    labels = ["C"] + [f"h{i + 1}" for i in range(m_inf)] + [f"h0_{j + 1}" for j in range(m_zero - 1)]
    return QHamSpace(group, labels, slots, mu_fn, act_fn, omega_fn, name=name or f"{m_inf}D{m_zero}")


def _close_cycle_product(hs: Sequence[Jet]) -> Jet:
    """h_m⋯h₁"""
    partial = hs[0]
    for h in hs[1:]:
        partial = h * partial
    return partial


def fixed_locus(m: QHamSpace, base_point: np.ndarray, name: Optional[str] = None) -> QHamSpace:
    """
    不动点轨迹 N = M^Γ（过 base_point 的分支）
    切空间为平均投影的像，结构李代数为 𝔤^Γ，目标为含 μ(p₀) 的不动子双旋子
    """
    if m.gamma is None:
        raise CompatibilityError(f"{m.name} 没有 Γ 作用")
    group = m.group
    p0 = np.asarray(base_point)
    residual = max(group.distance(m.gamma_act(phi, p0), p0) for phi in range(m.gamma.gamma.order))
    if residual > FIXED_TOL:
        raise CompatibilityError(f"基点不是 Γ 不动点（残差 {residual:.3e}）")
    mu0 = m.mu_components(p0)
    slots = []
    for s in m.slots:
        if s.target.gamma is None:
            raise CompatibilityError(f"分量 {s.name} 的目标没有 Γ 作用")
        fixed = fixed_subtorsor(s.target, base_point=mu0[s.name])
        if isinstance(fixed, NoFixedPoints):
            raise CompatibilityError(f"μ(p₀) 不在分量 {s.name} 的不动子双旋子中: {fixed.reason}")
        slots.append(CoordinateSlot(s.name, s.target, fixed.group_projector))
    projector = averaging_matrix([cmap.tangent_matrix() for cmap in m.gamma.point_maps])
    if m.tangent_projector is not None:
        projector = m.tangent_projector @ projector
    basis = orth(projector)
    k, d = m.n_coords, group.dim

    def sampler(rng: np.random.Generator) -> np.ndarray:
        z = group.from_coords((basis @ rng.standard_normal(basis.shape[1])).reshape(k, d))
        return group.mul(p0, group.exp(z))

    return QHamSpace(group, m.labels, slots, m.mu_fn, m.act_fn, m.omega_fn, m.gamma, projector, sampler,
                     name or f"{m.name}^Γ")


def enumerate_fixed_points(m: QHamSpace) -> np.ndarray:
    """有限群上穷举 Γ 不动点，形状 (N, n_coords)"""
    from src.core.bitorsor import all_tuples
    if not m.group.is_finite:
        raise CompatibilityError("只能在有限群上穷举不动点")
    points = all_tuples(m.group, m.n_coords)
    mask = np.ones(len(points), dtype=bool)
    for cmap in m.gamma.point_maps:
        mask &= np.all(cmap.apply(points) == points, axis=1)
    return points[mask]


def degenerate_space(group: GroupBase, name: str = "G") -> QHamSpace:
    """反例：ω ≡ 0，μ ≡ 1，作用为共轭。QH1、QH2 平凡成立，QH3 必然失败"""
    slot = CoordinateSlot(name, Bitorsor.trivial(group, 1, name=name))

    def mu_fn(jet: Jet) -> Jet:
        return Jet.constant(group, group.identity(1), jet_batch(jet))

    def act_fn(g: Jet, jet: Jet) -> Jet:
        return g * jet * g.inverse()

    def omega_fn(jet: Jet) -> np.ndarray:
        b = jet_batch(jet)
        return np.zeros((b, b))

    return QHamSpace(group, ["x"], [slot], mu_fn, act_fn, omega_fn, name="degenerate")


def planted_nonequivariant(m: QHamSpace, slot_name: str, w: np.ndarray) -> QHamSpace:
    """
    反例：把分量 slot_name 目标上非平凡 φ 的作用再与 w 共轭，
    使 μ(φ·p) = φ·μ(p) 不再成立
    """
    s = m.slot(slot_name)
    if s.target.gamma is None:
        raise CompatibilityError(f"分量 {slot_name} 没有 Γ 作用")
    group = m.group
    conj = CoordinateMap(group, range(s.size), [MatrixAutomorphism.inner(group, w, order=0)] * s.size)
    identity = s.target.gamma.gamma.identity_index
    maps = [p if phi == identity else conj.compose(p) for phi, p in enumerate(s.target.gamma.point_maps)]
    target = s.target.with_gamma(BitorsorGamma(s.target.gamma.gamma, maps))
    slots = [replace(x, target=target) if x.name == slot_name else x for x in m.slots]
    return m.with_slots(slots, name=f"{m.name}[planted]")
