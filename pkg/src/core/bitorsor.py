﻿"""
双旋子模块
乘积群 ∏ᵢG 上带扭曲的双旋子：左右作用、乘积、逆、Γ 作用、不动子双旋子，
以及不动点与乘积交换的典范同构
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.linalg import orth

from src.core.errors import CompatibilityError, IndexMismatchError, ResourceGuardError
from src.core.finite_group import AutomorphismAction, FiniteAutomorphism, FiniteGroup
from src.core.liegroup import Automorphism, EPS_NUM, GroupBase, Jet, MatrixAutomorphism
from src.core.report import VerificationReport

# 有限群穷举的规模上限
ENUMERATION_GUARD = 10 ** 7
# 不动点判定的容差
FIXED_POINT_TOL = 1e-10


def identity_automorphism(group: GroupBase) -> Automorphism:
    if group.is_finite:
        return FiniteAutomorphism.identity(group)
    return MatrixAutomorphism.identity(group)


def index_axis(group: GroupBase) -> int:
    """指标轴：有限群为最后一轴，矩阵群为倒数第三轴"""
    return -1 if group.is_finite else -3


def component(group: GroupBase, x: np.ndarray, i: int) -> np.ndarray:
    return x[..., i] if group.is_finite else x[..., i, :, :]


def stack_components(group: GroupBase, parts: Sequence[np.ndarray]) -> np.ndarray:
    return np.stack(parts, axis=index_axis(group))


def random_tuples(group: GroupBase, rng: np.random.Generator, k: int, count: int) -> np.ndarray:
    """count 个随机 k 元组，首轴为样本"""
    return np.stack([group.random_elements(rng, k) for _ in range(count)])


def all_tuples(group: FiniteGroup, k: int) -> np.ndarray:
    """有限群上全部 k 元组，形状 (|G|^k, k)"""
    total = group.order ** k
    if total > ENUMERATION_GUARD:
        raise ResourceGuardError(f"穷举规模 {group.order}^{k} = {total} 超过上限 {ENUMERATION_GUARD}")
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    # 字典序，末位变化最快
    return np.stack(np.unravel_index(np.arange(total), (group.order,) * k), axis=1).astype(np.int64)


class CoordinateMap:
    """
    逐指标的坐标映射 x ↦ (L_i·κ_i(x_{π(i)})·R_i)_i
    扭曲、Γ 作用和它们的切映射都取这一形式
    """

    def __init__(self, group: GroupBase, perm: Sequence[int], auts: Sequence[Automorphism],
                 left: Optional[np.ndarray] = None, right: Optional[np.ndarray] = None):
        """
        :param group: 基群 G
        :param perm: 指标置换 π
        :param auts: 每个指标上的自同构 κ_i
        :param left: 左平移 L，缺省为单位元
        :param right: 右平移 R，缺省为单位元
        """
        k = len(perm)
        self.group = group
        self.perm = np.asarray(perm, dtype=np.int64).reshape(k)
        if sorted(self.perm.tolist()) != list(range(k)):
            raise CompatibilityError(f"指标映射不是双射: {self.perm.tolist()}")
        if len(auts) != k:
            raise IndexMismatchError(f"自同构个数 {len(auts)} 与指标数 {k} 不一致")
        self.auts = tuple(auts)
        self.left = group.identity(k) if left is None else np.asarray(left)
        self.right = group.identity(k) if right is None else np.asarray(right)

    @property
    def size(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, group: GroupBase, k: int) -> 'CoordinateMap':
        return cls(group, range(k), [identity_automorphism(group)] * k)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """作用于点（允许前导批量轴）"""
        g = self.group
        if self.size == 0:
            return x
        parts = []
        for i in range(self.size):
            y = self.auts[i].apply(component(g, x, int(self.perm[i])))
            parts.append(g.mul(g.mul(component(g, self.left, i), y), component(g, self.right, i)))
        return stack_components(g, parts)

    def apply_tangent(self, v: np.ndarray) -> np.ndarray:
        """
        左平凡化切向量上的作用 v'_i = Ad_{R_i⁻¹} κ_i(v_{π(i)})
        :param v: 形状 (..., k, n, n)
        """
        g = self.group
        if self.size == 0:
            return v
        parts = [g.ad(g.inv(self.right[i]), self.auts[i].apply_tangent(v[..., int(self.perm[i]), :, :]))
                 for i in range(self.size)]
        return np.stack(parts, axis=-3)

    def apply_jet(self, jet: Jet) -> Jet:
        tangent = None if jet.tangent is None else self.apply_tangent(jet.tangent)
        return Jet(self.group, self.apply(jet.point), tangent)

    def compose(self, other: 'CoordinateMap') -> 'CoordinateMap':
        """复合 self ∘ other"""
        if self.size != other.size:
            raise IndexMismatchError(f"坐标映射指标数不一致: {self.size} vs {other.size}")
        g = self.group
        perm, auts, left, right = [], [], [], []
        for i in range(self.size):
            j = int(self.perm[i])
            kappa = self.auts[i]
            perm.append(int(other.perm[j]))
            auts.append(kappa.compose(other.auts[j]))
            left.append(g.mul(component(g, self.left, i), kappa.apply(component(g, other.left, j))))
            right.append(g.mul(kappa.apply(component(g, other.right, j)), component(g, self.right, i)))
        if not perm:
            return CoordinateMap.identity(g, 0)
        return CoordinateMap(g, perm, auts, stack_components(g, left), stack_components(g, right))

    def inverse(self) -> 'CoordinateMap':
        g = self.group
        if self.size == 0:
            return self
        inv_perm = np.argsort(self.perm)
        auts, left, right = [], [], []
        for j in range(self.size):
            i = int(inv_perm[j])
            kinv = self.auts[i].inverse()
            auts.append(kinv)
            left.append(kinv.apply(g.inv(component(g, self.left, i))))
            right.append(kinv.apply(g.inv(component(g, self.right, i))))
        return CoordinateMap(g, inv_perm, auts, stack_components(g, left), stack_components(g, right))

    def inverted(self) -> 'CoordinateMap':
        """与逐指标求逆共轭：x ↦ φ(x⁻¹)⁻¹"""
        g = self.group
        return CoordinateMap(g, self.perm, self.auts, g.inv(self.right), g.inv(self.left))

    def induced_group_map(self) -> 'CoordinateMap':
        """点映射诱导的群映射 g ↦ L·κ(g_π)·L⁻¹"""
        return CoordinateMap(self.group, self.perm, self.auts, self.left, self.group.inv(self.left))

    def is_twist(self) -> bool:
        """L 与 R 均为单位元"""
        ident = self.group.identity(self.size)
        return (self.group.distance(self.left, ident) <= EPS_NUM
                and self.group.distance(self.right, ident) <= EPS_NUM)

    def tangent_matrix(self) -> np.ndarray:
        """切映射在标准正交坐标下的实矩阵，形状 (k·dim, k·dim)"""
        g = self.group
        k, d = self.size, g.dim
        basis = g.from_coords(np.eye(k * d).reshape(k * d, k, d))
        coords = g.to_coords(self.apply_tangent(basis)).reshape(k * d, k * d)
        return coords.T

    def distance(self, other: 'CoordinateMap', rng: np.random.Generator, samples: int = 16) -> float:
        """两个坐标映射在随机样本上的最大差"""
        x = random_tuples(self.group, rng, self.size, samples)
        return self.group.distance(self.apply(x), other.apply(x))

    def restrict(self, indices: Sequence[int]) -> 'CoordinateMap':
        """限制到在 π 下封闭的指标子集"""
        idx = list(indices)
        position = {old: new for new, old in enumerate(idx)}
        if any(int(self.perm[i]) not in position for i in idx):
            raise CompatibilityError(f"指标子集 {idx} 在置换下不封闭")
        g = self.group
        return CoordinateMap(g, [position[int(self.perm[i])] for i in idx], [self.auts[i] for i in idx],
                             np.take(self.left, idx, axis=index_axis(g)),
                             np.take(self.right, idx, axis=index_axis(g)))

    def __repr__(self) -> str:
        return f"CoordinateMap(perm={self.perm.tolist()})"


def direct_sum(maps: Sequence[CoordinateMap]) -> CoordinateMap:
    """坐标映射的直和，指标依次拼接"""
    group = maps[0].group
    perm, auts, offset = [], [], 0
    for cmap in maps:
        perm.extend((cmap.perm + offset).tolist())
        auts.extend(cmap.auts)
        offset += cmap.size
    if offset == 0:
        return CoordinateMap.identity(group, 0)
    axis = 0 if group.is_finite else -3
    left = np.concatenate([m.left for m in maps if m.size], axis=axis)
    right = np.concatenate([m.right for m in maps if m.size], axis=axis)
    return CoordinateMap(group, perm, auts, left, right)


class Twist(CoordinateMap):
    """扭曲 T(g)_i = aut_i(g_{σ(i)})"""

    def __init__(self, group: GroupBase, sigma: Sequence[int], auts: Sequence[Automorphism]):
        super().__init__(group, sigma, auts)

    @classmethod
    def identity(cls, group: GroupBase, k: int) -> 'Twist':
        return cls(group, range(k), [identity_automorphism(group)] * k)

    @classmethod
    def uniform(cls, group: GroupBase, k: int, aut: Automorphism) -> 'Twist':
        """所有指标使用同一自同构，σ 为恒等"""
        return cls(group, range(k), [aut] * k)

    @classmethod
    def shift(cls, group: GroupBase, cycles: Sequence[int]) -> 'Twist':
        """
        每个循环内的平移 σ(λ) = λ+1，对应右作用 (h·g)(b_λ) = h(b_λ)g(b_{λ+1})
        :param cycles: 各循环的长度
        """
        sigma, offset = [], 0
        for length in cycles:
            sigma.extend(offset + (lam + 1) % length for lam in range(length))
            offset += length
        return cls(group, sigma, [identity_automorphism(group)] * offset)

    @staticmethod
    def coerce(cmap: CoordinateMap) -> 'Twist':
        if not cmap.is_twist():
            raise CompatibilityError("坐标映射含非平凡平移，不能作为扭曲")
        return Twist(cmap.group, cmap.perm, cmap.auts)

    def compose(self, other: CoordinateMap) -> 'Twist':
        return Twist.coerce(super().compose(other))

    def inverse(self) -> 'Twist':
        return Twist.coerce(super().inverse())


class BitorsorGamma:
    """
    有限群 Γ 在双旋子上的作用：每个 φ 对应底层集合上的一个坐标映射
    群上的作用由点映射诱导
    """

    def __init__(self, gamma: FiniteGroup, point_maps: Sequence[CoordinateMap]):
        if len(point_maps) != gamma.order:
            raise IndexMismatchError(f"需要 {gamma.order} 个点映射，实际 {len(point_maps)} 个")
        self.gamma = gamma
        self.point_maps = tuple(point_maps)
        self.group_maps = tuple(p.induced_group_map() for p in point_maps)

    @classmethod
    def trivial(cls, gamma: FiniteGroup, group: GroupBase, k: int) -> 'BitorsorGamma':
        return cls(gamma, [CoordinateMap.identity(group, k)] * gamma.order)

    @classmethod
    def diagonal(cls, action: AutomorphismAction, group: GroupBase, k: int) -> 'BitorsorGamma':
        """每个坐标上同时作用 κ_φ"""
        return cls(action.gamma, [CoordinateMap(group, range(k), [action(phi)] * k)
                                  for phi in range(action.gamma.order)])

    @classmethod
    def shift(cls, action: AutomorphismAction, group: GroupBase) -> 'BitorsorGamma':
        """
        I = Γ = Z/m 上的平移作用 (l·g)(k) = κ_l(g(k−l))
        :param action: 循环群 Γ 在 G 上的作用
        """
        m = action.gamma.order
        maps = [CoordinateMap(group, [(k - l) % m for k in range(m)], [action(l)] * m) for l in range(m)]
        return cls(action.gamma, maps)

    @property
    def order(self) -> int:
        return self.gamma.order

    def restrict(self, indices: Sequence[int]) -> 'BitorsorGamma':
        return BitorsorGamma(self.gamma, [p.restrict(indices) for p in self.point_maps])


class Bitorsor:
    """
    乘积群 ∏_{i∈I} G 上的双旋子
    左作用 g·x = (g_i x_i)，右作用 x·g = (x_i aut_i(g_{σ(i)}))
    """

    def __init__(self, group: GroupBase, twist: Twist, gamma: Optional[BitorsorGamma] = None,
                 name: str = "bG"):
        self.group = group
        self.twist = twist if isinstance(twist, Twist) else Twist.coerce(twist)
        self.gamma = gamma
        self.name = name
        if gamma is not None and any(p.size != twist.size for p in gamma.point_maps):
            raise IndexMismatchError("Γ 作用的指标数与扭曲不一致")

    @classmethod
    def trivial(cls, group: GroupBase, k: int = 1, name: str = "G") -> 'Bitorsor':
        return cls(group, Twist.identity(group, k), name=name)

    @property
    def size(self) -> int:
        return self.twist.size

    def with_gamma(self, gamma: Optional[BitorsorGamma]) -> 'Bitorsor':
        return Bitorsor(self.group, self.twist, gamma, self.name)

    def identity_point(self) -> np.ndarray:
        return self.group.identity(self.size)

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        return self.group.random_elements(rng, self.size)

    def _check(self, x: np.ndarray):
        axis_len = x.shape[index_axis(self.group)] if x.ndim else 0
        if axis_len != self.size:
            raise IndexMismatchError(f"{self.name}: 指标数应为 {self.size}，实际为 {axis_len}")

    def left_act(self, g: np.ndarray, x: np.ndarray) -> np.ndarray:
        self._check(x)
        return self.group.mul(g, x)

    def right_act(self, x: np.ndarray, g: np.ndarray) -> np.ndarray:
        self._check(x)
        return self.group.mul(x, self.twist.apply(g))

    def conjugate_act(self, g: np.ndarray, x: np.ndarray) -> np.ndarray:
        """g·x·g⁻¹，矩量映射的等变性取这一形式"""
        return self.right_act(self.left_act(g, x), self.group.inv(g))

    def solve_left(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """唯一的 g 使 g·x = y"""
        return self.group.mul(y, self.group.inv(x))

    def solve_right(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """唯一的 h 使 x·h = y"""
        return self.twist.inverse().apply(self.group.mul(self.group.inv(x), y))

    def compose(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """乘积模型的代表映射 r(x, y) = x·T(y)，y 属于右因子"""
        return self.group.mul(x, self.twist.apply(y))

    def compose_jet(self, x: Jet, y: Jet) -> Jet:
        return x * self.twist.apply_jet(y)

    def invert(self, x: np.ndarray) -> np.ndarray:
        """逆双旋子的代表映射 ι(x) = T⁻¹(x⁻¹)"""
        return self.twist.inverse().apply(self.group.inv(x))

    def invert_jet(self, x: Jet) -> Jet:
        return self.twist.inverse().apply_jet(x.inverse())

    def theta(self, jet: Jet) -> np.ndarray:
        """双旋子的左 Maurer–Cartan 形式 T⁻¹(θ)"""
        return self.twist.inverse().apply_tangent(jet.tangent)

    def theta_bar(self, jet: Jet) -> np.ndarray:
        """双旋子的右 Maurer–Cartan 形式 Ad_x θ"""
        return jet.theta_bar()

    def gamma_point(self, phi: int, x: np.ndarray) -> np.ndarray:
        return self.gamma.point_maps[phi].apply(x)

    def gamma_group(self, phi: int, g: np.ndarray) -> np.ndarray:
        return self.gamma.group_maps[phi].apply(g)

    def restrict(self, indices: Sequence[int], name: Optional[str] = None) -> 'Bitorsor':
        gamma = None if self.gamma is None else self.gamma.restrict(indices)
        return Bitorsor(self.group, Twist.coerce(self.twist.restrict(indices)), gamma,
                        name or f"{self.name}|{list(indices)}")

    def __repr__(self) -> str:
        return f"Bitorsor({self.name}, {self.group.get_name()}^{self.size})"


def bitorsor_direct_sum(parts: Sequence[Bitorsor], name: Optional[str] = None) -> Bitorsor:
    """指标集不交并上的双旋子"""
    group = parts[0].group
    twist = Twist.coerce(direct_sum([b.twist for b in parts]))
    gamma = None
    if parts and all(b.gamma is not None for b in parts):
        gamma_group = parts[0].gamma.gamma
        maps = [direct_sum([b.gamma.point_maps[phi] for b in parts]) for phi in range(gamma_group.order)]
        gamma = BitorsorGamma(gamma_group, maps)
    return Bitorsor(group, twist, gamma, name or "⊕".join(b.name for b in parts))


def shift_bitorsor(group: GroupBase, cycles: Sequence[int], name: str = "bH") -> Bitorsor:
    """基点循环上的平移扭曲双旋子 bH"""
    return Bitorsor(group, Twist.shift(group, cycles), name=name)


def cyclic_shift_bitorsor(group: GroupBase, action: AutomorphismAction) -> Bitorsor:
    """G^m 带平凡扭曲与平移 Γ 作用 (l·g)(k) = κ_l(g(k−l))"""
    m = action.gamma.order
    return Bitorsor(group, Twist.identity(group, m), BitorsorGamma.shift(action, group), name=f"G^{m}")


def _check_product_gamma(b1: Bitorsor, b2: Bitorsor, rng: np.random.Generator) -> None:
    for phi in range(b1.gamma.order):
        residual = b1.gamma.group_maps[phi].distance(b2.gamma.group_maps[phi], rng)
        if residual > FIXED_POINT_TOL:
            raise CompatibilityError(f"两个双旋子上 Γ 在群上的作用不一致（φ = {phi}，残差 {residual:.3e}）")


def product(b1: Bitorsor, b2: Bitorsor) -> Bitorsor:
    """
    双旋子乘积 bG₁·bG₂，模型为 (∏G, T₁∘T₂)，代表映射 r(x, y) = x·T₁(y)
    Γ 作用由 φ·r(x, y) = r(φ·x, φ·y) 传递
    """
    if b1.group != b2.group:
        raise CompatibilityError(f"基群不一致: {b1.group.get_name()} vs {b2.group.get_name()}")
    if b1.size != b2.size:
        raise IndexMismatchError(f"指标数不一致: {b1.size} vs {b2.size}")
    twist = b1.twist.compose(b2.twist)
    gamma = None
    if b1.gamma is not None and b2.gamma is not None:
        if b1.gamma.gamma != b2.gamma.gamma:
            raise CompatibilityError("两个双旋子上的 Γ 不同")
        _check_product_gamma(b1, b2, np.random.default_rng(0))
        group = b1.group
        maps = []
        for phi in range(b1.gamma.order):
            p1, p2 = b1.gamma.point_maps[phi], b2.gamma.point_maps[phi]
            # φ·r(x, y) = φ·x · T₁(φ·1)，其中 φ·1 = L₂R₂
            shift = b1.twist.apply(group.mul(p2.left, p2.right))
            maps.append(CoordinateMap(group, p1.perm, p1.auts, p1.left, group.mul(p1.right, shift)))
        gamma = BitorsorGamma(b1.gamma.gamma, maps)
    return Bitorsor(b1.group, twist, gamma, f"{b1.name}·{b2.name}")


def inverse(b: Bitorsor) -> Bitorsor:
    """逆双旋子，模型为 (∏G, T⁻¹)，代表映射 ι(x) = T⁻¹(x⁻¹)，Γ 作用 φ·x⁻¹ = (φ·x)⁻¹"""
    twist_inv = b.twist.inverse()
    gamma = None
    if b.gamma is not None:
        maps = [twist_inv.compose(p.inverted()).compose(b.twist) for p in b.gamma.point_maps]
        gamma = BitorsorGamma(b.gamma.gamma, maps)
    name = b.name[:-2] if b.name.endswith("⁻¹") else f"{b.name}⁻¹"
    return Bitorsor(b.group, twist_inv, gamma, name)


def check_bitorsor(b: Bitorsor, rng: np.random.Generator, samples: int = 100,
                   tol: float = 1e-12, seed: int = 0) -> VerificationReport:
    """左右作用交换，且 solve_left / solve_right 给出唯一解"""
    group = b.group
    residuals = []
    for _ in range(samples):
        x, y = b.random_point(rng), b.random_point(rng)
        g, h = group.random_elements(rng, b.size), group.random_elements(rng, b.size)
        commute = group.distance(b.right_act(b.left_act(g, x), h), b.left_act(g, b.right_act(x, h)))
        left = group.distance(b.left_act(b.solve_left(x, y), x), y)
        right = group.distance(b.right_act(x, b.solve_right(x, y)), y)
        residuals.append(max(commute, left, right))
    return VerificationReport.from_residuals(f"bitorsor[{b.name}]", residuals, tol, seed)


def check_gamma_compat(b: Bitorsor, rng: np.random.Generator, samples: int = 100,
                tol: float = 1e-12, seed: int = 0) -> VerificationReport:
    """
    Γ 相容性：作用律 (φψ)·x = φ·(ψ·x)，以及 φ·(g·x) = (φ·g)(φ·x)，φ·(x·g) = (φ·x)(φ·g)
    """
    if b.gamma is None:
        return VerificationReport(f"gamma_compat[{b.name}]", 0, 0.0, tol, seed, details={'gamma': 'none'})
    group, gamma = b.group, b.gamma.gamma
    residuals = []
    for _ in range(samples):
        x = b.random_point(rng)
        g = group.random_elements(rng, b.size)
        worst = 0.0
        for phi in range(gamma.order):
            px = b.gamma_point(phi, x)
            pg = b.gamma_group(phi, g)
            worst = max(worst, group.distance(b.gamma_point(phi, b.left_act(g, x)), b.left_act(pg, px)))
            worst = max(worst, group.distance(b.gamma_point(phi, b.right_act(x, g)), b.right_act(px, pg)))
            for psi in range(gamma.order):
                composite = b.gamma_point(int(gamma.table[phi, psi]), x)
                worst = max(worst, group.distance(composite, b.gamma_point(phi, b.gamma_point(psi, x))))
        residuals.append(worst)
    return VerificationReport.from_residuals(f"gamma_compat[{b.name}]", residuals, tol, seed)


def averaging_matrix(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """线性作用的平均 (1/|Γ|) Σ φ"""
    return sum(matrices) / len(matrices)


@dataclass
class NoFixedPoints:
    """不动点集为空（或未找到不动基点），是可报告的结果而非异常"""
    bitorsor: str
    reason: str

    @property
    def empty(self) -> bool:
        return True


class FixedSubtorsor:
    """
    Γ 不动点构成的 G^Γ 双旋子
    矩阵群：以不动基点 p₀ 与不动切空间参数化 p₀·exp(z)；有限群：穷举列出
    """

    def __init__(self, parent: Bitorsor, base_point: np.ndarray,
                 points: Optional[np.ndarray] = None, group_elements: Optional[np.ndarray] = None):
        self.parent = parent
        self.group = parent.group
        self.base_point = base_point
        self.points = points
        self.group_elements = group_elements
        self.name = f"{parent.name}^Γ"
        if not self.group.is_finite:
            point_mats = [p.tangent_matrix() for p in parent.gamma.point_maps]
            group_mats = [g.tangent_matrix() for g in parent.gamma.group_maps]
            self.tangent_projector = averaging_matrix(point_mats)
            self.group_projector = averaging_matrix(group_mats)
            self.tangent_basis = orth(self.tangent_projector)
            self.group_basis = orth(self.group_projector)

    @property
    def empty(self) -> bool:
        return False

    @property
    def size(self) -> int:
        return self.parent.size

    def left_act(self, g: np.ndarray, x: np.ndarray) -> np.ndarray:
        return self.parent.left_act(g, x)

    def right_act(self, x: np.ndarray, g: np.ndarray) -> np.ndarray:
        return self.parent.right_act(x, g)

    def fixed_residual(self, x: np.ndarray) -> float:
        return max(self.group.distance(p.apply(x), x) for p in self.parent.gamma.point_maps)

    def group_fixed_residual(self, g: np.ndarray) -> float:
        return max(self.group.distance(m.apply(g), g) for m in self.parent.gamma.group_maps)

    def _fixed_algebra(self, basis: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        k, d = self.size, self.group.dim
        coeffs = rng.standard_normal(basis.shape[1])
        return self.group.from_coords((basis @ coeffs).reshape(k, d))

    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if self.group.is_finite:
            return self.points[rng.integers(0, len(self.points), size=count)]
        return np.stack([self.group.mul(self.base_point, self.group.exp(self._fixed_algebra(self.tangent_basis, rng)))
                         for _ in range(count)])

    def sample_group(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """G^Γ 的单位连通分支中的随机元素"""
        if self.group.is_finite:
            return self.group_elements[rng.integers(0, len(self.group_elements), size=count)]
        return np.stack([self.group.exp(self._fixed_algebra(self.group_basis, rng)) for _ in range(count)])

    def __repr__(self) -> str:
        return f"FixedSubtorsor({self.name})"


def fixed_subtorsor(b: Bitorsor, base_point: Optional[np.ndarray] = None) -> Union[FixedSubtorsor, NoFixedPoints]:
    """
    Γ 不动子双旋子
    :param b: 带 Γ 作用的双旋子（无 Γ 作用时视为平凡 Γ）
    :param base_point: 矩阵群上的不动基点，缺省尝试单位元组
    :return: FixedSubtorsor，或不动集为空时的 NoFixedPoints
    """
    if b.gamma is None:
        b = b.with_gamma(BitorsorGamma.trivial(FiniteGroup.cyclic(1), b.group, b.size))
    group = b.group
    if group.is_finite:
        candidates = all_tuples(group, b.size)
        mask = np.ones(len(candidates), dtype=bool)
        gmask = np.ones(len(candidates), dtype=bool)
        for p, m in zip(b.gamma.point_maps, b.gamma.group_maps):
            mask &= np.all(p.apply(candidates) == candidates, axis=1)
            gmask &= np.all(m.apply(candidates) == candidates, axis=1)
        points = candidates[mask]
        if len(points) == 0:
            return NoFixedPoints(b.name, "穷举后不动点集为空")
        return FixedSubtorsor(b, points[0], points=points, group_elements=candidates[gmask])
    candidate = b.identity_point() if base_point is None else np.asarray(base_point)
    residual = max(group.distance(p.apply(candidate), candidate) for p in b.gamma.point_maps)
    if residual > FIXED_POINT_TOL:
        reason = "单位元组不是不动点，需提供不动基点" if base_point is None else f"给定基点不是不动点（残差 {residual:.3e}）"
        return NoFixedPoints(b.name, reason)
    return FixedSubtorsor(b, candidate)


def check_simple_transitivity(f: FixedSubtorsor, rng: np.random.Generator, samples: int = 100,
                              tol: float = 1e-10, seed: int = 0) -> VerificationReport:
    """受限的 G^Γ 左右作用在不动点上单可迁：解出的 g、h 本身是不动的"""
    group, b = f.group, f.parent
    residuals = []
    if group.is_finite:
        pairs = [(x, y) for x in f.points for y in f.points]
    else:
        xs, ys = f.sample_points(rng, samples), f.sample_points(rng, samples)
        pairs = list(zip(xs, ys))
    for x, y in pairs:
        g = b.solve_left(x, y)
        h = b.solve_right(x, y)
        residuals.append(max(f.group_fixed_residual(g), f.group_fixed_residual(h),
                             f.fixed_residual(x), group.distance(b.left_act(g, x), y),
                             group.distance(b.right_act(x, h), y)))
    details = {}
    if group.is_finite:
        details = {'fixed_points': int(len(f.points)), 'fixed_group': int(len(f.group_elements))}
    return VerificationReport.from_residuals(f"fixed_transitivity[{b.name}]", residuals, tol, seed, **details)


def canonical_fixed_product_iso(b1: Bitorsor, b2: Bitorsor, f1: FixedSubtorsor, f2: FixedSubtorsor,
                                rng: np.random.Generator, samples: int = 100, tol: float = 1e-10,
                                seed: int = 0) -> VerificationReport:
    """
    典范映射 bG₁^Γ·bG₂^Γ → (bG₁·bG₂)^Γ，r(x₁, x₂) ↦ r(x₁, x₂)
    检验像是不动的、良定（r(x₁·g, x₂) = r(x₁, g·x₂)）且左右 G^Γ 等变；
    有限群上另外穷举检验双射
    """
    prod = product(b1, b2)
    group = b1.group
    name = f"fixed_product_iso[{b1.name},{b2.name}]"
    if group.is_finite:
        fixed_prod = fixed_subtorsor(prod)
        if isinstance(fixed_prod, NoFixedPoints):
            return VerificationReport(name, 0, 1.0, tol, seed, details={'reason': fixed_prod.reason})
        image = {tuple(b1.compose(x1, x2).tolist()) for x1 in f1.points for x2 in f2.points}
        target = {tuple(x.tolist()) for x in fixed_prod.points}
        # 纤维大小为 |G^Γ|：良定性与双射性的计数形式
        expected = len(f1.points) * len(f2.points) // max(1, len(f1.group_elements))
        mismatches = len(image ^ target) + abs(expected - len(target))
        residuals = [float(mismatches)]
        for g in f1.group_elements:
            for x1 in f1.points[:8]:
                for x2 in f2.points[:8]:
                    lhs = b1.compose(b1.right_act(x1, g), x2)
                    residuals.append(group.distance(lhs, b1.compose(x1, b2.left_act(g, x2))))
        return VerificationReport.from_residuals(name, residuals, tol, seed, domain=len(image),
                                                 codomain=len(target), fixed_group=len(f1.group_elements))
    fixed_prod = fixed_subtorsor(prod, base_point=b1.compose(f1.base_point, f2.base_point))
    residuals = []
    for _ in range(samples):
        x1, x2 = f1.sample_points(rng, 1)[0], f2.sample_points(rng, 1)[0]
        g, h, k = (f1.sample_group(rng, 1)[0] for _ in range(3))
        r = b1.compose(x1, x2)
        fixed = max(group.distance(p.apply(r), r) for p in prod.gamma.point_maps)
        well_defined = group.distance(b1.compose(b1.right_act(x1, k), x2), b1.compose(x1, b2.left_act(k, x2)))
        left = group.distance(b1.compose(f1.left_act(g, x1), x2), prod.left_act(g, r))
        right = group.distance(b1.compose(x1, f2.right_act(x2, h)), prod.right_act(r, h))
        residuals.append(max(fixed, well_defined, left, right))
    details = {}
    if isinstance(fixed_prod, FixedSubtorsor):
        # 两侧不动切空间维数一致
        details['dim_source'] = int(f1.tangent_basis.shape[1])
        details['dim_target'] = int(fixed_prod.tangent_basis.shape[1])
        residuals.append(float(abs(details['dim_source'] - details['dim_target'])))
    return VerificationReport.from_residuals(name, residuals, tol, seed, **details)
