﻿"""
矩阵李群模块
提供紧矩阵群 SU(n) / SO(n) 的群与李代数运算、指数映射、伴随作用、
Ad 不变内积、有限阶自同构、带种子的采样器，以及携带切向量的 Jet
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm, expm_frechet, logm
from scipy.stats import special_ortho_group, unitary_group

from src.core.errors import CompatibilityError, IndexMismatchError

# 表示层面的容差
EPS_REPR = 1e-12
# 数值检验的容差
EPS_NUM = 1e-10
# 自同构经验检验所用的样本数
AUT_PANEL_SIZE = 64


class GroupBase(ABC):
    """群的抽象基类：矩阵群与有限群共用同一套逐指标运算接口"""

    @abstractmethod
    def identity(self, k: int) -> np.ndarray:
        """
        返回 k 个单位元组成的元组
        :param k: 指标集大小
        :return: 数组，首轴为指标
        """
        pass

    @abstractmethod
    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """逐指标乘法"""
        pass

    @abstractmethod
    def inv(self, x: np.ndarray) -> np.ndarray:
        """逐指标求逆"""
        pass

    @abstractmethod
    def random_elements(self, rng: np.random.Generator, k: int) -> np.ndarray:
        """
        随机抽取 k 个群元素
        :param rng: numpy 随机数生成器
        :param k: 个数
        """
        pass

    @abstractmethod
    def distance(self, x: np.ndarray, y: np.ndarray) -> float:
        """两个元组之间的距离（有限群：0 或 1）"""
        pass

    @abstractmethod
    def get_name(self) -> str:
        """群的名称"""
        pass

    @property
    def is_finite(self) -> bool:
        return False


class MatrixGroup(GroupBase):
    """
    紧矩阵李群 SU(n) 或 SO(n)
    内积取 (X, Y) = -scale * Re tr(XY)
    """

    SUPPORTED_KINDS = ('su', 'so')

    def __init__(self, kind: str, n: int, scale: float = 1.0):
        """
        :param kind: 'su' 或 'so'
        :param n: 矩阵阶数
        :param scale: 内积的正规化系数
        """
        if kind not in self.SUPPORTED_KINDS:
            raise CompatibilityError(f"不支持的群类型: {kind}")
        if n < 2:
            raise CompatibilityError(f"矩阵阶数必须至少为 2: {n}")
        if scale <= 0:
            raise CompatibilityError(f"内积系数必须为正: {scale}")
        self.kind = kind
        self.n = n
        self.scale = float(scale)
        self.basis = self._build_basis()
        self.dim = self.basis.shape[0]

    def get_name(self) -> str:
        return f"{self.kind.upper()}({self.n})"

    @property
    def is_real(self) -> bool:
        return self.kind == 'so'

    @property
    def dtype(self):
        return np.float64 if self.is_real else np.complex128

    def _build_basis(self) -> np.ndarray:
        """
        构造李代数关于 Frobenius 内积的标准正交基
        :return: 形状 (dim, n, n) 的数组
        """
        n = self.n
        basis = []
        for j in range(n):
            for k in range(j + 1, n):
                e = np.zeros((n, n), dtype=self.dtype)
                e[j, k] = 1.0
                e[k, j] = -1.0
                basis.append(e / np.sqrt(2.0))
                if self.kind == 'su':
                    s = np.zeros((n, n), dtype=complex)
                    s[j, k] = 1j
                    s[k, j] = 1j
                    basis.append(s / np.sqrt(2.0))
        if self.kind == 'su':
            # 无迹对角部分：h_l = (E_11 + ... + E_ll - l E_{l+1,l+1}) / sqrt(l(l+1))
            for l in range(1, n):
                d = np.zeros(n)
                d[:l] = 1.0
                d[l] = -float(l)
                d /= np.sqrt(l * (l + 1))
                basis.append(np.diag(1j * d))
        return np.array(basis, dtype=self.dtype)

    def identity(self, k: int) -> np.ndarray:
        return np.broadcast_to(np.eye(self.n, dtype=self.dtype), (k, self.n, self.n)).copy()

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return x @ y

    def inv(self, x: np.ndarray) -> np.ndarray:
        return np.conj(np.swapaxes(x, -1, -2))

    def ad(self, g: np.ndarray, x: np.ndarray) -> np.ndarray:
        """伴随作用 Ad_g X = g X g⁻¹（支持广播）"""
        return g @ x @ self.inv(g)

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return x @ y - y @ x

    def exp(self, x: np.ndarray) -> np.ndarray:
        """矩阵指数（scipy 的缩放平方 Padé 算法，支持堆叠数组）"""
        result = expm(x)
        return np.real(result) if self.is_real else result

    def log(self, g: np.ndarray) -> np.ndarray:
        """
        主对数，结果投影回李代数
        :param g: 单个群元素或堆叠数组
        """
        if g.ndim == 2:
            return self.project_algebra(logm(g))
        return np.array([self.log(item) for item in g])

    def dexp(self, z: np.ndarray, v: np.ndarray) -> np.ndarray:
        """
        指数映射的左平移微分 exp(-Z) · d/ds exp(Z + sV)|_{s=0}
        :param z: 单个李代数元素
        :param v: 单个李代数元素
        """
        expz, frechet = expm_frechet(z, v)
        result = self.inv(expz) @ frechet
        return np.real(result) if self.is_real else result

    def project_algebra(self, x: np.ndarray) -> np.ndarray:
        """投影到李代数（反厄米、无迹或实反对称部分）"""
        skew = 0.5 * (x - np.conj(np.swapaxes(x, -1, -2)))
        if self.is_real:
            return np.real(skew)
        trace = np.trace(skew, axis1=-2, axis2=-1)[..., None, None]
        return skew - trace * np.eye(self.n) / self.n

    def inner(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """
        逐元素内积 (X, Y) = -scale * Re tr(XY)，对前导轴广播
        """
        return -self.scale * np.real(np.einsum('...ij,...ji->...', x, y))

    def pairing_matrix(self, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
        """
        两批切向量的配对矩阵 M_ab = Σ_k (alpha_a,k, beta_b,k)
        :param alpha: 形状 (b, k, n, n)
        :param beta: 形状 (c, k, n, n)
        :return: 形状 (b, c)
        """
        return -self.scale * np.real(np.einsum('akij,bkji->ab', alpha, beta))

    def to_coords(self, x: np.ndarray) -> np.ndarray:
        """李代数元素在标准正交基下的实坐标（最后一轴为坐标）"""
        return np.real(np.einsum('aij,...ij->...a', np.conj(self.basis), x))

    def from_coords(self, c: np.ndarray) -> np.ndarray:
        return np.einsum('...a,aij->...ij', c, self.basis)

    def random_algebra(self, rng: np.random.Generator, shape: Tuple[int, ...] = ()) -> np.ndarray:
        """高斯李代数元素：标准正交基下的独立标准正态坐标"""
        coords = rng.standard_normal(tuple(shape) + (self.dim,))
        return self.from_coords(coords)

    def random_elements(self, rng: np.random.Generator, k: int) -> np.ndarray:
        """Haar 随机群元素（scipy.stats 采样器）"""
        elements = []
        for _ in range(k):
            if self.is_real:
                g = special_ortho_group.rvs(self.n, random_state=rng)
            else:
                u = unitary_group.rvs(self.n, random_state=rng)
                # 除以行列式的 n 次方根，落入 SU(n)
                g = u / np.linalg.det(u) ** (1.0 / self.n)
            elements.append(np.asarray(g, dtype=self.dtype))
        return np.array(elements, dtype=self.dtype).reshape(k, self.n, self.n)

    def distance(self, x: np.ndarray, y: np.ndarray) -> float:
        if np.size(x) == 0:
            return 0.0
        return float(np.max(np.abs(np.asarray(x) - np.asarray(y))))

    def element_residual(self, g: np.ndarray) -> float:
        """群元素不变量的残差：‖U*U − I‖ 与 |det U − 1|"""
        eye = np.eye(self.n)
        unitary = np.max(np.abs(self.inv(g) @ g - eye))
        det = np.max(np.abs(np.linalg.det(g) - 1.0))
        return float(max(unitary, det))

    def algebra_residual(self, x: np.ndarray) -> float:
        """李代数元素不变量的残差"""
        skew = np.max(np.abs(x + np.conj(np.swapaxes(x, -1, -2))))
        trace = np.max(np.abs(np.trace(x, axis1=-2, axis2=-1))) if self.kind == 'su' else 0.0
        imag = np.max(np.abs(np.imag(x))) if self.is_real else 0.0
        return float(max(skew, trace, imag))

    def __eq__(self, other) -> bool:
        return (isinstance(other, MatrixGroup) and self.kind == other.kind
                and self.n == other.n and self.scale == other.scale)

    def __hash__(self) -> int:
        return hash((self.kind, self.n, self.scale))

    def __repr__(self) -> str:
        return f"MatrixGroup({self.kind!r}, {self.n}, scale={self.scale})"


@dataclass(frozen=True, eq=False)
class GroupElement:
    """群 G 中的一个点"""
    entries: np.ndarray
    group: MatrixGroup

    def __post_init__(self):
        if self.group.element_residual(self.entries) > 1e3 * EPS_REPR:
            raise CompatibilityError("矩阵不是群元素（酉性或行列式检验失败）")


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """李代数 𝔤 中的一个元素"""
    entries: np.ndarray
    group: MatrixGroup

    def __post_init__(self):
        if self.group.algebra_residual(self.entries) > EPS_REPR * max(1.0, np.max(np.abs(self.entries))):
            raise CompatibilityError("矩阵不在李代数中")


class Automorphism(ABC):
    """群自同构的抽象基类，声明阶数 order"""

    order: int

    @abstractmethod
    def apply(self, x: np.ndarray) -> np.ndarray:
        """作用于群元素（或李代数元素）的堆叠数组"""
        pass

    @abstractmethod
    def compose(self, other: 'Automorphism') -> 'Automorphism':
        """复合 self ∘ other"""
        pass

    @abstractmethod
    def inverse(self) -> 'Automorphism':
        pass

    @abstractmethod
    def is_identity(self) -> bool:
        pass

    def apply_tangent(self, v: np.ndarray) -> np.ndarray:
        """作用于李代数（矩阵群上与 apply 相同）"""
        return self.apply(v)

    def power(self, k: int) -> 'Automorphism':
        """κ^k，k 可以为负"""
        base = self if k >= 0 else self.inverse()
        result = base.identity_like()
        for _ in range(abs(k)):
            result = base.compose(result)
        return result

    @abstractmethod
    def identity_like(self) -> 'Automorphism':
        pass


class MatrixAutomorphism(Automorphism):
    """
    矩阵群自同构 X ↦ w·C(X)·w⁻¹
    其中 C 为复共轭（outer=True 时，su(n) 的标准外自同构代表）或恒等
    """

    def __init__(self, group: MatrixGroup, w: Optional[np.ndarray] = None,
                 outer: bool = False, order: Optional[int] = None):
        """
        :param group: 所在矩阵群
        :param w: 内部分的共轭矩阵，默认为单位阵
        :param outer: 是否先做复共轭
        :param order: 声明的阶数，缺省时经验推断
        """
        self.group = group
        self.w = np.eye(group.n, dtype=group.dtype) if w is None else np.asarray(w, dtype=group.dtype)
        # so(n) 上复共轭是平凡的
        self.outer = bool(outer) and not group.is_real
        self.order = order if order is not None else self._infer_order()

    @classmethod
    def identity(cls, group: MatrixGroup) -> 'MatrixAutomorphism':
        return cls(group, order=1)

    @classmethod
    def inner(cls, group: MatrixGroup, w: np.ndarray, order: Optional[int] = None) -> 'MatrixAutomorphism':
        return cls(group, w, outer=False, order=order)

    @classmethod
    def outer_composite(cls, group: MatrixGroup, w: Optional[np.ndarray] = None,
                        order: Optional[int] = None) -> 'MatrixAutomorphism':
        return cls(group, w, outer=True, order=order)

    def identity_like(self) -> 'MatrixAutomorphism':
        return MatrixAutomorphism.identity(self.group)

    def _conj(self, x: np.ndarray) -> np.ndarray:
        return np.conj(x) if self.outer else x

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.w @ self._conj(x) @ self.group.inv(self.w)

    def compose(self, other: 'MatrixAutomorphism') -> 'MatrixAutomorphism':
        # (w1, c1)∘(w2, c2) = (w1·C1(w2), c1 xor c2)
        w = self.w @ self._conj(other.w)
        composite = MatrixAutomorphism(self.group, w, outer=self.outer != other.outer, order=1)
        composite.order = composite._infer_order(strict=False)
        return composite

    def inverse(self) -> 'MatrixAutomorphism':
        w = self._conj(self.group.inv(self.w))
        return MatrixAutomorphism(self.group, w, outer=self.outer, order=self.order)

    def is_identity(self) -> bool:
        if self.outer:
            return False
        # w 为中心元时作用平凡
        return bool(np.allclose(self.apply(self.group.basis), self.group.basis, atol=EPS_NUM))

    def _infer_order(self, max_order: int = 24, strict: bool = True) -> int:
        """在基上经验推断阶数，strict=False 时超过上限返回 0（无限或未知）"""
        x = self.group.basis
        y = x
        for k in range(1, max_order + 1):
            y = self.apply(y)
            if np.max(np.abs(y - x)) <= EPS_NUM:
                return k
        if not strict:
            return 0
        raise CompatibilityError(f"自同构的阶数超过 {max_order}")

    def validate(self, rng: np.random.Generator, panel: int = AUT_PANEL_SIZE) -> float:
        """
        经验验证：声明阶数、同态性与内积保持
        :return: 三项残差的最大值
        """
        g = self.group.random_elements(rng, panel)
        h = self.group.random_elements(rng, panel)
        y = g
        for _ in range(self.order):
            y = self.apply(y)
        order_res = self.group.distance(y, g)
        hom_res = self.group.distance(self.apply(g @ h), self.apply(g) @ self.apply(h))
        x = self.group.random_algebra(rng, (panel,))
        z = self.group.random_algebra(rng, (panel,))
        inner_res = float(np.max(np.abs(self.group.inner(self.apply(x), self.apply(z))
                                        - self.group.inner(x, z))))
        return max(order_res, hom_res, inner_res)

    def __repr__(self) -> str:
        return f"MatrixAutomorphism(outer={self.outer}, order={self.order})"


def preset_automorphism(group: MatrixGroup, name: str) -> MatrixAutomorphism:
    """
    预置自同构
    :param group: 矩阵群
    :param name: 'identity' | 'diag' | 'outer'
    :return: 自同构
    """
    if name == 'identity':
        return MatrixAutomorphism.identity(group)
    if name == 'diag':
        if group.kind == 'su' and group.n == 2:
            w = np.diag([1j, -1j])
        else:
            d = np.ones(group.n)
            d[:2] = -1.0
            w = np.diag(d)
        return MatrixAutomorphism.inner(group, w, order=2)
    if name == 'outer':
        return MatrixAutomorphism.outer_composite(group)
    raise CompatibilityError(f"未知的预置自同构: {name}")


@dataclass(frozen=True, eq=False)
class Jet:
    """
    ∏G 中的点与一批左平凡化切向量
    tangent[b, k] 表示曲线 t ↦ point[k]·exp(t·tangent[b, k])
    有限群上 tangent 为 None
    """
    group: GroupBase
    point: np.ndarray
    tangent: Optional[np.ndarray] = None

    @staticmethod
    def constant(group: GroupBase, point: np.ndarray, batch: int = 0) -> 'Jet':
        """切向量为零的 Jet"""
        if group.is_finite:
            return Jet(group, np.asarray(point))
        return Jet(group, point, np.zeros((batch,) + point.shape, dtype=point.dtype))

    @property
    def size(self) -> int:
        return self.point.shape[0]

    def __mul__(self, other: 'Jet') -> 'Jet':
        if self.size != other.size:
            raise IndexMismatchError(f"Jet 指标数不一致: {self.size} vs {other.size}")
        point = self.group.mul(self.point, other.point)
        if self.tangent is None:
            return Jet(self.group, point)
        # θ(xy) = Ad_{y⁻¹}θ(x) + θ(y)
        tangent = self.group.ad(self.group.inv(other.point), self.tangent) + other.tangent
        return Jet(self.group, point, tangent)

    def inverse(self) -> 'Jet':
        point = self.group.inv(self.point)
        if self.tangent is None:
            return Jet(self.group, point)
        # θ(x⁻¹) = -Ad_x θ(x)
        return Jet(self.group, point, -self.group.ad(self.point, self.tangent))

    def select(self, indices: Sequence[int]) -> 'Jet':
        idx = list(indices)
        tangent = None if self.tangent is None else self.tangent[:, idx]
        return Jet(self.group, self.point[idx], tangent)

    @staticmethod
    def concat(jets: Sequence['Jet']) -> 'Jet':
        group = jets[0].group
        point = np.concatenate([j.point for j in jets], axis=0)
        if jets[0].tangent is None:
            return Jet(group, point)
        return Jet(group, point, np.concatenate([j.tangent for j in jets], axis=1))

    def theta(self) -> np.ndarray:
        """左 Maurer–Cartan 形式的取值"""
        return self.tangent

    def theta_bar(self) -> np.ndarray:
        """右 Maurer–Cartan 形式的取值 Ad_x θ"""
        return self.group.ad(self.point, self.tangent)


def wedge_matrix(group: MatrixGroup, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """
    𝔤 值 1-形式的楔积配对 (α, β)(u, v) = (α(u), β(v)) − (α(v), β(u))
    :param alpha: 形状 (b, k, n, n)，α 在每个切向量上的取值
    :param beta: 形状 (b, k, n, n)
    :return: 反对称矩阵 (b, b)
    """
    m = group.pairing_matrix(alpha, beta)
    return m - m.T


def exp(x: AlgebraElement) -> GroupElement:
    return GroupElement(x.group.exp(x.entries), x.group)


def ad_of(g: GroupElement, x: AlgebraElement) -> AlgebraElement:
    if g.group != x.group:
        raise IndexMismatchError("群与李代数不一致")
    return AlgebraElement(x.group.ad(g.entries, x.entries), x.group)


def inner(x: AlgebraElement, y: AlgebraElement) -> float:
    return float(x.group.inner(x.entries, y.entries))


def apply_aut(kappa: MatrixAutomorphism,
              x: Union[GroupElement, AlgebraElement]) -> Union[GroupElement, AlgebraElement]:
    return type(x)(kappa.apply(x.entries), x.group)


def random_group_element(group: MatrixGroup, seed: int) -> GroupElement:
    rng = np.random.default_rng(seed)
    return GroupElement(group.random_elements(rng, 1)[0], group)


def random_algebra_element(group: MatrixGroup, seed: int) -> AlgebraElement:
    rng = np.random.default_rng(seed)
    return AlgebraElement(group.random_algebra(rng), group)
