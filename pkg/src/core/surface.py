﻿"""
曲面模块
带边界与基点的曲面、其箭图与自由基本群胚、表示簇，
以及由双空间与融合双空间拼装出的准哈密顿结构
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from src.core.bitorsor import Bitorsor, component, stack_components
from src.core.errors import ConfigError, IndexMismatchError, WordError
from src.core.liegroup import GroupBase, Jet
from src.core.qham import (QHamSpace, double, fuse, fused_double, generalized_double, jet_batch, point_space,
                           split_boundary)
from src.core.report import VerificationReport

T = TypeVar('T')


@dataclass(frozen=True)
class SurfaceData:
    """
    亏格为 genus 的定向曲面，边界分量 V₀, V₁, …, V_r
    boundaries[j] 为 V_j 上的基点数，V₀ 排在最前
    """
    genus: int
    boundaries: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'boundaries', tuple(int(m) for m in self.boundaries))
        if self.genus < 0:
            raise ConfigError(f"亏格不能为负: {self.genus}", field="surface.genus")
        if not self.boundaries:
            raise ConfigError("至少需要一个边界分量 V₀", field="surface.boundaries")
        for j, m in enumerate(self.boundaries):
            if m < 1:
                raise ConfigError(f"边界 V{j} 的基点数必须至少为 1: {m}", field=f"surface.boundaries[{j}]")

    @property
    def r(self) -> int:
        """除 V₀ 外的边界数"""
        return len(self.boundaries) - 1

    @property
    def base_point_count(self) -> int:
        return sum(self.boundaries)

    @property
    def free_rank(self) -> int:
        """基本群的秩 2g + r"""
        return 2 * self.genus + self.r

    @classmethod
    def disk(cls, m0: int = 1) -> 'SurfaceData':
        return cls(0, (m0,))

    @classmethod
    def annulus(cls, m0: int = 1, m_inf: int = 1) -> 'SurfaceData':
        return cls(0, (m0, m_inf))

    def describe(self) -> str:
        return f"Σ(g={self.genus}, β={list(self.boundaries)})"


def vertex_name(j: int, lam: int) -> str:
    """边界 V_j 上第 lam 个基点（从 1 起）"""
    return f"β{j}.{lam}"


def slot_name(j: int) -> str:
    return f"β{j}"


@dataclass(frozen=True)
class Edge:
    """
    箭图中的一条边
    kind: 'gamma' | 'boundary' | 'a' | 'b'；derived 为 True 时由多边形关系导出，不存储
    """
    name: str
    kind: str
    source: str
    target: str
    boundary: int = -1
    index: int = 0
    derived: bool = False


@dataclass(frozen=True)
class GroupoidWord:
    """自由群胚中的字，按范畴顺序：前一步的终点是后一步的起点"""
    steps: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        steps = tuple((str(name), int(exp)) for name, exp in self.steps)
        for name, exp in steps:
            if exp not in (1, -1):
                raise WordError(f"字中边 {name} 的指数必须为 ±1: {exp}")
        object.__setattr__(self, 'steps', steps)

    @staticmethod
    def generator(name: str, exponent: int = 1) -> 'GroupoidWord':
        return GroupoidWord(((name, exponent),))

    def inverse(self) -> 'GroupoidWord':
        return GroupoidWord(tuple((name, -exp) for name, exp in reversed(self.steps)))

    def __add__(self, other: 'GroupoidWord') -> 'GroupoidWord':
        return GroupoidWord(self.steps + other.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def endpoints(self, quiver: 'Quiver') -> Optional[Tuple[str, str]]:
        """
        检查可复合性
        :return: (起点, 终点)，空字返回 None
        """
        start, current = None, None
        for name, exp in self.steps:
            edge = quiver.edge(name)
            source, target = (edge.source, edge.target) if exp == 1 else (edge.target, edge.source)
            if current is not None and source != current:
                raise WordError(f"字不可复合：{name} 的起点 {source} 与上一步终点 {current} 不一致")
            start = source if start is None else start
            current = target
        return None if start is None else (start, current)

    def __str__(self) -> str:
        if not self.steps:
            return "1"
        return "·".join(name if exp == 1 else f"{name}⁻¹" for name, exp in self.steps)


@dataclass(frozen=True)
class Quiver:
    """
    曲面的箭图 Q = {a^k, b^k, ∂^j_λ, γ^j}
    edges 中存储边在前，导出边 ∂⁰_{m₀} 在最后
    """
    surface: SurfaceData
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    polygon: GroupoidWord
    polygon_prefix: GroupoidWord
    v0_tail: GroupoidWord
    edge_index: Dict[str, int] = field(compare=False, default_factory=dict)
    vertex_index: Dict[str, int] = field(compare=False, default_factory=dict)

    @property
    def stored(self) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if not e.derived)

    @property
    def derived(self) -> Edge:
        return self.edges[-1]

    @property
    def n_stored(self) -> int:
        return len(self.stored)

    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise WordError(f"箭图中没有边 '{name}'")

    def boundary_edges(self, j: int) -> List[str]:
        return [e.name for e in self.edges if e.kind == 'boundary' and e.boundary == j]

    def boundary_loop(self, j: int) -> GroupoidWord:
        """以 β^j_1 为基点绕 V_j 一圈：∂^j_m ⋯ ∂^j_1"""
        return GroupoidWord(tuple((name, 1) for name in reversed(self.boundary_edges(j))))

    def __repr__(self) -> str:
        return f"Quiver({self.surface.describe()}, vertices={len(self.vertices)}, stored={self.n_stored})"


def build_quiver(surface: SurfaceData) -> Quiver:
    """
    构造箭图与多边形边界字
    ∂P = Π_j (γ^j)⁻¹(∂^j_{m_j}⋯∂^j_1)γ^j · Π_k a^k b^k (a^k)⁻¹ (b^k)⁻¹ · ∂⁰_{m₀}⋯∂⁰_1
    """
    vertices = [vertex_name(j, lam + 1) for j, m in enumerate(surface.boundaries) for lam in range(m)]
    origin = vertex_name(0, 1)
    edges: List[Edge] = []
    for j in range(1, surface.r + 1):
        edges.append(Edge(f"γ{j}", 'gamma', vertex_name(j, 1), origin, boundary=j, index=j))
    for j in range(1, surface.r + 1):
        m = surface.boundaries[j]
        for lam in range(1, m + 1):
            edges.append(Edge(f"∂{j}.{lam}", 'boundary', vertex_name(j, lam % m + 1), vertex_name(j, lam),
                              boundary=j, index=lam))
    for k in range(1, surface.genus + 1):
        edges.append(Edge(f"a{k}", 'a', origin, origin, index=k))
        edges.append(Edge(f"b{k}", 'b', origin, origin, index=k))
    m0 = surface.boundaries[0]
    for lam in range(1, m0 + 1):
        edges.append(Edge(f"∂0.{lam}", 'boundary', vertex_name(0, lam % m0 + 1), vertex_name(0, lam),
                          boundary=0, index=lam, derived=(lam == m0)))

    prefix: List[Tuple[str, int]] = []
    for j in range(1, surface.r + 1):
        m = surface.boundaries[j]
        prefix.append((f"γ{j}", -1))
        prefix.extend((f"∂{j}.{lam}", 1) for lam in range(m, 0, -1))
        prefix.append((f"γ{j}", 1))
    for k in range(1, surface.genus + 1):
        prefix.extend([(f"a{k}", 1), (f"b{k}", 1), (f"a{k}", -1), (f"b{k}", -1)])
    tail = [(f"∂0.{lam}", 1) for lam in range(m0 - 1, 0, -1)]
    polygon = GroupoidWord(tuple(prefix) + ((f"∂0.{m0}", 1),) + tuple(tail))

    stored = [e for e in edges if not e.derived]
    quiver = Quiver(surface, tuple(vertices), tuple(edges), polygon, GroupoidWord(tuple(prefix)),
                    GroupoidWord(tuple(tail)),
                    edge_index={e.name: i for i, e in enumerate(stored)},
                    vertex_index={v: i for i, v in enumerate(vertices)})
    polygon.endpoints(quiver)
    return quiver


def _fold(quiver: Quiver, word: GroupoidWord, lookup: Callable[[str], T],
          mul: Callable[[T, T], T], inv: Callable[[T], T], unit: Callable[[], T]) -> T:
    """按范畴顺序求字的值，导出边经多边形关系求得"""
    word.endpoints(quiver)

    def value(name: str) -> T:
        if name != quiver.derived.name:
            return lookup(name)
        # ρ(∂⁰_{m₀}) = eval(前缀)⁻¹ · eval(尾部)⁻¹
        head = _fold(quiver, quiver.polygon_prefix, lookup, mul, inv, unit)
        tail = _fold(quiver, quiver.v0_tail, lookup, mul, inv, unit)
        return mul(inv(head), inv(tail))

    result = None
    for name, exp in word.steps:
        x = value(name)
        x = x if exp == 1 else inv(x)
        result = x if result is None else mul(result, x)
    return unit() if result is None else result


@dataclass(frozen=True, eq=False)
class Representation:
    """自由群胚的表示：每条存储边上的群元素，按 quiver.stored 的顺序堆叠"""
    quiver: Quiver
    group: GroupBase
    values: np.ndarray

    def __post_init__(self):
        length = self.values.shape[0] if self.values.ndim else 0
        if length != self.quiver.n_stored:
            raise IndexMismatchError(f"表示应有 {self.quiver.n_stored} 个边值，实际 {length} 个")

    @classmethod
    def identity(cls, quiver: Quiver, group: GroupBase) -> 'Representation':
        return cls(quiver, group, group.identity(quiver.n_stored))

    @classmethod
    def random(cls, quiver: Quiver, group: GroupBase, rng: np.random.Generator) -> 'Representation':
        return cls(quiver, group, group.random_elements(rng, quiver.n_stored))

    def value(self, name: str) -> np.ndarray:
        """单条边（含导出边）上的群元素"""
        return eval_word(self, GroupoidWord.generator(name))

    def as_dict(self) -> Dict[str, np.ndarray]:
        result = {e.name: component(self.group, self.values, i) for i, e in enumerate(self.quiver.stored)}
        result[self.quiver.derived.name] = self.value(self.quiver.derived.name)
        return result


def eval_word(rho: Representation, word: GroupoidWord) -> np.ndarray:
    """
    函子式求值 eval(w₁w₂) = eval(w₁)·eval(w₂)
    :raises WordError: 字不可复合或含未知边
    """
    group = rho.group
    return _fold(rho.quiver, word,
                 lambda name: component(group, rho.values, rho.quiver.edge_index[name]),
                 group.mul, group.inv, lambda: group.identity(1)[0])


def eval_word_jet(quiver: Quiver, jet: Jet, word: GroupoidWord) -> Jet:
    """在存储边的 Jet 上求字的值（同时得到切向量）"""
    batch = jet_batch(jet)
    return _fold(quiver, word, lambda name: jet.select([quiver.edge_index[name]]),
                 lambda x, y: x * y, lambda x: x.inverse(),
                 lambda: Jet.constant(jet.group, jet.group.identity(1), batch))


def _cycle_product(hs: Sequence[Jet]) -> Jet:
    partial = hs[0]
    for h in hs[1:]:
        partial = h * partial
    return partial


def rep_space(surface: SurfaceData, group: GroupBase, name: Optional[str] = None) -> QHamSpace:
    """
    表示簇 Hom(Π₁(X, β), G) 上的准哈密顿 G^β 结构
    每个边界 j ≥ 1 一个双空间 D^(j)，每个环柄一个融合双空间，沿 β0 左结合融合，
    再把各边界分量细分为给定个数的基点
    """
    trivial = Bitorsor.trivial(group, 1, name="G")
    space: Optional[QHamSpace] = None
    for j in range(1, surface.r + 1):
        piece = double(trivial, trivial, names=(slot_name(j), slot_name(0)), labels=(f"γ{j}", f"c{j}"),
                       name=f"D({j})")
        space = piece if space is None else fuse(space, piece, slot_name(0), slot_name(0))
    for k in range(1, surface.genus + 1):
        piece = fused_double(trivial, trivial, slot_name=slot_name(0), labels=(f"a{k}", f"b{k}"),
                             name=f"𝔻({k})")
        space = piece if space is None else fuse(space, piece, slot_name(0), slot_name(0))
    if space is None:
        space = point_space(group, slot_name(0), 1)
    for j in range(1, surface.r + 1):
        space = split_boundary(space, slot_name(j), surface.boundaries[j])
    space = split_boundary(space, slot_name(0), surface.boundaries[0])
    return QHamSpace(group, space.labels, space.slots, space.mu_fn, space.act_fn, space.omega_fn,
                     space.gamma, space.tangent_projector, space.point_sampler,
                     name or f"M{surface.describe()}")


def rep_to_point_jet(quiver: Quiver, jet: Jet) -> Jet:
    """
    边标号 → 融合空间坐标
    (γ^j, (γ^j)⁻¹H_j⁻¹)_j, (a^k, b^k)_k, (∂^j_λ)_{λ<m_j}, (∂⁰_λ)_{λ<m₀}，H_j 为绕 V_j 的环路
    """
    surface = quiver.surface
    group = jet.group

    def edge(name: str) -> Jet:
        return jet.select([quiver.edge_index[name]])

    parts: List[Jet] = []
    for j in range(1, surface.r + 1):
        c = edge(f"γ{j}")
        loop = eval_word_jet(quiver, jet, quiver.boundary_loop(j))
        parts += [c, c.inverse() * loop.inverse()]
    for k in range(1, surface.genus + 1):
        parts += [edge(f"a{k}"), edge(f"b{k}")]
    for j in range(1, surface.r + 1):
        parts += [edge(f"∂{j}.{lam}") for lam in range(1, surface.boundaries[j])]
    parts += [edge(f"∂0.{lam}") for lam in range(1, surface.boundaries[0])]
    if not parts:
        return Jet.constant(group, group.identity(0), jet_batch(jet))
    return Jet.concat(parts)


def point_to_rep_jet(quiver: Quiver, jet: Jet) -> Jet:
    """融合空间坐标 → 边标号（rep_to_point_jet 的逆）"""
    surface = quiver.surface
    values: Dict[str, Jet] = {}
    position = 0

    def take() -> Jet:
        nonlocal position
        x = jet.select([position])
        position += 1
        return x

    loops: Dict[int, Jet] = {}
    for j in range(1, surface.r + 1):
        c, d = take(), take()
        values[f"γ{j}"] = c
        loops[j] = (c * d).inverse()
    for k in range(1, surface.genus + 1):
        values[f"a{k}"], values[f"b{k}"] = take(), take()
    for j in range(1, surface.r + 1):
        m = surface.boundaries[j]
        hs = [take() for _ in range(m - 1)]
        for lam, h in enumerate(hs, start=1):
            values[f"∂{j}.{lam}"] = h
        values[f"∂{j}.{m}"] = loops[j] * _cycle_product(hs).inverse() if hs else loops[j]
    for lam in range(1, surface.boundaries[0]):
        values[f"∂0.{lam}"] = take()
    if position != jet.size:
        raise IndexMismatchError(f"坐标数 {jet.size} 与箭图不符（应为 {position}）")
    if not values:
        return Jet.constant(jet.group, jet.group.identity(0), jet_batch(jet))
    return Jet.concat([values[e.name] for e in quiver.stored])


def rep_to_point(rho: Representation) -> np.ndarray:
    return rep_to_point_jet(rho.quiver, Jet.constant(rho.group, rho.values, 0)).point


def point_to_rep(quiver: Quiver, group: GroupBase, p: np.ndarray) -> Representation:
    return Representation(quiver, group, point_to_rep_jet(quiver, Jet.constant(group, p, 0)).point)


def boundary_monodromies(rho: Representation) -> Dict[str, np.ndarray]:
    """
    每个基点处的边界和乐 μ(b^j_λ) = ρ(∂^j_λ)⁻¹，按边界分量分组
    规范变换下满足扭曲作用 (h·g)(b_λ) = h(b_λ)g(b_{λ+1})
    """
    group = rho.group
    result = {}
    for j in range(len(rho.quiver.surface.boundaries)):
        parts = [group.inv(rho.value(name)) for name in rho.quiver.boundary_edges(j)]
        result[slot_name(j)] = stack_components(group, parts)
    return result


def gauge_act_rep(rho: Representation, g: np.ndarray) -> Representation:
    """
    G^β 在表示上的作用 ρ(e) ↦ g(s(e))·ρ(e)·g(t(e))⁻¹
    :param g: 按 quiver.vertices 顺序的群元素
    """
    quiver, group = rho.quiver, rho.group
    if (g.shape[0] if g.ndim else 0) != len(quiver.vertices):
        raise IndexMismatchError(f"规范变换应有 {len(quiver.vertices)} 个分量")
    parts = []
    for i, e in enumerate(quiver.stored):
        gs = component(group, g, quiver.vertex_index[e.source])
        gt = component(group, g, quiver.vertex_index[e.target])
        parts.append(group.mul(group.mul(gs, component(group, rho.values, i)), group.inv(gt)))
    return Representation(quiver, group, stack_components(group, parts))


def gauge_to_structure(quiver: Quiver, space: QHamSpace, g: np.ndarray) -> np.ndarray:
    """把按基点排列的规范变换重排为 space 结构群分量的顺序"""
    group = space.group
    parts = []
    for s in space.slots:
        j = int(s.name[1:])
        parts += [component(group, g, quiver.vertex_index[vertex_name(j, lam + 1)]) for lam in range(s.size)]
    return stack_components(group, parts)


# ---- 检验 ----

def random_edge_jet(quiver: Quiver, group: GroupBase, rng: np.random.Generator, batch: int = 3) -> Jet:
    """随机表示及其边上的随机左平凡化切向量"""
    point = group.random_elements(rng, quiver.n_stored)
    if group.is_finite:
        return Jet(group, point)
    return Jet(group, point, group.random_algebra(rng, (batch, quiver.n_stored)))


def verify_rep_chart(surface: SurfaceData, group: GroupBase, rng: np.random.Generator, samples: int = 20,
                     tol: float = 1e-10, seed: int = 0) -> List[VerificationReport]:
    """
    边标号与融合空间坐标的相容性：
    坐标变换互逆、G^β 作用与结构群作用一致、μ 等于边界和乐
    """
    quiver = build_quiver(surface)
    space = rep_space(surface, group)
    chart, gauge, moment = [], [], []
    for _ in range(samples):
        rho = Representation.random(quiver, group, rng)
        p = rep_to_point(rho)
        chart.append(group.distance(point_to_rep(quiver, group, p).values, rho.values))
        g = group.random_elements(rng, len(quiver.vertices))
        moved = rep_to_point(gauge_act_rep(rho, g))
        gauge.append(group.distance(moved, space.act(gauge_to_structure(quiver, space, g), p)))
        expected = boundary_monodromies(rho)
        found = space.mu_components(p)
        moment.append(max(group.distance(found[name], expected[name]) for name in expected))
    limit = 0.0 if group.is_finite else tol
    return [VerificationReport.from_residuals('rep_chart', chart, limit, seed),
            VerificationReport.from_residuals('rep_gauge', gauge, limit, seed),
            VerificationReport.from_residuals('rep_moment', moment, limit, seed)]


def match_generalized_double(surface: SurfaceData, group: GroupBase, rng: np.random.Generator,
                             samples: int = 100, tol: float = 1e-10, seed: int = 0) -> VerificationReport:
    """
    亏格 0、两个边界分量时，rep_space 与广义双空间 (m∞, m₀) 在对应点上的 ω 与 μ 之差
    广义双空间的坐标恰为存储边 (γ¹, ∂¹_λ, ∂⁰_λ)
    """
    if surface.genus != 0 or surface.r != 1:
        raise ConfigError(f"只有环形区域（亏格 0、两个边界分量）能与广义双空间比较，实际为 {surface.describe()}",
                          field="construction.surface")
    quiver = build_quiver(surface)
    space = rep_space(surface, group)
    gd = generalized_double(group, surface.boundaries[1], surface.boundaries[0])
    residuals = []
    for _ in range(samples):
        jet = random_edge_jet(quiver, group, rng)
        chart = rep_to_point_jet(quiver, jet)
        mu = group.distance(space.mu_fn(chart).point, gd.mu_fn(jet).point)
        omega = 0.0
        if not group.is_finite:
            omega = float(np.max(np.abs(space.omega_fn(chart) - gd.omega_fn(jet))))
        residuals.append(max(mu, omega))
    return VerificationReport.from_residuals('gd_match', residuals, 0.0 if group.is_finite else tol, seed,
                                             m_inf=surface.boundaries[1], m_zero=surface.boundaries[0])


def verify_polygon_relation(surface: SurfaceData, group: GroupBase, rng: np.random.Generator,
                            samples: int = 20, tol: float = 1e-10, seed: int = 0) -> VerificationReport:
    """导出边按多边形关系补全后，∂P 的取值为单位元"""
    quiver = build_quiver(surface)
    unit = group.identity(1)[0]
    residuals = [group.distance(eval_word(Representation.random(quiver, group, rng), quiver.polygon), unit)
                 for _ in range(samples)]
    return VerificationReport.from_residuals('polygon_relation', residuals, 0.0 if group.is_finite else tol,
                                             seed)
