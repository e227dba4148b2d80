﻿"""
覆叠模块
由分类同态 Q_Y → Γ 给出的自由 Γ 作用覆叠：提升箭图、表示上的 Γ 作用、单值表示 mon_{Y,I}、
扭曲表示、不动表示与扭曲表示之间的双射，以及有限群上的穷举检验
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from src.core.bitorsor import ENUMERATION_GUARD, component, index_axis, stack_components
from src.core.errors import CompatibilityError, ConfigError, IndexMismatchError, ResourceGuardError
from src.core.finite_group import AutomorphismAction, FiniteGroup
from src.core.liegroup import GroupBase
from src.core.report import VerificationReport
from src.core.surface import GroupoidWord, Quiver, SurfaceData, build_quiver

# 固定性判定容差（矩阵群）
FIXED_REP_TOL = 1e-10
# 穷举时每个分块的元组数
ENUMERATION_CHUNK = 1 << 18


@dataclass(frozen=True, eq=False)
class CoveringSpec:
    """
    覆叠数据：底曲面 Y、有限群 Γ、Q_Y 存储边上的分类同态以及 Γ → Aut(G)
    derived_hom 缺省时由多边形关系导出
    """
    base: SurfaceData
    gamma: FiniteGroup
    classifying_hom: Dict[str, int]
    action: AutomorphismAction
    derived_hom: Optional[int] = None

    def __post_init__(self):
        if not self.gamma.is_abelian():
            raise CompatibilityError(f"覆叠构造只支持交换群 Γ，{self.gamma.get_name()} 不是交换群")
        if self.action.gamma != self.gamma:
            raise CompatibilityError("Γ → Aut(G) 的定义域与 Γ 不一致")
        quiver = build_quiver(self.base)
        names = {e.name for e in quiver.stored}
        hom = {}
        for name, value in self.classifying_hom.items():
            if name == quiver.derived.name:
                object.__setattr__(self, 'derived_hom', int(value) % self.gamma.order)
                continue
            if name not in names:
                raise ConfigError(f"分类同态中的边 '{name}' 不在 Q_Y 中，可用 {sorted(names)}",
                                  field=f"construction.hom.{name}")
            hom[name] = int(value) % self.gamma.order
        object.__setattr__(self, 'classifying_hom', {e.name: hom.get(e.name, self.gamma.identity_index)
                                                     for e in quiver.stored})


@dataclass(frozen=True)
class RepresentativeChoice:
    """每个底基点选定的提升层 I，缺省全部取单位元所在的层"""
    sheets: Tuple[int, ...]

    @classmethod
    def default(cls, quiver: Quiver, gamma: FiniteGroup) -> 'RepresentativeChoice':
        return cls(tuple([gamma.identity_index] * len(quiver.vertices)))

    def sheet(self, quiver: Quiver, vertex: str) -> int:
        return self.sheets[quiver.vertex_index[vertex]]


@dataclass(frozen=True)
class BoundaryLift:
    """底边界 V_j 的原像：圆周个数、每个圆周上的基点数与稳定子"""
    boundary: int
    loop_hom: int
    circles: int
    points_per_circle: int
    stabilizer_order: int
    stabilizer_cyclic: bool
    sheets: int

    @property
    def orbit_stabilizer_ok(self) -> bool:
        return self.circles * self.stabilizer_order == self.sheets


@dataclass(eq=False)
class LiftedQuiver:
    """
    覆叠 X 的箭图：顶点 (v, s)、边 (e, s)，下标分别为 v·m + s 与 e·m + s
    (e, s) 从 (s(e), s) 出发，终点为 (t(e), hom(e)·s)；Γ 在层上右作用 (v, s)·φ = (v, sφ)
    """
    spec: CoveringSpec
    quiver: Quiver
    hom: Dict[str, int]
    sources: np.ndarray
    targets: np.ndarray
    deck_perms: Tuple[np.ndarray, ...] = field(default=())

    @property
    def gamma(self) -> FiniteGroup:
        return self.spec.gamma

    @property
    def sheets(self) -> int:
        return self.spec.gamma.order

    @property
    def n_edges(self) -> int:
        return self.quiver.n_stored * self.sheets

    @property
    def n_vertices(self) -> int:
        return len(self.quiver.vertices) * self.sheets

    def lift_index(self, name: str, sheet: int) -> int:
        return self.quiver.edge_index[name] * self.sheets + sheet

    def target_sheet(self, name: str, sheet: int) -> int:
        return int(self.gamma.table[self.hom[name], sheet])

    def word_hom(self, word: GroupoidWord) -> int:
        """从层 s 提升 word 后到达 h·s，返回 h"""
        table, inverses = self.gamma.table, self.gamma.inverses
        h = self.gamma.identity_index
        for name, exp in word.steps:
            step = self.hom[name] if exp == 1 else int(inverses[self.hom[name]])
            h = int(table[step, h])
        return h

    def polygon_closes(self) -> bool:
        return self.word_hom(self.quiver.polygon) == self.gamma.identity_index

    def components(self) -> int:
        """覆叠的连通分支数"""
        sources, targets = list(self.sources), list(self.targets)
        derived = self.quiver.derived
        m = self.sheets
        for s in range(m):
            sources.append(self.quiver.vertex_index[derived.source] * m + s)
            targets.append(self.quiver.vertex_index[derived.target] * m + self.target_sheet(derived.name, s))
        graph = csr_matrix((np.ones(len(sources)), (sources, targets)), shape=(self.n_vertices, self.n_vertices))
        count, _ = connected_components(graph, directed=True, connection='weak')
        return int(count)

    def deck_is_free(self) -> bool:
        """非平凡 φ 不固定任何顶点或边"""
        identity = self.gamma.identity_index
        return all(not np.any(perm == np.arange(self.n_edges))
                   for phi, perm in enumerate(self.deck_perms) if phi != identity)


def build_cover(spec: CoveringSpec) -> LiftedQuiver:
    """由分类同态构造提升箭图"""
    quiver = build_quiver(spec.base)
    gamma = spec.gamma
    m = gamma.order
    hom = dict(spec.classifying_hom)
    # 多边形关系：hom(尾部)·hom(∂⁰_{m₀})·hom(前缀) = 1
    probe = LiftedQuiver(spec, quiver, {**hom, quiver.derived.name: gamma.identity_index},
                         np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    head, tail = probe.word_hom(quiver.polygon_prefix), probe.word_hom(quiver.v0_tail)
    forced = int(gamma.table[gamma.inverses[tail], gamma.inverses[head]])
    hom[quiver.derived.name] = forced if spec.derived_hom is None else spec.derived_hom

    sources, targets = [], []
    for e in quiver.stored:
        for s in range(m):
            sources.append(quiver.vertex_index[e.source] * m + s)
            targets.append(quiver.vertex_index[e.target] * m + int(gamma.table[hom[e.name], s]))
    deck_perms = []
    for phi in range(m):
        perm = [i * m + int(gamma.table[s, phi]) for i in range(quiver.n_stored) for s in range(m)]
        deck_perms.append(np.asarray(perm, dtype=np.int64))
    return LiftedQuiver(spec, quiver, hom, np.asarray(sources, dtype=np.int64),
                        np.asarray(targets, dtype=np.int64), tuple(deck_perms))


def boundary_lifts(lifted: LiftedQuiver) -> List[BoundaryLift]:
    """
    每个底边界分量上方的圆周结构：由提升的边界边求连通分支，
    稳定子为把 (β^j_1, 1) 所在圆周映到自身的层平移
    """
    quiver, gamma, m = lifted.quiver, lifted.gamma, lifted.sheets
    result = []
    for j, count in enumerate(quiver.surface.boundaries):
        local = {quiver.vertex_index[f"β{j}.{lam + 1}"]: lam for lam in range(count)}
        sources, targets = [], []
        for name in quiver.boundary_edges(j):
            e = quiver.edge(name)
            for s in range(m):
                sources.append(local[quiver.vertex_index[e.source]] * m + s)
                targets.append(local[quiver.vertex_index[e.target]] * m + lifted.target_sheet(name, s))
        graph = csr_matrix((np.ones(len(sources)), (sources, targets)), shape=(count * m, count * m))
        circles, labels = connected_components(graph, directed=True, connection='weak')
        anchor = labels[gamma.identity_index]
        stabilizer = [phi for phi in range(m) if labels[phi] == anchor]
        loop = lifted.word_hom(quiver.boundary_loop(j))
        result.append(BoundaryLift(j, loop, int(circles), count * m // int(circles), len(stabilizer),
                                   sorted(stabilizer) == sorted(gamma.generated_subgroup([loop])), m))
    return result


# ---- Γ 作用 ----

def _take(group: GroupBase, values: np.ndarray, idx: np.ndarray) -> np.ndarray:
    return np.take(values, idx, axis=index_axis(group))


def gamma_act_rep(lifted: LiftedQuiver, group: GroupBase, phi: int, values: np.ndarray) -> np.ndarray:
    """
    (φ·ρ)(γ̃) = κ_φ(ρ(γ̃·φ))
    :param values: 提升边上的群元素，允许前导批量轴
    """
    return lifted.spec.action(phi).apply(_take(group, values, lifted.deck_perms[phi]))


def gamma_act_gauge(lifted: LiftedQuiver, group: GroupBase, phi: int, g: np.ndarray) -> np.ndarray:
    """(φ·g)(v, s) = κ_φ(g(v, sφ))"""
    m = lifted.sheets
    perm = np.asarray([v * m + int(lifted.gamma.table[s, phi])
                       for v in range(len(lifted.quiver.vertices)) for s in range(m)], dtype=np.int64)
    return lifted.spec.action(phi).apply(_take(group, g, perm))


def gauge_act_lifted(lifted: LiftedQuiver, group: GroupBase, g: np.ndarray, values: np.ndarray) -> np.ndarray:
    """X 上的规范作用 ρ(e) ↦ g(s(e))·ρ(e)·g(t(e))⁻¹"""
    gs, gt = _take(group, g, lifted.sources), _take(group, g, lifted.targets)
    return group.mul(group.mul(gs, values), group.inv(gt))


def fixed_residual(lifted: LiftedQuiver, group: GroupBase, values: np.ndarray) -> float:
    return max(group.distance(gamma_act_rep(lifted, group, phi, values), values) for phi in range(lifted.sheets))


# ---- 单值表示与扭曲表示 ----

def monodromy_rep(lifted: LiftedQuiver, choice: RepresentativeChoice) -> Dict[str, int]:
    """
    mon_{Y,I}(e) = r_{t(e)}⁻¹·hom(e)·r_{s(e)}：从 i(s(e)) 出发的提升终止于 i(t(e))·mon(e)
    """
    gamma, quiver = lifted.gamma, lifted.quiver
    result = {}
    for e in quiver.edges:
        rs, rt = choice.sheet(quiver, e.source), choice.sheet(quiver, e.target)
        result[e.name] = int(gamma.table[gamma.table[gamma.inverses[rt], lifted.hom[e.name]], rs])
    return result


def word_monodromy(lifted: LiftedQuiver, choice: RepresentativeChoice, word: GroupoidWord) -> int:
    """沿提升追踪字：从 i(起点) 出发，终点层为 r_t·φ，返回 φ"""
    quiver, gamma = lifted.quiver, lifted.gamma
    source, target = word.endpoints(quiver)
    end = int(gamma.table[lifted.word_hom(word), choice.sheet(quiver, source)])
    return int(gamma.table[gamma.inverses[choice.sheet(quiver, target)], end])


def _composable_pairs(quiver: Quiver, stored_only: bool) -> List[GroupoidWord]:
    edges = quiver.stored if stored_only else quiver.edges
    steps = [(e, exp) for e in edges for exp in (1, -1)]
    pairs = []
    for e, a in steps:
        end = e.target if a == 1 else e.source
        for f, b in steps:
            start = f.source if b == 1 else f.target
            if end == start:
                pairs.append(GroupoidWord(((e.name, a), (f.name, b))))
    return pairs


def verify_monodromy_hom(lifted: LiftedQuiver, choice: RepresentativeChoice, seed: int = 0) -> VerificationReport:
    """mon(γ₁γ₂) = mon(γ₁)·mon(γ₂)，对全部可复合的生成元对穷举"""
    gamma = lifted.gamma
    mon = monodromy_rep(lifted, choice)
    mismatches = 0
    pairs = _composable_pairs(lifted.quiver, stored_only=False)
    for word in pairs:
        parts = [mon[name] if exp == 1 else int(gamma.inverses[mon[name]]) for name, exp in word.steps]
        if word_monodromy(lifted, choice, word) != int(gamma.table[parts[0], parts[1]]):
            mismatches += 1
    return VerificationReport('monodromy_hom', len(pairs), float(mismatches), 0.0, seed)


def representative_dependence(lifted: LiftedQuiver, first: RepresentativeChoice,
                              second: RepresentativeChoice) -> Dict[str, object]:
    """
    比较两组代表元下的单值表示：mon_J(e) 是否等于 c_t⁻¹·mon_I(e)·c_s，c_v = r_v⁻¹q_v
    只报告观察到的结果
    """
    gamma, quiver = lifted.gamma, lifted.quiver
    mon_i, mon_j = monodromy_rep(lifted, first), monodromy_rep(lifted, second)
    changed = sorted(name for name in mon_i if mon_i[name] != mon_j[name])
    consistent = True
    for e in quiver.edges:
        cs = int(gamma.table[gamma.inverses[first.sheet(quiver, e.source)], second.sheet(quiver, e.source)])
        ct = int(gamma.table[gamma.inverses[first.sheet(quiver, e.target)], second.sheet(quiver, e.target)])
        predicted = int(gamma.table[gamma.table[gamma.inverses[ct], mon_i[e.name]], cs])
        consistent &= predicted == mon_j[e.name]
    return {'changed_edges': changed, 'conjugation_by_constants': bool(consistent)}


@dataclass(eq=False)
class TwistedRepresentation:
    """Γ⋉G 值的群胚同态，Γ 部分等于 mon_{Y,I}"""
    lifted: LiftedQuiver
    choice: RepresentativeChoice
    group: GroupBase
    gamma_parts: np.ndarray
    group_parts: np.ndarray

    def step_value(self, name: str, exp: int) -> Tuple[int, np.ndarray]:
        gamma = self.lifted.gamma
        idx = self.lifted.quiver.edge_index[name]
        phi, g = int(self.gamma_parts[idx]), component(self.group, self.group_parts, idx)
        if exp == 1:
            return phi, g
        return semidirect_inverse(self.lifted.spec.action, gamma, self.group, (phi, g))

    def word_value(self, word: GroupoidWord) -> Tuple[int, np.ndarray]:
        word.endpoints(self.lifted.quiver)
        result = (self.lifted.gamma.identity_index, self.group.identity(1)[0])
        for name, exp in word.steps:
            result = semidirect_mul(self.lifted.spec.action, self.lifted.gamma, self.group,
                                    result, self.step_value(name, exp))
        return result


def semidirect_mul(action: AutomorphismAction, gamma: FiniteGroup, group: GroupBase,
                   x: Tuple[int, np.ndarray], y: Tuple[int, np.ndarray]) -> Tuple[int, np.ndarray]:
    """Γ⋉G 中的乘法 (φ₁, g₁)(φ₂, g₂) = (φ₁φ₂, g₁·κ_{φ₁}⁻¹(g₂))"""
    phi1, g1 = x
    phi2, g2 = y
    return int(gamma.table[phi1, phi2]), group.mul(g1, action(phi1).inverse().apply(g2))


def semidirect_inverse(action: AutomorphismAction, gamma: FiniteGroup, group: GroupBase,
                       x: Tuple[int, np.ndarray]) -> Tuple[int, np.ndarray]:
    phi, g = x
    return int(gamma.inverses[phi]), action(phi).apply(group.inv(g))


def push_fixed_rep(lifted: LiftedQuiver, group: GroupBase, values: np.ndarray,
                   choice: Optional[RepresentativeChoice] = None,
                   tol: float = FIXED_REP_TOL) -> TwistedRepresentation:
    """
    ρ̲_I(γ) = (mon_{Y,I}(γ), ρ(γ̃))，γ̃ 为从 i(s(γ)) 出发的提升
    :raises CompatibilityError: ρ 不是 Γ 不动的
    """
    choice = choice or RepresentativeChoice.default(lifted.quiver, lifted.gamma)
    residual = fixed_residual(lifted, group, values)
    limit = 0.0 if group.is_finite else tol
    if residual > limit:
        raise CompatibilityError(f"表示不是 Γ 不动的（残差 {residual:.3e}）")
    quiver = lifted.quiver
    mon = monodromy_rep(lifted, choice)
    idx = np.asarray([lifted.lift_index(e.name, choice.sheet(quiver, e.source)) for e in quiver.stored],
                     dtype=np.int64)
    gamma_parts = np.asarray([mon[e.name] for e in quiver.stored], dtype=np.int64)
    return TwistedRepresentation(lifted, choice, group, gamma_parts, _take(group, values, idx))


def _lift_columns(lifted: LiftedQuiver, choice: RepresentativeChoice) -> List[Tuple[int, int, int]]:
    """(提升边下标, 底边下标, φ)：ρ(e, r_{s(e)}·φ) = κ_φ⁻¹(g_e)"""
    quiver, gamma, m = lifted.quiver, lifted.gamma, lifted.sheets
    columns = []
    for i, e in enumerate(quiver.stored):
        rs = choice.sheet(quiver, e.source)
        for s in range(m):
            columns.append((i * m + s, i, int(gamma.table[gamma.inverses[rs], s])))
    return columns


def lift_twisted_rep(twisted: TwistedRepresentation) -> np.ndarray:
    """
    扭曲表示的提升，结果是 Γ 不动的
    :raises CompatibilityError: Γ 部分与 mon_{Y,I} 不一致
    """
    lifted, group = twisted.lifted, twisted.group
    mon = monodromy_rep(lifted, twisted.choice)
    expected = np.asarray([mon[e.name] for e in lifted.quiver.stored], dtype=np.int64)
    if not np.array_equal(np.asarray(twisted.gamma_parts), expected):
        raise CompatibilityError("扭曲表示的 Γ 部分与 mon_{Y,I} 不一致")
    parts = [lifted.spec.action(phi).inverse().apply(component(group, twisted.group_parts, base))
             for _, base, phi in _lift_columns(lifted, twisted.choice)]
    if not parts:
        return group.identity(0)
    return stack_components(group, parts)


def lift_word_value(lifted: LiftedQuiver, group: GroupBase, values: np.ndarray, word: GroupoidWord,
                    start_sheet: int) -> np.ndarray:
    """沿从 start_sheet 出发的提升对 ρ 求值（只含存储边）"""
    gamma = lifted.gamma
    sheet = start_sheet
    result = group.identity(1)[0]
    for name, exp in word.steps:
        if exp == 1:
            value = component(group, values, lifted.lift_index(name, sheet))
            sheet = lifted.target_sheet(name, sheet)
        else:
            sheet = int(gamma.table[gamma.inverses[lifted.hom[name]], sheet])
            value = group.inv(component(group, values, lifted.lift_index(name, sheet)))
        result = group.mul(result, value)
    return result


def verify_push_hom(lifted: LiftedQuiver, group: GroupBase, values: np.ndarray,
                    choice: Optional[RepresentativeChoice] = None, tol: float = 1e-10,
                    seed: int = 0) -> VerificationReport:
    """ρ̲_I(γ₁γ₂) = ρ̲_I(γ₁)ρ̲_I(γ₂)，左端由提升直接求值"""
    choice = choice or RepresentativeChoice.default(lifted.quiver, lifted.gamma)
    twisted = push_fixed_rep(lifted, group, values, choice)
    residuals = []
    for word in _composable_pairs(lifted.quiver, stored_only=True):
        source, _ = word.endpoints(lifted.quiver)
        direct = lift_word_value(lifted, group, values, word, choice.sheet(lifted.quiver, source))
        phi, g = twisted.word_value(word)
        gamma_ok = phi == word_monodromy(lifted, choice, word)
        residuals.append(max(group.distance(direct, g), 0.0 if gamma_ok else 1.0))
    limit = 0.0 if group.is_finite else tol
    return VerificationReport.from_residuals('push_hom', residuals, limit, seed)


def random_fixed_rep(lifted: LiftedQuiver, group: GroupBase, rng: np.random.Generator,
                     choice: Optional[RepresentativeChoice] = None) -> np.ndarray:
    """随机扭曲表示的提升，得到 Γ 不动表示"""
    choice = choice or RepresentativeChoice.default(lifted.quiver, lifted.gamma)
    mon = monodromy_rep(lifted, choice)
    twisted = TwistedRepresentation(lifted, choice, group,
                                    np.asarray([mon[e.name] for e in lifted.quiver.stored], dtype=np.int64),
                                    group.random_elements(rng, lifted.quiver.n_stored))
    return lift_twisted_rep(twisted)


# ---- 有限群穷举 ----

@dataclass
class EnumerationResult:
    """穷举结果：各表示集的大小与推送映射的双射性"""
    hom_x: int
    hom_y: int
    fixed: int
    twisted: int
    injective: bool
    surjective: bool
    roundtrip_mismatches: int
    components: int
    polygon_closes: bool
    boundaries: List[BoundaryLift]

    @property
    def bijection(self) -> bool:
        return self.injective and self.surjective and self.roundtrip_mismatches == 0

    def to_dict(self) -> Dict[str, object]:
        return {
            'hom_x': self.hom_x,
            'hom_y': self.hom_y,
            'fixed': self.fixed,
            'twisted': self.twisted,
            'injective': self.injective,
            'surjective': self.surjective,
            'roundtrip_mismatches': self.roundtrip_mismatches,
            'bijection': self.bijection,
            'components': self.components,
            'polygon_closes': self.polygon_closes,
            'boundaries': [{'boundary': b.boundary, 'loop_hom': b.loop_hom, 'circles': b.circles,
                            'points_per_circle': b.points_per_circle, 'stabilizer_order': b.stabilizer_order,
                            'stabilizer_cyclic': b.stabilizer_cyclic,
                            'orbit_stabilizer_ok': b.orbit_stabilizer_ok} for b in self.boundaries],
        }


def _fixed_mask(lifted: LiftedQuiver, group: FiniteGroup, tuples: np.ndarray) -> np.ndarray:
    mask = np.ones(len(tuples), dtype=bool)
    for phi in range(lifted.sheets):
        mask &= np.all(gamma_act_rep(lifted, group, phi, tuples) == tuples, axis=1)
    return mask


def enumerate_finite(lifted: LiftedQuiver, group: FiniteGroup, choice: Optional[RepresentativeChoice] = None,
                     workers: int = 1) -> EnumerationResult:
    """
    穷举 Hom(Π₁(X), G)^Γ 与 Hom_mon(Π₁(Y), G)，逐元素检验推送映射是双射且与提升互逆
    :param workers: 分块并行的线程数，结果按分块顺序合并
    :raises ResourceGuardError: |G|^{边数} 超过上限
    """
    if not group.is_finite:
        raise CompatibilityError("穷举只适用于有限群")
    choice = choice or RepresentativeChoice.default(lifted.quiver, lifted.gamma)
    order, n_x, n_y = group.order, lifted.n_edges, lifted.quiver.n_stored
    total = order ** n_x
    if total > ENUMERATION_GUARD:
        raise ResourceGuardError(f"穷举规模 {order}^{n_x} = {total} 超过上限 {ENUMERATION_GUARD}")
    shape = (order,) * n_x

    def chunk(start: int) -> np.ndarray:
        codes = np.arange(start, min(start + ENUMERATION_CHUNK, total))
        tuples = np.stack(np.unravel_index(codes, shape), axis=1) if n_x else np.zeros((len(codes), 0), np.int64)
        return tuples[_fixed_mask(lifted, group, tuples)]

    starts = range(0, total, ENUMERATION_CHUNK)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        fixed = np.concatenate(list(pool.map(chunk, starts)), axis=0).astype(np.int64)

    # 推送：取每条底边在代表层上的提升
    quiver = lifted.quiver
    push_idx = np.asarray([lifted.lift_index(e.name, choice.sheet(quiver, e.source)) for e in quiver.stored],
                          dtype=np.int64)
    pushed = fixed[:, push_idx]
    n_twisted = order ** n_y
    codes = np.ravel_multi_index(pushed.T, (order,) * n_y) if n_y else np.zeros(len(pushed), dtype=np.int64)
    distinct = np.unique(codes)
    injective = len(distinct) == len(fixed)
    surjective = len(distinct) == n_twisted

    # 提升全部扭曲表示，检验两个方向的往返
    twisted = np.stack(np.unravel_index(np.arange(n_twisted), (order,) * n_y), axis=1) if n_y \
        else np.zeros((1, 0), dtype=np.int64)
    lifted_reps = np.zeros((len(twisted), n_x), dtype=np.int64)
    for column, base, phi in _lift_columns(lifted, choice):
        lifted_reps[:, column] = lifted.spec.action(phi).inverse().apply(twisted[:, base])
    mismatches = int(np.sum(~_fixed_mask(lifted, group, lifted_reps)))
    mismatches += int(np.sum(np.any(lifted_reps[:, push_idx] != twisted, axis=1)))
    if len(fixed):
        back = lifted_reps[codes]
        mismatches += int(np.sum(np.any(back != fixed, axis=1)))

    return EnumerationResult(total, order ** n_y, len(fixed), n_twisted, bool(injective), bool(surjective),
                             mismatches, lifted.components(), lifted.polygon_closes(), boundary_lifts(lifted))


def bijection_report(result: EnumerationResult, seed: int = 0) -> VerificationReport:
    residual = float(result.roundtrip_mismatches + (not result.injective) + (not result.surjective)
                     + abs(result.fixed - result.twisted))
    return VerificationReport('fixed_twisted_bijection', result.fixed, residual, 0.0, seed,
                              details={'fixed': result.fixed, 'twisted': result.twisted})


def check_roundtrip(lifted: LiftedQuiver, group: GroupBase, rng: np.random.Generator, samples: int = 100,
                    choice: Optional[RepresentativeChoice] = None, tol: float = 1e-12,
                    seed: int = 0) -> VerificationReport:
    """随机扭曲表示上的 push ∘ lift = id 与 lift ∘ push = id"""
    choice = choice or RepresentativeChoice.default(lifted.quiver, lifted.gamma)
    mon = monodromy_rep(lifted, choice)
    gamma_parts = np.asarray([mon[e.name] for e in lifted.quiver.stored], dtype=np.int64)
    residuals = []
    for _ in range(samples):
        twisted = TwistedRepresentation(lifted, choice, group, gamma_parts,
                                        group.random_elements(rng, lifted.quiver.n_stored))
        rho = lift_twisted_rep(twisted)
        back = push_fixed_rep(lifted, group, rho, choice)
        again = lift_twisted_rep(back)
        residuals.append(max(group.distance(back.group_parts, twisted.group_parts),
                             group.distance(again, rho), fixed_residual(lifted, group, rho)))
    limit = 0.0 if group.is_finite else tol
    return VerificationReport.from_residuals('push_lift_roundtrip', residuals, limit, seed)


def check_gamma_action(lifted: LiftedQuiver, group: GroupBase, rng: np.random.Generator, samples: int = 20,
                       tol: float = 1e-12, seed: int = 0) -> VerificationReport:
    """(φψ)·ρ = φ·(ψ·ρ)，以及与规范作用的相容性 φ·(g·ρ) = (φ·g)·(φ·ρ)"""
    gamma = lifted.gamma
    residuals = []
    for _ in range(samples):
        rho = group.random_elements(rng, lifted.n_edges)
        g = group.random_elements(rng, lifted.n_vertices)
        worst = 0.0
        for phi in range(gamma.order):
            moved = gamma_act_rep(lifted, group, phi, rho)
            for psi in range(gamma.order):
                composite = gamma_act_rep(lifted, group, int(gamma.table[phi, psi]), rho)
                worst = max(worst, group.distance(composite,
                                                  gamma_act_rep(lifted, group, phi,
                                                                gamma_act_rep(lifted, group, psi, rho))))
            lhs = gamma_act_rep(lifted, group, phi, gauge_act_lifted(lifted, group, g, rho))
            rhs = gauge_act_lifted(lifted, group, gamma_act_gauge(lifted, group, phi, g), moved)
            worst = max(worst, group.distance(lhs, rhs))
        residuals.append(worst)
    limit = 0.0 if group.is_finite else tol
    return VerificationReport.from_residuals('gamma_action_rep', residuals, limit, seed)


def cyclic_cover(base: SurfaceData, m: int, hom: Dict[str, int], action: AutomorphismAction,
                 derived_hom: Optional[int] = None) -> LiftedQuiver:
    """Γ = Z/m 的覆叠"""
    if action.gamma.order != m:
        raise IndexMismatchError(f"Γ → Aut(G) 的阶 {action.gamma.order} 与 m = {m} 不一致")
    return build_cover(CoveringSpec(base, action.gamma, hom, action, derived_hom))
