﻿"""
有限群模块
以 Cayley 表表示的有限群、有限群自同构，以及有限群 Γ 到 Aut(G) 的作用
"""

import json
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import CompatibilityError, ConfigError
from src.core.liegroup import Automorphism, GroupBase


class FiniteGroup(GroupBase):
    """元素编号为 0..|G|-1 的有限群"""

    def __init__(self, elements: Sequence[str], table: Sequence[Sequence[int]], name: str = "G"):
        """
        :param elements: 元素名称
        :param table: 乘法表，table[a][b] = a·b 的编号
        :param name: 群名称
        """
        self.elements = tuple(str(e) for e in elements)
        self.table = np.asarray(table, dtype=np.int64)
        self.name = name
        self.order = len(self.elements)
        self._validate()
        self.identity_index = self._find_identity()
        self.inverses = np.array([int(np.where(self.table[a] == self.identity_index)[0][0])
                                  for a in range(self.order)], dtype=np.int64)

    def _validate(self):
        """校验乘法表：形状、取值、结合律、单位元与逆元"""
        n = self.order
        if self.table.shape != (n, n):
            raise CompatibilityError(f"乘法表形状应为 ({n}, {n})，实际为 {self.table.shape}")
        if self.table.min() < 0 or self.table.max() >= n:
            raise CompatibilityError("乘法表含越界编号")
        left = self.table[self.table, :]            # (a·b)·c 按 [a, b, c]
        right = self.table[:, self.table]           # a·(b·c) 按 [a, b, c]
        if not np.array_equal(left, right):
            raise CompatibilityError("乘法表不满足结合律")
        for row in self.table:
            if len(set(row.tolist())) != n:
                raise CompatibilityError("乘法表的行不是置换，存在不可逆元素")

    def _find_identity(self) -> int:
        for e in range(self.order):
            if np.array_equal(self.table[e], np.arange(self.order)):
                return e
        raise CompatibilityError("乘法表没有单位元")

    @classmethod
    def cyclic(cls, m: int) -> 'FiniteGroup':
        """循环群 Z/m"""
        if m < 1:
            raise CompatibilityError(f"循环群的阶必须为正: {m}")
        table = [[(a + b) % m for b in range(m)] for a in range(m)]
        return cls([str(a) for a in range(m)], table, name=f"Z/{m}")

    @classmethod
    def symmetric3(cls) -> 'FiniteGroup':
        """对称群 S₃，元素为 {0,1,2} 的置换"""
        perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
        index = {p: i for i, p in enumerate(perms)}
        # (p·q)(x) = p(q(x))
        table = [[index[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms]
        return cls([''.join(map(str, p)) for p in perms], table, name="S3")

    def get_name(self) -> str:
        return self.name

    @property
    def is_finite(self) -> bool:
        return True

    def identity(self, k: int) -> np.ndarray:
        return np.full(k, self.identity_index, dtype=np.int64)

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.table[x, y]

    def inv(self, x: np.ndarray) -> np.ndarray:
        return self.inverses[x]

    def random_elements(self, rng: np.random.Generator, k: int) -> np.ndarray:
        return rng.integers(0, self.order, size=k)

    def distance(self, x: np.ndarray, y: np.ndarray) -> float:
        return 0.0 if np.array_equal(np.asarray(x), np.asarray(y)) else 1.0

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity_index:
            x = int(self.table[x, a])
            k += 1
        return k

    def generated_subgroup(self, generators: Sequence[int]) -> List[int]:
        """生成子群（闭包）"""
        members = {self.identity_index}
        frontier = list(members)
        while frontier:
            x = frontier.pop()
            for g in generators:
                y = int(self.table[x, g])
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        return sorted(members)

    def power(self, a: int, k: int) -> int:
        x = self.identity_index
        base = a if k >= 0 else int(self.inverses[a])
        for _ in range(abs(k)):
            x = int(self.table[x, base])
        return x

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


class FiniteAutomorphism(Automorphism):
    """有限群自同构，以像表表示"""

    def __init__(self, group: FiniteGroup, images: Sequence[int], order: Optional[int] = None):
        self.group = group
        self.images = np.asarray(images, dtype=np.int64)
        if sorted(self.images.tolist()) != list(range(group.order)):
            raise CompatibilityError("自同构的像表不是置换")
        table = group.table
        if not np.array_equal(self.images[table], table[self.images[:, None], self.images[None, :]]):
            raise CompatibilityError("像表不是群同态")
        self.order = order if order is not None else self._infer_order()

    @classmethod
    def identity(cls, group: FiniteGroup) -> 'FiniteAutomorphism':
        return cls(group, list(range(group.order)), order=1)

    @classmethod
    def conjugation(cls, group: FiniteGroup, c: int) -> 'FiniteAutomorphism':
        """内自同构 x ↦ c x c⁻¹"""
        images = [int(group.table[group.table[c, x], group.inverses[c]]) for x in range(group.order)]
        return cls(group, images)

    def identity_like(self) -> 'FiniteAutomorphism':
        return FiniteAutomorphism.identity(self.group)

    def _infer_order(self) -> int:
        x = self.images.copy()
        k = 1
        while not np.array_equal(x, np.arange(self.group.order)):
            x = self.images[x]
            k += 1
        return k

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.images[x]

    def apply_tangent(self, v: np.ndarray) -> np.ndarray:
        raise CompatibilityError("有限群没有李代数")

    def compose(self, other: 'FiniteAutomorphism') -> 'FiniteAutomorphism':
        return FiniteAutomorphism(self.group, self.images[other.images])

    def inverse(self) -> 'FiniteAutomorphism':
        return FiniteAutomorphism(self.group, np.argsort(self.images), order=self.order)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.group.order)))

    def __repr__(self) -> str:
        return f"FiniteAutomorphism({self.images.tolist()})"


class AutomorphismAction:
    """
    有限群 Γ 经由同态 Γ → Aut(G) 在 G 上的左作用
    auts[φ] 为 φ 对应的自同构
    """

    def __init__(self, gamma: FiniteGroup, auts: Sequence[Automorphism]):
        if len(auts) != gamma.order:
            raise CompatibilityError(f"需要 {gamma.order} 个自同构，实际 {len(auts)} 个")
        self.gamma = gamma
        self.auts = tuple(auts)

    @classmethod
    def trivial(cls, gamma: FiniteGroup, group: GroupBase) -> 'AutomorphismAction':
        from src.core.liegroup import MatrixAutomorphism
        ident = (FiniteAutomorphism.identity(group) if group.is_finite
                 else MatrixAutomorphism.identity(group))
        return cls(gamma, [ident] * gamma.order)

    @classmethod
    def cyclic(cls, gamma: FiniteGroup, generator: Automorphism) -> 'AutomorphismAction':
        """
        Z/m 由生成元 1 ↦ κ 决定的作用
        :param gamma: 循环群 Z/m（元素 l 对应 κ^l）
        :param generator: κ，其阶必须整除 m
        """
        m = gamma.order
        if m % generator.order != 0:
            raise CompatibilityError(f"自同构的阶 {generator.order} 不整除 |Γ| = {m}")
        return cls(gamma, [generator.power(l) for l in range(m)])

    def __call__(self, phi: int) -> Automorphism:
        return self.auts[phi]

    def homomorphism_residual(self, rng: np.random.Generator, panel: int = 16) -> float:
        """检验 κ_{φψ} = κ_φ ∘ κ_ψ"""
        group = self.auts[0].group
        worst = 0.0
        x = group.random_elements(rng, panel)
        for phi in range(self.gamma.order):
            for psi in range(self.gamma.order):
                lhs = self.auts[int(self.gamma.table[phi, psi])].apply(x)
                rhs = self.auts[phi].apply(self.auts[psi].apply(x))
                worst = max(worst, group.distance(lhs, rhs))
        return worst


def load_cayley_table(filepath: str) -> Tuple[FiniteGroup, List[List[int]]]:
    """
    从 JSON 文件读取 Cayley 表
    格式：{"elements": [...], "table": [[...]], "gamma_images": [[...]]}
    :param filepath: 文件路径
    :return: (有限群, Γ 各元素对应的像表列表)
    """
    try:
        with open(filepath, 'r', encoding='utf-8-sig') as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"无法读取 Cayley 表文件 {filepath}: {e}", field="group.table")
    except json.JSONDecodeError as e:
        raise ConfigError(f"Cayley 表不是合法 JSON: {e}", field="group.table")
    for key in ('elements', 'table'):
        if key not in data:
            raise ConfigError(f"Cayley 表缺少字段 '{key}'", field=f"group.table.{key}")
    name = data.get('name', filepath.replace('\\', '/').rsplit('/', 1)[-1].split('.')[0])
    try:
        group = FiniteGroup(data['elements'], data['table'], name=name)
    except CompatibilityError as e:
        raise ConfigError(str(e), field="group.table")
    images = data.get('gamma_images', [])
    return group, [list(map(int, row)) for row in images]


def cyclic_generator_order(gamma: FiniteGroup, values: Sequence[int]) -> bool:
    """Z/m 中一组元素是否生成整个群"""
    if not values:
        return gamma.order == 1
    return math.gcd(gamma.order, *[int(v) for v in values]) == 1
