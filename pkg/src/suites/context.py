﻿"""
群上下文模块
由运行配置构造基群 G、循环群 Γ 及其在 G 上的作用
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from src.config.run_config import GammaSpec, GroupSpec, RunConfig
from src.core.errors import CompatibilityError, ConfigError
from src.core.finite_group import AutomorphismAction, FiniteAutomorphism, FiniteGroup, load_cayley_table
from src.core.liegroup import Automorphism, GroupBase, MatrixAutomorphism, MatrixGroup, preset_automorphism


@dataclass
class GroupContext:
    """基群、Γ = Z/m、生成元 κ 以及由 κ 生成的作用"""
    group: GroupBase
    gamma: FiniteGroup
    generator: Automorphism
    action: AutomorphismAction

    @property
    def trivial_gamma(self) -> bool:
        return self.gamma.order == 1

    def twist(self) -> Optional[MatrixAutomorphism]:
        """离散回路的扭曲自同构，平凡 Γ 时为 None"""
        if self.trivial_gamma or self.group.is_finite:
            return None
        return self.generator


def build_group(spec: GroupSpec) -> Tuple[GroupBase, List[List[int]]]:
    """
    :param spec: 群配置
    :return: (基群, Cayley 表文件中给出的 Γ 像表)
    """
    if spec.kind == 'finite':
        return load_cayley_table(spec.table)
    if spec.kind == 'cyclic':
        return FiniteGroup.cyclic(spec.order), []
    return MatrixGroup(spec.kind, spec.n, spec.scale), []


def _finite_generator(group: FiniteGroup, spec: GammaSpec, images: List[List[int]]) -> FiniteAutomorphism:
    if spec.images is not None:
        table, path = spec.images, "gamma.images"
    elif spec.generator == 'identity':
        return FiniteAutomorphism.identity(group)
    elif spec.generator == 'inversion':
        if not group.is_abelian():
            raise ConfigError(f"{group.get_name()} 不是交换群，取逆不是自同构", field="gamma.generator")
        table, path = [int(x) for x in group.inverses], "gamma.generator"
    else:
        index = 0 if spec.generator == 'table' else spec.generator
        if not 0 <= index < len(images):
            raise ConfigError(f"Cayley 表文件只有 {len(images)} 个 gamma_images，无法取第 {index} 个",
                              field="gamma.generator")
        table, path = images[index], "gamma.generator"
    try:
        return FiniteAutomorphism(group, table)
    except CompatibilityError as e:
        raise ConfigError(str(e), field=path)


def build_context(config: RunConfig) -> GroupContext:
    """
    :param config: 运行配置
    :return: 群上下文；未配置 Γ 时取平凡群 Z/1
    """
    group, images = build_group(config.group)
    spec = config.gamma or GammaSpec(1)
    gamma = FiniteGroup.cyclic(spec.order)
    if group.is_finite:
        generator = _finite_generator(group, spec, images)
    else:
        try:
            generator = preset_automorphism(group, spec.generator)
        except CompatibilityError as e:
            raise ConfigError(str(e), field="gamma.generator")
    try:
        action = AutomorphismAction.cyclic(gamma, generator)
    except CompatibilityError as e:
        raise ConfigError(str(e), field="gamma.order")
    return GroupContext(group, gamma, generator, action)
