﻿"""
运行配置模块
解析 JSON 运行配置：群、Γ、构造、检验列表、样本数、种子与容差
所有校验错误都以 ConfigError 报告，并指出出错字段的 JSON 路径
"""

import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.core.errors import ConfigError
from src.core.verification import CARTAN_NORMALIZATION, DEFAULT_TOLERANCES

# 各构造支持的检验名称
AXIOM_CHECKS = ('qh1', 'qh2', 'qh3', 'invariance', 'equivariance', 'action',
                'generating_vector', 'mu_differential', 'gamma_compat')
SPACE_CHECKS = AXIOM_CHECKS + ('bitorsor', 'fixed_locus', 'fixed_iso', 'fixed_transitivity', 'averaging',
                               'gd_match')
CONSTRUCTION_CHECKS: Dict[str, Tuple[str, ...]] = {
    'double': SPACE_CHECKS,
    'fused_double': SPACE_CHECKS,
    'generalized_double': AXIOM_CHECKS + ('gd_match',),
    'degenerate': AXIOM_CHECKS,
    'planted': AXIOM_CHECKS,
    'surface': AXIOM_CHECKS + ('rep_chart', 'gd_match', 'polygon_relation'),
    'cover': ('cover_structure', 'monodromy_hom', 'push_hom', 'roundtrip', 'gamma_action', 'enumeration'),
    'loop': ('loop_props', 'loop_variation', 'loop_convergence'),
}
# 有限群上没有切空间，只保留群作用层面的检验
DIFFERENTIAL_CHECKS = ('qh1', 'qh2', 'qh3', 'invariance', 'generating_vector', 'mu_differential', 'gamma_compat')
MATRIX_KINDS = ('su', 'so')
AUTOMORPHISM_PRESETS = ('identity', 'diag', 'outer')

# 缺省值
DEFAULT_SAMPLES = 50
DEFAULT_SEED = 0
DEFAULT_H = 1e-4
DEFAULT_FD_STEP = 1e-5


@dataclass
class GroupSpec:
    """基群：矩阵群 (kind, n, scale)，或由 Cayley 表 / 循环群阶给出的有限群"""
    kind: str
    n: int = 2
    scale: float = 1.0
    table: Optional[str] = None
    order: Optional[int] = None

    @property
    def is_finite(self) -> bool:
        return self.kind in ('finite', 'cyclic')


@dataclass
class GammaSpec:
    """
    Γ = Z/m 及其生成元在 G 上的作用
    矩阵群用预置自同构名；有限群用像表，或 'table' / 下标引用 Cayley 表文件中的 gamma_images
    """
    order: int
    generator: Any = 'identity'
    images: Optional[List[int]] = None


@dataclass
class RunConfig:
    """一次运行的全部配置"""
    name: str
    group: GroupSpec
    construction: Dict[str, Any]
    suites: List[str]
    gamma: Optional[GammaSpec] = None
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    h: float = DEFAULT_H
    fd_step: float = DEFAULT_FD_STEP
    normalization: float = CARTAN_NORMALIZATION
    tolerances: Dict[str, float] = field(default_factory=dict)
    source: Optional[str] = None
    raw: Dict[str, Any] = field(default_factory=dict)

    @property
    def construction_type(self) -> str:
        return self.construction['type']

    def tolerance(self, check: str, default: Optional[float] = None) -> float:
        if check in self.tolerances:
            return self.tolerances[check]
        if check in DEFAULT_TOLERANCES:
            return DEFAULT_TOLERANCES[check]
        return default if default is not None else 1e-10

    def echo(self) -> Dict[str, Any]:
        """写入报告的配置回显（不含文件路径之外的环境信息）"""
        return {
            'name': self.name,
            'group': {k: v for k, v in vars(self.group).items() if v is not None},
            'gamma': None if self.gamma is None else {k: v for k, v in vars(self.gamma).items() if v is not None},
            'construction': self.construction,
            'suites': list(self.suites),
            'samples': self.samples,
            'seed': self.seed,
            'h': self.h,
            'fd_step': self.fd_step,
            'normalization': self.normalization,
            'tolerances': dict(sorted(self.tolerances.items())),
        }


class RunConfigParser:
    """运行配置解析器"""

    @staticmethod
    def parse_from_file(filepath: str) -> RunConfig:
        """
        从 JSON 文件读取运行配置（允许 UTF-8 BOM）
        :param filepath: 配置文件路径
        :return: 运行配置
        """
        try:
            with open(filepath, 'r', encoding='utf-8-sig') as f:
                data = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"配置文件 '{filepath}' 不存在")
        except json.JSONDecodeError as e:
            raise ConfigError(f"配置文件不是合法 JSON: {e}")
        config = RunConfigParser.parse_from_dict(data, base_dir=os.path.dirname(os.path.abspath(filepath)))
        config.source = filepath
        return config

    @staticmethod
    def parse_from_dict(data: Dict[str, Any], base_dir: Optional[str] = None) -> RunConfig:
        """
        从字典解析运行配置
        :param data: 配置字典
        :param base_dir: 相对路径（Cayley 表）的基准目录
        :return: 运行配置
        """
        if not isinstance(data, dict):
            raise ConfigError("配置顶层必须是 JSON 对象")
        group = RunConfigParser._parse_group(_require(data, 'group', dict), base_dir)
        gamma = None
        if data.get('gamma') is not None:
            gamma = RunConfigParser._parse_gamma(_require(data, 'gamma', dict), group)
        construction = RunConfigParser._parse_construction(_require(data, 'construction', dict), group, gamma)
        ctype = construction['type']
        suites = _require(data, 'suites', list)
        if not suites:
            raise ConfigError("至少需要一个检验", field="suites")
        allowed = CONSTRUCTION_CHECKS[ctype]
        for i, name in enumerate(suites):
            if name not in allowed:
                raise ConfigError(f"未知检验 '{name}'，构造 {ctype} 支持 {list(allowed)}", field=f"suites[{i}]")
            if group.is_finite and name in DIFFERENTIAL_CHECKS:
                raise ConfigError(f"检验 '{name}' 需要微分结构，有限群上不可用", field=f"suites[{i}]")
            if name == 'enumeration' and not group.is_finite:
                raise ConfigError("穷举只适用于有限群", field=f"suites[{i}]")
        tolerances = data.get('tolerances', {})
        if not isinstance(tolerances, dict):
            raise ConfigError("必须是对象", field="tolerances")
        for key, value in tolerances.items():
            _positive_number(value, f"tolerances.{key}", allow_zero=True)
        return RunConfig(
            name=str(data.get('name', ctype)),
            group=group,
            construction=construction,
            suites=list(dict.fromkeys(suites)),
            gamma=gamma,
            samples=_positive_int(data.get('samples', DEFAULT_SAMPLES), 'samples'),
            seed=_non_negative_int(data.get('seed', DEFAULT_SEED), 'seed'),
            h=_positive_number(data.get('h', DEFAULT_H), 'h'),
            fd_step=_positive_number(data.get('fd_step', DEFAULT_FD_STEP), 'fd_step'),
            normalization=_positive_number(data.get('normalization', CARTAN_NORMALIZATION), 'normalization'),
            tolerances={k: float(v) for k, v in tolerances.items()},
            raw=data,
        )

    @staticmethod
    def _parse_group(data: Dict[str, Any], base_dir: Optional[str]) -> GroupSpec:
        kind = data.get('kind')
        if kind in MATRIX_KINDS:
            n = _positive_int(data.get('n', 2), 'group.n')
            if kind == 'su' and n < 2 or kind == 'so' and n < 3:
                raise ConfigError(f"{kind}({n}) 不是非交换紧李群", field="group.n")
            return GroupSpec(kind, n, _positive_number(data.get('scale', 1.0), 'group.scale'))
        if kind == 'finite':
            table = data.get('table')
            if not isinstance(table, str):
                raise ConfigError("有限群需要 Cayley 表文件路径", field="group.table")
            if base_dir is not None and not os.path.isabs(table) and not os.path.exists(table):
                table = os.path.join(base_dir, table)
            if not os.path.exists(table):
                raise ConfigError(f"Cayley 表文件 '{table}' 不存在", field="group.table")
            return GroupSpec(kind, table=table)
        if kind == 'cyclic':
            return GroupSpec(kind, order=_positive_int(data.get('order'), 'group.order'))
        raise ConfigError(f"未知的群类型 '{kind}'，可用 su / so / finite / cyclic", field="group.kind")

    @staticmethod
    def _parse_gamma(data: Dict[str, Any], group: GroupSpec) -> GammaSpec:
        order = _positive_int(data.get('order'), 'gamma.order')
        images = data.get('images')
        generator = data.get('generator', 'identity')
        if images is not None:
            if not group.is_finite:
                raise ConfigError("像表只适用于有限群", field="gamma.images")
            if not isinstance(images, list) or not all(isinstance(x, int) for x in images):
                raise ConfigError("必须是整数列表", field="gamma.images")
        elif group.is_finite:
            if generator not in ('identity', 'inversion', 'table') and not isinstance(generator, int):
                raise ConfigError(f"有限群的生成元必须是 identity / inversion / table 或下标，实际 {generator!r}",
                                  field="gamma.generator")
        elif generator not in AUTOMORPHISM_PRESETS:
            raise ConfigError(f"未知的预置自同构 '{generator}'，可用 {list(AUTOMORPHISM_PRESETS)}",
                              field="gamma.generator")
        return GammaSpec(order, generator, images)

    @staticmethod
    def _parse_construction(data: Dict[str, Any], group: GroupSpec, gamma: Optional[GammaSpec]) -> Dict[str, Any]:
        ctype = data.get('type')
        if ctype not in CONSTRUCTION_CHECKS:
            raise ConfigError(f"未知构造 '{ctype}'，可用 {sorted(CONSTRUCTION_CHECKS)}", field="construction.type")
        result: Dict[str, Any] = {'type': ctype}
        if ctype in ('double', 'fused_double', 'planted'):
            twists = data.get('twists', ['identity', 'identity'])
            if not isinstance(twists, list) or len(twists) != 2:
                raise ConfigError("需要两个扭曲自同构", field="construction.twists")
            for i, name in enumerate(twists):
                allowed = ('identity',) if group.is_finite else AUTOMORPHISM_PRESETS
                if name not in allowed:
                    raise ConfigError(f"未知扭曲 '{name}'，可用 {list(allowed)}", field=f"construction.twists[{i}]")
            result['twists'] = list(twists)
            if ctype == 'planted':
                if gamma is None or group.is_finite:
                    raise ConfigError("反例需要矩阵群与非平凡 Γ", field="gamma")
        elif ctype == 'generalized_double':
            result['m_inf'] = _positive_int(data.get('m_inf'), 'construction.m_inf')
            result['m_zero'] = _positive_int(data.get('m_zero'), 'construction.m_zero')
        elif ctype == 'surface':
            result.update(_parse_surface(data, 'construction'))
        elif ctype == 'cover':
            if not group.is_finite and group.kind not in MATRIX_KINDS:
                raise ConfigError("覆叠需要有限群或矩阵群", field="group")
            if gamma is None:
                raise ConfigError("覆叠需要 Γ", field="gamma")
            result.update(_parse_surface(_require(data, 'base', dict, 'construction'), 'construction.base'))
            hom = data.get('hom', {})
            if not isinstance(hom, dict) or not all(isinstance(v, int) for v in hom.values()):
                raise ConfigError("分类同态必须是 边名 → 整数 的对象", field="construction.hom")
            result['hom'] = dict(hom)
            for key in ('representatives', 'alt_representatives'):
                if data.get(key) is not None:
                    values = data[key]
                    if not isinstance(values, list) or not all(isinstance(v, int) and v >= 0 for v in values):
                        raise ConfigError("必须是非负整数列表", field=f"construction.{key}")
                    result[key] = list(values)
        elif ctype == 'loop':
            if group.is_finite:
                raise ConfigError("离散回路需要矩阵群", field="group.kind")
            m = _positive_int(data.get('m', 1), 'construction.m')
            N = _positive_int(data.get('N'), 'construction.N')
            if N % m != 0:
                raise ConfigError(f"N = {N} 必须是 m = {m} 的倍数", field="construction.N")
            result.update({'m': m, 'N': N, 'twisted': bool(data.get('twisted', False))})
            if result['twisted'] and gamma is None:
                raise ConfigError("扭曲回路需要 Γ 的生成元", field="gamma")
            grids = data.get('grids', [256, 512, 1024])
            if not isinstance(grids, list) or len(grids) < 2:
                raise ConfigError("至少需要两个网格", field="construction.grids")
            result['grids'] = [_positive_int(x, f"construction.grids[{i}]") for i, x in enumerate(grids)]
        return result


def _parse_surface(data: Dict[str, Any], path: str) -> Dict[str, Any]:
    genus = data.get('genus', 0)
    if not isinstance(genus, int) or isinstance(genus, bool) or genus < 0:
        raise ConfigError(f"亏格必须是非负整数: {genus!r}", field=f"{path}.genus")
    boundaries = data.get('boundaries')
    if not isinstance(boundaries, list) or not boundaries:
        raise ConfigError("至少需要一个边界分量", field=f"{path}.boundaries")
    for j, count in enumerate(boundaries):
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise ConfigError(f"每个边界分量至少一个基点: {count!r}", field=f"{path}.boundaries[{j}]")
    return {'genus': genus, 'boundaries': list(boundaries)}


def _require(data: Dict[str, Any], key: str, kind: type, prefix: str = "") -> Any:
    path = f"{prefix}.{key}" if prefix else key
    if key not in data:
        raise ConfigError("缺少必填字段", field=path)
    if not isinstance(data[key], kind):
        raise ConfigError(f"类型应为 {kind.__name__}", field=path)
    return data[key]


def _positive_int(value: Any, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ConfigError(f"必须是正整数，实际为 {value!r}", field=path)
    return value


def _non_negative_int(value: Any, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ConfigError(f"必须是非负整数，实际为 {value!r}", field=path)
    return value


def _positive_number(value: Any, path: str, allow_zero: bool = False) -> float:
    ok = isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)
    if not ok or value < 0 or (value == 0 and not allow_zero):
        raise ConfigError(f"必须是正数，实际为 {value!r}", field=path)
    return float(value)
