﻿"""
覆叠套件
分类同态给出的 Γ 覆叠、单值表示、扭曲表示与不动表示的对应
"""

from typing import Any, Dict, List, Optional

import numpy as np

from src.config.runtime_config import runtime_config
from src.core.covering import (CoveringSpec, EnumerationResult, RepresentativeChoice, bijection_report,
                               boundary_lifts, build_cover, check_gamma_action, check_roundtrip, enumerate_finite,
                               random_fixed_rep, representative_dependence, verify_monodromy_hom, verify_push_hom)
from src.core.errors import ConfigError
from src.core.finite_group import cyclic_generator_order
from src.core.report import VerificationReport
from src.core.surface import SurfaceData
from src.suites.suite_interface import SuiteInterface

# 推送同态检验的随机不动表示个数上限
PUSH_SAMPLES = 20


class CoverSuite(SuiteInterface):
    """Γ = Z/m 覆叠的检验套件，同时驱动 enumerate 命令"""

    def get_name(self) -> str:
        return 'cover'

    def _choice(self, key: str) -> Optional[RepresentativeChoice]:
        values = self.config.construction.get(key)
        if values is None:
            return None
        count, m = len(self.lifted.quiver.vertices), self.context.gamma.order
        if len(values) != count:
            raise ConfigError(f"需要 {count} 个代表层（每个底基点一个），实际 {len(values)} 个",
                              field=f"construction.{key}")
        if any(v >= m for v in values):
            raise ConfigError(f"代表层必须小于 |Γ| = {m}", field=f"construction.{key}")
        return RepresentativeChoice(tuple(values))

    def build(self):
        construction = self.config.construction
        base = SurfaceData(construction['genus'], tuple(construction['boundaries']))
        spec = CoveringSpec(base, self.context.gamma, construction['hom'], self.context.action)
        self.lifted = build_cover(spec)
        self.choice = self._choice('representatives') or RepresentativeChoice.default(self.lifted.quiver,
                                                                                     self.context.gamma)
        self.alternative = self._choice('alt_representatives')
        self.enumeration: Optional[EnumerationResult] = None

    def describe(self) -> Dict[str, Any]:
        lifted = self.lifted
        return {
            'base': lifted.quiver.surface.describe(),
            'sheets': lifted.sheets,
            'hom': dict(sorted(lifted.hom.items())),
            'representatives': list(self.choice.sheets),
            'lifted_edges': lifted.n_edges,
            'lifted_vertices': lifted.n_vertices,
            'components': lifted.components(),
        }

    def run_check(self, name: str, rng: np.random.Generator) -> List[VerificationReport]:
        config, lifted = self.config, self.lifted
        if name == 'cover_structure':
            return [self._structure_report()]
        if name == 'monodromy_hom':
            reports = [verify_monodromy_hom(lifted, self.choice, config.seed)]
            if self.alternative is not None:
                observed = representative_dependence(lifted, self.choice, self.alternative)
                reports.append(VerificationReport('representative_dependence', 1, 0.0, 0.0, config.seed,
                                                  details=observed))
            return reports
        if name == 'push_hom':
            tol = self.tolerance('push_hom', 1e-10)
            merged = None
            for _ in range(min(config.samples, PUSH_SAMPLES)):
                values = random_fixed_rep(lifted, self.group, rng, self.choice)
                report = verify_push_hom(lifted, self.group, values, self.choice, tol, config.seed)
                merged = report if merged is None else merged.merge(report)
            return [merged]
        if name == 'roundtrip':
            return [check_roundtrip(lifted, self.group, rng, config.samples, self.choice,
                                    self.tolerance('roundtrip', 1e-12), config.seed)]
        if name == 'gamma_action':
            return [check_gamma_action(lifted, self.group, rng, min(config.samples, PUSH_SAMPLES),
                                       self.tolerance('gamma_action', 1e-12), config.seed)]
        return [bijection_report(self.enumerate(), config.seed)]

    def _structure_report(self) -> VerificationReport:
        """
        覆叠结构：甲板变换自由、多边形提升闭合、边界稳定子为循环群且满足轨道-稳定子计数，
        连通性与“分类同态的像生成 Γ”一致
        """
        lifted = self.lifted
        boundaries = boundary_lifts(lifted)
        generated = cyclic_generator_order(lifted.gamma, list(lifted.spec.classifying_hom.values()))
        connected = lifted.components() == 1
        failures = [not lifted.deck_is_free(), not lifted.polygon_closes(), generated != connected]
        for b in boundaries:
            failures += [not b.stabilizer_cyclic, not b.orbit_stabilizer_ok]
        details = {
            'components': lifted.components(),
            'connected': connected,
            'boundaries': [{'boundary': b.boundary, 'circles': b.circles, 'points_per_circle': b.points_per_circle,
                            'stabilizer_order': b.stabilizer_order} for b in boundaries],
        }
        return VerificationReport('cover_structure', len(failures), float(sum(failures)), 0.0, self.config.seed,
                                  details=details)

    def enumerate(self) -> EnumerationResult:
        """有限群穷举，结果缓存在套件上供 enumerate 命令输出"""
        if self.enumeration is None:
            self.enumeration = enumerate_finite(self.lifted, self.group, self.choice, workers=runtime_config.threads)
        return self.enumeration
