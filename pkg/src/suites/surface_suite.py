﻿"""
曲面表示簇套件
"""

from typing import Any, Dict, List

import numpy as np

from src.config.run_config import AXIOM_CHECKS
from src.core.errors import ConfigError
from src.core.report import VerificationReport
from src.core.surface import (SurfaceData, build_quiver, match_generalized_double, rep_space,
                              verify_polygon_relation, verify_rep_chart)
from src.core.verification import run_axiom_suite
from src.suites.suite_interface import SuiteInterface


class SurfaceSuite(SuiteInterface):
    """Hom(Π₁(X, β), G) 上的准哈密顿结构及其与边标号的相容性"""

    def get_name(self) -> str:
        return 'surface'

    def build(self):
        construction = self.config.construction
        self.surface = SurfaceData(construction['genus'], tuple(construction['boundaries']))
        if 'gd_match' in self.config.suites and (self.surface.genus != 0 or self.surface.r != 1):
            raise ConfigError(f"gd_match 只适用于环形区域，实际为 {self.surface.describe()}",
                              field="construction.boundaries")
        self.quiver = build_quiver(self.surface)
        self.space = rep_space(self.surface, self.group)

    def describe(self) -> Dict[str, Any]:
        quiver = self.quiver
        return {
            'surface': self.surface.describe(),
            'vertices': list(quiver.vertices),
            'edges': [{'name': e.name, 'source': e.source, 'target': e.target, 'derived': e.derived}
                      for e in quiver.edges],
            'polygon': str(quiver.polygon),
            'slots': [s.name for s in self.space.slots],
        }

    def run_check(self, name: str, rng: np.random.Generator) -> List[VerificationReport]:
        config = self.config
        if name in AXIOM_CHECKS:
            return run_axiom_suite(self.space, rng, config.samples, [name], config.h, config.fd_step,
                                   config.tolerances, config.normalization, config.seed)
        if name == 'rep_chart':
            return verify_rep_chart(self.surface, self.group, rng, config.samples,
                                    self.tolerance('rep_chart', 1e-10), config.seed)
        if name == 'gd_match':
            return [match_generalized_double(self.surface, self.group, rng, config.samples,
                                             self.tolerance('gd_match', 1e-10), config.seed)]
        return [verify_polygon_relation(self.surface, self.group, rng, config.samples,
                                        self.tolerance('polygon_relation', 1e-10), config.seed)]
