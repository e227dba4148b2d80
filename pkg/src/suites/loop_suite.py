﻿"""
离散回路套件
ℝ/mℤ 上离散联络空间的 2-形式 ϖ、和乐变分公式与网格加密收敛阶
"""

from typing import Any, Dict, List

import numpy as np

from src.core.errors import ConfigError
from src.core.loopdisc import (LOOP_TOLERANCE, ConvergenceRow, LoopGrid, convergence_report, convergence_study,
                               verify_loop_props, verify_variation_formulas)
from src.core.report import VerificationReport
from src.suites.suite_interface import SuiteInterface

# ϖ 性质检验的样本数上限（每个样本需要 O(N·dim) 次和乐求值）
LOOP_SAMPLES = 5


class LoopSuite(SuiteInterface):

    def get_name(self) -> str:
        return 'loop'

    def build(self):
        construction = self.config.construction
        self.grid = LoopGrid(construction['m'], construction['N'])
        self.twist = self.context.twist() if construction['twisted'] else None
        if self.twist is not None and self.grid.m % self.twist.order != 0:
            raise ConfigError(f"扭曲自同构的阶 {self.twist.order} 不整除 m = {self.grid.m}", field="construction.m")
        self.rows: List[ConvergenceRow] = []

    def describe(self) -> Dict[str, Any]:
        info: Dict[str, Any] = {'m': self.grid.m, 'N': self.grid.N, 'delta': self.grid.delta,
                                'twisted': self.twist is not None}
        if self.rows:
            info['convergence'] = [row.to_dict() for row in self.rows]
        return info

    def run_check(self, name: str, rng: np.random.Generator) -> List[VerificationReport]:
        config = self.config
        samples = min(config.samples, LOOP_SAMPLES)
        tol = self.tolerance(name, LOOP_TOLERANCE)
        if name == 'loop_props':
            return verify_loop_props(self.group, self.grid, rng, samples, self.twist, tol, config.h, config.fd_step,
                                     config.normalization, config.seed)
        if name == 'loop_variation':
            return verify_variation_formulas(self.group, self.grid, rng, samples, tol, config.fd_step, config.seed)
        grids = tuple(config.construction['grids'])
        self.rows = convergence_study(self.group, self.grid.m, int(rng.integers(0, 2 ** 31)), grids)
        return [convergence_report(self.rows, seed=config.seed)]
