﻿"""
检验报告模块
VerificationReport 记录单项检验的残差与结论，ReportBundle 汇总一次运行的全部检验
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


def _round(value: float) -> Optional[float]:
    """保留 12 位有效数字，保证报告逐字节可复现"""
    if value is None:
        return None
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        return value
    return float(f"{value:.12g}")


@dataclass
class VerificationReport:
    """单项检验的结果，passed 当且仅当 max_residual ≤ tolerance"""
    check: str
    samples: int
    max_residual: float
    tolerance: float
    seed: int = 0
    worst_sample: int = -1
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        # NaN 残差视为失败
        return bool(self.max_residual <= self.tolerance)

    @classmethod
    def from_residuals(cls, check: str, residuals: List[float], tolerance: float,
                       seed: int = 0, **details) -> 'VerificationReport':
        """
        由逐样本残差构造报告
        :param check: 检验名称
        :param residuals: 每个样本的残差
        :param tolerance: 容差
        :param seed: 随机种子
        """
        if not residuals:
            return cls(check, 0, 0.0, tolerance, seed, -1, dict(details))
        worst = max(range(len(residuals)),
                    key=lambda i: math.inf if math.isnan(residuals[i]) else residuals[i])
        return cls(check, len(residuals), float(residuals[worst]), tolerance, seed, worst, dict(details))

    def merge(self, other: 'VerificationReport') -> 'VerificationReport':
        """合并同名检验的两批样本（满足结合律）"""
        offset = self.samples
        if other.max_residual > self.max_residual or math.isnan(other.max_residual):
            worst, residual = other.worst_sample + offset, other.max_residual
        else:
            worst, residual = self.worst_sample, self.max_residual
        details = dict(self.details)
        details.update(other.details)
        return VerificationReport(self.check, self.samples + other.samples, residual,
                                  max(self.tolerance, other.tolerance), self.seed, worst, details)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'check': self.check,
            'samples': self.samples,
            'max_residual': _round(self.max_residual),
            'tolerance': _round(self.tolerance),
            'passed': self.passed,
            'seed': self.seed,
            'worst_sample': self.worst_sample,
            'details': {k: _round(v) if isinstance(v, float) else v
                        for k, v in sorted(self.details.items())},
        }


@dataclass
class ReportBundle:
    """一次运行的全部检验结果"""
    suites: Dict[str, List[VerificationReport]]
    config_echo: Dict[str, Any]
    environment: Dict[str, str]

    @property
    def passed(self) -> bool:
        return all(r.passed for reports in self.suites.values() for r in reports)

    def failures(self) -> List[VerificationReport]:
        return [r for name in sorted(self.suites) for r in self.suites[name] if not r.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'environment': dict(sorted(self.environment.items())),
            'config': self.config_echo,
            'suites': {name: [r.to_dict() for r in self.suites[name]] for name in sorted(self.suites)},
        }
