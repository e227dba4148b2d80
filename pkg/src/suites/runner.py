﻿"""
套件运行模块
构造类型 → 套件的注册表；按检验名称并发运行并按名称有序汇总
"""

import platform
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple, Type

import numpy as np
import scipy

from src.config.run_config import RunConfig
from src.config.runtime_config import runtime_config
from src.core.report import ReportBundle, VerificationReport
from src.suites.context import build_context
from src.suites.cover_suite import CoverSuite
from src.suites.loop_suite import LoopSuite
from src.suites.qham_suite import QHamSuite
from src.suites.suite_interface import SuiteInterface
from src.suites.surface_suite import SurfaceSuite

# 构造类型到套件的映射（方便后续扩展）
SUITE_REGISTRY: Dict[str, Type[SuiteInterface]] = {
    'double': QHamSuite,
    'fused_double': QHamSuite,
    'generalized_double': QHamSuite,
    'degenerate': QHamSuite,
    'planted': QHamSuite,
    'surface': SurfaceSuite,
    'cover': CoverSuite,
    'loop': LoopSuite,
}

PACKAGE_VERSION = "0.1.0"


def environment_stamp() -> Dict[str, str]:
    """报告中的环境信息，不含时间与主机名，保证同一环境下报告逐字节一致"""
    return {
        'qham': PACKAGE_VERSION,
        'python': platform.python_version(),
        'numpy': np.__version__,
        'scipy': scipy.__version__,
    }


def create_suite(config: RunConfig) -> SuiteInterface:
    """
    :param config: 运行配置
    :return: 已构造好的套件
    """
    suite = SUITE_REGISTRY[config.construction_type](config, build_context(config))
    suite.build()
    return suite


def run_suites(config: RunConfig, suite: Optional[SuiteInterface] = None) -> ReportBundle:
    """
    运行配置中的全部检验
    每项检验使用独立的随机流，线程数由 QHAM_THREADS 限制，结果按检验名排序汇总
    :param config: 运行配置
    :param suite: 已构造的套件，缺省时按配置新建
    :return: 报告集
    """
    suite = suite or create_suite(config)
    names = sorted(config.suites)

    def task(name: str) -> Tuple[str, List[VerificationReport]]:
        return name, suite.run_check(name, suite.check_rng(name))

    workers = max(1, min(runtime_config.threads, len(names)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = dict(pool.map(task, names))
    echo = config.echo()
    echo['construction_summary'] = suite.describe()
    return ReportBundle({name: results[name] for name in names}, echo, environment_stamp())
