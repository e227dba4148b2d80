﻿"""
检验套件接口模块
定义统一的套件接口，方便按构造类型扩展
"""

import zlib
from abc import ABC, abstractmethod
from typing import Any, Dict, List

import numpy as np

from src.config.run_config import RunConfig
from src.core.report import VerificationReport
from src.suites.context import GroupContext


class SuiteInterface(ABC):
    """检验套件抽象基类"""

    def __init__(self, config: RunConfig, context: GroupContext):
        """
        初始化套件
        :param config: 运行配置
        :param context: 群上下文
        """
        self.config = config
        self.context = context
        self.group = context.group

    @abstractmethod
    def build(self):
        """构造待检验的空间（或箭图、网格）"""
        pass

    @abstractmethod
    def run_check(self, name: str, rng: np.random.Generator) -> List[VerificationReport]:
        """
        运行单项检验
        :param name: 检验名称
        :param rng: 该检验专用的随机数发生器
        :return: 该检验产生的报告
        """
        pass

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        """
        构造的摘要信息（写入报告）
        :return: 可 JSON 序列化的字典
        """
        pass

    @abstractmethod
    def get_name(self) -> str:
        """
        获取套件名称
        :return: 套件名称
        """
        pass

    def check_rng(self, name: str) -> np.random.Generator:
        """每项检验的随机流只由 (seed, 名称) 决定，与执行顺序和线程数无关"""
        return np.random.default_rng(np.random.SeedSequence([self.config.seed, zlib.crc32(name.encode('utf-8'))]))

    def tolerance(self, name: str, default: float) -> float:
        return self.config.tolerances.get(name, default)
