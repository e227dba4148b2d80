﻿"""
运行时配置模块
进程级的线程上限、静默模式与输出目录
"""

import os

# 线程数环境变量
THREADS_ENV = "QHAM_THREADS"


class RuntimeConfig:
    """运行时配置（全局单例）"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._initialized = True
        self.threads = self._threads_from_env()
        self.quiet = False
        self.output_dir = "output"

    @staticmethod
    def _threads_from_env() -> int:
        """读取 QHAM_THREADS，缺省为 min(4, CPU 数)，非法值回退到缺省"""
        default = min(4, os.cpu_count() or 1)
        raw = os.environ.get(THREADS_ENV, "").strip()
        if not raw:
            return default
        try:
            value = int(raw)
        except ValueError:
            return default
        return max(1, value)

    def reload(self):
        """重新读取环境变量（测试中修改环境后使用）"""
        self.threads = self._threads_from_env()

    def set_quiet(self, quiet: bool):
        self.quiet = bool(quiet)

    def set_output_dir(self, path: str):
        self.output_dir = path

    def is_quiet(self) -> bool:
        return self.quiet


# 全局配置实例
runtime_config = RuntimeConfig()
