﻿"""
异常定义模块
所有领域异常都派生自 ValueError，由 main.py 统一映射为退出码
"""

from typing import Optional


class QHamError(ValueError):
    """准哈密顿库的异常基类"""


class ConfigError(QHamError):
    """运行配置错误（退出码 2）"""

    def __init__(self, message: str, field: Optional[str] = None):
        """
        :param message: 错误描述
        :param field: 出错字段的 JSON 路径，例如 construction.N
        """
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class IndexMismatchError(QHamError):
    """指标集大小不匹配"""


class CompatibilityError(QHamError):
    """双旋子、空间或表示之间不相容"""


class WordError(QHamError):
    """群胚字不可复合"""


class ResourceGuardError(QHamError):
    """枚举规模超过上限（退出码 3）"""


class GridError(QHamError):
    """离散回路的网格错误"""
