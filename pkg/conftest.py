﻿"""
测试公共夹具
su(2)、so(3)、带种子的随机数发生器，以及 input/groups 下的有限群 S₃ 与 Z/3
"""

import os

import numpy as np
import pytest

from src.config.runtime_config import THREADS_ENV, runtime_config
from src.core.finite_group import load_cayley_table
from src.core.liegroup import MatrixGroup

ROOT_DIR = os.path.dirname(os.path.abspath(__file__))
INPUT_DIR = os.path.join(ROOT_DIR, "input")
GROUPS_DIR = os.path.join(INPUT_DIR, "groups")


@pytest.fixture
def su2() -> MatrixGroup:
    return MatrixGroup('su', 2)


@pytest.fixture
def so3() -> MatrixGroup:
    return MatrixGroup('so', 3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def s3():
    """(S₃, gamma_images)：像表 0 为对换共轭（阶 2），像表 1 为轮换共轭（阶 3）"""
    return load_cayley_table(os.path.join(GROUPS_DIR, "s3.json"))


@pytest.fixture
def z3():
    """(Z/3, gamma_images)：像表 0 为取逆"""
    return load_cayley_table(os.path.join(GROUPS_DIR, "z3.json"))


@pytest.fixture(autouse=True)
def reset_runtime_config(monkeypatch):
    """每个测试前后恢复运行时单例"""
    monkeypatch.delenv(THREADS_ENV, raising=False)
    runtime_config.reload()
    runtime_config.set_quiet(False)
    runtime_config.set_output_dir("output")
    yield
    monkeypatch.delenv(THREADS_ENV, raising=False)
    runtime_config.reload()
    runtime_config.set_quiet(False)
