﻿"""箭图 Digraph 构造与渲染失败处理的测试（不需要 dot 可执行文件）"""

import os

import pytest

graphviz = pytest.importorskip("graphviz")

from conftest import INPUT_DIR  # noqa: E402
from src.config.run_config import RunConfigParser  # noqa: E402
from src.core.surface import SurfaceData, build_quiver  # noqa: E402
from src.suites.runner import create_suite  # noqa: E402
from src.utils.quiver_visualizer import QuiverVisualizer  # noqa: E402


def _counts(dot):
    edges = [line for line in dot.body if ' -> ' in line]
    nodes = [line for line in dot.body if line.startswith('\t"') and ' -> ' not in line]
    return len(nodes), len(edges)


def test_base_quiver_graph():
    quiver = build_quiver(SurfaceData(1, (2, 1)))
    nodes, edges = _counts(QuiverVisualizer(quiver).build_graph())
    assert nodes == 3
    # 5 条存储边加 1 条导出边
    assert edges == 6


def test_lifted_quiver_graph_from_config():
    config = RunConfigParser.parse_from_file(os.path.join(INPUT_DIR, "cover_annulus_z3.json"))
    lifted = create_suite(config).lifted
    nodes, edges = _counts(QuiverVisualizer(lifted.quiver, lifted).build_graph())
    assert (nodes, edges) == (4, 6)
    assert nodes == lifted.n_vertices
    assert edges == len(lifted.quiver.edges) * lifted.sheets


def test_missing_dot_binary_gives_none(monkeypatch, tmp_path):
    def render(self, *args, **kwargs):
        raise graphviz.ExecutableNotFound(['dot'])

    monkeypatch.setattr(graphviz.Digraph, 'render', render)
    quiver = build_quiver(SurfaceData.annulus())
    assert QuiverVisualizer(quiver).visualize(str(tmp_path)) is None


def test_other_render_errors_propagate(monkeypatch, tmp_path):
    def render(self, *args, **kwargs):
        raise RuntimeError("broken")

    monkeypatch.setattr(graphviz.Digraph, 'render', render)
    quiver = build_quiver(SurfaceData.annulus())
    with pytest.raises(RuntimeError):
        QuiverVisualizer(quiver).visualize(str(tmp_path))
