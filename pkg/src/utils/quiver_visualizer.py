﻿"""
箭图可视化工具
使用 graphviz 绘制曲面箭图 Q_Y 与覆叠的提升箭图 Q_X
"""

import os
from typing import Optional

from src.core.covering import LiftedQuiver
from src.core.surface import Quiver

try:
    import graphviz
    GRAPHVIZ_AVAILABLE = True
except ImportError:
    GRAPHVIZ_AVAILABLE = False

# 边的颜色按种类区分
EDGE_COLORS = {'gamma': 'blue', 'boundary': 'black', 'a': 'darkgreen', 'b': 'darkorange'}


class QuiverVisualizer:
    """箭图可视化器"""

    def __init__(self, quiver: Quiver, lifted: Optional[LiftedQuiver] = None):
        """
        初始化可视化器
        :param quiver: 底曲面的箭图
        :param lifted: 覆叠的提升箭图，给出时绘制 Q_X
        """
        self.quiver = quiver
        self.lifted = lifted

    def build_graph(self) -> 'graphviz.Digraph':
        """
        构造 Digraph（不渲染）
        :return: graphviz 图对象
        """
        dot = graphviz.Digraph(comment=f'Quiver {self.quiver.surface.describe()}')
        dot.attr(rankdir='LR')
        dot.attr('node', shape='circle', fontname='Microsoft YaHei')
        dot.attr('edge', fontname='Microsoft YaHei')
        if self.lifted is None:
            for v in self.quiver.vertices:
                dot.node(v, v)
            for e in self.quiver.edges:
                style = 'dashed' if e.derived else 'solid'
                dot.edge(e.source, e.target, label=e.name, color=EDGE_COLORS[e.kind], style=style)
            return dot
        m = self.lifted.sheets
        for v in self.quiver.vertices:
            for s in range(m):
                dot.node(f"{v}|{s}", f"{v}\n层{s}")
        for e in self.quiver.edges:
            style = 'dashed' if e.derived else 'solid'
            for s in range(m):
                t = self.lifted.target_sheet(e.name, s)
                dot.edge(f"{e.source}|{s}", f"{e.target}|{t}", label=f"{e.name}~{s}",
                         color=EDGE_COLORS[e.kind], style=style)
        return dot

    def visualize(self, output_dir: str = "output", filename: Optional[str] = None) -> Optional[str]:
        """
        生成箭图图片
        :param output_dir: 输出目录
        :param filename: 输出文件名（不含扩展名），默认为 quiver 或 lifted_quiver
        :return: 生成的图片路径，graphviz 或 dot 不可用时为 None
        """
        if not GRAPHVIZ_AVAILABLE:
            return None
        os.makedirs(output_dir, exist_ok=True)
        if filename is None:
            filename = "lifted_quiver" if self.lifted is not None else "quiver"
        output_path = os.path.join(output_dir, filename)
        try:
            self.build_graph().render(output_path, format='png', cleanup=True)
        except (graphviz.ExecutableNotFound, graphviz.CalledProcessError):
            return None
        return f"{output_path}.png"
