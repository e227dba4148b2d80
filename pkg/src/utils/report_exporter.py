﻿"""
报告导出工具
将检验报告集导出为 JSON 与 Markdown，将穷举结果导出为 JSON 与 CSV
"""

import csv
import json
import os
from typing import Any, Dict, List

from src.core.covering import EnumerationResult
from src.core.report import ReportBundle

REPORT_JSON = "report.json"
REPORT_MARKDOWN = "report.md"
ENUMERATION_JSON = "enumeration.json"
ENUMERATION_CSV = "enumeration.csv"


def _dump(data: Dict[str, Any], filepath: str):
    # sort_keys 与固定缩进保证同一输入逐字节一致
    with open(filepath, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write('\n')


class ReportExporter:
    """检验报告导出器"""

    def __init__(self, bundle: ReportBundle):
        """
        初始化导出器
        :param bundle: 报告集
        """
        self.bundle = bundle

    def export_to_json(self, output_dir: str = "output") -> str:
        """
        导出报告为 JSON
        :param output_dir: 输出目录
        :return: 生成的文件路径
        """
        os.makedirs(output_dir, exist_ok=True)
        filepath = os.path.join(output_dir, REPORT_JSON)
        _dump(self.bundle.to_dict(), filepath)
        return filepath

    def export_to_markdown(self, output_dir: str = "output") -> str:
        """
        导出 Markdown 摘要：总体结论、逐项残差表、失败项的最坏样本
        :param output_dir: 输出目录
        :return: 生成的文件路径
        """
        os.makedirs(output_dir, exist_ok=True)
        filepath = os.path.join(output_dir, REPORT_MARKDOWN)
        with open(filepath, 'w', encoding='utf-8', newline='\n') as f:
            f.write('\n'.join(self._markdown_lines()) + '\n')
        return filepath

    def _markdown_lines(self) -> List[str]:
        data = self.bundle.to_dict()
        config = data['config']
        lines = [f"# 检验报告: {config['name']}", "",
                 f"- 结论: {'通过' if data['passed'] else '失败'}",
                 f"- 构造: `{config['construction']['type']}`",
                 f"- 样本数: {config['samples']}，种子: {config['seed']}",
                 f"- 环境: " + ", ".join(f"{k} {v}" for k, v in data['environment'].items()),
                 "",
                 "| 套件 | 检验 | 样本 | 最大残差 | 容差 | 最坏样本 | 结论 |",
                 "|---|---|---:|---:|---:|---:|:---:|"]
        for suite, reports in data['suites'].items():
            for r in reports:
                lines.append(f"| {suite} | {r['check']} | {r['samples']} | {r['max_residual']:.3e} | "
                             f"{r['tolerance']:.3e} | {r['worst_sample']} | {'✓' if r['passed'] else '✗'} |")
        failures = self.bundle.failures()
        if failures:
            lines += ["", "## 失败项", ""]
            for r in failures:
                lines.append(f"- `{r.check}`: 最坏样本 #{r.worst_sample}，残差 {r.max_residual:.3e}")
        return lines

    @staticmethod
    def load_from_json(filepath: str) -> Dict[str, Any]:
        """
        从JSON文件加载报告
        :param filepath: JSON文件路径
        :return: 报告数据
        """
        with open(filepath, 'r', encoding='utf-8-sig') as f:
            return json.load(f)

    @staticmethod
    def validate_format(data: Dict[str, Any]) -> bool:
        """
        验证JSON数据是否符合报告格式
        :param data: 待验证的数据
        :return: 是否符合规范
        """
        try:
            if not isinstance(data, dict):
                return False
            for key in ("passed", "environment", "config", "suites"):
                if key not in data:
                    return False
            if not isinstance(data["suites"], dict):
                return False
            required = ("check", "samples", "max_residual", "tolerance", "passed", "seed", "worst_sample")
            overall = True
            for reports in data["suites"].values():
                if not isinstance(reports, list):
                    return False
                for report in reports:
                    if not isinstance(report, dict) or not all(k in report for k in required):
                        return False
                    if not isinstance(report["samples"], int) or not isinstance(report["passed"], bool):
                        return False
                    overall = overall and report["passed"]
            # 总体结论必须与各项一致
            return data["passed"] == overall
        except Exception:
            return False


class EnumerationExporter:
    """穷举结果导出器"""

    def __init__(self, result: EnumerationResult, name: str):
        """
        :param result: 穷举结果
        :param name: 配置名称
        """
        self.result = result
        self.name = name

    def to_dict(self) -> Dict[str, Any]:
        data = self.result.to_dict()
        data['name'] = self.name
        return data

    def export_to_json(self, output_dir: str = "output") -> str:
        os.makedirs(output_dir, exist_ok=True)
        filepath = os.path.join(output_dir, ENUMERATION_JSON)
        _dump(self.to_dict(), filepath)
        return filepath

    def export_to_csv(self, output_dir: str = "output") -> str:
        """
        计数表：每行一个量
        :param output_dir: 输出目录
        :return: 生成的文件路径
        """
        os.makedirs(output_dir, exist_ok=True)
        filepath = os.path.join(output_dir, ENUMERATION_CSV)
        r = self.result
        rows = [('hom_x', r.hom_x), ('hom_y', r.hom_y), ('fixed', r.fixed), ('twisted', r.twisted),
                ('injective', r.injective), ('surjective', r.surjective),
                ('roundtrip_mismatches', r.roundtrip_mismatches), ('bijection', r.bijection),
                ('components', r.components)]
        with open(filepath, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['quantity', 'value'])
            for key, value in rows:
                writer.writerow([key, value])
        return filepath
