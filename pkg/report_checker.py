﻿"""
报告一致性检查程序
比较两份 report.json：逐字节是否一致，以及逐项检验的结构化差异
用法: python report_checker.py <report_a.json> <report_b.json>
"""

import sys
from typing import Any, Dict, List

from rich import box
from rich.console import Console
from rich.table import Table

from src.utils.report_exporter import ReportExporter


class ReportComparator:
    """报告比较器，用于验证相同配置与种子的两次运行结果一致"""

    def __init__(self, console: Console = None):
        """初始化比较器"""
        self.console = console or Console()

    @staticmethod
    def _flatten(data: Dict[str, Any]) -> Dict[str, Dict[str, Any]]:
        flat = {}
        for suite, reports in data.get("suites", {}).items():
            for report in reports:
                flat[f"{suite}/{report['check']}"] = report
        return flat

    def compare(self, path_a: str, path_b: str) -> Dict[str, Any]:
        """
        比较两份报告
        :param path_a: 第一份报告路径
        :param path_b: 第二份报告路径
        :return: {'identical': 逐字节一致, 'valid': 两份格式均合法, 'differences': [...]}
        """
        with open(path_a, 'rb') as f:
            raw_a = f.read()
        with open(path_b, 'rb') as f:
            raw_b = f.read()
        data_a, data_b = ReportExporter.load_from_json(path_a), ReportExporter.load_from_json(path_b)
        differences: List[Dict[str, Any]] = []
        flat_a, flat_b = self._flatten(data_a), self._flatten(data_b)
        for key in sorted(set(flat_a) | set(flat_b)):
            a, b = flat_a.get(key), flat_b.get(key)
            if a is None or b is None:
                differences.append({'check': key, 'field': '存在性', 'a': a is not None, 'b': b is not None})
                continue
            for field in sorted(set(a) | set(b)):
                if a.get(field) != b.get(field):
                    differences.append({'check': key, 'field': field, 'a': a.get(field), 'b': b.get(field)})
        for section in ('config', 'environment'):
            if data_a.get(section) != data_b.get(section):
                differences.append({'check': '-', 'field': section, 'a': '…', 'b': '…'})
        return {
            'identical': raw_a == raw_b,
            'valid': ReportExporter.validate_format(data_a) and ReportExporter.validate_format(data_b),
            'differences': differences,
        }

    def print_comparison_results(self, results: Dict[str, Any]):
        """
        打印比较结果
        :param results: 比较结果
        """
        if not results['valid']:
            self.console.print("[bold yellow]⚠ 至少一份报告格式不合法[/bold yellow]")
        if results['identical']:
            self.console.print("[bold green]✓ 两份报告逐字节一致[/bold green]")
            return
        self.console.print("[bold red]✗ 两份报告不一致[/bold red]")
        if not results['differences']:
            self.console.print("  内容相同，仅格式（空白或键序）不同")
            return
        table = Table(box=box.SIMPLE)
        table.add_column("检验", style="cyan")
        table.add_column("字段", style="yellow")
        table.add_column("A")
        table.add_column("B")
        for diff in results['differences']:
            table.add_row(diff['check'], diff['field'], str(diff['a']), str(diff['b']))
        self.console.print(table)


def main(argv: List[str] = None) -> int:
    """主程序"""
    argv = sys.argv[1:] if argv is None else argv
    console = Console()
    if len(argv) != 2:
        console.print("[bold red]错误: 用法 python report_checker.py <report_a.json> <report_b.json>[/bold red]")
        return 2
    comparator = ReportComparator(console)
    results = comparator.compare(argv[0], argv[1])
    comparator.print_comparison_results(results)
    return 0 if results['identical'] else 1


if __name__ == "__main__":
    sys.exit(main())
