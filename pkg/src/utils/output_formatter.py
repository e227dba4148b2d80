﻿"""
输出格式化模块
使用rich库美化输出
"""

from typing import Dict, List, Sequence

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from src.config.run_config import RunConfig
from src.config.runtime_config import runtime_config
from src.core.covering import EnumerationResult
from src.core.loopdisc import ConvergenceRow
from src.core.report import ReportBundle, VerificationReport


def format_float(value: float) -> str:
    return f"{value:.3e}"


class OutputFormatter:
    """输出格式化器，静默模式下只输出最终结论"""

    def __init__(self, console: Console = None):
        """
        初始化格式化器
        :param console: rich 控制台，测试时可传入录制用的控制台
        """
        self.console = console or Console()

    @property
    def quiet(self) -> bool:
        return runtime_config.is_quiet()

    def print_config(self, config: RunConfig):
        """
        打印运行配置摘要
        :param config: 运行配置
        """
        if self.quiet:
            return
        info_text = Text()
        info_text.append("名称: ", style="bold yellow")
        info_text.append(f"{config.name}\n", style="cyan")
        info_text.append("群: ", style="bold yellow")
        group = config.group
        label = f"{group.kind}({group.n})" if not group.is_finite else (group.table or f"Z/{group.order}")
        info_text.append(f"{label}\n", style="cyan")
        if config.gamma is not None:
            info_text.append("Γ: ", style="bold yellow")
            info_text.append(f"Z/{config.gamma.order}, 生成元 {config.gamma.images or config.gamma.generator}\n",
                             style="cyan")
        info_text.append("构造: ", style="bold yellow")
        info_text.append(f"{config.construction}\n", style="cyan")
        info_text.append("检验: ", style="bold yellow")
        info_text.append(f"{', '.join(config.suites)}\n", style="cyan")
        info_text.append("样本数 / 种子: ", style="bold yellow")
        info_text.append(f"{config.samples} / {config.seed}", style="cyan")
        panel = Panel(info_text, title="[bold magenta]运行配置[/bold magenta]", border_style="magenta")
        self.console.print(panel)

    def print_reports(self, bundle: ReportBundle):
        """
        打印全部检验报告
        :param bundle: 报告集
        """
        if self.quiet:
            return
        table = Table(title="检验结果", show_header=True, header_style="bold magenta")
        table.add_column("套件", style="cyan")
        table.add_column("检验", style="cyan")
        table.add_column("样本", justify="right")
        table.add_column("最大残差", justify="right")
        table.add_column("容差", justify="right")
        table.add_column("最坏样本", justify="right")
        table.add_column("结论", justify="center")
        for name in sorted(bundle.suites):
            for report in bundle.suites[name]:
                verdict = "[green]✓[/green]" if report.passed else "[bold red]✗[/bold red]"
                table.add_row(name, report.check, str(report.samples), format_float(report.max_residual),
                              format_float(report.tolerance), str(report.worst_sample), verdict)
        self.console.print("\n")
        self.console.print(table)

    def print_failures(self, failures: Sequence[VerificationReport]):
        """
        逐条列出失败的检验及其最坏样本（静默模式下也输出）
        :param failures: 失败报告
        """
        for report in failures:
            self.console.print(f"[bold red]✗ 检验 {report.check} 失败: 最坏样本 #{report.worst_sample}，"
                               f"残差 {format_float(report.max_residual)} > 容差 {format_float(report.tolerance)}"
                               f"[/bold red]")

    def print_enumeration(self, result: EnumerationResult):
        """
        打印穷举计数表与边界提升
        :param result: 穷举结果
        """
        if self.quiet:
            return
        table = Table(title="表示计数", show_header=True, header_style="bold magenta")
        table.add_column("集合", style="cyan")
        table.add_column("大小", justify="right")
        table.add_row("Hom(Π₁(X), G)", str(result.hom_x))
        table.add_row("Hom(Π₁(Y), G)", str(result.hom_y))
        table.add_row("Hom(Π₁(X), G)^Γ", str(result.fixed))
        table.add_row("Hom_mon(Π₁(Y), Γ⋉G)", str(result.twisted))
        self.console.print("\n")
        self.console.print(table)

        boundaries = Table(title="边界提升", show_header=True, header_style="bold magenta")
        for column in ("边界", "单值", "圆周数", "每圈基点", "稳定子阶", "循环", "轨道-稳定子"):
            boundaries.add_column(column, justify="center")
        for b in result.boundaries:
            boundaries.add_row(f"V{b.boundary}", str(b.loop_hom), str(b.circles), str(b.points_per_circle),
                               str(b.stabilizer_order), self._mark(b.stabilizer_cyclic),
                               self._mark(b.orbit_stabilizer_ok))
        self.console.print(boundaries)
        self.print_info(f"覆叠连通分支数: {result.components}，多边形提升闭合: {result.polygon_closes}")

    def print_convergence(self, rows: List[ConvergenceRow]):
        """
        打印网格加密收敛表
        :param rows: 各量的残差序列
        """
        if self.quiet or not rows:
            return
        table = Table(title="离散误差与收敛阶", show_header=True, header_style="bold magenta")
        table.add_column("量", style="cyan")
        for N in rows[0].grids:
            table.add_column(f"N={N}", justify="right")
        table.add_column("最小阶", justify="right")
        for row in rows:
            table.add_row(row.quantity, *[format_float(r) for r in row.residuals], f"{row.min_order:.2f}")
        self.console.print("\n")
        self.console.print(table)

    def print_files(self, files: Dict[str, str]):
        if self.quiet:
            return
        for label, path in sorted(files.items()):
            self.console.print(f"  [yellow]{label}[/yellow]: {path}")

    @staticmethod
    def _mark(flag: bool) -> str:
        return "[green]✓[/green]" if flag else "[red]✗[/red]"

    def print_verdict(self, passed: bool, message: str):
        """
        打印最终结论（静默模式下也输出）
        :param passed: 是否全部通过
        :param message: 结论
        """
        if passed:
            self.console.print(f"[bold green]✓ {message}[/bold green]")
        else:
            self.console.print(f"[bold red]✗ {message}[/bold red]")

    def print_error(self, message: str):
        """
        打印错误消息
        :param message: 错误消息
        """
        self.console.print(f"[bold red]错误: {message}[/bold red]")

    def print_warning(self, message: str):
        if self.quiet:
            return
        self.console.print(f"[bold yellow]⚠ {message}[/bold yellow]")

    def print_success(self, message: str):
        """
        打印成功消息
        :param message: 成功消息
        """
        if self.quiet:
            return
        self.console.print(f"[bold green]✓ {message}[/bold green]")

    def print_info(self, message: str):
        """
        打印信息消息
        :param message: 信息消息
        """
        if self.quiet:
            return
        self.console.print(f"[bold cyan]ℹ {message}[/bold cyan]")

    def print_separator(self):
        """打印分隔线"""
        if self.quiet:
            return
        self.console.print("\n" + "=" * 80 + "\n")
