﻿"""
准哈密顿检验主程序
qham run <config.json> [--out DIR] [--seed S] [--samples K]
qham enumerate <config.json>
"""

import argparse
import sys
from typing import Dict, List, Optional

from rich.console import Console
from rich.prompt import Confirm

import config
from src.config.run_config import RunConfig, RunConfigParser
from src.config.runtime_config import runtime_config
from src.core.errors import ConfigError, QHamError, ResourceGuardError
from src.suites.cover_suite import CoverSuite
from src.suites.loop_suite import LoopSuite
from src.suites.runner import create_suite, run_suites
from src.suites.suite_interface import SuiteInterface
from src.utils.output_formatter import OutputFormatter
from src.utils.quiver_visualizer import QuiverVisualizer
from src.utils.report_exporter import EnumerationExporter, ReportExporter

# 退出码
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_GUARD = 3


class QHamManager:
    """检验流程管理器"""

    def __init__(self, formatter: Optional[OutputFormatter] = None):
        """初始化管理器"""
        self.formatter = formatter or OutputFormatter()
        self.console = self.formatter.console

    def _enabled(self, mode: int, question: str) -> bool:
        """
        按 config.py 的开关决定是否执行某个可选输出
        :param mode: ConfigMode 取值
        :param question: ASK_USER 时的提问
        """
        if mode == config.ConfigMode.ALWAYS_YES:
            return True
        if mode == config.ConfigMode.ALWAYS_NO:
            return False
        if not sys.stdin.isatty():
            return False
        return Confirm.ask(question, default=False)

    def _load(self, config_path: str, seed: Optional[int], samples: Optional[int]) -> RunConfig:
        run_config = RunConfigParser.parse_from_file(config_path)
        if seed is not None:
            if seed < 0:
                raise ConfigError(f"种子必须是非负整数: {seed}", field="--seed")
            run_config.seed = seed
        if samples is not None:
            if samples < 1:
                raise ConfigError(f"样本数必须是正整数: {samples}", field="--samples")
            run_config.samples = samples
        return run_config

    def _guarded(self, action) -> int:
        """把异常映射为退出码"""
        try:
            return action()
        except ConfigError as e:
            self.formatter.print_error(f"配置错误 {e}")
            return EXIT_CONFIG
        except ResourceGuardError as e:
            self.formatter.print_error(str(e))
            return EXIT_GUARD
        except QHamError as e:
            self.formatter.print_error(str(e))
            return EXIT_FAIL
        except Exception:
            self.console.print_exception()
            return EXIT_FAIL

    # ---- run ----

    def run(self, config_path: str, out_dir: Optional[str] = None, seed: Optional[int] = None,
            samples: Optional[int] = None, markdown: bool = True) -> int:
        """
        运行配置中的全部检验并写出报告
        :return: 退出码
        """
        return self._guarded(lambda: self._run(config_path, out_dir, seed, samples, markdown))

    def _run(self, config_path: str, out_dir: Optional[str], seed: Optional[int], samples: Optional[int],
             markdown: bool) -> int:
        run_config = self._load(config_path, seed, samples)
        out_dir = out_dir or runtime_config.output_dir
        self.formatter.print_config(run_config)
        suite = create_suite(run_config)
        self.formatter.print_info(f"构造完成: {suite.get_name()}，线程数 {runtime_config.threads}")
        bundle = run_suites(run_config, suite)
        self.formatter.print_reports(bundle)
        if isinstance(suite, LoopSuite):
            self.formatter.print_convergence(suite.rows)

        exporter = ReportExporter(bundle)
        files: Dict[str, str] = {'json': exporter.export_to_json(out_dir)}
        if markdown and self._enabled(config.EXPORT_MARKDOWN_CONFIG, "是否写出 Markdown 摘要?"):
            files['markdown'] = exporter.export_to_markdown(out_dir)
        image = self._render_quiver(suite, out_dir)
        if image:
            files['quiver'] = image
        self.formatter.print_files(files)

        if bundle.passed:
            total = sum(len(reports) for reports in bundle.suites.values())
            self.formatter.print_verdict(True, f"{run_config.name}: 全部 {total} 项检验通过")
            return EXIT_PASS
        failures = bundle.failures()
        self.formatter.print_failures(failures)
        self.formatter.print_verdict(False, f"{run_config.name}: {len(failures)} 项检验失败")
        return EXIT_FAIL

    def _render_quiver(self, suite: SuiteInterface, out_dir: str) -> Optional[str]:
        quiver = getattr(suite, 'quiver', None)
        lifted = getattr(suite, 'lifted', None)
        if lifted is not None:
            quiver = lifted.quiver
        if quiver is None or not self._enabled(config.GENERATE_QUIVER_IMAGE_CONFIG, "是否生成箭图图片?"):
            return None
        path = QuiverVisualizer(quiver, lifted).visualize(out_dir)
        if path is None:
            self.formatter.print_warning("graphviz 不可用，跳过箭图图片")
        return path

    # ---- enumerate ----

    def enumerate(self, config_path: str, out_dir: Optional[str] = None) -> int:
        """
        有限群覆叠的穷举计数与双射判定
        :return: 退出码
        """
        return self._guarded(lambda: self._enumerate(config_path, out_dir))

    def _enumerate(self, config_path: str, out_dir: Optional[str]) -> int:
        run_config = self._load(config_path, None, None)
        if run_config.construction_type != 'cover':
            raise ConfigError("enumerate 需要 cover 构造", field="construction.type")
        if not run_config.group.is_finite:
            raise ConfigError("enumerate 需要有限群", field="group.kind")
        out_dir = out_dir or runtime_config.output_dir
        self.formatter.print_config(run_config)
        suite = create_suite(run_config)
        assert isinstance(suite, CoverSuite)
        result = suite.enumerate()
        self.formatter.print_enumeration(result)

        exporter = EnumerationExporter(result, run_config.name)
        files = {'json': exporter.export_to_json(out_dir)}
        if self._enabled(config.EXPORT_ENUMERATION_CSV_CONFIG, "是否导出 CSV 计数表?"):
            files['csv'] = exporter.export_to_csv(out_dir)
        self.formatter.print_files(files)

        message = f"|Hom^Γ| = {result.fixed}，|Hom_mon| = {result.twisted}"
        if result.bijection:
            self.formatter.print_verdict(True, f"{message}，双射成立")
            return EXIT_PASS
        self.formatter.print_verdict(False, f"{message}，双射不成立（往返不一致 {result.roundtrip_mismatches} 处）")
        return EXIT_FAIL


def build_arg_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="只输出最终结论")
    parser = argparse.ArgumentParser(prog="qham", description="准哈密顿空间构造的数值与穷举检验")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", parents=[common], help="运行配置中的检验并写出报告")
    run.add_argument("config", help="JSON 运行配置")
    run.add_argument("--out", default=None, help="输出目录（默认 output）")
    run.add_argument("--seed", type=int, default=None, help="覆盖配置中的种子")
    run.add_argument("--samples", type=int, default=None, help="覆盖配置中的样本数")
    run.add_argument("--no-markdown", action="store_true", help="不写 report.md")

    enum = commands.add_parser("enumerate", parents=[common], help="有限群覆叠的穷举计数")
    enum.add_argument("config", help="JSON 运行配置")
    enum.add_argument("--out", default=None, help="输出目录（默认 output）")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数"""
    args = build_arg_parser().parse_args(argv)
    runtime_config.reload()
    runtime_config.set_quiet(args.quiet)
    manager = QHamManager(OutputFormatter(Console()))
    if args.command == "run":
        return manager.run(args.config, args.out, args.seed, args.samples, markdown=not args.no_markdown)
    return manager.enumerate(args.config, args.out)


if __name__ == '__main__':
    sys.exit(main())
