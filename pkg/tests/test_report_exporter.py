﻿"""报告模型与导出：合并、舍入、格式校验与 Markdown 摘要"""

import json
import math

import pytest

from report_checker import ReportComparator, main as checker_main
from src.core.report import ReportBundle, VerificationReport
from src.utils.report_exporter import ReportExporter


def _bundle(residual: float = 1e-9) -> ReportBundle:
    reports = [VerificationReport.from_residuals('qh1', [1e-12, residual, 3e-10], 1e-6, seed=7),
               VerificationReport('qh3', 1, 0.0, 0.0, 7, 0, {'null_dimension': 0})]
    return ReportBundle({'qham': reports}, {'name': 'demo', 'construction': {'type': 'double'}, 'samples': 3,
                                            'seed': 7}, {'qham': '0.1.0', 'python': '3.x'})


def test_from_residuals_tracks_worst_sample():
    report = VerificationReport.from_residuals('qh1', [1e-12, 5e-9, 3e-10], 1e-6)
    assert report.worst_sample == 1
    assert report.max_residual == 5e-9
    assert report.passed
    empty = VerificationReport.from_residuals('qh1', [], 1e-6)
    assert empty.samples == 0 and empty.worst_sample == -1


def test_nan_residual_fails():
    report = VerificationReport.from_residuals('qh2', [1e-9, math.nan], 1e-6)
    assert report.worst_sample == 1
    assert not report.passed


def test_merge_offsets_worst_sample():
    a = VerificationReport.from_residuals('qh1', [1e-9, 2e-9], 1e-6)
    b = VerificationReport.from_residuals('qh1', [5e-9, 1e-10], 1e-6)
    merged = a.merge(b)
    assert merged.samples == 4
    assert merged.worst_sample == 2
    assert merged.max_residual == 5e-9


def test_to_dict_rounds_to_twelve_digits():
    data = VerificationReport('qh1', 1, 1.0 / 3.0, 1e-6).to_dict()
    assert data['max_residual'] == float(f"{1.0 / 3.0:.12g}")


def test_exported_json_is_valid_and_stable(tmp_path):
    exporter = ReportExporter(_bundle())
    path = exporter.export_to_json(str(tmp_path / "one"))
    again = ReportExporter(_bundle()).export_to_json(str(tmp_path / "two"))
    with open(path, 'rb') as f, open(again, 'rb') as g:
        assert f.read() == g.read()
    data = ReportExporter.load_from_json(path)
    assert ReportExporter.validate_format(data)
    assert data['suites']['qham'][0]['worst_sample'] == 1


def test_validate_format_rejects_inconsistent_verdict():
    data = _bundle().to_dict()
    data['passed'] = False
    assert not ReportExporter.validate_format(data)
    assert not ReportExporter.validate_format({'passed': True})
    assert not ReportExporter.validate_format([])


def test_markdown_lists_failures(tmp_path):
    path = ReportExporter(_bundle(residual=1.0)).export_to_markdown(str(tmp_path))
    with open(path, encoding='utf-8') as f:
        text = f.read()
    assert "# 检验报告: demo" in text
    assert "失败" in text
    assert "`qh1`" in text


def test_comparator_identical_and_different(tmp_path):
    a = ReportExporter(_bundle()).export_to_json(str(tmp_path / "a"))
    b = ReportExporter(_bundle()).export_to_json(str(tmp_path / "b"))
    c = ReportExporter(_bundle(residual=2e-9)).export_to_json(str(tmp_path / "c"))
    comparator = ReportComparator()
    same = comparator.compare(a, b)
    assert same['identical'] and same['valid'] and not same['differences']
    diff = comparator.compare(a, c)
    assert not diff['identical']
    assert {d['field'] for d in diff['differences']} == {'max_residual'}
    assert checker_main([a, b]) == 0
    assert checker_main([a, c]) == 1
    assert checker_main([a]) == 2


def test_comparator_reports_whitespace_only_difference(tmp_path):
    a = ReportExporter(_bundle()).export_to_json(str(tmp_path / "a"))
    compact = tmp_path / "compact.json"
    with open(a, encoding='utf-8') as f:
        compact.write_text(json.dumps(json.load(f)), encoding='utf-8')
    result = ReportComparator().compare(a, str(compact))
    assert not result['identical']
    assert result['differences'] == []


@pytest.mark.parametrize("residual,passed", [(1e-6, True), (1.0000001e-6, False)])
def test_tolerance_boundary(residual, passed):
    assert VerificationReport('qh1', 1, residual, 1e-6).passed is passed
