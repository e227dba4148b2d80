﻿"""命令行入口：退出码、输出文件与报告的逐字节确定性"""

import csv
import json
import os

import pytest

from conftest import INPUT_DIR
from main import EXIT_CONFIG, EXIT_FAIL, EXIT_GUARD, EXIT_PASS, build_arg_parser, main
from src.config.runtime_config import THREADS_ENV


def _config(name: str) -> str:
    return os.path.join(INPUT_DIR, name)


def _run(name: str, out, *extra: str) -> int:
    return main(["run", _config(name), "--out", str(out), "--quiet", *extra])


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_arg_parser().parse_args([])
    args = build_arg_parser().parse_args(["run", "x.json", "--seed", "4", "--samples", "2"])
    assert (args.command, args.seed, args.samples, args.quiet) == ("run", 4, 2, False)


def test_passing_run_writes_reports(tmp_path):
    assert _run("double_su2.json", tmp_path, "--samples", "3") == EXIT_PASS
    with open(tmp_path / "report.json", encoding='utf-8') as f:
        report = json.load(f)
    assert report['passed'] is True
    assert report['config']['samples'] == 3
    assert (tmp_path / "report.md").exists()


def test_no_markdown_flag(tmp_path):
    assert _run("generalized_double_su2.json", tmp_path, "--samples", "2", "--no-markdown") == EXIT_PASS
    assert not (tmp_path / "report.md").exists()


@pytest.mark.parametrize("name", ["degenerate_su2.json", "planted_su2.json", "wrong_normalization_su2.json"])
def test_negative_controls_exit_one(name, tmp_path):
    assert _run(name, tmp_path) == EXIT_FAIL
    with open(tmp_path / "report.json", encoding='utf-8') as f:
        assert json.load(f)['passed'] is False


def test_config_errors_exit_two(tmp_path):
    assert _run("malformed_negative_N.json", tmp_path) == EXIT_CONFIG
    assert _run("double_su2.json", tmp_path, "--seed", "-1") == EXIT_CONFIG
    assert _run("double_su2.json", tmp_path, "--samples", "0") == EXIT_CONFIG
    assert _run("does_not_exist.json", tmp_path) == EXIT_CONFIG
    assert not (tmp_path / "report.json").exists()


def test_unparsable_seed_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as info:
        _run("double_su2.json", tmp_path, "--seed", "abc")
    assert info.value.code == EXIT_CONFIG


def test_enumeration_guard_exit_three(tmp_path):
    assert _run("cover_guard_s3.json", tmp_path) == EXIT_GUARD
    assert main(["enumerate", _config("cover_guard_s3.json"), "--out", str(tmp_path), "--quiet"]) == EXIT_GUARD


def test_enumerate_command(tmp_path):
    code = main(["enumerate", _config("cover_annulus_z3.json"), "--out", str(tmp_path), "--quiet"])
    assert code == EXIT_PASS
    with open(tmp_path / "enumeration.json", encoding='utf-8') as f:
        data = json.load(f)
    assert data['fixed'] == data['twisted'] == 9
    assert data['bijection'] is True
    with open(tmp_path / "enumeration.csv", encoding='utf-8', newline='') as f:
        rows = dict(csv.reader(f))
    assert rows['hom_x'] == '81'


def test_enumerate_rejects_non_cover(tmp_path):
    assert main(["enumerate", _config("double_s3.json"), "--out", str(tmp_path), "--quiet"]) == EXIT_CONFIG
    assert main(["enumerate", _config("cover_su2.json"), "--out", str(tmp_path), "--quiet"]) == EXIT_CONFIG


def test_reports_are_byte_identical(tmp_path, monkeypatch):
    first, second = tmp_path / "a", tmp_path / "b"
    monkeypatch.setenv(THREADS_ENV, "1")
    assert _run("cover_torus_s3.json", first, "--samples", "5") == EXIT_PASS
    monkeypatch.setenv(THREADS_ENV, "6")
    assert _run("cover_torus_s3.json", second, "--samples", "5") == EXIT_PASS
    assert (first / "report.json").read_bytes() == (second / "report.json").read_bytes()


def test_seed_changes_report(tmp_path):
    assert _run("double_su2.json", tmp_path / "a", "--samples", "2", "--seed", "1") == EXIT_PASS
    assert _run("double_su2.json", tmp_path / "b", "--samples", "2", "--seed", "2") == EXIT_PASS
    assert (tmp_path / "a" / "report.json").read_bytes() != (tmp_path / "b" / "report.json").read_bytes()


def _finite_configs():
    names = []
    for filename in sorted(os.listdir(INPUT_DIR)):
        if not filename.endswith(".json"):
            continue
        with open(_config(filename), encoding='utf-8-sig') as f:
            data = json.load(f)
        if isinstance(data.get('group'), dict) and data['group'].get('kind') in ('finite', 'cyclic'):
            names.append(filename)
    return names


@pytest.mark.parametrize("name", _finite_configs())
def test_every_finite_config_runs_to_a_verdict(name, tmp_path):
    expected = EXIT_GUARD if "guard" in name else EXIT_PASS
    assert _run(name, tmp_path) == expected
    if expected == EXIT_PASS:
        with open(tmp_path / "report.json", encoding='utf-8') as f:
            assert json.load(f)['passed'] is True
