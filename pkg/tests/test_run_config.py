﻿"""运行配置解析与字段级错误定位"""

import glob
import json
import os

import pytest

from conftest import INPUT_DIR
from src.config.run_config import CONSTRUCTION_CHECKS, RunConfigParser
from src.core.errors import ConfigError
from src.core.verification import CARTAN_NORMALIZATION

VALID_CONFIGS = sorted(p for p in glob.glob(os.path.join(INPUT_DIR, "*.json"))
                       if not os.path.basename(p).startswith("malformed"))


def _double(**overrides):
    data = {"group": {"kind": "su", "n": 2}, "construction": {"type": "double"}, "suites": ["qh1"]}
    data.update(overrides)
    return data


@pytest.mark.parametrize("path", VALID_CONFIGS, ids=os.path.basename)
def test_example_configs_parse(path):
    config = RunConfigParser.parse_from_file(path)
    assert config.source == path
    assert set(config.suites) <= set(CONSTRUCTION_CHECKS[config.construction_type])
    json.dumps(config.echo())


def test_defaults():
    config = RunConfigParser.parse_from_dict(_double())
    assert config.samples == 50
    assert config.seed == 0
    assert config.normalization == CARTAN_NORMALIZATION
    assert config.construction == {"type": "double", "twists": ["identity", "identity"]}
    assert config.tolerance('qh1') == 1e-6
    assert config.tolerance('unknown_check', 0.5) == 0.5


def test_duplicate_suites_are_collapsed():
    config = RunConfigParser.parse_from_dict(_double(suites=["qh2", "qh1", "qh2"]))
    assert config.suites == ["qh2", "qh1"]


def test_finite_group_table_is_resolved_against_config_dir():
    config = RunConfigParser.parse_from_file(os.path.join(INPUT_DIR, "double_s3.json"))
    assert os.path.exists(config.group.table)
    assert config.group.is_finite


def test_malformed_file_reports_field():
    with pytest.raises(ConfigError) as info:
        RunConfigParser.parse_from_file(os.path.join(INPUT_DIR, "malformed_negative_N.json"))
    assert info.value.field == "construction.N"
    assert str(info.value).startswith("construction.N")


@pytest.mark.parametrize("data,field", [
    (_double(suites=["qh1", "loop_props"]), "suites[1]"),
    (_double(suites=[]), "suites"),
    (_double(group={"kind": "su", "n": 1}), "group.n"),
    (_double(group={"kind": "sp", "n": 2}), "group.kind"),
    (_double(samples=0), "samples"),
    (_double(seed=-1), "seed"),
    (_double(normalization=0), "normalization"),
    (_double(tolerances={"qh1": -1}), "tolerances.qh1"),
    (_double(construction={"type": "double", "twists": ["identity"]}), "construction.twists"),
    (_double(construction={"type": "double", "twists": ["identity", "flip"]}), "construction.twists[1]"),
    (_double(construction={"type": "planted"}), "gamma"),
    (_double(construction={"type": "knot"}), "construction.type"),
    (_double(gamma={"order": 2, "generator": "flip"}), "gamma.generator"),
    (_double(gamma={"order": 0}), "gamma.order"),
    ({"group": {"kind": "su", "n": 2}, "suites": ["qh1"]}, "construction"),
    ({"construction": {"type": "double"}, "suites": ["qh1"]}, "group"),
    ({"group": {"kind": "su"}, "construction": {"type": "loop", "m": 2, "N": 9}, "suites": ["loop_props"]},
     "construction.N"),
    ({"group": {"kind": "su"}, "construction": {"type": "loop", "N": 8, "twisted": True},
      "suites": ["loop_props"]}, "gamma"),
    ({"group": {"kind": "su"}, "construction": {"type": "surface", "boundaries": [1, 0]}, "suites": ["qh1"]},
     "construction.boundaries[1]"),
    ({"group": {"kind": "su"}, "gamma": {"order": 2}, "construction": {"type": "cover"}, "suites": ["push_hom"]},
     "construction.base"),
    ({"group": {"kind": "su"}, "gamma": {"order": 2},
      "construction": {"type": "cover", "base": {"boundaries": [1]}}, "suites": ["enumeration"]}, "suites[0]"),
    ({"group": {"kind": "cyclic", "order": 3}, "construction": {"type": "double"}, "suites": ["qh1"]},
     "suites[0]"),
    ({"group": {"kind": "finite", "table": "missing.json"}, "construction": {"type": "double"},
      "suites": ["action"]}, "group.table"),
])
def test_invalid_configs(data, field):
    with pytest.raises(ConfigError) as info:
        RunConfigParser.parse_from_dict(data)
    assert info.value.field == field


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError):
        RunConfigParser.parse_from_file(str(tmp_path / "absent.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{\"group\": ", encoding="utf-8")
    with pytest.raises(ConfigError):
        RunConfigParser.parse_from_file(str(broken))
    with pytest.raises(ConfigError):
        RunConfigParser.parse_from_dict([1, 2])
