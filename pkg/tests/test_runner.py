﻿"""套件注册、随机流独立性与并发汇总的确定性"""

import json
import os

import pytest

from conftest import INPUT_DIR
from src.config.run_config import RunConfigParser
from src.config.runtime_config import THREADS_ENV, runtime_config
from src.core.errors import CompatibilityError, ConfigError, ResourceGuardError
from src.suites.runner import SUITE_REGISTRY, create_suite, environment_stamp, run_suites


def _load(name: str, **overrides):
    with open(os.path.join(INPUT_DIR, name), encoding='utf-8') as f:
        data = json.load(f)
    data.update(overrides)
    return RunConfigParser.parse_from_dict(data, base_dir=INPUT_DIR)


def test_registry_covers_every_construction():
    from src.config.run_config import CONSTRUCTION_CHECKS
    assert set(SUITE_REGISTRY) == set(CONSTRUCTION_CHECKS)


def test_environment_stamp_keys():
    assert list(environment_stamp()) == ['qham', 'python', 'numpy', 'scipy']


def test_check_rng_depends_only_on_seed_and_name():
    suite = create_suite(_load("double_su2.json", samples=2))
    a = suite.check_rng('qh1').standard_normal(4)
    b = suite.check_rng('qh1').standard_normal(4)
    c = suite.check_rng('qh2').standard_normal(4)
    assert (a == b).all()
    assert not (a == c).all()


def test_double_bundle_passes():
    bundle = run_suites(_load("double_su2.json", samples=3))
    assert bundle.passed, bundle.failures()
    assert list(bundle.suites) == sorted(bundle.suites)
    assert bundle.to_dict()['config']['construction_summary']


@pytest.mark.parametrize("name", ["double_s3.json", "cover_annulus_z3.json", "cover_torus_s3.json",
                                  "surface_su2.json", "generalized_double_su2.json"])
def test_example_bundles_pass(name):
    bundle = run_suites(_load(name, samples=3))
    assert bundle.passed, bundle.failures()


@pytest.mark.parametrize("name", ["degenerate_su2.json", "planted_su2.json", "wrong_normalization_su2.json"])
def test_negative_controls_fail(name):
    bundle = run_suites(_load(name, samples=3))
    assert not bundle.passed
    assert bundle.failures()


def test_threads_do_not_change_results(monkeypatch):
    config = _load("double_gamma_su2.json", samples=3)
    monkeypatch.setenv(THREADS_ENV, "1")
    runtime_config.reload()
    serial = run_suites(config).to_dict()
    monkeypatch.setenv(THREADS_ENV, "8")
    runtime_config.reload()
    parallel = run_suites(config).to_dict()
    assert json.dumps(serial, sort_keys=True) == json.dumps(parallel, sort_keys=True)


@pytest.mark.parametrize("raw,expected", [("3", 3), ("0", 1), ("abc", None), ("", None)])
def test_threads_env_parsing(raw, expected, monkeypatch):
    monkeypatch.setenv(THREADS_ENV, raw)
    runtime_config.reload()
    if expected is None:
        assert runtime_config.threads == min(4, os.cpu_count() or 1)
    else:
        assert runtime_config.threads == expected


def test_enumeration_guard_propagates():
    with pytest.raises(ResourceGuardError):
        run_suites(_load("cover_guard_s3.json"))


def test_bad_representatives_are_config_errors():
    with pytest.raises(ConfigError) as info:
        create_suite(_load("cover_torus_s3.json", construction={
            "type": "cover", "base": {"genus": 1, "boundaries": [1]}, "hom": {"a1": 1},
            "representatives": [5]}))
    assert info.value.field == "construction.representatives"


def test_finite_double_only_accepts_identity_twist():
    suite = create_suite(_load("double_s3.json"))
    assert suite._bitorsor('identity', "bG").twist.auts[0].is_identity()
    with pytest.raises(CompatibilityError):
        suite._bitorsor('diag', "bG")
