from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from ebss.config import DEFAULT_KORF_PATH, load_config, parse_int, parse_rational

ENV_NAMES = [
    "EBSS_C1", "EBSS_C2", "EBSS_DELTA", "EBSS_RESOLUTION", "EBSS_SEED", "EBSS_TIMEOUT_S",
    "EBSS_WORKERS", "EBSS_OUT_DIR", "EBSS_KORF_PATH", "EBSS_MAX_STATES", "EBSS_DEBUG",
    "EBSS_DB_BATCH_SIZE",
]


@pytest.fixture
def clean_env(monkeypatch):
    for name in ENV_NAMES:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


def test_parse_int():
    assert parse_int("1e6") == 1_000_000
    assert parse_int("10^9") == 10**9
    assert parse_int("1_000") == 1000
    assert parse_int(" 42 ") == 42
    with pytest.raises(ValueError):
        parse_int("1.5")


def test_parse_rational():
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational("1.5") == Fraction(3, 2)
    with pytest.raises(ValueError):
        parse_rational("two")
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_defaults(clean_env):
    settings = load_config()
    assert (settings.c1, settings.c2, settings.delta) == (2, 5, 1)
    assert settings.resolution == 1_000_000
    assert settings.timeout_s is None
    assert settings.workers == 1
    assert settings.korf_path == DEFAULT_KORF_PATH
    assert settings.korf_path.is_file()
    assert not settings.debug
    assert settings.out_dir.name == "out"


def test_env_overrides(clean_env, tmp_path):
    clean_env.setenv("EBSS_C1", "3/2")
    clean_env.setenv("EBSS_DELTA", "1e6")
    clean_env.setenv("EBSS_TIMEOUT_S", "30")
    clean_env.setenv("EBSS_WORKERS", "0")
    clean_env.setenv("EBSS_OUT_DIR", str(tmp_path))
    clean_env.setenv("EBSS_KORF_PATH", str(tmp_path / "korf.txt"))
    clean_env.setenv("EBSS_DEBUG", "yes")
    settings = load_config()
    assert settings.c1 == Fraction(3, 2)
    assert settings.delta == 10**6
    assert settings.timeout_s == 30.0
    assert settings.workers == 1
    assert settings.out_dir == Path(tmp_path)
    assert settings.korf_path == tmp_path / "korf.txt"
    assert settings.debug


def test_non_positive_timeout_means_none(clean_env):
    clean_env.setenv("EBSS_TIMEOUT_S", "0")
    assert load_config().timeout_s is None
