"""
ebss/config.py

Configuration loader for benchmark runs.

Every CLI flag that is not given explicitly falls back to an EBSS_* env var,
then to the built-in default below:
- search parameters (c1, c2, delta, resolution)
- suite controls (seed, per-instance timeout, worker count)
- locations (output dir, Korf instance file; data/korf100.txt by default)
- safety controls (state guard for exhaustive checks, debug self-tests)

c1/c2 are read as exact rationals ("2", "5", "10/3").
"""
from __future__ import annotations
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional
from pathlib import Path
from dotenv import load_dotenv

# Always load .env from repo root reliably (no find_dotenv() stack-frame issues)
ENV_PATH = Path(__file__).resolve().parents[1] / ".env"
load_dotenv(dotenv_path=ENV_PATH)

REPO_ROOT = Path(__file__).resolve().parents[1]
DEFAULT_KORF_PATH = REPO_ROOT / "data" / "korf100.txt"


def _opt(name: str) -> "Optional[str]":
    """Fetch an optional environment variable."""
    v = os.getenv(name)
    return v if v else None


def _env_int(name: str, default: int) -> int:
    """Read an int env var with a default. Accepts 1e6-style literals."""
    v = os.getenv(name)
    if v in (None, ""):
        return int(default)
    return parse_int(v)


def _env_str(name: str, default: str) -> str:
    v = os.getenv(name)
    return v if v not in (None, "") else default


def _env_bool(name: str, default: bool = False) -> bool:
    v = os.getenv(name)
    if v in (None, ""):
        return default
    return v.strip().lower() in {"1", "true", "yes", "y"}


def _env_rational(name: str, default: str) -> Fraction:
    """Read an exact rational env var ("2", "3/2", "1.5")."""
    return parse_rational(_env_str(name, default))


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational number: {text!r}") from e


def parse_int(text: str) -> int:
    """Parse an integer, also in exact scientific form (1e6, 10^6)."""
    s = text.strip().replace("_", "").replace(",", "")
    if "^" in s:
        base, exp = s.split("^", 1)
        return int(base) ** int(exp)
    value = Fraction(s)
    if value.denominator != 1:
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


@dataclass(frozen=True)
class BenchSettings:
    # Search parameters
    c1: Fraction
    c2: Fraction
    delta: int
    resolution: int

    # Suite controls
    seed: int
    timeout_s: Optional[float]
    workers: int

    # Locations
    out_dir: Path
    korf_path: Path

    # Safety / diagnostics
    max_states: int
    debug: bool
    run_slow: bool
    db_batch_size: int


def load_config() -> BenchSettings:
    """Load env config; validation of the parameter tuple happens in EBParams."""
    timeout_raw = _opt("EBSS_TIMEOUT_S")
    timeout_s = float(timeout_raw) if timeout_raw else None
    if timeout_s is not None and timeout_s <= 0:
        timeout_s = None

    korf_raw = _opt("EBSS_KORF_PATH")
    korf_path = Path(korf_raw).expanduser() if korf_raw else DEFAULT_KORF_PATH

    out_dir = Path(_env_str("EBSS_OUT_DIR", str(REPO_ROOT / "out"))).expanduser()

    return BenchSettings(
        c1=_env_rational("EBSS_C1", "2"),
        c2=_env_rational("EBSS_C2", "5"),
        delta=_env_int("EBSS_DELTA", 1),
        resolution=_env_int("EBSS_RESOLUTION", 1_000_000),

        seed=_env_int("EBSS_SEED", 1),
        timeout_s=timeout_s,
        workers=max(1, _env_int("EBSS_WORKERS", 1)),

        out_dir=out_dir,
        korf_path=korf_path,

        max_states=_env_int("EBSS_MAX_STATES", 1_000_000),
        debug=_env_bool("EBSS_DEBUG", False),
        run_slow=_env_bool("EBSS_RUN_SLOW", False),
        db_batch_size=max(1, _env_int("EBSS_DB_BATCH_SIZE", 500)),
    )
