"""Configuration for qexp runs.

Defaults come from the process environment. A ``.env`` file at the
repository root is loaded first if it exists.

Environment keys:
    QEXP_OUTPUT_ROOT   directory for run outputs and the provenance log (./qexp_runs)
    QEXP_BOX_BOUND     parameter box for the bounded backend (3)
    QEXP_LENGTH_BOUND  word length bound for the bounded backend (2)
    QEXP_MAX_BRANCHES  branch budget of the resolution pipeline (2000)
    QEXP_LOG_LEVEL     logging level name (WARNING)
    QEXP_TIMESTAMPS    "false" for timestamp-free, byte-reproducible logs (true)

Usage:
    from qexp.config import QexpConfig, RunConfig, parse_backend

    config = QexpConfig()
    name, box, length = parse_backend("bounded:3,2")
    run = RunConfig("decide", [Path("eq.qeq")], backend=name, box_bound=box or config.box_bound)
    run.validate()
"""

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from dotenv import load_dotenv

# Load .env from repository root
env_path = Path(__file__).parent.parent / ".env"
if env_path.exists():
    load_dotenv(dotenv_path=env_path)

DEFAULT_OUTPUT_ROOT = Path("qexp_runs")
DEFAULT_BOX_BOUND = 3
DEFAULT_LENGTH_BOUND = 2
DEFAULT_MAX_BRANCHES = 2000
DEFAULT_LOG_LEVEL = "WARNING"

BACKENDS = ("cyclic", "bounded")


def parse_backend(text: str) -> Tuple[str, Optional[int], Optional[int]]:
    """Split a backend name into ``(name, box_bound, length_bound)``.

    ``bounded:B,M`` carries its own bounds; plain names leave them to the caller.

    Raises:
        ValueError: If the name is unknown or the bounds are not two integers
    """
    name, _, bounds = text.strip().partition(":")
    if name not in BACKENDS:
        raise ValueError(f"Unknown backend '{text}', expected one of {', '.join(BACKENDS)} or bounded:B,M")
    if not bounds:
        return name, None, None
    if name != "bounded":
        raise ValueError(f"Backend '{name}' takes no bounds, got '{text}'")
    parts = bounds.split(",")
    if len(parts) != 2:
        raise ValueError(f"Expected bounded:B,M, got '{text}'")
    try:
        box, length = (int(p) for p in parts)
    except ValueError:
        raise ValueError(f"Bounds of '{text}' must be integers") from None
    return name, box, length


def _get_int(key: str, default: int) -> int:
    try:
        value = int(os.environ.get(key, str(default)))
    except Exception:
        return default
    return value if value > 0 else default


def _get_flag(key: str, default: bool) -> bool:
    raw = os.environ.get(key)
    if raw is None:
        return default
    return raw.strip().lower() not in ("0", "false", "no", "off")


def _get_level(key: str, default: str) -> str:
    name = os.environ.get(key, default).strip().upper()
    return name if isinstance(logging.getLevelName(name), int) else default


class QexpConfig:
    """Output locations and numeric defaults."""

    def __init__(self, output_root: Optional[Path] = None):
        """Initialize configuration.

        Args:
            output_root: Root directory for run outputs.
                         Defaults to QEXP_OUTPUT_ROOT or ./qexp_runs
        """
        if output_root is None:
            output_root = Path(os.environ.get("QEXP_OUTPUT_ROOT", str(DEFAULT_OUTPUT_ROOT)))
        self.output_root = Path(output_root)
        self.box_bound = _get_int("QEXP_BOX_BOUND", DEFAULT_BOX_BOUND)
        self.length_bound = _get_int("QEXP_LENGTH_BOUND", DEFAULT_LENGTH_BOUND)
        self.max_branches = _get_int("QEXP_MAX_BRANCHES", DEFAULT_MAX_BRANCHES)
        self.log_level = _get_level("QEXP_LOG_LEVEL", DEFAULT_LOG_LEVEL)
        self.timestamps = _get_flag("QEXP_TIMESTAMPS", True)

    @property
    def provenance_log_path(self) -> Path:
        return self.output_root / "provenance.log"

    def ensure_output_root(self) -> Path:
        self.output_root.mkdir(parents=True, exist_ok=True)
        return self.output_root


@dataclass
class RunConfig:
    """One CLI invocation."""

    subcommand: str
    inputs: List[Path] = field(default_factory=list)
    backend: Optional[str] = None
    box_bound: int = DEFAULT_BOX_BOUND
    length_bound: int = DEFAULT_LENGTH_BOUND
    output_dir: Optional[Path] = None
    verbosity: int = 0
    timestamps: bool = True

    def validate(self) -> None:
        """Raises:
        ValueError: If the backend is unknown or a bound it needs is not positive
        """
        if self.backend is not None and self.backend not in BACKENDS:
            raise ValueError(f"Unknown backend '{self.backend}', expected one of {', '.join(BACKENDS)}")
        if self.backend == "bounded":
            if self.box_bound <= 0:
                raise ValueError(f"Box bound must be positive, got {self.box_bound}")
            if self.length_bound <= 0:
                raise ValueError(f"Length bound must be positive, got {self.length_bound}")
        if self.subcommand == "picture-check" and self.length_bound <= 0:
            raise ValueError(f"Length bound must be positive, got {self.length_bound}")
