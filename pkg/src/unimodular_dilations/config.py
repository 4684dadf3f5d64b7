"""Runtime configuration for the CLI and the MCP server."""

import logging
import os
import sys
from pathlib import Path
from typing import Dict, Optional, Tuple

from .dilation import BoundaryStyle, dispatch, run_plan
from .lattice_core import Triangulation

logger = logging.getLogger(__name__)


def load_environment() -> None:
    """Load a .env file from the project root, else from the working directory."""
    try:
        from dotenv import load_dotenv
    except ImportError:
        # dotenv not available, rely on system environment variables
        return
    env_file = Path(__file__).parent.parent.parent / ".env"
    if env_file.exists():
        load_dotenv(env_file)
        print(f"Loaded environment from: {env_file}", file=sys.stderr)
    else:
        load_dotenv()


def _int_var(name: str, default: int, minimum: int) -> int:
    raw = os.getenv(name, str(default))
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise ValueError(f"{name} must be at least {minimum}, got {value}")
    return value


class DilationConfigManager:
    """Lazily loaded settings plus a small cache of finished triangulations."""

    def __init__(self):
        self._config_loaded = False
        self._cache: Dict[Tuple[int, int, int, str], Triangulation] = {}
        self.cache_size = 16

        # Configuration will be loaded lazily when first needed
        self.jobs = 1
        self.width_bound = 0
        self.nonstandard_height = 0
        self.output_dir = Path(".")
        self.debug = False
        self.config_error: Optional[str] = None

    def _load_config(self):
        """Load configuration from environment variables."""
        if self._config_loaded:
            return

        self.debug = os.getenv("DILATIONS_DEBUG") == "true"
        if self.debug:
            names = [var for var in os.environ if var.startswith("DILATIONS_")]
            print(f"DEBUG: Available DILATIONS_* environment variables: {names}", file=sys.stderr)

        self.jobs = _int_var("DILATIONS_JOBS", 1, 1)
        self.width_bound = _int_var("DILATIONS_WIDTH_BOUND", 0, 0)
        self.nonstandard_height = _int_var("DILATIONS_NONSTANDARD_HEIGHT", 0, 0)
        self.output_dir = Path(os.getenv("DILATIONS_OUTPUT_DIR", "."))
        if self.output_dir.exists() and not self.output_dir.is_dir():
            raise ValueError(f"DILATIONS_OUTPUT_DIR must be a directory, got {self.output_dir}")

        if self.debug:
            print(f"DEBUG: DILATIONS_JOBS = {self.jobs}", file=sys.stderr)
            print(f"DEBUG: DILATIONS_OUTPUT_DIR = {self.output_dir}", file=sys.stderr)

        self._config_loaded = True

    def has_required_config(self) -> bool:
        """Check that the environment holds valid settings without raising."""
        try:
            self._load_config()
            self.config_error = None
            return True
        except ValueError as e:
            self.config_error = str(e)
            return False

    def override(self, **values) -> None:
        """Load the environment, then replace selected settings (command-line flags)."""
        self._load_config()
        for name, value in values.items():
            if value is not None:
                setattr(self, name, value)

    def search_bound(self, q: int) -> int:
        """Coefficient bound for width searches; 0 in the environment means q."""
        self._load_config()
        return self.width_bound or max(q, 1)

    def get_triangulation(
        self, p: int, q: int, k: int, style: "str | BoundaryStyle", height: Optional[int] = None
    ) -> Triangulation:
        """Build (or reuse) the triangulation chosen by dispatch."""
        self._load_config()
        style = BoundaryStyle.parse(style)
        key = (p % q if q > 1 else 0, q, k, f"{style.value}:{height or self.nonstandard_height}")
        if key not in self._cache:
            plan = dispatch(p, q, k, style, height=height or self.nonstandard_height or None)
            if len(self._cache) >= self.cache_size:
                self._cache.pop(next(iter(self._cache)))
            self._cache[key] = run_plan(plan)
        else:
            logger.debug(f"Reusing cached triangulation for {key}")
        return self._cache[key]
