"""
Moser-Trudinger Lab - Configuration
===================================

Central configuration for the command-line lab: logging, worker pool size,
default quadrature mesh and output format. Every setting has a default, so
the lab runs without any environment; variables only override.
"""

import os
import logging
import sys
from pathlib import Path
from typing import Optional
from dataclasses import dataclass

from mtlab import __version__
from mtlab.experiments import DEFAULT_EPSILONS
from mtlab.radial import QuadratureSpec

OUTPUT_FORMATS = ("csv", "json")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _env_flag(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).lower() in ("true", "1", "yes")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}")


@dataclass
class LabConfig:
    """Lab configuration with validation"""

    # Core Settings
    app_name: str = "Moser-Trudinger Lab"
    version: str = __version__
    debug: bool = False

    # Logging Settings
    log_level: str = "WARNING"
    log_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Compute Settings
    workers: int = 1
    panels: int = 200
    nodes_per_panel: int = 16
    grading: float = 2.0
    cutoff: float = 1e-12
    default_epsilons: tuple = DEFAULT_EPSILONS

    # Output Settings
    output_format: str = "csv"

    # File Paths
    app_root: Path = Path(__file__).parent

    def __post_init__(self):
        """Validate configuration after initialization"""
        self._validate_config()
        self._setup_logging()

    def _validate_config(self):
        if self.workers < 1:
            raise ValueError(f"Invalid worker count: {self.workers}")
        if self.panels < 1:
            raise ValueError(f"Invalid panel count: {self.panels}")
        if not 2 <= self.nodes_per_panel <= 64:
            raise ValueError(f"Invalid Gauss-Legendre order: {self.nodes_per_panel}")
        if not self.grading >= 1.0:
            raise ValueError(f"Invalid mesh grading: {self.grading}")
        if not 0.0 < self.cutoff < 1.0:
            raise ValueError(f"Invalid mesh cutoff: {self.cutoff}")
        if self.log_level.upper() not in LOG_LEVELS:
            raise ValueError(f"Invalid log level: {self.log_level}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"Invalid output format: {self.output_format}")
        if not self.app_root.exists():
            raise ValueError(f"App root directory not found: {self.app_root}")

    def _setup_logging(self):
        """Diagnostics go to stderr; stdout carries data only"""
        logging.basicConfig(
            level=getattr(logging, self.log_level.upper()),
            format=self.log_format,
            handlers=[
                logging.StreamHandler(sys.stderr),
                logging.FileHandler(self.app_root / "mtlab.log") if self.debug else logging.NullHandler()
            ]
        )

    @classmethod
    def from_environment(cls) -> 'LabConfig':
        """Create configuration from environment variables"""
        debug = _env_flag("DEBUG")
        return cls(
            debug=debug,
            log_level=os.getenv("LOG_LEVEL", "DEBUG" if debug else "WARNING"),
            workers=_env_int("LAB_WORKERS", 1),
            panels=_env_int("LAB_PANELS", 200),
            nodes_per_panel=_env_int("LAB_ORDER", 16),
            grading=_env_float("LAB_GRADING", 2.0),
            output_format=os.getenv("LAB_FORMAT", "csv").lower(),
        )

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(self.panels, self.nodes_per_panel, self.grading, self.cutoff)

    def log_configuration(self):
        logger = logging.getLogger(__name__)
        logger.info(f"∫ {self.app_name} v{self.version}")
        logger.info(f"🧵 Workers: {self.workers}")
        logger.info(f"📐 Mesh: {self.panels} panels x {self.nodes_per_panel} nodes, grading {self.grading:g}")
        logger.info(f"📄 Output: {self.output_format}")
        logger.info(f"🔧 Debug Mode: {'enabled' if self.debug else 'disabled'}")


# Global configuration instance
config: Optional[LabConfig] = None


def get_config() -> LabConfig:
    """Get global configuration instance"""
    global config
    if config is None:
        config = LabConfig.from_environment()
    return config


def validate_environment() -> tuple[bool, list[str]]:
    """Check numerical dependencies and configuration sanity"""
    errors = []

    try:
        cfg = get_config()
        logger = logging.getLogger(__name__)

        try:
            import numpy
            logger.info(f"✅ numpy {numpy.__version__} available")
        except ImportError:
            errors.append("numpy not installed")

        try:
            import pandas
            logger.info(f"✅ pandas {pandas.__version__} available")
        except ImportError:
            errors.append("pandas not installed")

        try:
            cfg.quadrature()
        except ValueError as e:
            errors.append(f"Invalid quadrature settings: {e}")

        return len(errors) == 0, errors

    except Exception as e:
        errors.append(f"Configuration error: {str(e)}")
        return False, errors


if __name__ == "__main__":
    try:
        cfg = get_config()
        cfg.log_configuration()

        valid, errors = validate_environment()
        if valid:
            print("✅ Configuration is valid")
        else:
            print("❌ Configuration errors:")
            for error in errors:
                print(f"  - {error}")

    except Exception as e:
        print(f"❌ Configuration failed: {e}")
