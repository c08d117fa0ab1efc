"""
config_manager.py
Configuration manager for the q-deformed Aufbau toolkit.
"""
import os
import json
import logging
from typing import Dict, Any, Optional
from dataclasses import dataclass, asdict, field
from pathlib import Path

logger = logging.getLogger(__name__)

DEFAULT_REFERENCE_DATA = str(Path(__file__).resolve().parent / "data" / "ground_states.csv")


@dataclass
class RotorConfig:
    inertia: float = 0.5
    ground_energy: float = -13.6  # hydrogen ground state, eV


@dataclass
class OrderingConfig:
    n_max: int = 7
    l_max: int = 3
    tie_tolerance: float = 1e-9


@dataclass
class ScanConfig:
    step: float = 0.01
    bisection_tolerance: float = 1e-13
    boundary_tolerance: float = 1e-10
    snap_tolerance: float = 1e-6
    madelung_deviation_limit: float = 8.0  # percent
    regime_n_max: int = 7
    regime_l_max: int = 3
    tie_tolerance: float = 1e-9
    workers: int = 1


@dataclass
class AufbauConfig:
    n_max: int = 8
    l_max: int = 3
    reference_data: str = DEFAULT_REFERENCE_DATA


@dataclass
class OutputConfig:
    significant_digits: int = 6


@dataclass
class Config:
    rotor: RotorConfig = field(default_factory=RotorConfig)
    ordering: OrderingConfig = field(default_factory=OrderingConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    aufbau: AufbauConfig = field(default_factory=AufbauConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


SECTIONS = {
    'rotor': RotorConfig,
    'ordering': OrderingConfig,
    'scan': ScanConfig,
    'aufbau': AufbauConfig,
    'output': OutputConfig,
}


class ConfigManager:
    def __init__(self, config_path: Optional[str] = None):
        self.config_path = config_path
        self.logger = logging.getLogger(__name__)
        self._config: Optional[Config] = None

    def load_config(self) -> Config:
        """Load configuration from file, falling back to defaults"""
        if not self.config_path:
            return self._create_default_config()

        if not os.path.exists(self.config_path):
            self.logger.warning(f"Config file not found at {self.config_path}, using defaults")
            return self._create_default_config()

        with open(self.config_path, 'r') as f:
            data = json.load(f)

        self._config = self._build_config(data)
        return self._config

    def _build_config(self, data: Dict[str, Any]) -> Config:
        """Merge a raw dictionary over the defaults and validate it"""
        sections = {}
        for name, section_cls in SECTIONS.items():
            values = data.get(name, {}) or {}
            defaults = asdict(section_cls())
            unknown = set(values) - set(defaults)
            if unknown:
                self.logger.warning(f"Ignoring unknown {name} settings: {', '.join(sorted(unknown))}")
            sections[name] = section_cls(**{key: values.get(key, default) for key, default in defaults.items()})

        config = Config(**sections)
        ok, message = self.validate_config(config)
        if not ok:
            raise ValueError(f"Invalid configuration in {self.config_path}: {message}")
        return config

    def save_config_dict(self, config_dict: Dict[str, Any]) -> bool:
        """Save configuration from dictionary, leaving the file untouched if it is invalid"""
        try:
            config = self._build_config(config_dict)
            payload = json.dumps(config_dict, indent=2)

            config_dir = Path(self.config_path).parent
            config_dir.mkdir(parents=True, exist_ok=True)
            with open(self.config_path, 'w') as f:
                f.write(payload)

            self._config = config
            return True

        except (OSError, TypeError, ValueError) as e:
            logger.error(f"Error saving config: {str(e)}")
            return False

    def _create_default_config(self) -> Config:
        """Create a default configuration"""
        self._config = Config()
        return self._config

    def validate_config(self, config: Config) -> tuple[bool, str]:
        """Validate configuration values"""
        if config.rotor.inertia <= 0:
            return False, "rotor.inertia must be positive"
        if config.rotor.ground_energy >= 0:
            return False, "rotor.ground_energy must be negative"
        if config.ordering.tie_tolerance < 0 or config.scan.tie_tolerance < 0:
            return False, "tie_tolerance must be non-negative"
        if not 0 < config.scan.step <= 0.05:
            return False, "scan.step must be in (0, 0.05]"
        if config.scan.bisection_tolerance <= 0 or config.scan.boundary_tolerance <= 0:
            return False, "scan tolerances must be positive"
        if config.scan.regime_n_max < 7 or config.scan.regime_l_max < 3:
            return False, "scan regime universe must cover n <= 7, l <= 3"
        if config.scan.workers < 1:
            return False, "scan.workers must be at least 1"
        if config.output.significant_digits < 1:
            return False, "output.significant_digits must be at least 1"
        if not Path(config.aufbau.reference_data).suffix == '.csv':
            return False, f"aufbau.reference_data must point to a CSV file, got {config.aufbau.reference_data}"
        return True, "Configuration is valid"

    def get_config_dict(self) -> Dict[str, Any]:
        """Get configuration as dictionary"""
        return {name: asdict(getattr(self.config, name)) for name in SECTIONS}

    @property
    def config(self) -> Config:
        """Get current configuration"""
        if self._config is None:
            self._config = self.load_config()
        return self._config
