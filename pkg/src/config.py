"""
Configuration

Loads synthesis defaults from the "settings" section of config/mcp_config.json.
The same file carries the "mcpServers" block a desktop MCP client reads to
launch the server. Missing files or keys fall back to built-in defaults.
"""

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent / "config" / "mcp_config.json"


@dataclass(frozen=True)
class SynthLimits:
    """Budget for a single synthesis run"""
    max_expansions: int = 20000
    timeout: float = 30.0
    seed: int = 0

    def with_overrides(self, max_expansions: Optional[int] = None,
                       timeout: Optional[float] = None,
                       seed: Optional[int] = None) -> "SynthLimits":
        """Return a copy with any non-None argument replacing the stored value"""
        changes: Dict[str, Any] = {}
        if max_expansions is not None:
            changes["max_expansions"] = max_expansions
        if timeout is not None:
            changes["timeout"] = timeout
        if seed is not None:
            changes["seed"] = seed
        return replace(self, **changes)


@dataclass(frozen=True)
class Settings:
    """Toolkit-wide settings"""
    limits: SynthLimits = field(default_factory=SynthLimits)
    unambiguity_bound: Optional[int] = None
    log_level: str = "INFO"
    db_path: Optional[str] = None


def load_settings(config_path: Optional[str] = None) -> Settings:
    """
    Load settings from the JSON config file.

    Args:
        config_path: Optional path; defaults to config/mcp_config.json

    Returns:
        Settings populated from the file's "settings" section
    """
    path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
    if not path.exists():
        return Settings()
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except json.JSONDecodeError:
        return Settings()
    except Exception as e:
        raise Exception(f"Failed to read config: {str(e)}")

    raw = data.get("settings", {})
    defaults = SynthLimits()
    limits = SynthLimits(
        max_expansions=int(raw.get("max_expansions", defaults.max_expansions)),
        timeout=float(raw.get("timeout", defaults.timeout)),
        seed=int(raw.get("seed", defaults.seed)),
    )
    return Settings(
        limits=limits,
        unambiguity_bound=raw.get("unambiguity_bound"),
        log_level=raw.get("log_level", "INFO"),
        db_path=raw.get("db_path"),
    )
