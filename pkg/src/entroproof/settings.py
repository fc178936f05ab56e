from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping, Optional

logger = logging.getLogger(__name__)

HARD_MAX_N = 16
MAX_N_ENV = "ENTROPROOF_MAX_N"
DEFAULT_SETTINGS_PATH = Path(__file__).resolve().parents[2] / "config" / "prover_settings.json"


@dataclass(frozen=True)
class ProverSettings:
    max_n: int = HARD_MAX_N
    default_max_n: int = 8
    oracle_max_n: int = 4
    certificate_format: str = "entroproof.certificate/1"

    def effective_max_n(self, override: Optional[int] = None) -> int:
        requested = self.default_max_n if override is None else override
        return max(1, min(int(requested), self.max_n, HARD_MAX_N))


def _clamp(value: int) -> int:
    return max(1, min(int(value), HARD_MAX_N))


def load_settings(
    path: Optional[str | Path] = None,
    env: Optional[Mapping[str, str]] = None,
) -> ProverSettings:
    """Read prover limits from JSON, falling back to built-in defaults.

    ``ENTROPROOF_MAX_N`` overrides the default cap; every cap is clamped to 16.
    """
    settings_path = Path(path) if path is not None else DEFAULT_SETTINGS_PATH
    environment = os.environ if env is None else env
    settings = ProverSettings()
    if settings_path.exists():
        try:
            payload: dict[str, Any] = json.loads(settings_path.read_text(encoding="utf-8"))
            limits = payload.get("limits", {})
            certificate = payload.get("certificate", {})
            settings = ProverSettings(
                max_n=_clamp(limits.get("max_n", settings.max_n)),
                default_max_n=_clamp(limits.get("default_max_n", settings.default_max_n)),
                oracle_max_n=_clamp(limits.get("oracle_max_n", settings.oracle_max_n)),
                certificate_format=str(certificate.get("format", settings.certificate_format)),
            )
        except (ValueError, TypeError, AttributeError) as exc:
            logger.warning("Ignoring unreadable settings file %s: %s", settings_path, exc)
            settings = ProverSettings()
    raw = environment.get(MAX_N_ENV)
    if raw:
        try:
            settings = replace(settings, default_max_n=_clamp(int(raw)))
        except ValueError:
            logger.warning("Ignoring non-integer %s=%r", MAX_N_ENV, raw)
    return settings
