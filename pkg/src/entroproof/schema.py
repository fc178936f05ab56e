from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Optional

logger = logging.getLogger(__name__)

DEFAULT_SCHEMA_PATH = Path(__file__).resolve().parents[2] / "config" / "certificate_schema.json"

_BUILTIN_SECTIONS: dict[str, list[str]] = {
    "document": [
        "format",
        "kind",
        "n",
        "variables",
        "universe",
        "objective",
        "jordan_trail",
        "implied_equalities",
        "conic",
        "reduced_goal",
        "identity",
    ],
    "jordan_trail": ["pivot", "tail"],
    "implied_equalities": ["source", "multipliers"],
    "conic": ["label", "source", "scale", "coefficient", "poly"],
}
_BUILTIN_KINDS = ["inequality", "identity"]


class CertificateSchemaGuard:
    """Structural check of a certificate document before it is decoded."""

    def __init__(self, reference_path: Optional[str | Path] = None) -> None:
        self.reference_path = Path(reference_path) if reference_path is not None else DEFAULT_SCHEMA_PATH

    def _load_reference(self) -> tuple[dict[str, list[str]], list[str]]:
        if not self.reference_path.exists():
            return _BUILTIN_SECTIONS, _BUILTIN_KINDS
        try:
            reference = json.loads(self.reference_path.read_text(encoding="utf-8"))
            return dict(reference.get("sections", _BUILTIN_SECTIONS)), list(reference.get("kinds", _BUILTIN_KINDS))
        except (ValueError, AttributeError) as exc:
            logger.warning("Falling back to the built-in certificate schema: %s", exc)
            return _BUILTIN_SECTIONS, _BUILTIN_KINDS

    def validate(self, document: Any) -> dict[str, Any]:
        if not isinstance(document, dict):
            return {"ok": False, "errors": ["certificate must be a JSON object"]}
        sections, kinds = self._load_reference()
        errors: list[str] = []

        missing = [name for name in sections.get("document", []) if name not in document]
        if missing:
            errors.append(f"certificate missing fields: {missing}")
        if "kind" in document and document["kind"] not in kinds:
            errors.append(f"unknown certificate kind: {document['kind']!r}")

        for section, expected in sections.items():
            if section == "document" or section not in document:
                continue
            entries = document[section]
            if not isinstance(entries, list):
                errors.append(f"{section} must be a list")
                continue
            for index, entry in enumerate(entries):
                if not isinstance(entry, dict):
                    errors.append(f"{section}[{index}] must be an object")
                    continue
                absent = [name for name in expected if name not in entry]
                if absent:
                    errors.append(f"{section}[{index}] missing fields: {absent}")

        return {"ok": not errors, "errors": errors}
