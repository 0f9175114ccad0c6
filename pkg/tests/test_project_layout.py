from __future__ import annotations

import json
from pathlib import Path

from esym_order.const import DOMAIN, PropertyId
from esym_order.coordinator import REPORT_SCHEMA

ROOT = Path(__file__).resolve().parents[1]
PACKAGE_DIR = ROOT / "esym_order"


def test_package_files_exist() -> None:
    required = [
        PACKAGE_DIR / "manifest.json",
        PACKAGE_DIR / "report_schema.json",
        PACKAGE_DIR / "__init__.py",
        PACKAGE_DIR / "__main__.py",
        PACKAGE_DIR / "const.py",
        PACKAGE_DIR / "errors.py",
        PACKAGE_DIR / "esym_core.py",
        PACKAGE_DIR / "scalar_functionals.py",
        PACKAGE_DIR / "quadrature.py",
        PACKAGE_DIR / "dominance_sampling.py",
        PACKAGE_DIR / "matrix_ops.py",
        PACKAGE_DIR / "properties.py",
        PACKAGE_DIR / "coordinator.py",
        PACKAGE_DIR / "corpus.py",
        PACKAGE_DIR / "verify_cli.py",
        ROOT / "README.md",
        ROOT / "pyproject.toml",
    ]
    for file_path in required:
        assert file_path.exists(), f"Missing required file: {file_path}"


def test_manifest_matches_package() -> None:
    manifest = json.loads((PACKAGE_DIR / "manifest.json").read_text(encoding="utf-8"))

    assert manifest["domain"] == DOMAIN
    assert manifest["version"]
    assert manifest["loggers"] == [DOMAIN]
    assert manifest["properties"] == [str(item) for item in PropertyId]


def test_report_schema_matches_validator() -> None:
    schema = json.loads((PACKAGE_DIR / "report_schema.json").read_text(encoding="utf-8"))
    validator_keys = {str(key) for key in REPORT_SCHEMA.schema}

    assert set(schema["required"]) == validator_keys
    assert set(schema["properties"]) == validator_keys
    assert schema["additionalProperties"] is False
    assert schema["properties"]["property"]["enum"] == [str(item) for item in PropertyId]
