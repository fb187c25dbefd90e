#!/usr/bin/env python3
"""Freeze the demo pipeline's output tree into tests/data/golden_manifest.json.

Run only after verifying a pipeline change is correct; the acceptance suite
compares every rerun against this manifest byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))
sys.path.insert(0, str(ROOT / "src"))

from tests.test_cli import full_pipeline, tree_bytes  # noqa: E402


def main() -> None:
    target = ROOT / "tests" / "data" / "golden_manifest.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        full_pipeline(Path(tmp))
        manifest = {
            name: hashlib.sha256(payload).hexdigest()
            for name, payload in sorted(tree_bytes(Path(tmp)).items())
        }
    with open(target, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"froze {len(manifest)} files into {target}")


if __name__ == "__main__":
    main()
