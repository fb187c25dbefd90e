#!/usr/bin/env python3
"""Capture demo-bundle API payloads as frontend test fixtures.

Regenerates frontend/test/fixtures/*.json from the live service over the
bundled demo corpus, so UI tests consume exactly what the API serves.
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from presslens.graph import GraphScope, build_graph, diff_scopes  # noqa: E402
from presslens.service import AnalysisBundle, create_app  # noqa: E402
from tests.conftest import run_demo_pipeline  # noqa: E402

OUT = ROOT / "frontend" / "test" / "fixtures"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        bundle_dir = Path(tmp)
        run_demo_pipeline(bundle_dir)
        bundle = AnalysisBundle.load(bundle_dir)
        client = TestClient(create_app(bundle))

        captures = {
            "newspapers.json": ("/api/newspapers", {}),
            "themes.json": ("/api/themes", {}),
            "graph_all.json": ("/api/graph", {}),
            "graph_jutranjik.json": ("/api/graph", {"newspaper": "jutranjik"}),
            "graph_vecernik.json": ("/api/graph", {"newspaper": "vecernik"}),
            "nodes_identity_nemci.json": ("/api/nodes/identity:Nemci/paragraphs", {"limit": "50"}),
            "nodes_identity_nemci_neg.json": (
                "/api/nodes/identity:Nemci/paragraphs",
                {"limit": "50", "sentiment": "-"},
            ),
            "nodes_identity_nemci_page0.json": (
                "/api/nodes/identity:Nemci/paragraphs",
                {"limit": "4", "offset": "0"},
            ),
            "nodes_identity_nemci_page1.json": (
                "/api/nodes/identity:Nemci/paragraphs",
                {"limit": "4", "offset": "4"},
            ),
            "nodes_theme_travel.json": ("/api/nodes/theme:Travel/paragraphs", {"limit": "50"}),
        }
        for name, (path, params) in captures.items():
            response = client.get(path, params=params)
            response.raise_for_status()
            (OUT / name).write_bytes(response.content + (b"" if response.content.endswith(b"\n") else b"\n"))

        graph_a = build_graph(
            bundle.paragraphs, bundle.mentions, bundle.predictions, GraphScope(newspaper="jutranjik")
        )
        graph_b = build_graph(
            bundle.paragraphs, bundle.mentions, bundle.predictions, GraphScope(newspaper="vecernik")
        )
        diff = diff_scopes(graph_a, graph_b).to_dict()
        with open(OUT / "diff_jutranjik_vecernik.json", "w", encoding="utf-8") as fh:
            json.dump(diff, fh, ensure_ascii=False, indent=2)
            fh.write("\n")

    print(f"wrote fixtures to {OUT}")


if __name__ == "__main__":
    main()
