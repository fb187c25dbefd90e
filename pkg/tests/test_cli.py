import json
from pathlib import Path

from presslens.cli import demo_path, main
from presslens.corpus import corpus_stats, load_corpus
from presslens.graph import GraphScope, build_graph, export_graph
from presslens.mentions import read_mentions_file
from presslens.sentiment import read_predictions_file

from .conftest import run_demo_pipeline
from .test_evaluation import derive_reference_matrix, records_from_matrix

DEMO = demo_path("corpus.jsonl").parent


def run(args) -> int:
    return main([str(a) for a in args])


def tree_bytes(root: Path) -> dict[str, bytes]:
    return {
        str(path.relative_to(root)): path.read_bytes()
        for path in sorted(root.rglob("*"))
        if path.is_file()
    }


def test_stats_stage(tmp_path):
    out = tmp_path / "stats"
    assert run(["stats", "--corpus", DEMO / "corpus.jsonl", "--out-dir", out]) == 0
    payload = json.loads((out / "stats.json").read_text())
    assert payload["paragraphs"] == 30
    assert payload["issues"] == 24
    assert payload["validation"]["month_only_dates"] == 1
    # Independent recount over the parsed corpus.
    stats = corpus_stats(load_corpus(DEMO / "corpus.jsonl"))
    assert payload["tokens"] == stats.tokens
    assert payload["per_newspaper"]["jutranjik"]["paragraphs"] == 15
    meta = json.loads((out / "stats.json.meta.json").read_text())
    assert meta["stage"] == "stats"
    assert meta["inputs"]["corpus"].startswith("sha256:")
    assert "time" not in json.dumps(meta).lower()


def test_lexicon_candidates_stage(tmp_path):
    out = tmp_path / "candidates.tsv"
    assert run(
        ["lexicon-candidates", "--corpus", DEMO / "corpus.jsonl", "--out", out, "--min-freq", 2]
    ) == 0
    rows = [line.split("\t") for line in out.read_text().splitlines()[1:]]
    assert all(lemma.endswith(("ski", "ški", "zki", "žki")) for lemma, _ in rows)
    assert all(int(count) >= 2 for _, count in rows)
    assert ["nemški", "4"] in rows


def test_extract_deterministic_bytes(tmp_path):
    out_a = tmp_path / "a.jsonl"
    out_b = tmp_path / "b.jsonl"
    for out in (out_a, out_b):
        assert run(
            ["extract", "--corpus", DEMO / "corpus.jsonl", "--lexicon", DEMO / "lexicon.tsv", "--out", out]
        ) == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    mentions = read_mentions_file(out_a)
    assert len(mentions) == 28


def test_sample_stage(tmp_path):
    mentions_out = tmp_path / "mentions.jsonl"
    run(["extract", "--corpus", DEMO / "corpus.jsonl", "--lexicon", DEMO / "lexicon.tsv", "--out", mentions_out])
    sample_out = tmp_path / "sample.tsv"
    assert run(
        ["sample", "--mentions", mentions_out, "--out", sample_out, "--total", 12, "--seed", 11]
    ) == 0
    lines = sample_out.read_text().splitlines()
    assert len(lines) == 13
    meta = json.loads((tmp_path / "sample.tsv.meta.json").read_text())
    assert meta["config"]["seed"] == 11


def test_classify_requires_cues_for_mock(tmp_path):
    mentions_out = tmp_path / "mentions.jsonl"
    run(["extract", "--corpus", DEMO / "corpus.jsonl", "--lexicon", DEMO / "lexicon.tsv", "--out", mentions_out])
    code = run(["classify", "--mentions", mentions_out, "--backend", "mock", "--out", tmp_path / "p.jsonl"])
    assert code == 1


def test_missing_input_file_exits_2(tmp_path):
    code = run(["stats", "--corpus", tmp_path / "missing.jsonl", "--out-dir", tmp_path / "out"])
    assert code == 2


def test_missing_option_exits_1(tmp_path, capsys):
    code = run(["extract", "--corpus", DEMO / "corpus.jsonl", "--out", tmp_path / "x.jsonl"])
    assert code == 1
    assert "lexicon" in capsys.readouterr().err


def test_config_file_supplies_defaults(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps(
            {
                "corpus": str(DEMO / "corpus.jsonl"),
                "lexicon": str(DEMO / "lexicon.tsv"),
                "out": str(tmp_path / "mentions.jsonl"),
            }
        )
    )
    assert run(["--config", config, "extract"]) == 0
    assert (tmp_path / "mentions.jsonl").exists()


def test_evaluate_demo_gold(tmp_path, capsys):
    bundle = tmp_path / "bundle"
    run_demo_pipeline(bundle)
    out = tmp_path / "eval"
    assert run(
        ["evaluate", "--gold", DEMO / "gold.tsv", "--predictions", bundle / "predictions.jsonl", "--out-dir", out]
    ) == 0
    captured = capsys.readouterr().out
    assert "Accuracy" in captured
    payload = json.loads((out / "report.json").read_text())
    assert payload["excluded_unknown"] == 1
    assert payload["overall"]["n"] == 11
    assert set(payload["subsets"]) == {"category", "referential", "newspaper"}
    assert (out / "report.txt").exists()


def test_evaluate_reference_fixture_report(tmp_path, capsys):
    records = records_from_matrix(derive_reference_matrix())
    gold = tmp_path / "gold.tsv"
    with open(gold, "w", encoding="utf-8") as fh:
        fh.write(
            "mention_id\tnewspaper\tidentity\tcategory\trendered\tgold_sentiment\treferential_type\tunknown\n"
        )
        for r in records:
            fh.write(
                f"{r.mention_id}\t{r.newspaper}\tX\t{r.category.value}\t"
                f"<target>X</target> .\t{r.gold.value}\tgroup\t\n"
            )
    predictions = tmp_path / "predictions.jsonl"
    with open(predictions, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(
                json.dumps(
                    {
                        "mention_id": r.mention_id,
                        "label": r.predicted.value,
                        "raw_output": r.predicted.value,
                        "backend": "fixture",
                        "parse_ok": True,
                    }
                )
                + "\n"
            )
    assert run(["evaluate", "--gold", gold, "--predictions", predictions, "--out-dir", tmp_path / "out"]) == 0
    text = capsys.readouterr().out
    for value in ("0.400", "0.300", "0.343", "0.858", "0.739", "0.794", "0.351", "0.750", "0.478"):
        assert value in text
    assert "0.538" in text  # macro F1
    assert "0.708" in text  # weighted F1
    assert "0.693" in text  # accuracy of the derived matrix


def test_aggregate_and_plot_data(tmp_path):
    bundle = tmp_path / "bundle"
    run_demo_pipeline(bundle)
    agg = tmp_path / "agg"
    assert run(
        [
            "aggregate",
            "--corpus", bundle / "corpus.jsonl",
            "--mentions", bundle / "mentions.jsonl",
            "--predictions", bundle / "predictions.jsonl",
            "--out-dir", agg,
        ]
    ) == 0
    profiles = json.loads((agg / "profiles.json").read_text())
    assert profiles["unparsed"] == 0
    total = sum(p["total"] for p in profiles["profiles"])
    assert total == len(read_predictions_file(bundle / "predictions.jsonl"))
    themes_lines = (agg / "themes.tsv").read_text().splitlines()
    assert themes_lines[0].startswith("theme\t")

    plots = tmp_path / "plots"
    assert run(
        ["plot-data", "--profiles", agg / "profiles.json", "--out-dir", plots, "--min-mentions", 1, "--top-k", 5]
    ) == 0
    for name in ("composition.tsv", "most_neutral.tsv", "most_non_neutral.tsv"):
        assert (plots / name).exists()
    comp_rows = (plots / "composition.tsv").read_text().splitlines()[1:]
    assert 1 <= len(comp_rows) <= 12


def test_graph_stage_matches_module(tmp_path):
    bundle = tmp_path / "bundle"
    run_demo_pipeline(bundle)
    out = tmp_path / "graph.json"
    assert run(
        [
            "graph",
            "--corpus", bundle / "corpus.jsonl",
            "--mentions", bundle / "mentions.jsonl",
            "--predictions", bundle / "predictions.jsonl",
            "--newspaper", "jutranjik",
            "--min-weight", 1,
            "--out", out,
        ]
    ) == 0
    offline = export_graph(
        build_graph(
            load_corpus(bundle / "corpus.jsonl"),
            [m for m, _ in read_mentions_file(bundle / "mentions.jsonl")],
            read_predictions_file(bundle / "predictions.jsonl"),
            GraphScope(newspaper="jutranjik"),
        )
    )
    assert out.read_bytes() == offline


def test_graphml_format(tmp_path):
    bundle = tmp_path / "bundle"
    run_demo_pipeline(bundle)
    out = tmp_path / "graph.graphml"
    assert run(
        [
            "graph",
            "--corpus", bundle / "corpus.jsonl",
            "--mentions", bundle / "mentions.jsonl",
            "--predictions", bundle / "predictions.jsonl",
            "--format", "graphml",
            "--out", out,
        ]
    ) == 0
    assert out.read_bytes().startswith(b"<?xml")


def test_diff_stage(tmp_path):
    bundle = tmp_path / "bundle"
    run_demo_pipeline(bundle)
    graphs = {}
    for paper in ("jutranjik", "vecernik"):
        out = tmp_path / f"{paper}.json"
        run(
            [
                "graph",
                "--corpus", bundle / "corpus.jsonl",
                "--mentions", bundle / "mentions.jsonl",
                "--predictions", bundle / "predictions.jsonl",
                "--newspaper", paper,
                "--out", out,
            ]
        )
        graphs[paper] = out
    diff_out = tmp_path / "diff.json"
    assert run(["diff", "--graph-a", graphs["jutranjik"], "--graph-b", graphs["vecernik"], "--out", diff_out]) == 0
    diff = json.loads(diff_out.read_text())
    assert "location:Praga" in diff["b_only_nodes"]
    assert set(diff["shared_nodes"]) >= {"identity:Nemci", "sentiment:-"}


def test_classify_checkpoint_resume_via_cli(tmp_path):
    bundle = tmp_path / "bundle"
    run_demo_pipeline(bundle)
    ckpt = tmp_path / "ckpt"
    out1 = tmp_path / "p1.jsonl"
    assert run(
        [
            "classify",
            "--mentions", bundle / "mentions.jsonl",
            "--backend", "mock",
            "--cues", DEMO / "cues.json",
            "--checkpoint-dir", ckpt,
            "--out", out1,
        ]
    ) == 0
    out2 = tmp_path / "p2.jsonl"
    assert run(
        [
            "classify",
            "--mentions", bundle / "mentions.jsonl",
            "--backend", "mock",
            "--cues", DEMO / "cues.json",
            "--checkpoint-dir", ckpt,
            "--out", out2,
        ]
    ) == 0
    assert out1.read_bytes() == out2.read_bytes()
    completed = (ckpt / "completed.txt").read_text().splitlines()
    assert len(completed) == 28
    assert completed == sorted(completed)


def full_pipeline(root: Path) -> None:
    out = root / "out"
    out.mkdir(parents=True)
    assert run(["stats", "--corpus", DEMO / "corpus.jsonl", "--out-dir", out / "stats"]) == 0
    assert run(
        ["extract", "--corpus", DEMO / "corpus.jsonl", "--lexicon", DEMO / "lexicon.tsv", "--out", out / "mentions.jsonl"]
    ) == 0
    assert run(
        [
            "classify",
            "--mentions", out / "mentions.jsonl",
            "--backend", "mock",
            "--cues", DEMO / "cues.json",
            "--out", out / "predictions.jsonl",
        ]
    ) == 0
    assert run(
        ["evaluate", "--gold", DEMO / "gold.tsv", "--predictions", out / "predictions.jsonl", "--out-dir", out / "eval"]
    ) == 0
    assert run(
        [
            "aggregate",
            "--corpus", DEMO / "corpus.jsonl",
            "--mentions", out / "mentions.jsonl",
            "--predictions", out / "predictions.jsonl",
            "--out-dir", out / "agg",
        ]
    ) == 0
    assert run(
        [
            "graph",
            "--corpus", DEMO / "corpus.jsonl",
            "--mentions", out / "mentions.jsonl",
            "--predictions", out / "predictions.jsonl",
            "--out", out / "graph.json",
        ]
    ) == 0


def test_pipeline_reruns_byte_identical(tmp_path):
    full_pipeline(tmp_path / "run1")
    full_pipeline(tmp_path / "run2")
    first = tree_bytes(tmp_path / "run1")
    second = tree_bytes(tmp_path / "run2")
    assert first == second


def test_serve_command_wiring(tmp_path, monkeypatch):
    bundle = tmp_path / "bundle"
    run_demo_pipeline(bundle)
    captured = {}

    def fake_serve(loaded, bind, cors_origins, ui_dir):
        captured["newspapers"] = loaded.newspapers()
        captured["bind"] = bind
        captured["cors_origins"] = cors_origins
        captured["ui_dir"] = ui_dir

    import presslens.service

    monkeypatch.setattr(presslens.service, "serve", fake_serve)
    assert run(["serve", "--bundle", bundle, "--bind", "127.0.0.1:9999", "--cors-origin", "http://ui.local"]) == 0
    assert captured["newspapers"] == ["jutranjik", "vecernik"]
    assert captured["bind"] == "127.0.0.1:9999"
    assert captured["cors_origins"] == ("http://ui.local",)
    assert captured["ui_dir"] is None


def test_version_flag(capsys):
    import pytest as _pytest

    with _pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "presslens" in capsys.readouterr().out
