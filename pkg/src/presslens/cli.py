"""Command-line pipeline: file-based stages with reproducible metadata sidecars."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .aggregation import (
    MOST_NEUTRAL,
    MOST_NON_NEUTRAL,
    IdentitySentimentProfile,
    build_profiles,
    rank_by_neutrality,
    sentiment_composition,
    theme_distribution,
)
from .corpus import CorpusError, ValidationReport, corpus_stats, lemma_frequencies, load_corpus
from .evaluation import (
    EvaluationError,
    build_eval_records,
    format_full_report,
    full_report_dict,
    read_gold_tsv,
)
from .graph import GraphError, GraphScope, build_graph, diff_scopes, export_graph, import_graph_json
from .lexicon import (
    DEFAULT_MIN_FREQ,
    DEFAULT_SUFFIXES,
    LexiconError,
    extract_adjectival_candidates,
    load_lexicon_file,
)
from .mentions import build_context, extract_mentions, mention_to_record, read_mentions_file, write_mentions
from .sampler import SamplingError, SamplingPlan, stratified_sample, write_annotation_tsv
from .sentiment import (
    BackendConfig,
    CheckpointStore,
    CueRules,
    TaskInstance,
    TemplateError,
    classify_batch,
    load_template,
    read_predictions_file,
    write_predictions,
)

log = logging.getLogger(__name__)

_VALIDATION_ERRORS = (
    CorpusError,
    LexiconError,
    SamplingError,
    TemplateError,
    EvaluationError,
    GraphError,
    ValueError,
)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return "sha256:" + digest.hexdigest()


def write_sidecar(output: Path, stage: str, inputs: dict[str, Path], config: dict) -> None:
    """Record what produced an output: input hashes, config, tool version.

    Contains no timestamps or absolute paths, so repeated runs with the same
    inputs yield byte-identical sidecars.
    """
    meta = {
        "tool": "presslens",
        "version": __version__,
        "stage": stage,
        "inputs": {name: _sha256(path) for name, path in sorted(inputs.items())},
        "config": config,
    }
    sidecar = output.with_name(output.name + ".meta.json")
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _opt(args, config: dict, key: str, default=None):
    value = getattr(args, key.replace("-", "_"), None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _require(args, config: dict, key: str):
    value = _opt(args, config, key)
    if value is None:
        raise ValueError(f"missing required option --{key} (or config key {key!r})")
    return value


def _out_dir(args, config: dict) -> Path:
    out = Path(_require(args, config, "out-dir"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_tsv(path: Path, header: tuple[str, ...], rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(header))
        fh.write("\n")
        for row in rows:
            fh.write("\t".join(str(col) for col in row))
            fh.write("\n")


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")


def _fmt(x: float) -> str:
    return f"{x:.6f}"


# ---------------------------------------------------------------- stages


def cmd_stats(args, config: dict) -> int:
    corpus_path = Path(_require(args, config, "corpus"))
    out = _out_dir(args, config)
    report = ValidationReport()
    paragraphs = load_corpus(corpus_path, report)
    stats = corpus_stats(paragraphs)
    payload = stats.to_dict()
    payload["validation"] = {
        "unknown_fields": dict(sorted(report.unknown_fields.items())),
        "month_only_dates": report.month_only_dates,
    }
    target = out / "stats.json"
    with open(target, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
    write_sidecar(target, "stats", {"corpus": corpus_path}, {})
    print(json.dumps(payload["per_newspaper"], ensure_ascii=False))
    return 0


def cmd_lexicon_candidates(args, config: dict) -> int:
    corpus_path = Path(_require(args, config, "corpus"))
    out = Path(_require(args, config, "out"))
    suffixes = tuple(_opt(args, config, "suffixes", ",".join(DEFAULT_SUFFIXES)).split(","))
    min_freq = int(_opt(args, config, "min-freq", DEFAULT_MIN_FREQ))
    newspaper = _opt(args, config, "newspaper")
    freqs = lemma_frequencies(load_corpus(corpus_path), newspaper)
    candidates = extract_adjectival_candidates(freqs, suffixes, min_freq)
    out.parent.mkdir(parents=True, exist_ok=True)
    _write_tsv(out, ("lemma", "count"), candidates)
    write_sidecar(
        out,
        "lexicon-candidates",
        {"corpus": corpus_path},
        {"suffixes": list(suffixes), "min_freq": min_freq, "newspaper": newspaper},
    )
    return 0


def cmd_extract(args, config: dict) -> int:
    corpus_path = Path(_require(args, config, "corpus"))
    lexicon_path = Path(_require(args, config, "lexicon"))
    out = Path(_require(args, config, "out"))
    paragraphs = load_corpus(corpus_path)
    by_id = {p.paragraph_id: p for p in paragraphs}
    lexicon = load_lexicon_file(lexicon_path)
    records = (
        mention_to_record(m, build_context(m, by_id[m.paragraph_id]).rendered)
        for m in extract_mentions(paragraphs, lexicon)
    )
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        write_mentions(records, fh)
    write_sidecar(out, "extract", {"corpus": corpus_path, "lexicon": lexicon_path}, {})
    return 0


def cmd_sample(args, config: dict) -> int:
    mentions_path = Path(_require(args, config, "mentions"))
    out = Path(_require(args, config, "out"))
    pairs = read_mentions_file(mentions_path)
    rendered_by_id = {m.mention_id: rendered for m, rendered in pairs}
    pool = [m for m, _ in pairs]
    raw_newspapers = _opt(args, config, "newspapers")
    newspapers = (
        tuple(raw_newspapers.split(",")) if raw_newspapers else tuple(sorted({m.newspaper for m in pool}))
    )
    plan = SamplingPlan(
        newspapers=newspapers,
        total=int(_opt(args, config, "total", 400)),
        identity_cap=float(_opt(args, config, "cap", 0.15)),
        seed=int(_opt(args, config, "seed", 0)),
    )
    sample = stratified_sample(pool, plan)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        write_annotation_tsv(((m, rendered_by_id[m.mention_id]) for m in sample), fh)
    write_sidecar(
        out,
        "sample",
        {"mentions": mentions_path},
        {
            "newspapers": list(plan.newspapers),
            "total": plan.total,
            "identity_cap": plan.identity_cap,
            "seed": plan.seed,
        },
    )
    return 0


def cmd_classify(args, config: dict) -> int:
    mentions_path = Path(_require(args, config, "mentions"))
    out = Path(_require(args, config, "out"))
    backend_conf = dict(config.get("backend", {}))
    kind = _opt(args, config, "backend", backend_conf.get("kind", "mock"))
    backend = BackendConfig(
        kind=kind,
        base_url=_opt(args, config, "base-url", backend_conf.get("base_url")),
        model=_opt(args, config, "model", backend_conf.get("model")),
        temperature=float(_opt(args, config, "temperature", backend_conf.get("temperature", 0.0))),
        max_output_tokens=int(
            _opt(args, config, "max-output-tokens", backend_conf.get("max_output_tokens", 16))
        ),
        timeout=float(_opt(args, config, "timeout", backend_conf.get("timeout", 30.0))),
        max_retries=int(_opt(args, config, "max-retries", backend_conf.get("max_retries", 5))),
        max_concurrency=int(
            _opt(args, config, "max-concurrency", backend_conf.get("max_concurrency", 4))
        ),
        api_key_env=_opt(args, config, "api-key-env", backend_conf.get("api_key_env")),
    )
    cues = None
    cues_path = _opt(args, config, "cues")
    if cues_path:
        cues = CueRules.from_file(cues_path)
    template_path = _opt(args, config, "template")
    if template_path:
        template = load_template(template_path)
    else:
        template = load_template(demo_path("template.json"))
    instances = [
        TaskInstance(m.mention_id, rendered, m.identity, m.category.value)
        for m, rendered in read_mentions_file(mentions_path)
    ]
    checkpoint_dir = _opt(args, config, "checkpoint-dir")
    checkpoint = CheckpointStore(checkpoint_dir) if checkpoint_dir else None
    predictions = classify_batch(instances, backend, template, cue_rules=cues, checkpoint=checkpoint)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        write_predictions(predictions, fh)
    inputs = {"mentions": mentions_path}
    if cues_path:
        inputs["cues"] = Path(cues_path)
    if template_path:
        inputs["template"] = Path(template_path)
    write_sidecar(
        out,
        "classify",
        inputs,
        {
            "backend": backend.kind,
            "model": backend.model,
            "temperature": backend.temperature,
            "max_output_tokens": backend.max_output_tokens,
        },
    )
    failures = sum(1 for p in predictions if not p.parse_ok)
    print(f"classified {len(predictions)} instances ({failures} parse failures)")
    return 0


def cmd_evaluate(args, config: dict) -> int:
    gold_path = Path(_require(args, config, "gold"))
    predictions_path = Path(_require(args, config, "predictions"))
    out = _out_dir(args, config)
    with open(gold_path, encoding="utf-8") as fh:
        gold_rows = read_gold_tsv(fh)
    predictions = read_predictions_file(predictions_path)
    records, excluded = build_eval_records(gold_rows, predictions)
    if not records:
        raise EvaluationError("no scorable records (all unknown or unlabeled)")
    text = format_full_report(records)
    if excluded:
        text += f"\n\n(excluded as unknown/unlabeled: {excluded})"
    report_txt = out / "report.txt"
    report_txt.write_text(text + "\n", encoding="utf-8")
    payload = full_report_dict(records)
    payload["excluded_unknown"] = excluded
    report_json = out / "report.json"
    with open(report_json, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
    inputs = {"gold": gold_path, "predictions": predictions_path}
    write_sidecar(report_txt, "evaluate", inputs, {})
    write_sidecar(report_json, "evaluate", inputs, {})
    print(text)
    return 0


def cmd_aggregate(args, config: dict) -> int:
    corpus_path = Path(_require(args, config, "corpus"))
    mentions_path = Path(_require(args, config, "mentions"))
    predictions_path = Path(_require(args, config, "predictions"))
    out = _out_dir(args, config)
    paragraphs = load_corpus(corpus_path)
    mentions = [m for m, _ in read_mentions_file(mentions_path)]
    predictions = read_predictions_file(predictions_path)
    profiles, unparsed = build_profiles(mentions, predictions)

    profiles_json = out / "profiles.json"
    with open(profiles_json, "w", encoding="utf-8") as fh:
        json.dump(
            {"unparsed": unparsed, "profiles": [p.to_dict() for p in profiles]},
            fh,
            ensure_ascii=False,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    _write_tsv(
        out / "profiles.tsv",
        ("identity", "newspaper", "pos", "neg", "neu", "total", "non_neutral_share"),
        (
            (p.identity, p.newspaper, p.positive, p.negative, p.neutral, p.total, _fmt(p.non_neutral_share))
            for p in profiles
        ),
    )
    rows = theme_distribution(paragraphs, mentions)
    _write_tsv(
        out / "themes.tsv",
        ("theme", "newspaper", "paragraphs", "rel_paragraphs", "mention_share", "distinct_identities"),
        (
            (r.theme, r.newspaper, r.paragraphs, _fmt(r.rel_paragraphs), _fmt(r.mention_share), r.distinct_identities)
            for r in rows
        ),
    )
    inputs = {"corpus": corpus_path, "mentions": mentions_path, "predictions": predictions_path}
    for name in ("profiles.json", "profiles.tsv", "themes.tsv"):
        write_sidecar(out / name, "aggregate", inputs, {})
    return 0


def cmd_graph(args, config: dict) -> int:
    corpus_path = Path(_require(args, config, "corpus"))
    mentions_path = Path(_require(args, config, "mentions"))
    predictions_path = Path(_require(args, config, "predictions"))
    out = Path(_require(args, config, "out"))
    fmt = _opt(args, config, "format", "json")
    scope_conf = dict(config.get("scope", {}))
    themes_raw = _opt(args, config, "themes", scope_conf.get("themes"))
    if isinstance(themes_raw, str):
        themes = frozenset(t for t in themes_raw.split(",") if t)
    elif themes_raw:
        themes = frozenset(themes_raw)
    else:
        themes = None
    from datetime import date as _date

    date_from = _opt(args, config, "date-from", scope_conf.get("from"))
    date_to = _opt(args, config, "date-to", scope_conf.get("to"))
    scope = GraphScope(
        newspaper=_opt(args, config, "newspaper", scope_conf.get("newspaper")),
        themes=themes,
        min_weight=int(_opt(args, config, "min-weight", scope_conf.get("min_weight", 1))),
        date_from=_date.fromisoformat(date_from) if date_from else None,
        date_to=_date.fromisoformat(date_to) if date_to else None,
    )
    graph = build_graph(
        load_corpus(corpus_path),
        [m for m, _ in read_mentions_file(mentions_path)],
        read_predictions_file(predictions_path),
        scope,
    )
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(export_graph(graph, fmt))
    write_sidecar(
        out,
        "graph",
        {"corpus": corpus_path, "mentions": mentions_path, "predictions": predictions_path},
        {
            "format": fmt,
            "newspaper": scope.newspaper,
            "themes": sorted(themes) if themes else None,
            "min_weight": scope.min_weight,
            "from": date_from,
            "to": date_to,
        },
    )
    return 0


def cmd_diff(args, config: dict) -> int:
    path_a = Path(_require(args, config, "graph-a"))
    path_b = Path(_require(args, config, "graph-b"))
    out = Path(_require(args, config, "out"))
    diff = diff_scopes(import_graph_json(path_a.read_bytes()), import_graph_json(path_b.read_bytes()))
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(diff.to_dict(), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    write_sidecar(out, "diff", {"graph_a": path_a, "graph_b": path_b}, {})
    return 0


def cmd_plot_data(args, config: dict) -> int:
    profiles_path = Path(_require(args, config, "profiles"))
    out = _out_dir(args, config)
    with open(profiles_path, encoding="utf-8") as fh:
        payload = json.load(fh)
    profiles = [
        IdentitySentimentProfile(
            identity=p["identity"],
            newspaper=p["newspaper"],
            positive=p["counts"]["pos"],
            negative=p["counts"]["neg"],
            neutral=p["counts"]["neu"],
        )
        for p in payload["profiles"]
    ]
    top_k = int(_opt(args, config, "top-k", 5))
    rank_k = int(_opt(args, config, "rank-k", 10))
    min_mentions = int(_opt(args, config, "min-mentions", 50))

    composition = sentiment_composition(profiles, top_k)
    _write_tsv(
        out / "composition.tsv",
        ("identity", "newspaper", "total", "pos_share", "neg_share", "neu_share"),
        (
            (r.identity, r.newspaper, r.total, _fmt(r.positive_share), _fmt(r.negative_share), _fmt(r.neutral_share))
            for r in composition
        ),
    )
    _write_json(
        out / "composition.json",
        [
            {
                "identity": r.identity,
                "newspaper": r.newspaper,
                "total": r.total,
                "pos_share": r.positive_share,
                "neg_share": r.negative_share,
                "neu_share": r.neutral_share,
            }
            for r in composition
        ],
    )
    for direction, stem in ((MOST_NEUTRAL, "most_neutral"), (MOST_NON_NEUTRAL, "most_non_neutral")):
        ranks = rank_by_neutrality(profiles, min_mentions, direction, rank_k)
        _write_tsv(
            out / f"{stem}.tsv",
            ("identity", "mean_share", "per_newspaper"),
            (
                (
                    r.identity,
                    _fmt(r.mean_share),
                    ";".join(f"{paper}={_fmt(share)}" for paper, share in sorted(r.per_newspaper.items())),
                )
                for r in ranks
            ),
        )
        _write_json(
            out / f"{stem}.json",
            [
                {"identity": r.identity, "mean_share": r.mean_share, "per_newspaper": r.per_newspaper}
                for r in ranks
            ],
        )
    inputs = {"profiles": profiles_path}
    stage_config = {"top_k": top_k, "rank_k": rank_k, "min_mentions": min_mentions}
    for name in (
        "composition.tsv",
        "composition.json",
        "most_neutral.tsv",
        "most_neutral.json",
        "most_non_neutral.tsv",
        "most_non_neutral.json",
    ):
        write_sidecar(out / name, "plot-data", inputs, stage_config)
    return 0


def cmd_serve(args, config: dict) -> int:
    from .service import AnalysisBundle, serve

    bundle_dir = _require(args, config, "bundle")
    bundle = AnalysisBundle.load(bundle_dir)
    origins = tuple((_opt(args, config, "cors-origin", "*") or "*").split(","))
    serve(
        bundle,
        bind=_opt(args, config, "bind", "127.0.0.1:8420"),
        cors_origins=origins,
        ui_dir=_opt(args, config, "ui-dir"),
    )
    return 0


def demo_path(name: str) -> Path:
    """Path of a bundled demo corpus file."""
    return Path(__file__).parent / "data" / "demo" / name


# ---------------------------------------------------------------- parser


def _add(sub, name, func, options):
    parser = sub.add_parser(name)
    for opt in options:
        parser.add_argument(f"--{opt}")
    parser.set_defaults(func=func)
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="presslens",
        description="Collective-identity sentiment pipeline over annotated newspaper corpora",
    )
    parser.add_argument("--config", help="JSON config file supplying default option values")
    parser.add_argument("--version", action="version", version=f"presslens {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    _add(sub, "stats", cmd_stats, ["corpus", "out-dir"])
    _add(sub, "lexicon-candidates", cmd_lexicon_candidates, ["corpus", "out", "suffixes", "min-freq", "newspaper"])
    _add(sub, "extract", cmd_extract, ["corpus", "lexicon", "out"])
    _add(sub, "sample", cmd_sample, ["mentions", "out", "newspapers", "total", "cap", "seed"])
    _add(
        sub,
        "classify",
        cmd_classify,
        [
            "mentions",
            "out",
            "backend",
            "cues",
            "template",
            "base-url",
            "model",
            "temperature",
            "max-output-tokens",
            "timeout",
            "max-retries",
            "max-concurrency",
            "api-key-env",
            "checkpoint-dir",
        ],
    )
    _add(sub, "evaluate", cmd_evaluate, ["gold", "predictions", "out-dir"])
    _add(sub, "aggregate", cmd_aggregate, ["corpus", "mentions", "predictions", "out-dir"])
    _add(
        sub,
        "graph",
        cmd_graph,
        ["corpus", "mentions", "predictions", "out", "format", "newspaper", "themes", "min-weight", "date-from", "date-to"],
    )
    _add(sub, "diff", cmd_diff, ["graph-a", "graph-b", "out"])
    _add(sub, "plot-data", cmd_plot_data, ["profiles", "out-dir", "top-k", "rank-k", "min-mentions"])
    _add(sub, "serve", cmd_serve, ["bundle", "bind", "cors-origin", "ui-dir"])
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        return args.func(args, config)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
