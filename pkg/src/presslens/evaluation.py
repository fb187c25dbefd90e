"""Scoring of sentiment predictions against gold annotations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping, Sequence

from .lexicon import GrammaticalCategory
from .mentions import ReferentialType
from .sentiment import SentimentLabel, SentimentPrediction

# Display order follows the label symbols +, 0, -.
CLASS_ORDER = (SentimentLabel.POSITIVE, SentimentLabel.NEUTRAL, SentimentLabel.NEGATIVE)

_CLASS_NAMES = {
    SentimentLabel.POSITIVE: "Positive (+)",
    SentimentLabel.NEUTRAL: "Neutral (0)",
    SentimentLabel.NEGATIVE: "Negative (-)",
}


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class EvalRecord:
    """One gold-annotated mention joined with its model prediction.

    Records whose gold sentiment is unknown never reach this type; they are
    excluded (and counted) while reading the annotation TSV.
    """

    mention_id: str
    gold: SentimentLabel
    predicted: SentimentLabel | None
    category: GrammaticalCategory
    referential: ReferentialType
    newspaper: str


@dataclass(frozen=True)
class ConfusionMatrix:
    """3x3 counts indexed (gold, predicted), plus the unparsed-prediction count."""

    counts: Mapping[tuple[SentimentLabel, SentimentLabel], int]
    unparsed: int = 0

    def count(self, gold: SentimentLabel, predicted: SentimentLabel) -> int:
        return self.counts.get((gold, predicted), 0)

    def support(self, label: SentimentLabel) -> int:
        return sum(self.count(label, p) for p in CLASS_ORDER)

    def predicted_total(self, label: SentimentLabel) -> int:
        return sum(self.count(g, label) for g in CLASS_ORDER)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricsReport:
    per_class: Mapping[SentimentLabel, ClassMetrics]
    accuracy: float
    macro_f1: float
    weighted_f1: float
    n: int
    unparsed: int


def score(records: Sequence[EvalRecord]) -> ConfusionMatrix:
    """Tally the confusion matrix; records without a prediction count as unparsed."""
    if not records:
        raise EvaluationError("cannot score an empty record set")
    counts: dict[tuple[SentimentLabel, SentimentLabel], int] = {}
    unparsed = 0
    for record in records:
        if record.predicted is None:
            unparsed += 1
            continue
        key = (record.gold, record.predicted)
        counts[key] = counts.get(key, 0) + 1
    return ConfusionMatrix(counts, unparsed)


def metrics(matrix: ConfusionMatrix) -> MetricsReport:
    """Per-class precision/recall/F1 plus accuracy, macro and weighted F1.

    Zero-division convention: precision is 0 when a class is never predicted,
    and F1 is 0 when precision and recall are both 0.
    """
    n = matrix.total
    if n < 1:
        raise EvaluationError("matrix holds no scored records")
    per_class: dict[SentimentLabel, ClassMetrics] = {}
    for label in CLASS_ORDER:
        tp = matrix.count(label, label)
        support = matrix.support(label)
        predicted = matrix.predicted_total(label)
        precision = tp / predicted if predicted else 0.0
        recall = tp / support if support else 0.0
        f1 = 2 * precision * recall / (precision + recall) if (precision + recall) else 0.0
        per_class[label] = ClassMetrics(precision, recall, f1, support)

    trace = sum(matrix.count(label, label) for label in CLASS_ORDER)
    accuracy = trace / n
    macro_f1 = sum(m.f1 for m in per_class.values()) / len(per_class)
    weighted_f1 = sum(m.f1 * m.support for m in per_class.values()) / n

    # Cross-check: micro-F1 over exhaustive classes must equal accuracy.
    micro_tp = trace
    micro_fp = sum(matrix.predicted_total(l) - matrix.count(l, l) for l in CLASS_ORDER)
    micro_fn = sum(matrix.support(l) - matrix.count(l, l) for l in CLASS_ORDER)
    micro_f1 = 2 * micro_tp / (2 * micro_tp + micro_fp + micro_fn) if micro_tp else 0.0
    assert abs(micro_f1 - accuracy) < 1e-9, "micro-F1 must equal accuracy for exhaustive classes"

    return MetricsReport(per_class, accuracy, macro_f1, weighted_f1, n, matrix.unparsed)


def subset_report(records: Sequence[EvalRecord], group_by: str) -> dict[str, MetricsReport]:
    """Metrics per group, keyed by group label; empty groups are omitted."""
    keyers = {
        "category": lambda r: r.category.value,
        "referential": lambda r: r.referential.value or "unspecified",
        "newspaper": lambda r: r.newspaper,
    }
    if group_by not in keyers:
        raise EvaluationError(f"unknown grouping {group_by!r}")
    keyer = keyers[group_by]
    groups: dict[str, list[EvalRecord]] = {}
    for record in records:
        groups.setdefault(keyer(record), []).append(record)
    return {key: metrics(score(group)) for key, group in sorted(groups.items())}


def round_half_up(value: float, places: int = 3) -> float:
    return float(Decimal(repr(value)).quantize(Decimal(10) ** -places, rounding=ROUND_HALF_UP))


def format_report(report: MetricsReport, title: str = "Overall") -> str:
    """Aligned plain-text table, 3 decimals, half-up rounding."""
    lines = [f"== {title} (N={report.n}, unparsed={report.unparsed}) =="]
    header = f"{'Class':<14} {'P':>7} {'R':>7} {'F1':>7} {'Support':>9}"
    lines.append(header)
    for label in CLASS_ORDER:
        m = report.per_class[label]
        lines.append(
            f"{_CLASS_NAMES[label]:<14} {round_half_up(m.precision):>7.3f} "
            f"{round_half_up(m.recall):>7.3f} {round_half_up(m.f1):>7.3f} {m.support:>9d}"
        )
    lines.append(f"{'Accuracy':<14} {round_half_up(report.accuracy):>7.3f}")
    lines.append(f"{'Macro F1':<14} {round_half_up(report.macro_f1):>7.3f}")
    lines.append(f"{'Weighted F1':<14} {round_half_up(report.weighted_f1):>7.3f}")
    return "\n".join(lines)


def report_to_dict(report: MetricsReport) -> dict:
    return {
        "n": report.n,
        "unparsed": report.unparsed,
        "accuracy": report.accuracy,
        "macro_f1": report.macro_f1,
        "weighted_f1": report.weighted_f1,
        "per_class": {
            label.value: {
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
                "support": m.support,
            }
            for label, m in ((l, report.per_class[l]) for l in CLASS_ORDER)
        },
    }


@dataclass(frozen=True)
class GoldAnnotation:
    mention_id: str
    newspaper: str
    identity: str
    category: GrammaticalCategory
    gold: SentimentLabel | None
    referential: ReferentialType
    unknown: bool


def read_gold_tsv(lines: Iterable[str]) -> list[GoldAnnotation]:
    """Read the filled annotation TSV (see sampler.ANNOTATION_COLUMNS)."""
    rows: list[GoldAnnotation] = []
    header: list[str] | None = None
    for line_no, line in enumerate(lines, start=1):
        stripped = line.rstrip("\n")
        if not stripped.strip() or stripped.startswith("#"):
            continue
        cols = stripped.split("\t")
        if header is None:
            header = cols
            if "mention_id" not in header:
                raise EvaluationError("annotation TSV must start with a header row")
            continue
        if len(cols) < len(header):
            cols = cols + [""] * (len(header) - len(cols))
        row = dict(zip(header, cols))
        try:
            unknown = bool(row.get("unknown", "").strip())
            raw_gold = row.get("gold_sentiment", "").strip()
            gold = SentimentLabel(raw_gold) if raw_gold else None
            category = GrammaticalCategory.parse(row["category"])
            raw_ref = row.get("referential_type", "").strip()
            if raw_ref:
                referential = ReferentialType.parse(raw_ref)
            elif category is GrammaticalCategory.NOMINAL:
                referential = ReferentialType.GROUP
            else:
                referential = ReferentialType.UNSPECIFIED
            rows.append(
                GoldAnnotation(
                    mention_id=row["mention_id"],
                    newspaper=row.get("newspaper", ""),
                    identity=row.get("identity", ""),
                    category=category,
                    gold=gold,
                    referential=referential,
                    unknown=unknown,
                )
            )
        except (KeyError, ValueError) as exc:
            raise EvaluationError(f"line {line_no}: {exc}") from None
    return rows


def build_eval_records(
    gold_rows: Sequence[GoldAnnotation],
    predictions: Iterable[SentimentPrediction],
) -> tuple[list[EvalRecord], int]:
    """Join gold annotations with predictions; returns (records, excluded_unknown).

    Rows flagged unknown (or lacking a gold label) are excluded from scoring.
    A gold row without any prediction scores as unparsed.
    """
    by_id = {p.mention_id: p for p in predictions}
    records: list[EvalRecord] = []
    excluded = 0
    for row in gold_rows:
        if row.unknown or row.gold is None:
            excluded += 1
            continue
        prediction = by_id.get(row.mention_id)
        predicted = prediction.label if prediction is not None else None
        records.append(
            EvalRecord(
                mention_id=row.mention_id,
                gold=row.gold,
                predicted=predicted,
                category=row.category,
                referential=row.referential,
                newspaper=row.newspaper,
            )
        )
    return records, excluded


def full_report_dict(records: Sequence[EvalRecord]) -> dict:
    """Overall metrics plus the category/referential/newspaper breakdowns."""
    overall = metrics(score(records))
    out = {"overall": report_to_dict(overall), "subsets": {}}
    for group_by in ("category", "referential", "newspaper"):
        out["subsets"][group_by] = {
            key: report_to_dict(rep) for key, rep in subset_report(records, group_by).items()
        }
    return out


def format_full_report(records: Sequence[EvalRecord]) -> str:
    parts = [format_report(metrics(score(records)))]
    for group_by in ("category", "referential", "newspaper"):
        for key, rep in subset_report(records, group_by).items():
            parts.append("")
            parts.append(format_report(rep, title=f"{group_by}={key}"))
    return "\n".join(parts)


def matrix_to_dict(matrix: ConfusionMatrix) -> dict:
    return {
        "unparsed": matrix.unparsed,
        "counts": {
            g.value: {p.value: matrix.count(g, p) for p in CLASS_ORDER} for g in CLASS_ORDER
        },
    }


def write_report_json(records: Sequence[EvalRecord], fh) -> None:
    json.dump(full_report_dict(records), fh, ensure_ascii=False, indent=2)
    fh.write("\n")
