"""Annotated-corpus data model, JSONL interchange parsing, and corpus statistics."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Iterator


class CorpusError(ValueError):
    """Malformed corpus input. Carries the 1-based input line when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Token:
    """One annotated token.

    Attributes:
        form: Surface text as printed, non-empty.
        lemma: Normalized lowercase lemma, non-empty.
        pos: Coarse part-of-speech tag; may be empty.
    """

    form: str
    lemma: str
    pos: str = ""

    def __post_init__(self) -> None:
        if not self.form:
            raise ValueError("token form must be non-empty")
        if not self.lemma:
            raise ValueError("token lemma must be non-empty")


@dataclass(frozen=True)
class Sentence:
    """A sentence inside a paragraph; index is its 0-based position."""

    index: int
    tokens: tuple[Token, ...]

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError("sentence index must be non-negative")
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")


@dataclass(frozen=True)
class LocationAnnotation:
    """A location span over one sentence, half-open token indices."""

    sentence: int
    start: int
    end: int
    text: str


@dataclass(frozen=True)
class Paragraph:
    """The corpus unit: an annotated paragraph of one newspaper issue.

    Attributes:
        paragraph_id: Globally unique identifier.
        newspaper: Newspaper identifier.
        issue_date: Issue date; month-only source dates are stored as the 1st.
        theme: Curated theme label, or None for outlier/noise paragraphs.
        sentences: Ordered sentences, indices consecutive from 0.
        locations: Location annotations with spans valid in their sentence.
    """

    paragraph_id: str
    newspaper: str
    issue_date: date
    theme: str | None
    sentences: tuple[Sentence, ...]
    locations: tuple[LocationAnnotation, ...] = ()

    def __post_init__(self) -> None:
        for pos, sent in enumerate(self.sentences):
            if sent.index != pos:
                raise ValueError(
                    f"paragraph {self.paragraph_id}: sentence indices must be "
                    f"consecutive from 0, got {sent.index} at position {pos}"
                )
        for loc in self.locations:
            self._check_span(loc)

    def _check_span(self, loc: LocationAnnotation) -> None:
        if not 0 <= loc.sentence < len(self.sentences):
            raise ValueError(
                f"paragraph {self.paragraph_id}: location references "
                f"sentence {loc.sentence} of {len(self.sentences)}"
            )
        n = len(self.sentences[loc.sentence].tokens)
        if not 0 <= loc.start < loc.end <= n:
            raise ValueError(
                f"paragraph {self.paragraph_id}: location span "
                f"({loc.start},{loc.end}) invalid for sentence of {n} tokens"
            )

    @property
    def token_count(self) -> int:
        return sum(len(s.tokens) for s in self.sentences)


@dataclass
class ValidationReport:
    """Counters for tolerated irregularities seen while parsing."""

    unknown_fields: Counter = field(default_factory=Counter)
    month_only_dates: int = 0


@dataclass(frozen=True)
class NewspaperStats:
    tokens: int
    paragraphs: int
    issues: int


@dataclass(frozen=True)
class CorpusStats:
    """Corpus size totals plus the same breakdown per newspaper."""

    tokens: int
    paragraphs: int
    issues: int
    per_newspaper: dict[str, NewspaperStats]

    def to_dict(self) -> dict:
        return {
            "tokens": self.tokens,
            "paragraphs": self.paragraphs,
            "issues": self.issues,
            "per_newspaper": {
                name: {"tokens": s.tokens, "paragraphs": s.paragraphs, "issues": s.issues}
                for name, s in sorted(self.per_newspaper.items())
            },
        }


_PARAGRAPH_FIELDS = {"paragraph_id", "newspaper", "issue_date", "theme", "sentences", "locations"}
_TOKEN_FIELDS = {"form", "lemma", "pos"}
_LOCATION_FIELDS = {"sentence", "start", "end", "text"}


def _parse_date(raw: str, line: int, report: ValidationReport | None) -> date:
    try:
        if len(raw) == 7:
            # YYYY-MM with unknown day: pin to the 1st and flag it.
            parsed = date.fromisoformat(raw + "-01")
            if report is not None:
                report.month_only_dates += 1
            return parsed
        return date.fromisoformat(raw)
    except ValueError:
        raise CorpusError(f"invalid issue_date {raw!r}", line) from None


def _count_unknown(record: dict, known: set[str], report: ValidationReport | None) -> None:
    if report is None:
        return
    for key in record:
        if key not in known:
            report.unknown_fields[key] += 1


def parse_record(record: dict, line: int | None = None, report: ValidationReport | None = None) -> Paragraph:
    """Build one Paragraph from a decoded interchange record."""
    _count_unknown(record, _PARAGRAPH_FIELDS, report)
    try:
        paragraph_id = record["paragraph_id"]
        newspaper = record["newspaper"]
        raw_date = record["issue_date"]
        raw_sentences = record["sentences"]
    except KeyError as exc:
        raise CorpusError(f"missing field {exc.args[0]!r}", line) from None
    if not isinstance(paragraph_id, str) or not paragraph_id:
        raise CorpusError("paragraph_id must be a non-empty string", line)
    if not isinstance(newspaper, str) or not newspaper:
        raise CorpusError("newspaper must be a non-empty string", line)

    issue_date = _parse_date(str(raw_date), line or 0, report)
    theme = record.get("theme")
    if theme is not None and not isinstance(theme, str):
        raise CorpusError(f"paragraph {paragraph_id}: theme must be a string or null", line)

    sentences = []
    for idx, raw_tokens in enumerate(raw_sentences):
        tokens = []
        for raw_tok in raw_tokens:
            _count_unknown(raw_tok, _TOKEN_FIELDS, report)
            try:
                tokens.append(Token(raw_tok["form"], raw_tok["lemma"], raw_tok.get("pos", "")))
            except (KeyError, ValueError) as exc:
                raise CorpusError(f"paragraph {paragraph_id}: bad token ({exc})", line) from None
        try:
            sentences.append(Sentence(idx, tuple(tokens)))
        except ValueError as exc:
            raise CorpusError(f"paragraph {paragraph_id}: {exc}", line) from None

    locations = []
    for raw_loc in record.get("locations", []):
        _count_unknown(raw_loc, _LOCATION_FIELDS, report)
        try:
            locations.append(
                LocationAnnotation(raw_loc["sentence"], raw_loc["start"], raw_loc["end"], raw_loc["text"])
            )
        except KeyError as exc:
            raise CorpusError(
                f"paragraph {paragraph_id}: location missing field {exc.args[0]!r}", line
            ) from None

    try:
        return Paragraph(paragraph_id, newspaper, issue_date, theme, tuple(sentences), tuple(locations))
    except ValueError as exc:
        raise CorpusError(str(exc), line) from None


def parse_corpus(lines: Iterable[str], report: ValidationReport | None = None) -> Iterator[Paragraph]:
    """Stream Paragraphs from JSONL lines, in input order.

    Raises CorpusError with the offending 1-based line number on malformed
    records, invalid spans, or duplicate paragraph_ids. Memory stays bounded
    by the largest record plus the set of seen ids.
    """
    seen: set[str] = set()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"invalid JSON ({exc.msg})", line_no) from None
        if not isinstance(record, dict):
            raise CorpusError("record must be a JSON object", line_no)
        paragraph = parse_record(record, line_no, report)
        if paragraph.paragraph_id in seen:
            raise CorpusError(f"duplicate paragraph_id {paragraph.paragraph_id!r}", line_no)
        seen.add(paragraph.paragraph_id)
        yield paragraph


def load_corpus(path, report: ValidationReport | None = None) -> list[Paragraph]:
    """Read a whole corpus file into memory."""
    with open(path, encoding="utf-8") as fh:
        return list(parse_corpus(fh, report))


def serialize_paragraph(paragraph: Paragraph) -> str:
    """Render one paragraph as its canonical JSONL line (no trailing newline)."""
    record = {
        "paragraph_id": paragraph.paragraph_id,
        "newspaper": paragraph.newspaper,
        "issue_date": paragraph.issue_date.isoformat(),
        "theme": paragraph.theme,
        "sentences": [
            [{"form": t.form, "lemma": t.lemma, "pos": t.pos} for t in s.tokens]
            for s in paragraph.sentences
        ],
        "locations": [
            {"sentence": l.sentence, "start": l.start, "end": l.end, "text": l.text}
            for l in paragraph.locations
        ],
    }
    return json.dumps(record, ensure_ascii=False)


def write_corpus(paragraphs: Iterable[Paragraph], fh) -> None:
    for paragraph in paragraphs:
        fh.write(serialize_paragraph(paragraph))
        fh.write("\n")


def corpus_stats(paragraphs: Iterable[Paragraph]) -> CorpusStats:
    """Count tokens, paragraphs, and distinct (newspaper, issue_date) issues."""
    tokens: Counter = Counter()
    para_counts: Counter = Counter()
    issues: dict[str, set[date]] = {}
    for p in paragraphs:
        tokens[p.newspaper] += p.token_count
        para_counts[p.newspaper] += 1
        issues.setdefault(p.newspaper, set()).add(p.issue_date)
    per_newspaper = {
        name: NewspaperStats(tokens[name], para_counts[name], len(issues[name]))
        for name in para_counts
    }
    return CorpusStats(
        tokens=sum(tokens.values()),
        paragraphs=sum(para_counts.values()),
        issues=sum(len(v) for v in issues.values()),
        per_newspaper=per_newspaper,
    )


def lemma_frequencies(paragraphs: Iterable[Paragraph], newspaper: str | None = None) -> Counter:
    """Count every token lemma, optionally restricted to one newspaper."""
    freqs: Counter = Counter()
    for p in paragraphs:
        if newspaper is not None and p.newspaper != newspaper:
            continue
        for sentence in p.sentences:
            for token in sentence.tokens:
                freqs[token.lemma] += 1
    return freqs
