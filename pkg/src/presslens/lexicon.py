"""Collective-identity lexicon: suffix candidate extraction, merging, TSV I/O."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

DEFAULT_SUFFIXES = ("ski", "ški", "zki", "žki")
DEFAULT_MIN_FREQ = 90


class LexiconError(ValueError):
    pass


class GrammaticalCategory(Enum):
    NOMINAL = "nominal"
    ADJECTIVAL = "adjectival"

    @classmethod
    def parse(cls, raw: str) -> "GrammaticalCategory":
        try:
            return cls(raw.strip().lower())
        except ValueError:
            raise LexiconError(f"unknown grammatical category {raw!r}") from None


@dataclass(frozen=True)
class LexiconEntry:
    """One lemma mapped to its canonical nominal identity label.

    Attributes:
        lemma: Lowercase lemma, unique within a lexicon.
        category: Whether the lemma is a nominal or adjectival realization.
        identity: Canonical identity label the lemma aggregates under
            (a nominal lemma may map to its own plural label).
        source: Optional provenance note, e.g. which curated list it came from.
    """

    lemma: str
    category: GrammaticalCategory
    identity: str
    source: str | None = None

    def __post_init__(self) -> None:
        if not self.lemma:
            raise LexiconError("lexicon entry lemma must be non-empty")
        if not self.identity:
            raise LexiconError(f"entry {self.lemma!r}: identity must be non-empty")


class Lexicon:
    """Immutable lemma -> entry index; safe for concurrent read-only lookup."""

    def __init__(self, entries: Iterable[LexiconEntry]):
        index: dict[str, LexiconEntry] = {}
        for entry in entries:
            prior = index.get(entry.lemma)
            if prior is not None and (prior.identity, prior.category) != (entry.identity, entry.category):
                if prior.identity != entry.identity:
                    detail = f"{prior.identity!r} vs {entry.identity!r}"
                else:
                    detail = f"category {prior.category.value} vs {entry.category.value}"
                raise LexiconError(f"conflicting entries for lemma {entry.lemma!r}: {detail}")
            index[entry.lemma] = prior or entry
        self._index = index

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, lemma: str) -> bool:
        return lemma in self._index

    def get(self, lemma: str) -> LexiconEntry | None:
        return self._index.get(lemma)

    def entries(self) -> list[LexiconEntry]:
        """Entries in canonical (lemma-sorted) order."""
        return [self._index[lemma] for lemma in sorted(self._index)]

    def identities(self) -> set[str]:
        return {e.identity for e in self._index.values()}


def extract_adjectival_candidates(
    freqs: Mapping[str, int],
    suffixes: Iterable[str] = DEFAULT_SUFFIXES,
    min_freq: int = DEFAULT_MIN_FREQ,
) -> list[tuple[str, int]]:
    """Select lemmas ending in a derivational suffix with count >= min_freq.

    Suffix comparison is on Unicode code points, so š and ž count as single
    characters. Results are sorted by descending count, then lemma.
    """
    suffixes = tuple(suffixes)
    if not suffixes:
        raise LexiconError("suffix list must be non-empty")
    if min_freq < 1:
        raise LexiconError("min_freq must be >= 1")
    hits = [
        (lemma, count)
        for lemma, count in freqs.items()
        if count >= min_freq and lemma.endswith(suffixes)
    ]
    hits.sort(key=lambda item: (-item[1], item[0]))
    return hits


def merge_lexicons(parts: Iterable[Iterable[LexiconEntry]]) -> Lexicon:
    """Merge curated entry lists, collapsing exact duplicates.

    Raises LexiconError when one lemma is assigned two different identities
    (or categories), naming the lemma and both assignments.
    """
    merged: list[LexiconEntry] = []
    for part in parts:
        merged.extend(part)
    return Lexicon(merged)


def map_to_identity(lemma: str, lexicon: Lexicon) -> tuple[str, GrammaticalCategory] | None:
    """Exact lemma lookup; returns (identity, category) or None."""
    entry = lexicon.get(lemma)
    if entry is None:
        return None
    return entry.identity, entry.category


def load_lexicon(lines: Iterable[str]) -> Lexicon:
    """Load a lexicon from TSV lines: lemma, category, identity[, note].

    Lines starting with '#' and blank lines are skipped. Unknown category
    strings and short rows are rejected with the offending line number.
    """
    entries: list[LexiconEntry] = []
    for line_no, line in enumerate(lines, start=1):
        stripped = line.rstrip("\n")
        if not stripped.strip() or stripped.lstrip().startswith("#"):
            continue
        cols = stripped.split("\t")
        if len(cols) < 3:
            raise LexiconError(f"line {line_no}: expected at least 3 tab-separated columns")
        lemma, raw_category, identity = cols[0], cols[1], cols[2]
        note = cols[3] if len(cols) > 3 and cols[3] else None
        try:
            entries.append(LexiconEntry(lemma, GrammaticalCategory.parse(raw_category), identity, note))
        except LexiconError as exc:
            raise LexiconError(f"line {line_no}: {exc}") from None
    return Lexicon(entries)


def load_lexicon_file(path) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        return load_lexicon(fh)


def save_lexicon(lexicon: Lexicon, fh) -> None:
    """Write TSV in canonical lemma order; load(save(x)) is the identity."""
    for entry in lexicon.entries():
        cols = [entry.lemma, entry.category.value, entry.identity]
        if entry.source:
            cols.append(entry.source)
        fh.write("\t".join(cols))
        fh.write("\n")
