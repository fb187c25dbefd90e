"""Identity mention extraction and tagged context-window construction."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .corpus import Paragraph
from .lexicon import GrammaticalCategory, Lexicon

TARGET_OPEN = "<target>"
TARGET_CLOSE = "</target>"

# Number of neighbor sentences kept on each side of the target sentence.
CONTEXT_RADIUS = 2


class ReferentialType(Enum):
    GROUP = "group"
    NON_GROUP = "non-group"
    UNSPECIFIED = ""

    @classmethod
    def parse(cls, raw: str) -> "ReferentialType":
        return cls(raw.strip().lower())


@dataclass(frozen=True)
class IdentityMention:
    """One lexicon-matched token occurrence with its coordinates.

    mention_id is a pure function of (paragraph_id, sentence, start, end),
    so repeated extraction runs produce identical ids.
    """

    mention_id: str
    paragraph_id: str
    newspaper: str
    sentence: int
    start: int
    end: int
    lemma: str
    identity: str
    category: GrammaticalCategory

    @staticmethod
    def make_id(paragraph_id: str, sentence: int, start: int, end: int) -> str:
        return f"{paragraph_id}:{sentence}:{start}-{end}"


@dataclass(frozen=True)
class ContextWindow:
    """Up to five sentences around the target, tagged for prompt rendering.

    Attributes:
        sentences: Window sentence texts (tokens joined by single spaces).
        target_sentence_offset: Index of the target sentence within the window.
        rendered: Window text with the target span wrapped in <target> tags.
    """

    sentences: tuple[str, ...]
    target_sentence_offset: int
    rendered: str


def extract_mentions(paragraphs: Iterable[Paragraph], lexicon: Lexicon) -> Iterator[IdentityMention]:
    """Emit one mention per token whose lemma is in the lexicon, in document order.

    Matching is lemma-exact and single-token. Adjacent adjectival and nominal
    matches inside one noun phrase are both emitted; no deduplication happens
    at this level.
    """
    for paragraph in paragraphs:
        for sentence in paragraph.sentences:
            for i, token in enumerate(sentence.tokens):
                entry = lexicon.get(token.lemma)
                if entry is None:
                    continue
                yield IdentityMention(
                    mention_id=IdentityMention.make_id(paragraph.paragraph_id, sentence.index, i, i + 1),
                    paragraph_id=paragraph.paragraph_id,
                    newspaper=paragraph.newspaper,
                    sentence=sentence.index,
                    start=i,
                    end=i + 1,
                    lemma=token.lemma,
                    identity=entry.identity,
                    category=entry.category,
                )


def build_context(mention: IdentityMention, paragraph: Paragraph) -> ContextWindow:
    """Build the mention's +-2-sentence window, truncated at paragraph edges."""
    if mention.paragraph_id != paragraph.paragraph_id:
        raise ValueError(
            f"mention {mention.mention_id} does not belong to paragraph {paragraph.paragraph_id}"
        )
    if not 0 <= mention.sentence < len(paragraph.sentences):
        raise ValueError(f"mention {mention.mention_id}: sentence index out of range")
    target_tokens = paragraph.sentences[mention.sentence].tokens
    if not 0 <= mention.start < mention.end <= len(target_tokens):
        raise ValueError(f"mention {mention.mention_id}: token span out of range")

    lo = max(0, mention.sentence - CONTEXT_RADIUS)
    hi = min(len(paragraph.sentences), mention.sentence + CONTEXT_RADIUS + 1)
    window = paragraph.sentences[lo:hi]
    offset = mention.sentence - lo

    plain = tuple(" ".join(t.form for t in s.tokens) for s in window)
    rendered_parts = []
    for pos, sent in enumerate(window):
        forms = [t.form for t in sent.tokens]
        if pos == offset:
            span = " ".join(forms[mention.start : mention.end])
            pieces = forms[: mention.start] + [TARGET_OPEN + span + TARGET_CLOSE] + forms[mention.end :]
            rendered_parts.append(" ".join(pieces))
        else:
            rendered_parts.append(" ".join(forms))
    return ContextWindow(plain, offset, " ".join(rendered_parts))


def mention_to_record(mention: IdentityMention, rendered: str) -> dict:
    return {
        "mention_id": mention.mention_id,
        "paragraph_id": mention.paragraph_id,
        "newspaper": mention.newspaper,
        "sentence": mention.sentence,
        "start": mention.start,
        "end": mention.end,
        "lemma": mention.lemma,
        "identity": mention.identity,
        "category": mention.category.value,
        "rendered": rendered,
    }


def write_mentions(records: Iterable[dict], fh) -> None:
    for record in records:
        fh.write(json.dumps(record, ensure_ascii=False))
        fh.write("\n")


def read_mentions(lines: Iterable[str]) -> Iterator[tuple[IdentityMention, str]]:
    """Yield (mention, rendered context) pairs from a mentions JSONL stream."""
    for line in lines:
        if not line.strip():
            continue
        record = json.loads(line)
        mention = IdentityMention(
            mention_id=record["mention_id"],
            paragraph_id=record["paragraph_id"],
            newspaper=record["newspaper"],
            sentence=record["sentence"],
            start=record["start"],
            end=record["end"],
            lemma=record["lemma"],
            identity=record["identity"],
            category=GrammaticalCategory.parse(record["category"]),
        )
        yield mention, record.get("rendered", "")


def read_mentions_file(path) -> list[tuple[IdentityMention, str]]:
    with open(path, encoding="utf-8") as fh:
        return list(read_mentions(fh))
