"""Shared fixtures and synthetic-corpus builders."""

from __future__ import annotations

import random
from datetime import date, timedelta

import pytest

from presslens.cli import demo_path
from presslens.corpus import LocationAnnotation, Paragraph, Sentence, Token
from presslens.lexicon import GrammaticalCategory, Lexicon, LexiconEntry
from presslens.mentions import extract_mentions
from presslens.sentiment import SentimentLabel, SentimentPrediction

IDENTITY_WORDS = [
    ("nemec", GrammaticalCategory.NOMINAL, "Nemci"),
    ("nemški", GrammaticalCategory.ADJECTIVAL, "Nemci"),
    ("čeh", GrammaticalCategory.NOMINAL, "Čehi"),
    ("češki", GrammaticalCategory.ADJECTIVAL, "Čehi"),
    ("rus", GrammaticalCategory.NOMINAL, "Rusi"),
    ("ruski", GrammaticalCategory.ADJECTIVAL, "Rusi"),
    ("italijan", GrammaticalCategory.NOMINAL, "Italijani"),
    ("italijanski", GrammaticalCategory.ADJECTIVAL, "Italijani"),
]

FILLER = ["vlada", "mesto", "trg", "list", "govor", "delo", "cesta", "hiša", "voda", "kruh"]
THEMES = ["Political life", "Trade", "Culture", "Health", "Travel"]
LOCATIONS = ["Ljubljana", "Dunaj", "Trst", "Praga"]


def make_token(lemma: str, form: str | None = None, pos: str = "") -> Token:
    return Token(form or lemma.capitalize(), lemma, pos)


def make_sentence(index: int, lemmas: list[str]) -> Sentence:
    return Sentence(index, tuple(make_token(lemma) for lemma in lemmas))


def make_paragraph(
    pid: str,
    sentences: list[list[str]],
    newspaper: str = "jutranjik",
    issue_date: date = date(1895, 3, 12),
    theme: str | None = "Political life",
    locations: tuple[LocationAnnotation, ...] = (),
) -> Paragraph:
    return Paragraph(
        paragraph_id=pid,
        newspaper=newspaper,
        issue_date=issue_date,
        theme=theme,
        sentences=tuple(make_sentence(i, lemmas) for i, lemmas in enumerate(sentences)),
        locations=locations,
    )


@pytest.fixture(scope="session")
def small_lexicon() -> Lexicon:
    return Lexicon(LexiconEntry(lemma, cat, identity) for lemma, cat, identity in IDENTITY_WORDS)


def random_corpus(rnd: random.Random, n_paragraphs: int = 12, newspapers=("jutranjik", "vecernik")):
    """Random small corpus plus extracted mentions and random predictions.

    Returns (paragraphs, lexicon, mentions, predictions); roughly 15% of
    predictions are parse failures so exclusion paths stay exercised.
    """
    lexicon = Lexicon(LexiconEntry(lemma, cat, identity) for lemma, cat, identity in IDENTITY_WORDS)
    paragraphs = []
    base = date(1895, 1, 1)
    for i in range(n_paragraphs):
        sentences = []
        for s in range(rnd.randint(1, 4)):
            length = rnd.randint(3, 8)
            lemmas = [
                rnd.choice(IDENTITY_WORDS)[0] if rnd.random() < 0.3 else rnd.choice(FILLER)
                for _ in range(length)
            ]
            sentences.append(make_sentence(s, lemmas))
        locations = []
        for s_idx, sentence in enumerate(sentences):
            if rnd.random() < 0.4:
                t_idx = rnd.randrange(len(sentence.tokens))
                locations.append(
                    LocationAnnotation(s_idx, t_idx, t_idx + 1, rnd.choice(LOCATIONS))
                )
        paragraphs.append(
            Paragraph(
                paragraph_id=f"p{i:04d}",
                newspaper=rnd.choice(newspapers),
                issue_date=base + timedelta(days=rnd.randrange(0, 3000)),
                theme=rnd.choice(THEMES + [None]),
                sentences=tuple(sentences),
                locations=tuple(locations),
            )
        )
    mentions = list(extract_mentions(paragraphs, lexicon))
    predictions = []
    for mention in mentions:
        if rnd.random() < 0.15:
            predictions.append(
                SentimentPrediction(mention.mention_id, None, "no label here", "mock", False)
            )
        else:
            label = rnd.choice(list(SentimentLabel))
            predictions.append(
                SentimentPrediction(mention.mention_id, label, label.value, "mock", True)
            )
    return paragraphs, lexicon, mentions, predictions


@pytest.fixture(scope="session")
def demo_dir():
    return demo_path("corpus.jsonl").parent


def run_demo_pipeline(out_dir) -> None:
    """Run extract + classify(mock) over the demo corpus into out_dir."""
    import shutil

    from presslens.cli import main

    demo = demo_path("corpus.jsonl").parent
    out_dir.mkdir(parents=True, exist_ok=True)
    assert (
        main(
            [
                "extract",
                "--corpus", str(demo / "corpus.jsonl"),
                "--lexicon", str(demo / "lexicon.tsv"),
                "--out", str(out_dir / "mentions.jsonl"),
            ]
        )
        == 0
    )
    assert (
        main(
            [
                "classify",
                "--mentions", str(out_dir / "mentions.jsonl"),
                "--backend", "mock",
                "--cues", str(demo / "cues.json"),
                "--out", str(out_dir / "predictions.jsonl"),
            ]
        )
        == 0
    )
    shutil.copy(demo / "corpus.jsonl", out_dir / "corpus.jsonl")


@pytest.fixture(scope="session")
def demo_bundle_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bundle")
    run_demo_pipeline(out)
    return out
