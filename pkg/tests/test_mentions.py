import io
import random

import pytest

from presslens.lexicon import GrammaticalCategory
from presslens.mentions import (
    build_context,
    extract_mentions,
    mention_to_record,
    read_mentions,
    write_mentions,
)

from .conftest import make_paragraph, random_corpus


def test_extract_single_match(small_lexicon):
    p = make_paragraph("p1", [["nemški", "vojak"]])
    (mention,) = list(extract_mentions([p], small_lexicon))
    assert (mention.sentence, mention.start, mention.end) == (0, 0, 1)
    assert mention.identity == "Nemci"
    assert mention.category is GrammaticalCategory.ADJECTIVAL
    assert mention.mention_id == "p1:0:0-1"


def test_extract_no_matches(small_lexicon):
    p = make_paragraph("p1", [["miza", "stol"]])
    assert list(extract_mentions([p], small_lexicon)) == []


def test_extract_equals_bruteforce_scan(small_lexicon):
    rnd = random.Random(17)
    paragraphs, lexicon, mentions, _ = random_corpus(rnd, n_paragraphs=20)
    expected = []
    for p in paragraphs:
        for s in p.sentences:
            for i, t in enumerate(s.tokens):
                if lexicon.get(t.lemma) is not None:
                    expected.append((p.paragraph_id, s.index, i, i + 1, t.lemma))
    got = [(m.paragraph_id, m.sentence, m.start, m.end, m.lemma) for m in mentions]
    assert got == expected


def test_extract_deterministic(small_lexicon):
    rnd = random.Random(3)
    paragraphs, lexicon, _, _ = random_corpus(rnd, n_paragraphs=10)
    first = [m.mention_id for m in extract_mentions(paragraphs, lexicon)]
    second = [m.mention_id for m in extract_mentions(paragraphs, lexicon)]
    assert first == second


def test_context_single_sentence_paragraph(small_lexicon):
    p = make_paragraph("p1", [["nemec"]])
    (mention,) = list(extract_mentions([p], small_lexicon))
    window = build_context(mention, p)
    assert len(window.sentences) == 1
    assert window.target_sentence_offset == 0
    assert window.rendered == "<target>Nemec</target>"


def test_context_middle_of_five(small_lexicon):
    p = make_paragraph("p1", [["a"], ["b"], ["nemec"], ["d"], ["e"]])
    (mention,) = list(extract_mentions([p], small_lexicon))
    window = build_context(mention, p)
    assert window.sentences == ("A", "B", "Nemec", "D", "E")
    assert window.target_sentence_offset == 2


def test_context_tail_of_five(small_lexicon):
    p = make_paragraph("p1", [["a"], ["b"], ["c"], ["d"], ["nemec"]])
    (mention,) = list(extract_mentions([p], small_lexicon))
    window = build_context(mention, p)
    assert window.sentences == ("C", "D", "Nemec")
    assert window.target_sentence_offset == 2


@pytest.mark.parametrize("n_sentences", range(1, 8))
def test_context_clamp_all_positions(small_lexicon, n_sentences):
    for target in range(n_sentences):
        sentences = [["nemec"] if i == target else ["beseda"] for i in range(n_sentences)]
        p = make_paragraph("p1", sentences)
        (mention,) = list(extract_mentions([p], small_lexicon))
        window = build_context(mention, p)
        lo, hi = max(0, target - 2), min(n_sentences, target + 3)
        assert len(window.sentences) == hi - lo
        assert window.target_sentence_offset == target - lo
        assert 1 <= len(window.sentences) <= 5
        assert window.rendered.count("<target>") == 1
        assert window.rendered.count("</target>") == 1


def test_rendered_strip_tags_equals_plain_join(small_lexicon):
    p = make_paragraph("p1", [["rus", "in", "nemec"], ["mir"], ["čeh", "pride"]])
    for mention in extract_mentions([p], small_lexicon):
        window = build_context(mention, p)
        stripped = window.rendered.replace("<target>", "").replace("</target>", "")
        assert stripped == " ".join(window.sentences)


def test_context_rejects_wrong_paragraph(small_lexicon):
    p1 = make_paragraph("p1", [["nemec"]])
    p2 = make_paragraph("p2", [["nemec"]])
    (mention,) = list(extract_mentions([p1], small_lexicon))
    with pytest.raises(ValueError, match="does not belong"):
        build_context(mention, p2)


def test_mentions_jsonl_roundtrip(small_lexicon):
    p = make_paragraph("p1", [["nemški", "kruh"]])
    (mention,) = list(extract_mentions([p], small_lexicon))
    rendered = build_context(mention, p).rendered
    buf = io.StringIO()
    write_mentions([mention_to_record(mention, rendered)], buf)
    ((back, back_rendered),) = list(read_mentions(buf.getvalue().splitlines()))
    assert back == mention
    assert back_rendered == rendered
