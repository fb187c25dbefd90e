#!/usr/bin/env python3
"""Regenerate the bundled demo corpus under src/presslens/data/demo/.

Deterministic: running it twice produces byte-identical files. The corpus is
synthetic (two invented newspapers, five themes, ~30 paragraphs) and sized so
every pipeline stage has something meaningful to chew on.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from presslens.corpus import parse_record  # noqa: E402
from presslens.lexicon import load_lexicon  # noqa: E402
from presslens.mentions import build_context, extract_mentions  # noqa: E402
from presslens.sampler import SamplingPlan, stratified_sample  # noqa: E402
from presslens.sentiment import CueRules, TaskInstance, mock_classify  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "src" / "presslens" / "data" / "demo"

LEXICON_ROWS = [
    ("anglež", "nominal", "Angleži"),
    ("angleški", "adjectival", "Angleži"),
    ("čeh", "nominal", "Čehi"),
    ("češki", "adjectival", "Čehi"),
    ("francoz", "nominal", "Francozi"),
    ("francoski", "adjectival", "Francozi"),
    ("italijan", "nominal", "Italijani"),
    ("italijanski", "adjectival", "Italijani"),
    ("nemec", "nominal", "Nemci"),
    ("nemški", "adjectival", "Nemci"),
    ("rus", "nominal", "Rusi"),
    ("ruski", "adjectival", "Rusi"),
]

CUES = {
    "positive": ["pohvala", "pohvalo", "pohvalilo", "napredek", "uspeh", "veselje", "veseljem"],
    "negative": ["napad", "napadli", "napadel", "škoda", "škodo", "spor", "sporu", "sprli", "sovražno"],
}

TEMPLATE = {
    "template": (
        "Navodilo: Besedilo vsebuje omembo skupnosti, označeno z oznakama "
        "<target> in </target>. Oceni, kakšen sentiment besedilo izraža do "
        "označene omembe, in odgovori z natanko enim simbolom: + (pozitivno), "
        "- (negativno) ali 0 (nevtralno). Ocenjuj samo označeno omembo.\n\n"
        "Primeri:\n{{few_shot}}\n\n"
        "Besedilo: {{context}}\nOdgovor:"
    ),
    "few_shot": [
        ["Mesto je pohvalilo <target>češke</target> obrtnike za njihovo delo .", "+"],
        ["Časniki so ostro napadli <target>nemške</target> uradnike .", "-"],
        ["<target>Rusi</target> so včeraj prispeli v mesto .", "0"],
    ],
}

# Identity, location, and cue forms get linguistically faithful lemmas; the
# rest of this synthetic vocabulary just lowercases the form.
SPECIAL_LEMMAS = {
    "Nemci": ("nemec", "NOUN"),
    "Nemški": ("nemški", "ADJ"),
    "nemški": ("nemški", "ADJ"),
    "Nemška": ("nemški", "ADJ"),
    "Čehi": ("čeh", "NOUN"),
    "Češki": ("češki", "ADJ"),
    "češki": ("češki", "ADJ"),
    "Italijani": ("italijan", "NOUN"),
    "Italijanski": ("italijanski", "ADJ"),
    "Rusi": ("rus", "NOUN"),
    "Ruski": ("ruski", "ADJ"),
    "ruski": ("ruski", "ADJ"),
    "Francozi": ("francoz", "NOUN"),
    "Francoski": ("francoski", "ADJ"),
    "francoski": ("francoski", "ADJ"),
    "Angleži": ("anglež", "NOUN"),
    "Angleški": ("angleški", "ADJ"),
    "Ljubljano": ("ljubljana", "PROPN"),
    "Ljubljani": ("ljubljana", "PROPN"),
    "Ljubljane": ("ljubljana", "PROPN"),
    "Dunaj": ("dunaj", "PROPN"),
    "Dunaju": ("dunaj", "PROPN"),
    "Trst": ("trst", "PROPN"),
    "Trstu": ("trst", "PROPN"),
    "Trsta": ("trst", "PROPN"),
    "Praga": ("praga", "PROPN"),
    "Pragi": ("praga", "PROPN"),
    "Pariz": ("pariz", "PROPN"),
    "Parizu": ("pariz", "PROPN"),
    ".": (".", "PUNCT"),
    ",": (",", "PUNCT"),
}

LOCATION_CANON = {
    "Ljubljano": "Ljubljana",
    "Ljubljani": "Ljubljana",
    "Ljubljane": "Ljubljana",
    "Dunaj": "Dunaj",
    "Dunaju": "Dunaj",
    "Trst": "Trst",
    "Trstu": "Trst",
    "Trsta": "Trst",
    "Praga": "Praga",
    "Pragi": "Praga",
    "Pariz": "Pariz",
    "Parizu": "Pariz",
}

# (newspaper, issue_date, theme, sentences)
PARAGRAPHS = [
    ("jutranjik", "1895-03-12", "Political life", [
        "Nemci so včeraj prišli v Ljubljano .",
        "Napad na zborovanje je povzročil veliko škodo .",
        "Vlada je obljubila red in mir .",
    ]),
    ("jutranjik", "1895-03-12", "Political life", [
        "Češki poslanci so govorili na Dunaju .",
        "Njihov govor je bil miren in stvaren .",
    ]),
    ("jutranjik", "1895-04-02", "Trade and markets", [
        "Italijanski trgovci prodajajo blago v Trstu .",
        "Cene so letos višje kot lani .",
        "Angleži kupujejo žito in les .",
        "Pristanišče je polno ladij .",
        "Trgovina v mestu cvete .",
    ]),
    ("jutranjik", "1895-04-02", "Health", [
        "Zdravniki svarijo pred boleznijo .",
        "V mestu je izbruhnila vročica .",
    ]),
    ("jutranjik", "1895-05-20", "Culture", [
        "Francoski umetniki razstavljajo v Parizu .",
        "Razstava je dosegla velik uspeh .",
    ]),
    ("jutranjik", "1896-01-15", "Political life", [
        "Rusi so poslali pismo vladi .",
        "Nemški časniki so pismo ostro napadli .",
        "Spor se nadaljuje že tretji teden .",
    ]),
    ("jutranjik", "1896-02-10", "Travel", [
        "Vlak vozi iz Ljubljane v Trst .",
        "Potniki hvalijo novo progo .",
    ]),
    ("jutranjik", "1896-02-10", "Trade and markets", [
        "Nemci in Čehi trgujejo na sejmu .",
        "Sejem je uspeh za vse mesto .",
    ]),
    ("jutranjik", "1897-06", "Health", [
        "Ruski zdravnik je obiskal bolnišnico .",
        "Bolniki so ga sprejeli z veseljem .",
    ]),
    ("jutranjik", "1897-07-04", "Culture", [
        "Pevski zbor je nastopil v Ljubljani .",
        "Občinstvo je navdušeno ploskalo .",
    ]),
    ("jutranjik", "1898-03-03", "Political life", [
        "Nemški poslanec je napadel vlado .",
        "Slovenski poslanci so mu odgovorili .",
        "Razprava je trajala do večera .",
    ]),
    ("jutranjik", "1898-03-03", None, [
        "Nemci so kupili hišo ob cesti .",
    ]),
    ("jutranjik", "1899-09-21", "Travel", [
        "Francozi potujejo skozi Trst .",
        "Pot nadaljujejo na Dunaj .",
    ]),
    ("jutranjik", "1900-05-05", "Trade and markets", [
        "Čehi so odprli trgovino v Ljubljani .",
        "Trgovina je dosegla lep uspeh .",
    ]),
    ("jutranjik", "1901-11-11", "Health", [
        "Vročica se širi po mestu .",
        "Zdravniki delajo noč in dan .",
    ]),
    ("vecernik", "1895-03-12", "Political life", [
        "Nemška stranka je dobila volitve na Dunaju .",
        "Nasprotniki govorijo o hudem sporu .",
    ]),
    ("vecernik", "1895-03-13", "Political life", [
        "Čehi zahtevajo svoje pravice .",
        "Njihov program je miren .",
    ]),
    ("vecernik", "1895-04-02", "Culture", [
        "Italijanski pevci gostujejo v Ljubljani .",
        "Predstava je požela pohvalo .",
    ]),
    ("vecernik", "1895-06-30", "Trade and markets", [
        "Angleški trgovci kupujejo les .",
        "Cene lesa spet rastejo .",
    ]),
    ("vecernik", "1896-01-15", "Health", [
        "Ruski zdravniki svetujejo počitek .",
        "Bolezen se počasi umika .",
    ]),
    ("vecernik", "1896-08-08", "Travel", [
        "Parnik pluje iz Trsta v Pariz .",
        "Potovanje traja pet dni .",
    ]),
    ("vecernik", "1897-02-14", "Political life", [
        "Nemci so napadli urednika lista .",
        "Policija preiskuje nastalo škodo .",
        "Mesto je zelo vznemirjeno .",
    ]),
    ("vecernik", "1897-02-14", "Trade and markets", [
        "Francoski bankirji odpirajo podružnico .",
        "Napredek je očiten vsem .",
    ]),
    ("vecernik", "1898-10-10", "Culture", [
        "Češki skladatelj je nastopil v Pragi .",
        "Občinstvo ga je toplo pohvalilo .",
    ]),
    ("vecernik", "1898-10-10", None, [
        "Rusi so prispeli včeraj zvečer .",
    ]),
    ("vecernik", "1899-04-01", "Health", [
        "Zdravniki opozarjajo na vročico .",
        "Bolnišnica je že polna .",
    ]),
    ("vecernik", "1900-12-24", "Political life", [
        "Nemški in češki poslanci so se sprli .",
        "Seja je bila prekinjena .",
    ]),
    ("vecernik", "1901-07-07", "Travel", [
        "Angleži obiskujejo Ljubljano .",
        "Mesto jih je sprejelo z veseljem .",
    ]),
    ("vecernik", "1902-02-02", "Trade and markets", [
        "Italijani prodajajo sadje na trgu .",
        "Kupci so zelo zadovoljni .",
    ]),
    ("vecernik", "1903-03-03", "Culture", [
        "Nemci so ustanovili pevsko društvo .",
        "Društvo je doseglo velik napredek .",
    ]),
]

GOLD_SHIFT = {"+": "0", "0": "-", "-": "+"}


def tokenize(sentence: str) -> list[dict]:
    tokens = []
    for form in sentence.split():
        lemma, pos = SPECIAL_LEMMAS.get(form, (form.lower(), ""))
        tokens.append({"form": form, "lemma": lemma, "pos": pos})
    return tokens


def build_records() -> list[dict]:
    records = []
    counters: dict[str, int] = {}
    for newspaper, issue_date, theme, sentences in PARAGRAPHS:
        counters[newspaper] = counters.get(newspaper, 0) + 1
        token_lists = [tokenize(s) for s in sentences]
        locations = []
        for s_idx, tokens in enumerate(token_lists):
            for t_idx, tok in enumerate(tokens):
                canon = LOCATION_CANON.get(tok["form"])
                if canon:
                    locations.append(
                        {"sentence": s_idx, "start": t_idx, "end": t_idx + 1, "text": canon}
                    )
        records.append(
            {
                "paragraph_id": f"{newspaper}-{issue_date}-p{counters[newspaper]:03d}",
                "newspaper": newspaper,
                "issue_date": issue_date,
                "theme": theme,
                "sentences": token_lists,
                "locations": locations,
            }
        )
    return records


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    records = build_records()
    with open(OUT / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False))
            fh.write("\n")

    with open(OUT / "lexicon.tsv", "w", encoding="utf-8") as fh:
        fh.write("# demo collective-identity lexicon\n")
        for lemma, category, identity in LEXICON_ROWS:
            fh.write(f"{lemma}\t{category}\t{identity}\n")

    with open(OUT / "cues.json", "w", encoding="utf-8") as fh:
        json.dump(CUES, fh, ensure_ascii=False, indent=2)
        fh.write("\n")

    with open(OUT / "template.json", "w", encoding="utf-8") as fh:
        json.dump(TEMPLATE, fh, ensure_ascii=False, indent=2)
        fh.write("\n")

    # Gold annotations: a stratified sample of mentions labeled by the mock
    # rules, with every third label shifted so evaluation is non-trivial and
    # the final row flagged unknown.
    paragraphs = [parse_record(r) for r in records]
    by_id = {p.paragraph_id: p for p in paragraphs}
    lexicon = load_lexicon(
        f"{lemma}\t{category}\t{identity}" for lemma, category, identity in LEXICON_ROWS
    )
    mentions = list(extract_mentions(paragraphs, lexicon))
    plan = SamplingPlan(newspapers=("jutranjik", "vecernik"), total=12, seed=11)
    sample = stratified_sample(mentions, plan)
    rules = CueRules(frozenset(CUES["positive"]), frozenset(CUES["negative"]))
    with open(OUT / "gold.tsv", "w", encoding="utf-8") as fh:
        fh.write(
            "mention_id\tnewspaper\tidentity\tcategory\trendered\tgold_sentiment\treferential_type\tunknown\n"
        )
        for i, mention in enumerate(sample):
            window = build_context(mention, by_id[mention.paragraph_id])
            instance = TaskInstance(mention.mention_id, window.rendered, mention.identity, mention.category.value)
            label = mock_classify(instance, rules).value
            if i % 3 == 2:
                label = GOLD_SHIFT[label]
            if mention.category.value == "nominal":
                referential = "group"
            else:
                referential = "group" if i % 2 == 0 else "non-group"
            unknown = "x" if i == len(sample) - 1 else ""
            gold = "" if unknown else label
            fh.write(
                f"{mention.mention_id}\t{mention.newspaper}\t{mention.identity}\t"
                f"{mention.category.value}\t{window.rendered}\t{gold}\t{referential}\t{unknown}\n"
            )

    print(f"wrote demo data to {OUT}")


if __name__ == "__main__":
    main()
