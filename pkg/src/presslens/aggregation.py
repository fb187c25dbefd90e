"""Identity x newspaper sentiment profiles, neutrality rankings, theme tables."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Paragraph
from .mentions import IdentityMention
from .sentiment import SentimentLabel, SentimentPrediction

DEFAULT_MIN_MENTIONS = 50
DEFAULT_COMPOSITION_TOP_K = 5

MOST_NEUTRAL = "most-neutral"
MOST_NON_NEUTRAL = "most-non-neutral"


class AggregationError(ValueError):
    pass


@dataclass(frozen=True)
class IdentitySentimentProfile:
    """Label tallies for one identity in one newspaper.

    non_neutral_share is 1 - neutral/total: the share of parsed predictions
    carrying any evaluation at all, which also drives identity node size in
    the co-occurrence graph.
    """

    identity: str
    newspaper: str
    positive: int
    negative: int
    neutral: int

    @property
    def total(self) -> int:
        return self.positive + self.negative + self.neutral

    @property
    def proportions(self) -> tuple[float, float, float]:
        total = self.total
        return (self.positive / total, self.negative / total, self.neutral / total)

    @property
    def neutral_share(self) -> float:
        return self.neutral / self.total

    @property
    def non_neutral_share(self) -> float:
        return 1.0 - self.neutral / self.total

    def to_dict(self) -> dict:
        pos, neg, neu = self.proportions
        return {
            "identity": self.identity,
            "newspaper": self.newspaper,
            "counts": {"pos": self.positive, "neg": self.negative, "neu": self.neutral},
            "total": self.total,
            "proportions": {"pos": pos, "neg": neg, "neu": neu},
            "non_neutral_share": self.non_neutral_share,
        }


def build_profiles(
    mentions: Sequence[IdentityMention],
    predictions: Iterable[SentimentPrediction],
) -> tuple[list[IdentitySentimentProfile], int]:
    """Tally parsed predictions per (identity, newspaper).

    Returns the profiles (sorted by identity then newspaper) and the count of
    predictions excluded because they failed to parse. A prediction whose
    mention_id has no mention raises AggregationError.
    """
    by_id = {m.mention_id: m for m in mentions}
    tallies: dict[tuple[str, str], Counter] = defaultdict(Counter)
    unparsed = 0
    for prediction in predictions:
        mention = by_id.get(prediction.mention_id)
        if mention is None:
            raise AggregationError(f"prediction for unknown mention_id {prediction.mention_id!r}")
        if prediction.label is None:
            unparsed += 1
            continue
        tallies[(mention.identity, mention.newspaper)][prediction.label] += 1
    profiles = [
        IdentitySentimentProfile(
            identity=identity,
            newspaper=newspaper,
            positive=counts[SentimentLabel.POSITIVE],
            negative=counts[SentimentLabel.NEGATIVE],
            neutral=counts[SentimentLabel.NEUTRAL],
        )
        for (identity, newspaper), counts in sorted(tallies.items())
    ]
    return profiles, unparsed


@dataclass(frozen=True)
class NeutralityRank:
    identity: str
    mean_share: float
    per_newspaper: dict[str, float]


def rank_by_neutrality(
    profiles: Sequence[IdentitySentimentProfile],
    min_mentions: int = DEFAULT_MIN_MENTIONS,
    direction: str = MOST_NEUTRAL,
    top_k: int | None = 10,
    newspapers: Sequence[str] | None = None,
) -> list[NeutralityRank]:
    """Rank identities by mean (non-)neutral proportion across newspapers.

    Only identities with at least min_mentions parsed predictions in every
    selected newspaper are eligible. Ordering is by the unweighted mean share
    descending, ties broken by identity label ascending.
    """
    if min_mentions < 1:
        raise AggregationError("min_mentions must be >= 1")
    if direction not in (MOST_NEUTRAL, MOST_NON_NEUTRAL):
        raise AggregationError(f"unknown direction {direction!r}")
    selected = tuple(newspapers) if newspapers else tuple(sorted({p.newspaper for p in profiles}))
    by_identity: dict[str, dict[str, IdentitySentimentProfile]] = defaultdict(dict)
    for profile in profiles:
        if profile.newspaper in selected:
            by_identity[profile.identity][profile.newspaper] = profile

    ranks: list[NeutralityRank] = []
    for identity, per_paper in by_identity.items():
        if any(paper not in per_paper or per_paper[paper].total < min_mentions for paper in selected):
            continue
        shares = {
            paper: (
                per_paper[paper].neutral_share
                if direction == MOST_NEUTRAL
                else per_paper[paper].non_neutral_share
            )
            for paper in selected
        }
        ranks.append(NeutralityRank(identity, sum(shares.values()) / len(selected), shares))
    ranks.sort(key=lambda r: (-r.mean_share, r.identity))
    return ranks if top_k is None else ranks[:top_k]


@dataclass(frozen=True)
class ThemeDistributionRow:
    """Theme share figures for one (theme, newspaper) pair.

    rel_paragraphs is the theme's share of the newspaper's themed paragraphs;
    mention_share is the share of the theme's paragraphs containing at least
    one identity mention (this artifact's reading of the ambiguous published
    figure; other denominators exist).
    """

    theme: str
    newspaper: str
    paragraphs: int
    rel_paragraphs: float
    mention_share: float
    distinct_identities: int


def theme_distribution(
    paragraphs: Sequence[Paragraph],
    mentions: Sequence[IdentityMention],
) -> list[ThemeDistributionRow]:
    """One row per (theme, newspaper); unthemed paragraphs are excluded throughout."""
    mention_paragraphs: dict[str, set[str]] = defaultdict(set)
    for m in mentions:
        mention_paragraphs[m.paragraph_id].add(m.identity)

    themed = [p for p in paragraphs if p.theme is not None]
    paper_totals: Counter = Counter(p.newspaper for p in themed)
    group: dict[tuple[str, str], list[Paragraph]] = defaultdict(list)
    for p in themed:
        group[(p.theme, p.newspaper)].append(p)

    rows: list[ThemeDistributionRow] = []
    for (theme, newspaper), members in sorted(group.items()):
        with_mentions = sum(1 for p in members if p.paragraph_id in mention_paragraphs)
        identities = set()
        for p in members:
            identities |= mention_paragraphs.get(p.paragraph_id, set())
        rows.append(
            ThemeDistributionRow(
                theme=theme,
                newspaper=newspaper,
                paragraphs=len(members),
                rel_paragraphs=len(members) / paper_totals[newspaper],
                mention_share=with_mentions / len(members),
                distinct_identities=len(identities),
            )
        )
    return rows


@dataclass(frozen=True)
class CompositionRow:
    identity: str
    newspaper: str
    total: int
    positive_share: float
    negative_share: float
    neutral_share: float


def sentiment_composition(
    profiles: Sequence[IdentitySentimentProfile],
    top_k: int = DEFAULT_COMPOSITION_TOP_K,
) -> list[CompositionRow]:
    """Stacked label proportions for the top_k identities by total mentions."""
    if top_k < 1:
        raise AggregationError("top_k must be >= 1")
    totals: Counter = Counter()
    for profile in profiles:
        totals[profile.identity] += profile.total
    ranked = sorted(totals.items(), key=lambda item: (-item[1], item[0]))
    keep = {identity for identity, _ in ranked[:top_k]}
    order = {identity: i for i, (identity, _) in enumerate(ranked)}

    rows: list[CompositionRow] = []
    for profile in sorted(profiles, key=lambda p: (order[p.identity], p.newspaper)):
        if profile.identity not in keep:
            continue
        pos, neg, neu = profile.proportions
        rows.append(
            CompositionRow(
                identity=profile.identity,
                newspaper=profile.newspaper,
                total=profile.total,
                positive_share=pos,
                negative_share=neg,
                neutral_share=neu,
            )
        )
    return rows
