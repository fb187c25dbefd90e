"""Stratified evaluation sampling with per-newspaper balance and an identity cap."""

from __future__ import annotations

import logging
import math
from bisect import insort
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .lexicon import GrammaticalCategory
from .mentions import IdentityMention
from .rng import Xorshift64Star

log = logging.getLogger(__name__)

DEFAULT_TOTAL = 400
DEFAULT_IDENTITY_CAP = 0.15
MAX_RESAMPLE_ROUNDS = 1000

ANNOTATION_COLUMNS = (
    "mention_id",
    "newspaper",
    "identity",
    "category",
    "rendered",
    "gold_sentiment",
    "referential_type",
    "unknown",
)

_CATEGORY_ORDER = (GrammaticalCategory.NOMINAL, GrammaticalCategory.ADJECTIVAL)


class SamplingError(ValueError):
    pass


@dataclass(frozen=True)
class SamplingPlan:
    """Stratified sampling parameters.

    category_split maps each grammatical category to its share of a
    newspaper's quota; identity_cap bounds any single identity's share of a
    newspaper subset. seed drives the portable PRNG, so a fixed plan always
    yields byte-identical samples.
    """

    newspapers: tuple[str, ...]
    total: int = DEFAULT_TOTAL
    category_split: Mapping[GrammaticalCategory, float] = field(
        default_factory=lambda: {
            GrammaticalCategory.NOMINAL: 0.5,
            GrammaticalCategory.ADJECTIVAL: 0.5,
        }
    )
    identity_cap: float = DEFAULT_IDENTITY_CAP
    seed: int = 0

    def __post_init__(self) -> None:
        if self.total < 1:
            raise SamplingError("plan total must be >= 1")
        if not self.newspapers:
            raise SamplingError("plan must name at least one newspaper")
        if not 0 < self.identity_cap <= 1:
            raise SamplingError("identity_cap must be in (0, 1]")
        if abs(sum(self.category_split.values()) - 1.0) > 1e-9:
            raise SamplingError("category split fractions must sum to 1")


def _largest_remainder(total: int, fractions: Sequence[float]) -> list[int]:
    """Integer allocation by largest remainder; ties go to the earlier position."""
    shares = [total * f for f in fractions]
    base = [math.floor(s) for s in shares]
    leftover = total - sum(base)
    order = sorted(range(len(fractions)), key=lambda i: (-(shares[i] - base[i]), i))
    for i in order[:leftover]:
        base[i] += 1
    return base


def allocate_quotas(plan: SamplingPlan) -> dict[tuple[str, GrammaticalCategory], int]:
    """Split plan.total across newspapers, then across categories per newspaper.

    Newspapers share the total by largest remainder (ties resolved by plan
    order); within a newspaper the category split is applied the same way, so
    with the default 50/50 split an odd quota's extra unit lands on Nominal.
    """
    per_paper = _largest_remainder(plan.total, [1 / len(plan.newspapers)] * len(plan.newspapers))
    split = [plan.category_split.get(cat, 0.0) for cat in _CATEGORY_ORDER]
    quotas: dict[tuple[str, GrammaticalCategory], int] = {}
    for paper, paper_quota in zip(plan.newspapers, per_paper):
        per_cat = _largest_remainder(paper_quota, split)
        for cat, q in zip(_CATEGORY_ORDER, per_cat):
            quotas[(paper, cat)] = q
    return quotas


def _allowed_count(cap: float, subset_size: int) -> int:
    # floor(cap * subset); an identity "exceeds" the cap only above this.
    # Never below 1: a subset cannot hold fractional mentions.
    return max(1, math.floor(cap * subset_size + 1e-9))


def stratified_sample(pool: Iterable[IdentityMention], plan: SamplingPlan) -> list[IdentityMention]:
    """Draw the stratified evaluation sample described by the plan.

    Per (newspaper, category) stratum the quota from allocate_quotas is drawn
    without replacement. Then, per newspaper, any identity holding more than
    identity_cap of the subset has its excess removed uniformly at random and
    replaced from the same stratum's remaining pool (only identities still
    under the cap are eligible), iterating until stable. If the pool cannot
    satisfy the cap, the violation is logged and the sample returned as-is.

    The output is sorted by (plan newspaper order, category, mention_id) and
    is byte-stable for a fixed plan across runs and platforms.
    """
    quotas = allocate_quotas(plan)
    strata: dict[tuple[str, GrammaticalCategory], list[IdentityMention]] = {
        key: [] for key in quotas
    }
    seen_ids: set[str] = set()
    for mention in pool:
        if mention.mention_id in seen_ids:
            raise SamplingError(f"duplicate mention_id in pool: {mention.mention_id}")
        seen_ids.add(mention.mention_id)
        key = (mention.newspaper, mention.category)
        if key in strata:
            strata[key].append(mention)

    rng = Xorshift64Star(plan.seed)
    selected: dict[tuple[str, GrammaticalCategory], list[IdentityMention]] = {}
    remaining: dict[tuple[str, GrammaticalCategory], list[IdentityMention]] = {}
    for paper in plan.newspapers:
        for cat in _CATEGORY_ORDER:
            key = (paper, cat)
            quota = quotas[key]
            # Canonical order decouples the draw from pool input order.
            stratum = sorted(strata[key], key=lambda m: m.mention_id)
            if len(stratum) < quota:
                raise SamplingError(
                    f"stratum ({paper}, {cat.value}) holds {len(stratum)} mentions, "
                    f"needs {quota} (short by {quota - len(stratum)})"
                )
            chosen = rng.sample(stratum, quota)
            chosen_ids = {m.mention_id for m in chosen}
            selected[key] = sorted(chosen, key=lambda m: m.mention_id)
            remaining[key] = [m for m in stratum if m.mention_id not in chosen_ids]

    _enforce_identity_cap(plan, selected, remaining, rng)

    out: list[IdentityMention] = []
    for paper in plan.newspapers:
        for cat in _CATEGORY_ORDER:
            out.extend(sorted(selected[(paper, cat)], key=lambda m: m.mention_id))
    return out


def _enforce_identity_cap(
    plan: SamplingPlan,
    selected: dict[tuple[str, GrammaticalCategory], list[IdentityMention]],
    remaining: dict[tuple[str, GrammaticalCategory], list[IdentityMention]],
    rng: Xorshift64Star,
) -> None:
    unresolved: set[tuple[str, str]] = set()
    for _ in range(MAX_RESAMPLE_ROUNDS):
        changed = False
        unresolved = set()
        for paper in plan.newspapers:
            subset = [m for cat in _CATEGORY_ORDER for m in selected[(paper, cat)]]
            allowed = _allowed_count(plan.identity_cap, len(subset))
            counts: dict[str, int] = {}
            for m in subset:
                counts[m.identity] = counts.get(m.identity, 0) + 1
            for identity in sorted(i for i, c in counts.items() if c > allowed):
                victims_pool = sorted(
                    (m for m in subset if m.identity == identity), key=lambda m: m.mention_id
                )
                excess = counts[identity] - allowed
                for victim in rng.sample(victims_pool, excess):
                    key = (paper, victim.category)
                    eligible = [m for m in remaining[key] if counts.get(m.identity, 0) < allowed]
                    if not eligible:
                        unresolved.add((paper, identity))
                        continue
                    replacement = eligible[rng.randbelow(len(eligible))]
                    selected[key].remove(victim)
                    insort(selected[key], replacement, key=lambda m: m.mention_id)
                    remaining[key].remove(replacement)
                    insort(remaining[key], victim, key=lambda m: m.mention_id)
                    counts[identity] -= 1
                    counts[replacement.identity] = counts.get(replacement.identity, 0) + 1
                    changed = True
        if not unresolved and not _any_violation(plan, selected):
            return
        if not changed:
            break
    if unresolved:
        listing = ", ".join(f"{identity} ({paper})" for paper, identity in sorted(unresolved))
        log.warning("identity cap unsatisfiable for: %s", listing)


def _any_violation(plan: SamplingPlan, selected) -> bool:
    for paper in plan.newspapers:
        subset = [m for cat in _CATEGORY_ORDER for m in selected[(paper, cat)]]
        allowed = _allowed_count(plan.identity_cap, len(subset))
        counts: dict[str, int] = {}
        for m in subset:
            counts[m.identity] = counts.get(m.identity, 0) + 1
        if any(c > allowed for c in counts.values()):
            return True
    return False


def _tsv_safe(text: str) -> str:
    return text.replace("\t", " ").replace("\n", " ")


def write_annotation_tsv(rows: Iterable[tuple[IdentityMention, str]], fh) -> None:
    """Write the annotation-ready TSV: sampled mentions with empty label columns."""
    fh.write("\t".join(ANNOTATION_COLUMNS))
    fh.write("\n")
    for mention, rendered in rows:
        fh.write(
            "\t".join(
                (
                    mention.mention_id,
                    mention.newspaper,
                    mention.identity,
                    mention.category.value,
                    _tsv_safe(rendered),
                    "",
                    "",
                    "",
                )
            )
        )
        fh.write("\n")
