"""Sample sizing, reproducible sampling, preference tallies, and
Krippendorff's alpha for nominal ratings.

Sample sizes use the standard large-population formula n0 = z^2 p(1-p)/e^2
followed by the finite-population correction n0 / (1 + (n0-1)/N), rounded
up and capped at the population. The normal quantile comes from the
standard library's NormalDist (accurate far beyond the 1e-8 needed here).
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from statistics import NormalDist

from ._util import percentage

CHOICES = ("SYSTEM_A", "SYSTEM_B", "SAME")


class DuplicateVoteError(ValueError):
    """Two votes share the same (item, annotator) pair."""


@dataclass
class SampleSpec:
    population: int
    confidence: float
    margin: float
    proportion: float = 0.5

    def __post_init__(self):
        if self.population < 1:
            raise ValueError("population must be >= 1")
        if not 0 < self.confidence < 1:
            raise ValueError("confidence must be in (0, 1)")
        if not 0 < self.margin < 1:
            raise ValueError("margin must be in (0, 1)")
        if not 0 < self.proportion < 1:
            raise ValueError("proportion must be in (0, 1)")


@dataclass
class Vote:
    item_id: str
    annotator_id: str
    choice: str


@dataclass
class RatingMatrix:
    """Sparse items x raters grid of nominal labels."""

    values: dict[str, dict[str, str]] = field(default_factory=dict)

    @classmethod
    def from_votes(cls, votes: list[Vote]) -> "RatingMatrix":
        grid: dict[str, dict[str, str]] = {}
        for vote in votes:
            grid.setdefault(vote.item_id, {})[vote.annotator_id] = vote.choice
        return cls(values=grid)


@dataclass
class AgreementReport:
    alpha: float
    observed_disagreement: float
    expected_disagreement: float
    n_pairable: int
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "observed_disagreement": self.observed_disagreement,
            "expected_disagreement": self.expected_disagreement,
            "n_pairable": self.n_pairable,
            "degenerate": self.degenerate,
        }


def normal_quantile(p: float) -> float:
    return NormalDist().inv_cdf(p)


def required_sample_size(spec: SampleSpec) -> int:
    """Minimum sample size for the spec, finite-population corrected."""
    z = normal_quantile(0.5 + spec.confidence / 2)
    p = spec.proportion
    n0 = z * z * p * (1 - p) / (spec.margin * spec.margin)
    n = n0 / (1 + (n0 - 1) / spec.population)
    return min(math.ceil(n), spec.population)


def draw_sample(item_ids: list[str], n: int, seed: int) -> list[str]:
    """Uniform sample without replacement, fully determined by the seed."""
    if n > len(item_ids):
        raise ValueError(f"cannot draw {n} from a population of {len(item_ids)}")
    import random

    return random.Random(seed).sample(list(item_ids), n)


def preference_summary(votes: list[Vote]) -> dict[str, float]:
    """Percentage of votes per choice, round-half-up to 2 decimals."""
    if not votes:
        raise ValueError("votes must be non-empty")
    seen: set[tuple[str, str]] = set()
    counts: Counter[str] = Counter()
    for vote in votes:
        key = (vote.item_id, vote.annotator_id)
        if key in seen:
            raise DuplicateVoteError(
                f"duplicate vote for item {vote.item_id!r} by annotator "
                f"{vote.annotator_id!r}"
            )
        seen.add(key)
        counts[vote.choice] += 1
    total = len(votes)
    summary = {choice: percentage(counts.get(choice, 0), total) for choice in CHOICES}
    for choice in counts:
        if choice not in summary:
            summary[choice] = percentage(counts[choice], total)
    return summary


def krippendorff_nominal(ratings: RatingMatrix) -> AgreementReport:
    """Krippendorff's alpha for nominal data via the coincidence matrix.

    Items with fewer than two ratings are excluded. Each ordered pair of
    ratings within an item of m ratings contributes weight 1/(m-1) to the
    coincidence counts; alpha = 1 - Do/De. When every pairable rating falls
    in one category, De = 0 and alpha is defined as 1.0 with the degenerate
    flag set.
    """
    units = [list(r.values()) for r in ratings.values.values() if len(r) >= 2]
    n_pairable = sum(len(u) for u in units)
    if n_pairable == 0:
        raise ValueError("no items with two or more ratings; alpha is undefined")

    coincidence: Counter[tuple[str, str]] = Counter()
    for unit in units:
        m = len(unit)
        w = 1.0 / (m - 1)
        for i, a in enumerate(unit):
            for j, b in enumerate(unit):
                if i != j:
                    coincidence[(a, b)] += w

    totals = Counter(value for unit in units for value in unit)

    observed = sum(w for (a, b), w in coincidence.items() if a != b) / n_pairable
    expected = sum(
        totals[a] * totals[b]
        for a in totals
        for b in totals
        if a != b
    ) / (n_pairable * (n_pairable - 1))

    if expected == 0.0:
        return AgreementReport(
            alpha=1.0,
            observed_disagreement=observed,
            expected_disagreement=0.0,
            n_pairable=n_pairable,
            degenerate=True,
        )
    return AgreementReport(
        alpha=1.0 - observed / expected,
        observed_disagreement=observed,
        expected_disagreement=expected,
        n_pairable=n_pairable,
    )


def read_votes_jsonl(path) -> list[Vote]:
    """Read a votes file: one JSON object {item_id, annotator_id, choice} per line."""
    votes = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                votes.append(
                    Vote(
                        item_id=str(raw["item_id"]),
                        annotator_id=str(raw["annotator_id"]),
                        choice=str(raw["choice"]),
                    )
                )
            except (json.JSONDecodeError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: bad vote record ({exc})") from exc
    return votes
