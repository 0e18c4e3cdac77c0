"""Exact Match and token-level F1 for extractive QA predictions.

The normalization pipeline (lowercase, punctuation strip, article removal,
whitespace collapse, in that order) follows the normalization the standard
extractive-QA evaluation applies; an Urdu profile swaps in Urdu punctuation
and drops article removal, since Urdu has no articles. Tokenization is
whitespace-only.
"""

from __future__ import annotations

import logging
import re
import string
from dataclasses import dataclass, field

from ._util import round_half_up
from .corpus import Corpus, iter_qas

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class NormalizationProfile:
    lowercase: bool = True
    strip_punctuation: frozenset[str] = frozenset(string.punctuation)
    strip_articles: tuple[str, ...] = ()
    collapse_whitespace: bool = True


ENGLISH_PROFILE = NormalizationProfile(strip_articles=("a", "an", "the"))

# Urdu has no articles; lowercase only affects embedded Latin fragments.
URDU_PROFILE = NormalizationProfile(
    strip_punctuation=frozenset(string.punctuation) | {"۔", "؛", "؟"},
    strip_articles=(),
)

PROFILES = {"english": ENGLISH_PROFILE, "urdu": URDU_PROFILE}


@dataclass
class EvalReport:
    em: float
    f1: float
    n_evaluated: int
    per_question: dict[str, tuple[float, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"exact_match": self.em, "f1": self.f1, "n": self.n_evaluated}


def normalize_answer(text: str, profile: NormalizationProfile = ENGLISH_PROFILE) -> str:
    if profile.lowercase:
        text = text.lower()
    if profile.strip_punctuation:
        text = "".join(ch for ch in text if ch not in profile.strip_punctuation)
    if profile.strip_articles:
        pattern = r"\b(?:" + "|".join(re.escape(a) for a in profile.strip_articles) + r")\b"
        text = re.sub(pattern, " ", text)
    if profile.collapse_whitespace:
        text = " ".join(text.split())
    return text


def _tokens(text: str, profile: NormalizationProfile) -> list[str]:
    return normalize_answer(text, profile).split()


def exact_match(
    prediction: str,
    golds: list[str],
    profile: NormalizationProfile = ENGLISH_PROFILE,
) -> int:
    """1 iff the normalized prediction equals any normalized gold.

    With no golds (unanswerable), the prediction must normalize to empty.
    """
    pred = normalize_answer(prediction, profile)
    if not golds:
        return int(pred == "")
    return int(any(pred == normalize_answer(g, profile) for g in golds))


def token_f1(
    prediction: str,
    golds: list[str],
    profile: NormalizationProfile = ENGLISH_PROFILE,
) -> float:
    """Max over golds of token-level F1; empty golds behave like one empty gold."""
    pred_tokens = _tokens(prediction, profile)
    gold_lists = [_tokens(g, profile) for g in golds] if golds else [[]]
    return max(_f1(pred_tokens, g) for g in gold_lists)


def _f1(pred_tokens: list[str], gold_tokens: list[str]) -> float:
    if not pred_tokens or not gold_tokens:
        return float(pred_tokens == gold_tokens)
    from collections import Counter

    common = Counter(pred_tokens) & Counter(gold_tokens)
    overlap = sum(common.values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def evaluate_predictions(
    predictions: dict[str, str],
    corpus: Corpus,
    profile: NormalizationProfile = ENGLISH_PROFILE,
) -> EvalReport:
    """Score a {qa_id: answer_text} prediction map against a corpus.

    Questions without a prediction score 0 (and are warned about); predictions
    for unknown question ids are warned about and ignored.
    """
    per_question: dict[str, tuple[float, float]] = {}
    em_sum = 0.0
    f1_sum = 0.0
    for _, _, qa in iter_qas(corpus):
        golds = [] if qa.is_impossible else [a.text for a in qa.answers]
        if qa.id not in predictions:
            log.warning("no prediction for qa %s; scoring 0", qa.id)
            per_question[qa.id] = (0.0, 0.0)
            continue
        pred = predictions[qa.id]
        em = float(exact_match(pred, golds, profile))
        f1 = token_f1(pred, golds, profile)
        per_question[qa.id] = (em, f1)
        em_sum += em
        f1_sum += f1
    unknown = set(predictions) - set(per_question)
    for qa_id in sorted(unknown):
        log.warning("prediction for unknown qa %s ignored", qa_id)
    n = len(per_question)
    if n == 0:
        return EvalReport(em=0.0, f1=0.0, n_evaluated=0)
    return EvalReport(
        em=round_half_up(100.0 * em_sum / n),
        f1=round_half_up(100.0 * f1_sum / n),
        n_evaluated=n,
        per_question=per_question,
    )
