"""Per-question translation pipeline and corpus-level orchestration.

Each answerable question is processed as one unit: the answer span is
enclosed in bullet markers, the context is cleaned and segmented, the
anchor segment's markers become quotes, everything is translated, the
quotes are sought to recover the span, and dashes are restored. A question
whose anchor does not survive translation is discarded, never repaired.

Unanswerable questions skip enclosure and seeking; sibling unanswerable
questions of one source paragraph share a single unanchored context
translation (translations are memoized per run, so the shared context is
translated once and is identical across siblings).
"""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .anchoring import (
    ANCHOR,
    QUOTE,
    AnchorError,
    clean_text,
    enclose_answer,
    finalize_markers,
    postprocess_dashes,
    postprocess_dashes_span,
    seek_answer,
)
from .backends import Backend, BackendError, MemoryCache, cached
from .corpus import (
    AnswerSpan,
    Article,
    Corpus,
    Paragraph,
    QaRecord,
    SplitStats,
    check_spans,
    stats_to_dict,
    summarize,
)
from .segmenter import DEFAULT_LIMIT, Segment, reassemble, segment_paragraph

REASON_ANCHOR_COUNT = "anchor_count"
REASON_BACKEND_ERROR = "backend_error"


@dataclass
class PipelineItem:
    """One question ready for translation: cleaned, enclosed, segmented."""

    qa_id: str
    question: str
    answer: AnswerSpan | None
    segments: list[Segment]
    is_impossible: bool


@dataclass
class TranslatedQa:
    qa_id: str
    question_t: str
    context_t: str
    answer_t: AnswerSpan | None


@dataclass
class DiscardRecord:
    qa_id: str
    reason: str
    quote_count_found: int | None = None

    def __post_init__(self):
        if self.reason == REASON_ANCHOR_COUNT:
            if self.quote_count_found is None or self.quote_count_found == 2:
                raise ValueError(
                    "anchor_count discards must carry a quote count != 2"
                )
        elif self.reason != REASON_BACKEND_ERROR:
            raise ValueError(f"unknown discard reason {self.reason!r}")

    def to_dict(self) -> dict:
        return {
            "qa_id": self.qa_id,
            "reason": self.reason,
            "quote_count_found": self.quote_count_found,
        }


@dataclass
class PipelineReport:
    attempted: int
    produced: int
    discarded: int
    reasons: dict[str, int] = field(default_factory=dict)
    output_stats: SplitStats | None = None
    multi_answer_qas: int = 0

    def __post_init__(self):
        if self.produced + self.discarded != self.attempted:
            raise ValueError(
                "attempted must equal produced + discarded "
                f"({self.produced} + {self.discarded} != {self.attempted})"
            )

    def to_dict(self) -> dict:
        return {
            "attempted": self.attempted,
            "produced": self.produced,
            "discarded": self.discarded,
            "reasons": dict(self.reasons),
            "output_stats": stats_to_dict(self.output_stats)
            if self.output_stats is not None
            else None,
            "multi_answer_qas": self.multi_answer_qas,
        }


@dataclass
class PipelineConfig:
    limit: int = DEFAULT_LIMIT
    parallelism: int = 8
    max_attempts: int = 3
    backoff_seconds: float = 0.5
    abbreviations: frozenset[str] | None = None
    memoize: bool = True


def build_item(
    qa: QaRecord,
    context: str,
    limit: int = DEFAULT_LIMIT,
    abbreviations=None,
    shared_segments: list[Segment] | None = None,
) -> PipelineItem:
    """Prepare one question: clean, enclose (answerable only), segment.

    Only the first listed gold answer is anchored; extra golds are dropped.
    shared_segments lets unanswerable siblings reuse one segmentation of
    their paragraph.
    """
    question = clean_text(qa.question)
    if qa.is_impossible or not qa.answers:
        if shared_segments is None:
            shared_segments = segment_paragraph(
                clean_text(context), limit, None, abbreviations
            )
        return PipelineItem(
            qa_id=qa.id,
            question=question,
            answer=None,
            segments=shared_segments,
            is_impossible=True,
        )
    span = qa.answers[0]
    enclosed = enclose_answer(context, span.text, span.answer_start)
    cleaned = clean_text(enclosed)
    p0 = cleaned.index(ANCHOR)
    p1 = cleaned.rindex(ANCHOR) + len(ANCHOR)
    segments = segment_paragraph(cleaned, limit, (p0, p1), abbreviations)
    return PipelineItem(
        qa_id=qa.id,
        question=question,
        answer=span,
        segments=segments,
        is_impossible=False,
    )


def project_qa(
    item: PipelineItem,
    backend: Backend,
    max_attempts: int = 3,
    backoff_seconds: float = 0.5,
    sleep: Callable[[float], None] = time.sleep,
) -> TranslatedQa | DiscardRecord:
    """Translate one prepared item and recover the answer span.

    The question, the standalone answer text, and every segment go through
    the backend in one index-aligned batch. The anchor segment must come
    back with exactly two quotes, and the reassembled context must still
    hold exactly two; otherwise the item becomes a DiscardRecord. Backend
    failures are retried with exponential backoff before discarding.
    """
    texts = [item.question]
    anchor_index = None
    if item.answer is not None:
        texts.append(clean_text(item.answer.text))
        for i, seg in enumerate(item.segments):
            if seg.contains_anchor:
                anchor_index = i
        if anchor_index is None:
            raise ValueError(f"item {item.qa_id}: no anchor segment")
    seg_texts = [
        finalize_markers(seg.text) if seg.contains_anchor else seg.text
        for seg in item.segments
    ]
    texts.extend(seg_texts)

    out = None
    for attempt in range(max(1, max_attempts)):
        if attempt:
            sleep(backoff_seconds * 2 ** (attempt - 1))
        try:
            out = backend.translate_batch(texts)
            break
        except BackendError:
            continue
    if out is None:
        return DiscardRecord(item.qa_id, REASON_BACKEND_ERROR)

    question_t = postprocess_dashes(out[0])
    head = 1 if item.answer is None else 2
    seg_out = out[head:]

    if item.answer is None:
        # enforce the no-quotes output contract on unanchored translations
        joined = reassemble(seg_out) if seg_out else ""
        context_t = postprocess_dashes(joined.replace(QUOTE, ""))
        return TranslatedQa(item.qa_id, question_t, context_t, None)

    anchor_out = seg_out[anchor_index]
    count = anchor_out.count(QUOTE)
    if count != 2:
        return DiscardRecord(item.qa_id, REASON_ANCHOR_COUNT, count)
    try:
        answer_text, answer_start, stripped = seek_answer(reassemble(seg_out))
    except AnchorError as exc:
        return DiscardRecord(item.qa_id, REASON_ANCHOR_COUNT, exc.count)
    context_t, new_start, new_end = postprocess_dashes_span(
        stripped, answer_start, answer_start + len(answer_text)
    )
    answer = AnswerSpan(text=context_t[new_start:new_end], answer_start=new_start)
    return TranslatedQa(item.qa_id, question_t, context_t, answer)


def run_pipeline(
    corpus: Corpus,
    backend: Backend,
    config: PipelineConfig | None = None,
) -> tuple[Corpus, PipelineReport, list[DiscardRecord]]:
    """Translate a whole corpus, producing SQuAD2.0-layout output.

    Output grouping: every produced answerable question becomes its own
    paragraph entry (its context is an answer-specific translation), and
    all produced unanswerable questions of one source paragraph share one
    paragraph entry with the unanchored translation, emitted after that
    paragraph's answerable entries. Everything else follows source order;
    articles left without paragraphs are dropped.
    """
    config = config or PipelineConfig()
    report = check_spans(corpus)
    if not report.ok:
        raise ValueError(
            f"input corpus has {len(report.mismatches)} answer-span mismatch(es); "
            "refusing to translate"
        )
    if config.memoize:
        backend = cached(backend, MemoryCache())

    items: list[PipelineItem] = []
    slots: list[tuple[int, int]] = []  # (article index, paragraph index) per item
    multi_answer = 0
    for ai, article in enumerate(corpus.articles):
        for pi, paragraph in enumerate(article.paragraphs):
            shared: list[Segment] | None = None
            for qa in paragraph.qas:
                if not qa.is_impossible and len(qa.answers) > 1:
                    multi_answer += 1
                item = build_item(
                    qa,
                    paragraph.context,
                    config.limit,
                    config.abbreviations,
                    shared_segments=shared,
                )
                if item.is_impossible:
                    shared = item.segments
                items.append(item)
                slots.append((ai, pi))

    def work(item: PipelineItem):
        return project_qa(
            item,
            backend,
            max_attempts=config.max_attempts,
            backoff_seconds=config.backoff_seconds,
        )

    if config.parallelism > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            outcomes = list(pool.map(work, items))
    else:
        outcomes = [work(item) for item in items]

    discards: list[DiscardRecord] = []
    produced_by_slot: dict[tuple[int, int], list[TranslatedQa]] = {}
    impossible_ids: set[str] = {item.qa_id for item in items if item.is_impossible}
    for slot, outcome in zip(slots, outcomes):
        if isinstance(outcome, DiscardRecord):
            discards.append(outcome)
        else:
            produced_by_slot.setdefault(slot, []).append(outcome)

    articles_out: list[Article] = []
    produced = 0
    for ai, article in enumerate(corpus.articles):
        paragraphs_out: list[Paragraph] = []
        for pi in range(len(article.paragraphs)):
            group = produced_by_slot.get((ai, pi), [])
            impossible_group: list[TranslatedQa] = []
            for tqa in group:
                if tqa.qa_id in impossible_ids:
                    impossible_group.append(tqa)
                else:
                    paragraphs_out.append(
                        Paragraph(
                            context=tqa.context_t,
                            qas=[
                                QaRecord(
                                    id=tqa.qa_id,
                                    question=tqa.question_t,
                                    is_impossible=False,
                                    answers=[tqa.answer_t],
                                )
                            ],
                        )
                    )
                    produced += 1
            if impossible_group:
                paragraphs_out.append(
                    Paragraph(
                        context=impossible_group[0].context_t,
                        qas=[
                            QaRecord(
                                id=tqa.qa_id,
                                question=tqa.question_t,
                                is_impossible=True,
                                answers=[],
                            )
                            for tqa in impossible_group
                        ],
                    )
                )
                produced += len(impossible_group)
        if paragraphs_out:
            articles_out.append(Article(title=article.title, paragraphs=paragraphs_out))

    corpus_t = Corpus(version=corpus.version, articles=articles_out)
    reasons = Counter(d.reason for d in discards)
    pipeline_report = PipelineReport(
        attempted=len(items),
        produced=produced,
        discarded=len(discards),
        reasons=dict(reasons),
        output_stats=summarize(corpus_t),
        multi_answer_qas=multi_answer,
    )
    return corpus_t, pipeline_report, discards
