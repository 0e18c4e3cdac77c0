"""SQuAD2.0-format corpus model: parsing, validation, statistics, serialization.

All offsets are Unicode code-point offsets into the paragraph context (the
convention of Python string indices). Byte or UTF-16 offsets are never used.
Corpus values are treated as immutable after construction and are safe to
share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

LONG_PARAGRAPH_LIMIT = 1000


class CorpusParseError(ValueError):
    """Input bytes are not a well-formed UTF-8 JSON document."""


class CorpusSchemaError(ValueError):
    """The JSON tree is missing or mistypes a required field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class SpanValidationError(ValueError):
    """A corpus with answer-span mismatches was used where a valid one is required."""


@dataclass
class AnswerSpan:
    text: str
    answer_start: int


@dataclass
class QaRecord:
    id: str
    question: str
    is_impossible: bool
    answers: list[AnswerSpan] = field(default_factory=list)


@dataclass
class Paragraph:
    context: str
    qas: list[QaRecord] = field(default_factory=list)


@dataclass
class Article:
    title: str
    paragraphs: list[Paragraph] = field(default_factory=list)


@dataclass
class Corpus:
    version: str
    articles: list[Article] = field(default_factory=list)


@dataclass
class SplitStats:
    """Question and paragraph counts for one corpus split."""

    total_questions: int
    answerable: int
    unanswerable: int
    paragraphs: int
    long_paragraphs: int

    def __post_init__(self):
        if self.answerable + self.unanswerable != self.total_questions:
            raise ValueError(
                "answerable + unanswerable must equal total_questions "
                f"({self.answerable} + {self.unanswerable} != {self.total_questions})"
            )


@dataclass
class ValidationReport:
    """Result of check_spans: one mismatch entry per bad (qa, answer) pair."""

    checked: int
    mismatches: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def iter_qas(corpus: Corpus):
    """Yield (article, paragraph, qa) triples in source order."""
    for article in corpus.articles:
        for paragraph in article.paragraphs:
            for qa in paragraph.qas:
                yield article, paragraph, qa


def parse_corpus(data: bytes | str) -> Corpus:
    """Parse a SQuAD2.0 JSON document into a Corpus.

    Unknown fields (including "plausible_answers") are dropped. Malformed
    JSON raises CorpusParseError with the byte position of the failure;
    a missing required field raises CorpusSchemaError naming its path.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusParseError(f"invalid UTF-8 at byte {exc.start}") from exc
    else:
        text = data
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        byte_pos = len(text[: exc.pos].encode("utf-8"))
        raise CorpusParseError(f"malformed JSON at byte {byte_pos}: {exc.msg}") from exc

    if not isinstance(tree, dict):
        raise CorpusSchemaError("$", "top level must be an object")
    version = tree.get("version", "")
    if not isinstance(version, str):
        raise CorpusSchemaError("version", "must be a string")
    data_field = tree.get("data")
    if not isinstance(data_field, list):
        raise CorpusSchemaError("data", "missing or not a list")

    seen_ids: set[str] = set()
    articles = []
    for ai, raw_article in enumerate(data_field):
        apath = f"data[{ai}]"
        if not isinstance(raw_article, dict):
            raise CorpusSchemaError(apath, "article must be an object")
        title = raw_article.get("title", "")
        raw_paragraphs = raw_article.get("paragraphs")
        if not isinstance(raw_paragraphs, list):
            raise CorpusSchemaError(f"{apath}.paragraphs", "missing or not a list")
        paragraphs = []
        for pi, raw_para in enumerate(raw_paragraphs):
            ppath = f"{apath}.paragraphs[{pi}]"
            if not isinstance(raw_para, dict):
                raise CorpusSchemaError(ppath, "paragraph must be an object")
            context = raw_para.get("context")
            if not isinstance(context, str):
                raise CorpusSchemaError(f"{ppath}.context", "missing or not a string")
            raw_qas = raw_para.get("qas", [])
            if not isinstance(raw_qas, list):
                raise CorpusSchemaError(f"{ppath}.qas", "not a list")
            qas = []
            for qi, raw_qa in enumerate(raw_qas):
                qpath = f"{ppath}.qas[{qi}]"
                qas.append(_parse_qa(raw_qa, qpath, seen_ids))
            paragraphs.append(Paragraph(context=context, qas=qas))
        articles.append(Article(title=title, paragraphs=paragraphs))
    return Corpus(version=version, articles=articles)


def _parse_qa(raw_qa, qpath: str, seen_ids: set[str]) -> QaRecord:
    if not isinstance(raw_qa, dict):
        raise CorpusSchemaError(qpath, "qa must be an object")
    qa_id = raw_qa.get("id")
    if not isinstance(qa_id, str):
        raise CorpusSchemaError(f"{qpath}.id", "missing or not a string")
    if qa_id in seen_ids:
        raise CorpusSchemaError(f"{qpath}.id", f"duplicate qa id {qa_id!r}")
    seen_ids.add(qa_id)
    question = raw_qa.get("question")
    if not isinstance(question, str):
        raise CorpusSchemaError(f"{qpath}.question", "missing or not a string")
    is_impossible = bool(raw_qa.get("is_impossible", False))
    raw_answers = raw_qa.get("answers", [])
    if not isinstance(raw_answers, list):
        raise CorpusSchemaError(f"{qpath}.answers", "not a list")
    answers = []
    for xi, raw_answer in enumerate(raw_answers):
        xpath = f"{qpath}.answers[{xi}]"
        if not isinstance(raw_answer, dict):
            raise CorpusSchemaError(xpath, "answer must be an object")
        atext = raw_answer.get("text")
        if not isinstance(atext, str):
            raise CorpusSchemaError(f"{xpath}.text", "missing or not a string")
        astart = raw_answer.get("answer_start")
        if not isinstance(astart, int) or isinstance(astart, bool):
            raise CorpusSchemaError(f"{xpath}.answer_start", "missing or not an integer")
        answers.append(AnswerSpan(text=atext, answer_start=astart))
    return QaRecord(id=qa_id, question=question, is_impossible=is_impossible, answers=answers)


def check_spans(corpus: Corpus) -> ValidationReport:
    """Verify every answerable answer span against its context.

    A span mismatches when the context substring of the answer's length at
    answer_start differs from the answer text (code-point comparison), or
    when the span falls outside the context.
    """
    checked = 0
    mismatches: list[tuple[str, str, str]] = []
    for _, paragraph, qa in iter_qas(corpus):
        if qa.is_impossible:
            continue
        for answer in qa.answers:
            checked += 1
            start = answer.answer_start
            end = start + len(answer.text)
            if 0 <= start and end <= len(paragraph.context):
                found = paragraph.context[start:end]
            else:
                found = ""
            if found != answer.text:
                mismatches.append((qa.id, answer.text, found))
    return ValidationReport(checked=checked, mismatches=mismatches)


def summarize(corpus: Corpus) -> SplitStats:
    """Count questions and paragraphs; long paragraphs are >= 1000 code points."""
    answerable = unanswerable = paragraphs = long_paragraphs = 0
    for article in corpus.articles:
        for paragraph in article.paragraphs:
            paragraphs += 1
            if len(paragraph.context) >= LONG_PARAGRAPH_LIMIT:
                long_paragraphs += 1
            for qa in paragraph.qas:
                if qa.is_impossible:
                    unanswerable += 1
                else:
                    answerable += 1
    return SplitStats(
        total_questions=answerable + unanswerable,
        answerable=answerable,
        unanswerable=unanswerable,
        paragraphs=paragraphs,
        long_paragraphs=long_paragraphs,
    )


def write_corpus(corpus: Corpus) -> bytes:
    """Serialize a Corpus back to SQuAD2.0 JSON (UTF-8, unescaped text).

    Refuses to serialize a corpus whose answer spans do not validate, so a
    written file always round-trips through parse_corpus.
    """
    report = check_spans(corpus)
    if not report.ok:
        qa_id, expected, found = report.mismatches[0]
        raise SpanValidationError(
            f"{len(report.mismatches)} span mismatch(es); first at qa {qa_id!r}: "
            f"expected {expected!r}, found {found!r}"
        )
    tree = {
        "version": corpus.version,
        "data": [
            {
                "title": article.title,
                "paragraphs": [
                    {
                        "context": paragraph.context,
                        "qas": [
                            {
                                "id": qa.id,
                                "question": qa.question,
                                "is_impossible": qa.is_impossible,
                                "answers": [
                                    {"text": a.text, "answer_start": a.answer_start}
                                    for a in qa.answers
                                ],
                            }
                            for qa in paragraph.qas
                        ],
                    }
                    for paragraph in article.paragraphs
                ],
            }
            for article in corpus.articles
        ],
    }
    return json.dumps(tree, ensure_ascii=False).encode("utf-8")


def stats_to_dict(stats: SplitStats) -> dict:
    return {
        "total_questions": stats.total_questions,
        "answerable": stats.answerable,
        "unanswerable": stats.unanswerable,
        "paragraphs": stats.paragraphs,
        "long_paragraphs": stats.long_paragraphs,
    }
