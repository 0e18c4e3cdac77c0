"""Shared fixtures: corpus factories and random text generators.

The context generator mixes ASCII, Urdu, CJK, astral-plane characters, and
the punctuation the cleaning pass rewrites. Bullet placement follows rules
that keep the anchor recoverable (no two bullets separated only by
removable characters, no bullet touching both sides of a span edge), which
is what real prose looks like and what the zero-discard guarantee assumes.
"""

from __future__ import annotations

import random

from spanchor.corpus import AnswerSpan, Article, Corpus, Paragraph, QaRecord

WORD_ALPHABETS = [
    "abcdefghijklmnopqrstuvwxyz",
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ",
    "0123456789",
    "ابپتٹجچحخد",  # Urdu letters
    "今日は世界",  # CJK
    "\U0001f600\U0001f680\U0001d54f\U0001d49c",  # astral plane
]

PUNCT = [";", "–", "—", '"', "“", "”", ",", ".", "!", "?", "۔"]


def random_word(rng: random.Random, min_len=1, max_len=8) -> str:
    alphabet = rng.choice(WORD_ALPHABETS)
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(min_len, max_len)))


def random_chunk(rng: random.Random, n_words: int, allow_bullets=True) -> str:
    """Space-joined words with occasional punctuation and isolated bullets."""
    parts = []
    for _ in range(n_words):
        word = random_word(rng)
        roll = rng.random()
        if roll < 0.15:
            word += rng.choice(PUNCT)
        elif allow_bullets and roll < 0.20:
            # bullet glued to a keeper character on each side
            word = word + "•" + random_word(rng, 1, 3)
        parts.append(word)
    return " ".join(parts)


def random_answer(rng: random.Random) -> str:
    # at least one keeper character, no bullet at either edge
    core = random_chunk(rng, rng.randint(1, 4), allow_bullets=True)
    while not core or core[0] == "•" or core[-1] == "•":
        core = random_chunk(rng, rng.randint(1, 4), allow_bullets=False)
    return core


def random_sentences(rng: random.Random, min_len: int) -> str:
    """Terminator-delimited sentences totalling at least min_len code points."""
    parts = []
    total = 0
    while total < min_len:
        sentence = random_chunk(rng, rng.randint(4, 10)).rstrip(".!?") + rng.choice(".!?")
        parts.append(sentence)
        total += len(sentence) + 1
    return " ".join(parts)


def random_case(rng: random.Random, tricky=False, long_context=False):
    """One (context, answer_text, answer_start) triple.

    tricky adds a bullet directly against the span boundary (outside it);
    long_context pushes the context well past a 300-code-point limit.
    """
    if long_context:
        prefix = random_sentences(rng, 400)
        suffix = random_sentences(rng, 400)
    else:
        prefix = random_chunk(rng, rng.randint(1, 18))
        suffix = random_chunk(rng, rng.randint(1, 18))
    answer = random_answer(rng)
    left_pad = right_pad = " "
    if tricky:
        which = rng.random()
        if which < 0.4:
            prefix += " " + random_word(rng) + "•"
            left_pad = ""
        elif which < 0.8:
            suffix = "•" + random_word(rng) + " " + suffix
            right_pad = ""
        else:
            prefix += " " + random_word(rng) + "•"
            suffix = "•" + random_word(rng) + " " + suffix
            left_pad = right_pad = ""
    context = prefix + left_pad + answer + right_pad + suffix
    answer_start = len(prefix) + len(left_pad)
    assert context[answer_start : answer_start + len(answer)] == answer
    return context, answer, answer_start


def make_corpus(entries, version="v2.0", title="fixture") -> Corpus:
    """entries: list of (context, [(qa_id, question, answer|None, start)])."""
    paragraphs = []
    for context, qas in entries:
        records = []
        for qa_id, question, answer, start in qas:
            if answer is None:
                records.append(
                    QaRecord(id=qa_id, question=question, is_impossible=True, answers=[])
                )
            else:
                records.append(
                    QaRecord(
                        id=qa_id,
                        question=question,
                        is_impossible=False,
                        answers=[AnswerSpan(text=answer, answer_start=start)],
                    )
                )
        paragraphs.append(Paragraph(context=context, qas=records))
    return Corpus(version=version, articles=[Article(title=title, paragraphs=paragraphs)])


def single_qa_corpus(context, answer, start, qa_id="q0", question="What?") -> Corpus:
    return make_corpus([(context, [(qa_id, question, answer, start)])])


def random_corpus(rng: random.Random, n_answerable: int, tricky_ratio=0.0, long_ratio=0.0):
    """A corpus of answerable questions over generated contexts."""
    entries = []
    for i in range(n_answerable):
        tricky = rng.random() < tricky_ratio
        long_context = rng.random() < long_ratio
        context, answer, start = random_case(rng, tricky=tricky, long_context=long_context)
        entries.append(
            (context, [(f"q{i}", f"Question {i} " + random_word(rng) + "?", answer, start)])
        )
    return make_corpus(entries)


FIGURE_CONTEXT = (
    "The further decline of Byzantine state-of-affairs paved the road to a "
    "third attack in 1185, when a large Norman army invaded Dyrrachium, "
    "owing to the betrayal of high Byzantine officials. Some time later, "
    "Dyrrachium—one of the most important naval bases of the "
    "Adriatic—fell again to Byzantine hands."
)
FIGURE_ANSWER = "1185"
FIGURE_QUESTION = "When did the Normans attack Dyrrachium?"
FIGURE_UNANSWERABLE = "Who betrayed the Normans?"
