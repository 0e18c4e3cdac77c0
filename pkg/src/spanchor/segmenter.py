"""Sentence splitting and length-limited paragraph segmentation.

Contexts longer than the translation-safe limit are split into segments of
consecutive sentences, each shorter than the limit, because long inputs
risk being summarized or truncated by MT services. A protected character
range (the anchored answer) is never cut: sentences overlapping it are
fused into one unbreakable block.

Sentence boundaries are rule-based: a terminator (. ? ! or U+06D4) followed
by whitespace or end of text ends a sentence, unless a lone period closes
an abbreviation from the lexicon. Dots inside tokens ("3.14") never split.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from typing import Collection, Iterable

TERMINATORS = frozenset({".", "?", "!", "۔"})
DEFAULT_LIMIT = 1000

_default_abbreviations: frozenset[str] | None = None


@dataclass
class SentenceSpan:
    start: int
    end: int


@dataclass
class Segment:
    text: str
    origin: tuple[int, int]
    contains_anchor: bool = False
    oversize: bool = False


def load_abbreviations(path=None) -> frozenset[str]:
    """Load an abbreviation lexicon (one entry per line, '#' comments).

    Entries are stored both with and without the trailing period so either
    listing convention works.
    """
    if path is None:
        source = (
            importlib.resources.files("spanchor")
            .joinpath("data/abbreviations_en.txt")
            .read_text(encoding="utf-8")
        )
        lines: Iterable[str] = source.splitlines()
    else:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    entries = set()
    for line in lines:
        token = line.strip()
        if not token or token.startswith("#"):
            continue
        entries.add(token)
        entries.add(token[:-1] if token.endswith(".") else token + ".")
    return frozenset(entries)


def default_abbreviations() -> frozenset[str]:
    global _default_abbreviations
    if _default_abbreviations is None:
        _default_abbreviations = load_abbreviations()
    return _default_abbreviations


def split_sentences(
    text: str, abbreviations: Collection[str] | None = None
) -> list[SentenceSpan]:
    """Split text into sentence spans (code-point offsets, gaps = whitespace)."""
    if abbreviations is None:
        abbreviations = default_abbreviations()
    spans: list[SentenceSpan] = []
    n = len(text)
    start = _skip_ws(text, 0)
    i = start
    while i < n:
        if text[i] not in TERMINATORS:
            i += 1
            continue
        j = i + 1
        while j < n and text[j] in TERMINATORS:
            j += 1
        followed_ok = j >= n or text[j].isspace()
        if followed_ok and not _is_abbreviation(text, i, j, start, abbreviations):
            spans.append(SentenceSpan(start, j))
            start = _skip_ws(text, j)
            i = start
        else:
            i = j
    if start < n:
        end = n
        while end > start and text[end - 1].isspace():
            end -= 1
        if end > start:
            spans.append(SentenceSpan(start, end))
    return spans


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i].isspace():
        i += 1
    return i


def _is_abbreviation(text, i, j, sentence_start, abbreviations) -> bool:
    # only a lone period can close an abbreviation
    if text[i:j] != ".":
        return False
    k = i
    while k > sentence_start and not text[k - 1].isspace():
        k -= 1
    token = text[k:j]
    return token in abbreviations or token[:-1] in abbreviations


def segment_paragraph(
    context: str,
    limit: int = DEFAULT_LIMIT,
    protected: tuple[int, int] | None = None,
    abbreviations: Collection[str] | None = None,
) -> list[Segment]:
    """Greedily pack sentences into segments shorter than the limit.

    Segment origins partition [0, len(context)): each origin starts where
    the previous one ended, so concatenating context slices over the origins
    reproduces the context exactly. Segment text is the sentence content
    without the surrounding gap whitespace.

    A protected (start, end) range ends up wholly inside one segment;
    sentences it touches are fused first. A single sentence (or fused block)
    that alone reaches the limit is passed through whole and flagged
    oversize rather than cut mid-sentence.
    """
    if protected is not None:
        p0, p1 = protected
        if not (0 <= p0 < p1 <= len(context)):
            raise ValueError(
                f"protected span [{p0}, {p1}) out of bounds for context of "
                f"length {len(context)}"
            )
    sentences = split_sentences(context, abbreviations)
    if not sentences:
        if not context:
            return []
        return [
            Segment(
                text=context.strip(),
                origin=(0, len(context)),
                contains_anchor=protected is not None,
                oversize=len(context.strip()) >= limit,
            )
        ]

    blocks = _fuse_protected(sentences, protected)

    # greedy packing over blocks
    packed: list[tuple[int, int, bool]] = []  # (text_start, text_end, anchored)
    cur_start, cur_end, cur_anchored = blocks[0]
    for b_start, b_end, b_anchored in blocks[1:]:
        if b_end - cur_start < limit:
            cur_end = b_end
            cur_anchored = cur_anchored or b_anchored
        else:
            packed.append((cur_start, cur_end, cur_anchored))
            cur_start, cur_end, cur_anchored = b_start, b_end, b_anchored
    packed.append((cur_start, cur_end, cur_anchored))

    segments = []
    for k, (t_start, t_end, anchored) in enumerate(packed):
        origin_start = 0 if k == 0 else segments[k - 1].origin[1]
        origin_end = packed[k + 1][0] if k + 1 < len(packed) else len(context)
        segments.append(
            Segment(
                text=context[t_start:t_end],
                origin=(origin_start, origin_end),
                contains_anchor=anchored,
                oversize=t_end - t_start >= limit,
            )
        )
    return segments


def _fuse_protected(sentences, protected):
    blocks: list[tuple[int, int, bool]] = []
    if protected is None:
        return [(s.start, s.end, False) for s in sentences]
    p0, p1 = protected
    for s in sentences:
        overlaps = s.start < p1 and s.end > p0
        if overlaps and blocks and blocks[-1][2]:
            prev = blocks[-1]
            blocks[-1] = (prev[0], s.end, True)
        else:
            blocks.append((s.start, s.end, overlaps))
    return blocks


def reassemble(texts: list[str], sep: str = " ") -> str:
    """Join translated segment texts; the default policy is a single space."""
    if not texts:
        raise ValueError("cannot reassemble an empty segment list")
    return sep.join(texts)
