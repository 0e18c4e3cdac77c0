"""Anchor-based span preservation for translation.

The answer span is enclosed in bullet markers before any cleaning, the
cleaning pass replaces punctuation that machine translators mishandle, the
markers are then converted to straight double quotes right before
translation, and after translation the quotes are sought to recover the
span and its offset. A final pass restores en/em dashes from the double
hyphens introduced by cleaning.

Order matters: enclosing with bullets happens before cleaning because the
cleaning step removes double quotes and would destroy a quote-based anchor.
"""

from __future__ import annotations

BULLET = "•"
ANCHOR = BULLET * 2
QUOTE = '"'
EN_DASH = "–"
EM_DASH = "—"
ARABIC_SEMICOLON = "؛"

# Forbidden after cleaning: ascii semicolon, en/em dash, straight and curly
# double quotes.
_CLEAN_TABLE = str.maketrans(
    {
        ";": ARABIC_SEMICOLON,
        EN_DASH: "--",
        EM_DASH: "--",
        QUOTE: None,
        "“": None,
        "”": None,
    }
)


class AnchorError(Exception):
    """Raised when an anchored text does not carry exactly two quote marks."""

    def __init__(self, count: int):
        super().__init__(f"expected exactly 2 anchor quotes, found {count}")
        self.count = count


def clean_text(text: str) -> str:
    """Replace translator-hazardous punctuation.

    Semicolons become the Arabic semicolon, en and em dashes become double
    hyphens, and straight/curly double quotes are removed. Bullets are left
    untouched so an enclosed span survives this pass.
    """
    return text.translate(_CLEAN_TABLE)


def enclose_answer(context: str, answer_text: str, answer_start: int) -> str:
    """Insert bullet markers immediately around the answer span."""
    end = answer_start + len(answer_text)
    if not (0 <= answer_start and end <= len(context)):
        raise ValueError(
            f"span [{answer_start}, {end}) out of bounds for context of "
            f"length {len(context)}"
        )
    if context[answer_start:end] != answer_text:
        raise ValueError(
            f"context substring {context[answer_start:end]!r} does not match "
            f"answer text {answer_text!r}"
        )
    return (
        context[:answer_start]
        + ANCHOR
        + context[answer_start:end]
        + ANCHOR
        + context[end:]
    )


def finalize_markers(text: str) -> str:
    """Turn each bullet pair into one straight double quote.

    The text must already be cleaned: a pre-existing double quote means the
    cleaning pass was skipped and the anchor would be ambiguous.
    """
    if QUOTE in text:
        raise ValueError(
            "text contains a double quote; clean_text must run before "
            "finalize_markers"
        )
    return text.replace(ANCHOR, QUOTE)


def seek_answer(translated: str) -> tuple[str, int, str]:
    """Locate the quoted span in a translated text.

    Returns (answer_text, answer_start, stripped_context) where
    answer_start indexes into the stripped context (both quotes removed).
    Raises AnchorError carrying the observed quote count when it is not
    exactly two.
    """
    positions = [i for i, ch in enumerate(translated) if ch == QUOTE]
    if len(positions) != 2:
        raise AnchorError(len(positions))
    p1, p2 = positions
    answer_text = translated[p1 + 1 : p2]
    stripped = translated[:p1] + answer_text + translated[p2 + 1 :]
    return answer_text, p1, stripped


def postprocess_dashes(text: str) -> str:
    """Restore dashes from double hyphens.

    A "--" whose immediate neighbors are both decimal digits becomes an en
    dash; every other "--" becomes an em dash. The scan is left to right and
    consumes non-overlapping pairs.
    """
    out, _ = _dash_scan(text, ())
    return out


def postprocess_dashes_span(text: str, start: int, end: int) -> tuple[str, int, int]:
    """postprocess_dashes variant that re-maps a [start, end) span.

    Positions falling in the middle of a consumed hyphen pair are snapped
    past the emitted dash, so the returned span is always well formed in the
    returned text.
    """
    if not (0 <= start <= end <= len(text)):
        raise ValueError(f"span [{start}, {end}) out of bounds")
    out, mapped = _dash_scan(text, (start, end))
    return out, mapped[start], mapped[end]


def _dash_scan(text: str, marks: tuple[int, ...]) -> tuple[str, dict[int, int]]:
    out: list[str] = []
    mapped: dict[int, int] = {}
    pending = sorted(set(marks))
    mi = 0
    i = 0
    n = len(text)
    while i < n:
        while mi < len(pending) and pending[mi] == i:
            mapped[pending[mi]] = len(out)
            mi += 1
        if text[i] == "-" and i + 1 < n and text[i + 1] == "-":
            left = text[i - 1] if i > 0 else ""
            right = text[i + 2] if i + 2 < n else ""
            digits = bool(left) and bool(right) and left.isdecimal() and right.isdecimal()
            out.append(EN_DASH if digits else EM_DASH)
            # a mark on the second hyphen lands after the emitted dash
            while mi < len(pending) and pending[mi] <= i + 1:
                mapped[pending[mi]] = len(out)
                mi += 1
            i += 2
        else:
            out.append(text[i])
            i += 1
    while mi < len(pending):
        mapped[pending[mi]] = len(out)
        mi += 1
    return "".join(out), mapped
