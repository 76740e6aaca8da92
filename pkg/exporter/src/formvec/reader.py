"""Minimal CoNLL-U reading for embedding export.

Only the FORM column and the misc-column spacing matter here: sentences
are rebuilt as plain text so the model sees natural input, and each
token's character span in that text drives subword alignment.  Multiword
ranges and empty nodes carry no syntactic form of their own and are
skipped.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

_RANGE_OR_EMPTY = re.compile(r"^\d+[-.]\d+$")


@dataclass(frozen=True, slots=True)
class TokenSpan:
    form: str
    start: int
    end: int


@dataclass(slots=True)
class SentenceText:
    text: str
    spans: list[TokenSpan]


def read_sentences(path: str | Path) -> list[SentenceText]:
    sentences: list[SentenceText] = []
    current: list[tuple[str, bool]] = []  # (form, space_after)

    def flush():
        nonlocal current
        if current:
            sentences.append(_assemble(current))
            current = []

    for line in Path(path).read_text(encoding="utf-8").split("\n"):
        if line == "":
            flush()
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ValueError(f"not a 10-column CoNLL-U line: {line!r}")
        if _RANGE_OR_EMPTY.match(cols[0]):
            continue
        space_after = "SpaceAfter=No" not in cols[9]
        current.append((cols[1], space_after))
    flush()
    return sentences


def _assemble(tokens: list[tuple[str, bool]]) -> SentenceText:
    parts: list[str] = []
    spans: list[TokenSpan] = []
    pos = 0
    for i, (form, space_after) in enumerate(tokens):
        spans.append(TokenSpan(form, pos, pos + len(form)))
        parts.append(form)
        pos += len(form)
        if space_after and i < len(tokens) - 1:
            parts.append(" ")
            pos += 1
    return SentenceText(text="".join(parts), spans=spans)
