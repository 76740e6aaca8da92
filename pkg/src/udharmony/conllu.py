"""Lossless CoNLL-U parsing and serialization.

The object model keeps the ten columns of every syntactic-word line and
preserves everything else (comments, multiword-token ranges, empty nodes)
verbatim, so that ``serialize(parse(text)) == text`` for well-formed input.
Only head/deprel are interpreted; the remaining columns are opaque strings.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

_RANGE_ID = re.compile(r"^\d+-\d+$")
_EMPTY_ID = re.compile(r"^\d+\.\d+$")


class MalformedLine(ValueError):
    """Raised for lines violating the 10-column / integer-field contract."""

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class CyclicTree(ValueError):
    """Raised in strict mode when a sentence's head pointers contain a cycle."""

    def __init__(self, sentence_index: int, message: str = ""):
        self.sentence_index = sentence_index
        super().__init__(message or f"sentence {sentence_index}: head pointers form a cycle")


class ExtraKind(Enum):
    MULTIWORD_RANGE = "multiword_range"
    EMPTY_NODE = "empty_node"
    COMMENT = "comment"


@dataclass(frozen=True, slots=True)
class Token:
    """One syntactic-word line; id and head are integers, the rest verbatim."""

    id: int
    form: str
    lemma: str
    upos: str
    xpos: str
    feats: str
    head: int
    deprel: str
    deps: str
    misc: str

    def to_line(self) -> str:
        return "\t".join(
            (
                str(self.id),
                self.form,
                self.lemma,
                self.upos,
                self.xpos,
                self.feats,
                str(self.head),
                self.deprel,
                self.deps,
                self.misc,
            )
        )


@dataclass(frozen=True, slots=True)
class NonSyntacticLine:
    """A comment, multiword range, or empty node, kept byte-for-byte.

    ``anchor`` is the number of syntactic tokens seen before the line, so
    serialization can re-emit it in its original position.
    """

    kind: ExtraKind
    raw: str
    anchor: int


@dataclass(slots=True)
class Sentence:
    tokens: list[Token] = field(default_factory=list)
    extras: list[NonSyntacticLine] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(slots=True)
class Corpus:
    sentences: list[Sentence] = field(default_factory=list)
    source_path: str = ""

    def __len__(self) -> int:
        return len(self.sentences)

    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)


def parse(data: str | bytes, strict: bool = True, source: str = "") -> Corpus:
    """Parse CoNLL-U text into a :class:`Corpus`.

    Blank lines delimit sentences; comment lines and non-syntactic token
    lines (``3-4``, ``5.1`` ids) are preserved verbatim.  In strict mode a
    sentence must be a single tree rooted at 0; lenient mode downgrades
    tree violations to warnings (automatically converted treebanks are not
    always well-formed).

    Raises :class:`MalformedLine` with a 1-based line number on format
    errors and :class:`CyclicTree` on head cycles in strict mode.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data

    corpus = Corpus(source_path=source)
    sentence = Sentence()
    token_lines: list[int] = []

    def flush() -> None:
        nonlocal sentence, token_lines
        if not sentence.tokens and not sentence.extras:
            return
        _check_sentence(sentence, token_lines, len(corpus.sentences), strict, source)
        corpus.sentences.append(sentence)
        sentence = Sentence()
        token_lines = []

    for line_no, line in enumerate(text.split("\n"), start=1):
        if line == "":
            flush()
            continue
        if line.startswith("#"):
            sentence.extras.append(NonSyntacticLine(ExtraKind.COMMENT, line, len(sentence.tokens)))
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise MalformedLine(line_no, f"expected 10 tab-separated columns, got {len(cols)}")
        if any(c == "" for c in cols):
            raise MalformedLine(line_no, "empty column (use '_' for empty fields)")
        tok_id = cols[0]
        if _RANGE_ID.match(tok_id):
            sentence.extras.append(
                NonSyntacticLine(ExtraKind.MULTIWORD_RANGE, line, len(sentence.tokens))
            )
            continue
        if _EMPTY_ID.match(tok_id):
            sentence.extras.append(
                NonSyntacticLine(ExtraKind.EMPTY_NODE, line, len(sentence.tokens))
            )
            continue
        try:
            idx = int(tok_id)
        except ValueError:
            raise MalformedLine(line_no, f"non-integer token id {tok_id!r}") from None
        try:
            head = int(cols[6])
        except ValueError:
            raise MalformedLine(line_no, f"non-integer head {cols[6]!r}") from None
        if idx < 1:
            raise MalformedLine(line_no, f"token id must be >= 1, got {idx}")
        if head < 0:
            raise MalformedLine(line_no, f"head must be >= 0, got {head}")
        if idx != len(sentence.tokens) + 1:
            raise MalformedLine(
                line_no, f"token id {idx} out of sequence (expected {len(sentence.tokens) + 1})"
            )
        sentence.tokens.append(
            Token(idx, cols[1], cols[2], cols[3], cols[4], cols[5], head, cols[7], cols[8], cols[9])
        )
        token_lines.append(line_no)

    flush()
    return corpus


def _check_sentence(
    sentence: Sentence,
    token_lines: list[int],
    sent_index: int,
    strict: bool,
    source: str,
) -> None:
    n = len(sentence.tokens)

    def complain(message: str) -> None:
        where = f"{source or '<input>'}, sentence {sent_index}"
        if strict:
            raise MalformedLine(token_lines[0] if token_lines else 0, f"{where}: {message}")
        warnings.warn(f"{where}: {message}", stacklevel=4)

    if n == 0:
        complain("sentence contains no syntactic tokens")
        return

    roots = [t.id for t in sentence.tokens if t.head == 0]
    if len(roots) != 1:
        complain(f"expected exactly one root token, found {len(roots)}")
    for t, line_no in zip(sentence.tokens, token_lines):
        if t.head == t.id:
            complain(f"token {t.id} is its own head (line {line_no})")
        if t.head > n:
            complain(f"token {t.id} head {t.head} exceeds sentence length {n} (line {line_no})")

    # Every token must reach the virtual root; a revisit means a cycle.
    for t in sentence.tokens:
        seen = set()
        cur = t.id
        while cur != 0:
            if cur in seen:
                if strict:
                    raise CyclicTree(sent_index)
                warnings.warn(
                    f"{source or '<input>'}: sentence {sent_index} contains a head cycle",
                    stacklevel=4,
                )
                return
            seen.add(cur)
            if not (1 <= cur <= n):
                break
            cur = sentence.tokens[cur - 1].head


def parse_file(path: str | Path, strict: bool = True) -> Corpus:
    raw = Path(path).read_bytes()
    return parse(raw, strict=strict, source=str(path))


def serialize(corpus: Corpus) -> str:
    """Render a corpus back to CoNLL-U text (trailing newline included)."""
    out: list[str] = []
    for sentence in corpus.sentences:
        by_anchor: dict[int, list[str]] = {}
        for extra in sentence.extras:
            by_anchor.setdefault(extra.anchor, []).append(extra.raw)
        out.extend(by_anchor.get(0, ()))
        for token in sentence.tokens:
            out.append(token.to_line())
            out.extend(by_anchor.get(token.id, ()))
        out.append("")
    return "\n".join(out) + "\n" if out else ""


def serialize_bytes(corpus: Corpus) -> bytes:
    return serialize(corpus).encode("utf-8")


def write_file(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_bytes(serialize_bytes(corpus))


def with_deprel(sentence: Sentence, token_index: int, deprel: str) -> Sentence:
    """Copy of ``sentence`` with one token's deprel replaced (0-based index)."""
    tokens = list(sentence.tokens)
    tokens[token_index] = replace(tokens[token_index], deprel=deprel)
    return Sentence(tokens=tokens, extras=sentence.extras)
