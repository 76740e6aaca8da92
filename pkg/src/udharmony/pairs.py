"""Head-dependent word-pair indexing.

For every arc (head word, dependent word, relation) in a corpus the index
records how often the relation occurs with that word pair.  Root arcs
(head 0) are excluded: there is no head form to pair with.  Matching is on
the FORM column, case-sensitive unless the normalization policy lowers it.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from .conllu import Corpus


@dataclass(frozen=True, slots=True)
class NormalizationPolicy:
    lowercase: bool = False

    def normalize(self, form: str) -> str:
        return form.lower() if self.lowercase else form


class PairKey(NamedTuple):
    head_form: str
    dep_form: str


@dataclass(slots=True)
class PairIndex:
    """Map from (head form, dependent form) to relation occurrence counts."""

    entries: dict[PairKey, Counter[str]]
    policy: NormalizationPolicy
    source: str = ""

    def total_arcs(self) -> int:
        return sum(sum(c.values()) for c in self.entries.values())


def build_index(corpus: Corpus, policy: NormalizationPolicy = NormalizationPolicy()) -> PairIndex:
    """Count (head form, dependent form) -> relation occurrences over all arcs.

    Every token with head > 0 contributes one count; root-attached tokens
    contribute nothing.
    """
    entries: dict[PairKey, Counter[str]] = {}
    for sentence in corpus.sentences:
        tokens = sentence.tokens
        n = len(tokens)
        for token in tokens:
            if not 0 < token.head <= n:
                continue
            key = PairKey(
                policy.normalize(tokens[token.head - 1].form),
                policy.normalize(token.form),
            )
            counts = entries.get(key)
            if counts is None:
                counts = entries[key] = Counter()
            counts[token.deprel] += 1
    return PairIndex(entries=entries, policy=policy, source=corpus.source_path)


def most_frequent_relation(index: PairIndex, key: PairKey) -> tuple[str, int] | None:
    """The relation with the highest count for ``key``.

    Ties break to the lexicographically smallest label; an absent key
    yields None.
    """
    counts = index.entries.get(key)
    if not counts:
        return None
    label = min(counts, key=lambda rel: (-counts[rel], rel))
    return label, counts[label]


def relations_of(index: PairIndex, key: PairKey) -> set[str]:
    counts = index.entries.get(key)
    return set(counts) if counts else set()


def dump_index(index: PairIndex, path: str | Path) -> None:
    """Write the index as sorted TSV: head_form, dep_form, relation, count."""
    rows = []
    for key, counts in index.entries.items():
        for relation, count in counts.items():
            rows.append((key.head_form, key.dep_form, relation, count))
    rows.sort()
    with open(path, "w", encoding="utf-8") as f:
        for head_form, dep_form, relation, count in rows:
            f.write(f"{head_form}\t{dep_form}\t{relation}\t{count}\n")


def load_index(path: str | Path, policy: NormalizationPolicy = NormalizationPolicy()) -> PairIndex:
    entries: dict[PairKey, Counter[str]] = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            head_form, dep_form, relation, count = line.split("\t")
            key = PairKey(head_form, dep_form)
            counts = entries.setdefault(key, Counter())
            counts[relation] += int(count)
    return PairIndex(entries=entries, policy=policy, source=str(path))
