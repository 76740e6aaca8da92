"""Annotation-difference detection between two pair indexes.

A mismatch is a relation that occurs with a head-dependent word pair in
the augment corpus but never with that pair in the base corpus.  Pairs
entirely absent from the base are included (base_relations is empty);
whether a converter can act on them is the converter's concern.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .pairs import PairIndex, PairKey, relations_of


class PolicyMismatch(ValueError):
    """Both indexes must be built with the same normalization policy."""


@dataclass(frozen=True, slots=True)
class Mismatch:
    key: PairKey
    augment_relation: str
    augment_count: int
    base_relations: frozenset[str]


@dataclass(slots=True)
class MismatchSet:
    items: list[Mismatch]
    base_source: str = ""
    augment_source: str = ""

    def __len__(self) -> int:
        return len(self.items)


@dataclass(slots=True)
class MismatchSummary:
    pairs: int
    items: int
    arcs: int
    relation_histogram: dict[str, int]


def detect(base: PairIndex, augment: PairIndex) -> MismatchSet:
    """All (pair, relation) occurrences of the augment index unattested in base."""
    if base.policy != augment.policy:
        raise PolicyMismatch(
            f"base policy {base.policy} differs from augment policy {augment.policy}"
        )
    items = []
    for key, counts in augment.entries.items():
        base_rels = frozenset(relations_of(base, key))
        for relation, count in counts.items():
            if relation not in base_rels:
                items.append(Mismatch(key, relation, count, base_rels))
    items.sort(key=lambda m: (m.key.head_form, m.key.dep_form, m.augment_relation))
    return MismatchSet(items=items, base_source=base.source, augment_source=augment.source)


def summarize(ms: MismatchSet) -> MismatchSummary:
    pairs = {m.key for m in ms.items}
    histogram: dict[str, int] = {}
    arcs = 0
    for m in ms.items:
        arcs += m.augment_count
        histogram[m.augment_relation] = histogram.get(m.augment_relation, 0) + m.augment_count
    return MismatchSummary(
        pairs=len(pairs),
        items=len(ms.items),
        arcs=arcs,
        relation_histogram=dict(sorted(histogram.items())),
    )


def write_tsv(ms: MismatchSet, path: str | Path) -> None:
    """Sorted TSV: head_form, dep_form, augment_relation, count, base relations."""
    with open(path, "w", encoding="utf-8") as f:
        for m in ms.items:
            base_rels = "|".join(sorted(m.base_relations))
            f.write(
                f"{m.key.head_form}\t{m.key.dep_form}\t{m.augment_relation}"
                f"\t{m.augment_count}\t{base_rels}\n"
            )


def to_json_dict(ms: MismatchSet) -> dict:
    summary = summarize(ms)
    return {
        "base_source": ms.base_source,
        "augment_source": ms.augment_source,
        "summary": {
            "pairs": summary.pairs,
            "items": summary.items,
            "arcs": summary.arcs,
            "relation_histogram": summary.relation_histogram,
        },
        "items": [
            {
                "head_form": m.key.head_form,
                "dep_form": m.key.dep_form,
                "augment_relation": m.augment_relation,
                "augment_count": m.augment_count,
                "base_relations": sorted(m.base_relations),
            }
            for m in ms.items
        ],
    }


def write_json(ms: MismatchSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_json_dict(ms), f, indent=2, sort_keys=False)
        f.write("\n")
