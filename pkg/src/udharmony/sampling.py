"""Seeded half-and-half training-set sampling.

Each sample draws total/2 sentences from the base training corpus and
total/2 from the augment training corpus, without replacement, keeping
original relative order within each side (base block first).  The PRNG is
PCG64 seeded with the plan seed; indices are drawn with a partial
Fisher-Yates shuffle (base side first, then augment), so a manifest fully
reproduces the file on any platform.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .conllu import Corpus, serialize_bytes


class InsufficientData(ValueError):
    def __init__(self, side: str, available: int, needed: int):
        self.side = side
        super().__init__(
            f"{side} corpus has {available} sentences, need {needed} for this tier"
        )


@dataclass(slots=True)
class SamplePlan:
    total_sentences: int
    base_train: Corpus
    augment_train: Corpus
    seed: int


@dataclass(slots=True)
class SampleManifest:
    seed: int
    total: int
    base_indices: list[int]
    augment_indices: list[int]
    checksum: str

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "total": self.total,
            "generator": "PCG64 + partial Fisher-Yates (base side drawn first)",
            "base_indices": self.base_indices,
            "augment_indices": self.augment_indices,
            "sha256": self.checksum,
        }


def _draw_indices(rng: np.random.Generator, n: int, k: int) -> list[int]:
    # Partial Fisher-Yates: k swaps against the front of the identity pool.
    pool = list(range(n))
    for i in range(k):
        j = int(rng.integers(i, n))
        pool[i], pool[j] = pool[j], pool[i]
    return sorted(pool[:k])


def sample(plan: SamplePlan) -> tuple[Corpus, SampleManifest]:
    """Draw the half-and-half sample described by ``plan``.

    Raises :class:`InsufficientData` naming the deficient side; odd totals
    are rejected rather than rounded.
    """
    if plan.total_sentences <= 0 or plan.total_sentences % 2 != 0:
        raise ValueError(f"total_sentences must be a positive even integer, got {plan.total_sentences}")
    half = plan.total_sentences // 2
    if len(plan.base_train) < half:
        raise InsufficientData("base", len(plan.base_train), half)
    if len(plan.augment_train) < half:
        raise InsufficientData("augment", len(plan.augment_train), half)

    rng = np.random.Generator(np.random.PCG64(plan.seed))
    base_indices = _draw_indices(rng, len(plan.base_train), half)
    augment_indices = _draw_indices(rng, len(plan.augment_train), half)

    sentences = [plan.base_train.sentences[i] for i in base_indices]
    sentences += [plan.augment_train.sentences[i] for i in augment_indices]
    corpus = Corpus(sentences=sentences)

    checksum = hashlib.sha256(serialize_bytes(corpus)).hexdigest()
    manifest = SampleManifest(
        seed=plan.seed,
        total=plan.total_sentences,
        base_indices=base_indices,
        augment_indices=augment_indices,
        checksum=checksum,
    )
    return corpus, manifest


def write_manifest(manifest: SampleManifest, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest.to_json_dict(), f, indent=2)
        f.write("\n")
