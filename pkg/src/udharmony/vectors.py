"""Word-vector tables with deterministic top-k cosine neighbor queries.

One loader serves GloVe-style dumps and the contextual exporter's output:
an optional ``<count> <dim>`` header line, then one row per word with
space-separated decimal floats.  Neighbor ranking applies no similarity
threshold; ties break by vocabulary-file order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .pairs import NormalizationPolicy


class DimensionMismatch(ValueError):
    def __init__(self, line_no: int, expected: int, got: int):
        self.line_no = line_no
        super().__init__(f"line {line_no}: expected {expected} vector components, got {got}")


class MalformedRow(ValueError):
    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {reason}")


class NeighborQuery(NamedTuple):
    word: str
    k: int = 10


class Neighbor(NamedTuple):
    word: str
    similarity: float


@dataclass(slots=True)
class VectorStore:
    dim: int
    vocab: list[str]
    vectors: np.ndarray
    norms: np.ndarray
    policy: NormalizationPolicy = NormalizationPolicy()
    warnings: list[str] = field(default_factory=list)
    _word_to_row: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self._word_to_row:
            self._word_to_row = {w: i for i, w in enumerate(self.vocab)}

    def __len__(self) -> int:
        return len(self.vocab)

    def __contains__(self, word: str) -> bool:
        return self.policy.normalize(word) in self._word_to_row

    def row_of(self, word: str) -> int | None:
        return self._word_to_row.get(self.policy.normalize(word))


def load_vectors(
    data: str | bytes,
    policy: NormalizationPolicy = NormalizationPolicy(),
) -> VectorStore:
    """Parse vector text into a :class:`VectorStore`.

    Duplicate words after normalization keep the first occurrence (a
    warning is recorded on the store); zero vectors are kept but flagged
    and never appear in neighbor results (cosine is undefined for them).
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    start = 0
    declared_count = None
    dim = None
    if lines:
        first = lines[0].split(" ")
        if len(first) == 2:
            try:
                declared_count, dim = int(first[0]), int(first[1])
                start = 1
            except ValueError:
                pass

    vocab: list[str] = []
    rows: list[np.ndarray] = []
    recorded: list[str] = []
    seen: dict[str, int] = {}
    data_rows = 0

    for line_no, line in enumerate(lines[start:], start=start + 1):
        if line == "":
            raise MalformedRow(line_no, "blank row inside vector table")
        fields = line.split(" ")
        if len(fields) < 2:
            raise MalformedRow(line_no, "expected a word followed by vector components")
        word = policy.normalize(fields[0])
        try:
            vec = np.array([float(x) for x in fields[1:]], dtype=np.float64)
        except ValueError:
            raise MalformedRow(line_no, "non-numeric vector component") from None
        if dim is None:
            dim = vec.shape[0]
        if vec.shape[0] != dim:
            raise DimensionMismatch(line_no, dim, vec.shape[0])
        data_rows += 1
        if word in seen:
            recorded.append(f"line {line_no}: duplicate word {word!r}, first occurrence kept")
            continue
        seen[word] = len(vocab)
        vocab.append(word)
        rows.append(vec)

    if declared_count is not None and declared_count != data_rows:
        recorded.append(f"header declares {declared_count} rows, file contains {data_rows}")

    vectors = np.vstack(rows) if rows else np.zeros((0, dim or 0), dtype=np.float64)
    norms = np.linalg.norm(vectors, axis=1)
    for i, n in enumerate(norms):
        if n == 0.0:
            recorded.append(f"word {vocab[i]!r} has a zero vector")

    return VectorStore(
        dim=int(dim or 0),
        vocab=vocab,
        vectors=vectors,
        norms=norms,
        policy=policy,
        warnings=recorded,
        _word_to_row=seen,
    )


def load_vectors_file(
    path: str | Path, policy: NormalizationPolicy = NormalizationPolicy()
) -> VectorStore:
    return load_vectors(Path(path).read_bytes(), policy)


def top_k_neighbors(store: VectorStore, query: NeighborQuery) -> list[Neighbor]:
    """The ``k`` most cosine-similar vocabulary words, query excluded.

    Out-of-vocabulary or zero-norm queries yield an empty list.  No
    similarity threshold is applied; low and negative similarities are
    returned.  Ties break by vocabulary-file order.
    """
    if query.k < 1:
        raise ValueError(f"k must be >= 1, got {query.k}")
    row = store.row_of(query.word)
    if row is None or store.norms[row] == 0.0:
        return []

    q = store.vectors[row]
    qnorm = store.norms[row]
    candidate = store.norms > 0.0
    candidate[row] = False

    sims = np.full(len(store.vocab), -np.inf)
    sims[candidate] = (store.vectors[candidate] @ q) / (store.norms[candidate] * qnorm)

    order = np.argsort(-sims, kind="stable")
    result = []
    for idx in order[: int(np.count_nonzero(candidate))][: query.k]:
        result.append(Neighbor(store.vocab[int(idx)], float(sims[idx])))
    return result
