import math
import random

import numpy as np
import pytest

from udharmony.pairs import NormalizationPolicy
from udharmony.vectors import (
    DimensionMismatch,
    MalformedRow,
    Neighbor,
    NeighborQuery,
    VectorStore,
    load_vectors,
    top_k_neighbors,
)

from util import oracle_top_k


def store_from(words: list[str], rows: list[list[float]], **kw) -> VectorStore:
    lines = [f"{w} " + " ".join(str(x) for x in vec) for w, vec in zip(words, rows)]
    return load_vectors("\n".join(lines) + "\n", **kw)


def random_grid_store(rng: random.Random, n_words: int, dim: int):
    """Integer-valued vectors keep cosine arithmetic exact, so oracle and
    implementation agree bitwise and rankings are stable."""
    words = [f"w{i}" for i in range(n_words)]
    rows = [[float(rng.randint(-5, 5)) for _ in range(dim)] for _ in range(n_words)]
    return words, rows, store_from(words, rows)


class TestLoad:
    def test_basic_no_header(self):
        store = store_from(["a", "b", "c"], [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
        assert store.dim == 4
        assert len(store) == 3
        assert store.warnings == []

    def test_header_line(self):
        store = load_vectors("2 3\na 1 0 0\nb 0 1 0\n")
        assert (len(store), store.dim) == (2, 3)
        assert store.warnings == []

    def test_header_count_mismatch_flagged(self):
        store = load_vectors("5 3\na 1 0 0\nb 0 1 0\n")
        assert any("header declares 5" in w for w in store.warnings)

    def test_duplicate_first_wins(self):
        store = store_from(["a", "a", "b"], [[1, 0], [9, 9], [0, 1]])
        assert len(store) == 2
        assert list(store.vectors[0]) == [1.0, 0.0]
        assert any("duplicate" in w for w in store.warnings)

    def test_duplicate_after_lowercasing(self):
        store = store_from(["Cat", "cat"], [[1, 0], [0, 1]],
                           policy=NormalizationPolicy(lowercase=True))
        assert store.vocab == ["cat"]

    def test_zero_vector_flagged(self):
        store = store_from(["a", "z"], [[1, 0], [0, 0]])
        assert any("zero vector" in w for w in store.warnings)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch) as exc:
            load_vectors("a 1 0 0\nb 1 0\n")
        assert exc.value.line_no == 2

    def test_malformed_row(self):
        with pytest.raises(MalformedRow):
            load_vectors("a 1 0\nb one 0\n")
        with pytest.raises(MalformedRow):
            load_vectors("justaword\n")

    def test_norms_match_recomputation(self):
        rng = random.Random(31)
        words, rows, store = random_grid_store(rng, 100, 6)
        for i, vec in enumerate(rows):
            expected = math.sqrt(sum(x * x for x in vec))
            assert store.norms[i] == pytest.approx(expected, rel=1e-6)


class TestTopK:
    def test_oov_query(self):
        store = store_from(["a", "b"], [[1, 0], [0, 1]])
        assert top_k_neighbors(store, NeighborQuery("missing", 5)) == []

    def test_zero_norm_query(self):
        store = store_from(["a", "z"], [[1, 0], [0, 0]])
        assert top_k_neighbors(store, NeighborQuery("z", 5)) == []

    def test_no_threshold_keeps_orthogonal_neighbor(self):
        store = store_from(["a", "b", "c"], [[1, 0], [1, 0], [0, 1]])
        result = top_k_neighbors(store, NeighborQuery("a", 2))
        assert result == [Neighbor("b", 1.0), Neighbor("c", 0.0)]

    def test_negative_similarity_included(self):
        store = store_from(["a", "b"], [[1, 0], [-1, 0]])
        result = top_k_neighbors(store, NeighborQuery("a", 1))
        assert result == [Neighbor("b", -1.0)]

    def test_query_word_excluded(self):
        rng = random.Random(17)
        _words, _rows, store = random_grid_store(rng, 40, 4)
        for word in store.vocab[:10]:
            for n in top_k_neighbors(store, NeighborQuery(word, 10)):
                assert n.word != word

    def test_k_larger_than_vocab(self):
        store = store_from(["a", "b", "c"], [[1, 0], [1, 1], [0, 1]])
        assert len(top_k_neighbors(store, NeighborQuery("a", 99))) == 2

    def test_ties_break_by_file_order(self):
        # b and d are identical vectors; b precedes d in the file.
        store = store_from(
            ["a", "d1", "b", "d"], [[2, 0], [0, 1], [1, 1], [1, 1]]
        )
        result = top_k_neighbors(store, NeighborQuery("a", 4))
        words = [n.word for n in result]
        assert words.index("b") < words.index("d")

    def test_matches_full_scan_oracle(self):
        for seed in range(30):
            rng = random.Random(seed)
            words, rows, store = random_grid_store(rng, 200, 5)
            query = rng.choice(words)
            result = top_k_neighbors(store, NeighborQuery(query, 10))
            expected = oracle_top_k(words, rows, query, 10)
            assert [(n.word, n.similarity) for n in result] == expected

    def test_scale_invariance(self):
        for seed in range(10):
            rng = random.Random(seed + 1000)
            words, rows, store = random_grid_store(rng, 60, 4)
            scaled = store_from(words, [[x * 2.0 for x in row] for row in rows])
            for query in rng.sample(words, 5):
                original = top_k_neighbors(store, NeighborQuery(query, 10))
                doubled = top_k_neighbors(scaled, NeighborQuery(query, 10))
                assert [n.word for n in original] == [n.word for n in doubled]

    def test_repeat_determinism(self):
        rng = random.Random(4)
        words, _rows, store = random_grid_store(rng, 80, 4)
        q = NeighborQuery(words[3], 10)
        assert top_k_neighbors(store, q) == top_k_neighbors(store, q)

    def test_cosine_correctness(self):
        rng = random.Random(6)
        words, rows, store = random_grid_store(rng, 30, 5)
        for n in top_k_neighbors(store, NeighborQuery(words[0], 29)):
            i = words.index(n.word)
            u, v = rows[0], rows[i]
            dot = sum(a * b for a, b in zip(u, v))
            denom = math.sqrt(sum(a * a for a in u)) * math.sqrt(sum(b * b for b in v))
            assert n.similarity == pytest.approx(dot / denom, abs=1e-6)

    def test_invalid_k(self):
        store = store_from(["a", "b"], [[1, 0], [0, 1]])
        with pytest.raises(ValueError):
            top_k_neighbors(store, NeighborQuery("a", 0))
