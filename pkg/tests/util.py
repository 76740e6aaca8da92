"""Shared builders and independent brute-force oracles.

The oracles deliberately avoid the library's own data paths: they work on
plain dicts and lists with explicit loops, so a library bug cannot hide
behind a shared implementation.
"""
from __future__ import annotations

import math
import random

from udharmony.conllu import Corpus, Sentence, Token, parse


def make_sentence(arcs: list[tuple[str, int, str]]) -> Sentence:
    """Build a sentence from (form, head, deprel) triples, ids 1..n."""
    tokens = [
        Token(i, form, "_", "_", "_", "_", head, deprel, "_", "_")
        for i, (form, head, deprel) in enumerate(arcs, start=1)
    ]
    return Sentence(tokens=tokens)


def pair_corpus(pair_counts: dict[tuple[str, str, str], int]) -> Corpus:
    """A corpus of 2-token sentences realizing exact (head, dep, rel) counts."""
    sentences = []
    for (head_form, dep_form, relation), count in pair_counts.items():
        for _ in range(count):
            sentences.append(
                make_sentence([(head_form, 0, "root"), (dep_form, 1, relation)])
            )
    return Corpus(sentences=sentences)


def random_tree_heads(rng: random.Random, n: int) -> list[int]:
    """Random single-root tree over ids 1..n: attach each node to an
    earlier node of a random permutation."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = [0] * (n + 1)  # 1-based
    for pos, node in enumerate(order):
        heads[node] = 0 if pos == 0 else order[rng.randrange(pos)]
    return heads[1:]


def random_corpus(
    rng: random.Random,
    n_sentences: int,
    vocab: list[str],
    relations: list[str],
    max_len: int = 6,
) -> Corpus:
    sentences = []
    for _ in range(n_sentences):
        n = rng.randint(1, max_len)
        heads = random_tree_heads(rng, n)
        arcs = []
        for i in range(n):
            deprel = "root" if heads[i] == 0 else rng.choice(relations)
            arcs.append((rng.choice(vocab), heads[i], deprel))
        sentences.append(make_sentence(arcs))
    return Corpus(sentences=sentences)


def random_conllu_text(rng: random.Random, n_sentences: int, vocab: list[str],
                       relations: list[str]) -> str:
    """Canonical CoNLL-U text built by string pasting, independent of the
    serializer; includes comments, a multiword range, and an empty node."""
    out = []
    for s in range(n_sentences):
        n = rng.randint(1, 6)
        heads = random_tree_heads(rng, n)
        out.append(f"# sent_id = s{s}")
        if rng.random() < 0.3:
            out.append(f"# text = synthetic sentence {s}")
        for i in range(1, n + 1):
            if rng.random() < 0.1 and i < n:
                form = rng.choice(vocab) + rng.choice(vocab)
                out.append(f"{i}-{i + 1}\t{form}\t_\t_\t_\t_\t_\t_\t_\t_")
            deprel = "root" if heads[i - 1] == 0 else rng.choice(relations)
            out.append(
                f"{i}\t{rng.choice(vocab)}\tlem\tX\t_\t_\t{heads[i - 1]}\t{deprel}\t_\t_"
            )
            if rng.random() < 0.05:
                out.append(f"{i}.1\televen\t_\t_\t_\t_\t_\t_\t_\t_")
        out.append("")
    return "\n".join(out) + "\n"


def parse_text(text: str, **kw) -> Corpus:
    return parse(text, **kw)


# ---------------------------------------------------------------------------
# Brute-force oracles


def oracle_triple_counts(corpus: Corpus, lowercase: bool = False) -> dict:
    """Exhaustive (head form, dep form) -> {relation: count} scan."""
    counts: dict[tuple[str, str], dict[str, int]] = {}
    for sentence in corpus.sentences:
        forms = [t.form for t in sentence.tokens]
        for t in sentence.tokens:
            if t.head == 0 or t.head > len(forms):
                continue
            h = forms[t.head - 1].lower() if lowercase else forms[t.head - 1]
            d = t.form.lower() if lowercase else t.form
            rel_counts = counts.setdefault((h, d), {})
            rel_counts[t.deprel] = rel_counts.get(t.deprel, 0) + 1
    return counts


def oracle_mismatches(base: Corpus, augment: Corpus, lowercase: bool = False) -> set:
    """Set of (head, dep, relation, count, frozenset(base relations))."""
    base_counts = oracle_triple_counts(base, lowercase)
    augment_counts = oracle_triple_counts(augment, lowercase)
    out = set()
    for (h, d), rels in augment_counts.items():
        base_rels = frozenset(base_counts.get((h, d), {}))
        for rel, count in rels.items():
            if rel not in base_rels:
                out.add((h, d, rel, count, base_rels))
    return out


def oracle_cosine(u: list[float], v: list[float]) -> float:
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    return dot / (nu * nv)


def oracle_top_k(vocab: list[str], vectors: list[list[float]], word: str, k: int) -> list:
    """Full-scan exact k-NN with the declared tie-break (file order).

    Zero-norm entries never participate; an OOV or zero-norm query yields
    an empty list.
    """
    if word not in vocab:
        return []
    qi = vocab.index(word)
    if all(x == 0.0 for x in vectors[qi]):
        return []
    scored = []
    for i, (w, vec) in enumerate(zip(vocab, vectors)):
        if i == qi or all(x == 0.0 for x in vec):
            continue
        scored.append((-oracle_cosine(vectors[qi], vec), i, w))
    scored.sort()
    return [(w, -negsim) for negsim, _i, w in scored[:k]]


def oracle_embedding_label(
    head: str,
    dep: str,
    base_counts: dict,
    vocab: list[str],
    vectors: list[list[float]],
    k: int,
) -> str | None:
    """Steps of the neighbor-pooled replacement, reimplemented verbatim:
    expand both words, cross the expansions, keep base-attested pairs,
    pool counts, pick the max (ties to the smallest label)."""
    heads = {head} | {w for w, _ in oracle_top_k(vocab, vectors, head, k)}
    deps = {dep} | {w for w, _ in oracle_top_k(vocab, vectors, dep, k)}
    pooled: dict[str, int] = {}
    for h in heads:
        for d in deps:
            for rel, count in base_counts.get((h, d), {}).items():
                pooled[rel] = pooled.get(rel, 0) + count
    if not pooled:
        return None
    return min(pooled, key=lambda r: (-pooled[r], r))
