"""Rewriting of mismatched dependency relations in the augment corpus.

Three strategies share one shape: build a candidate set of word pairs,
keep the candidates attested in the base index, pool their relation
counts, and relabel with the most frequent pooled relation.  The lexical
strategy's candidate set is the original pair alone; the embedding
strategies widen it with the top-k cosine neighbors of the head and of
the dependent (the cross product of both expansions).  Only the deprel
field is ever touched.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .conllu import Corpus, Sentence, with_deprel
from .mismatch import MismatchSet
from .pairs import NormalizationPolicy, PairIndex, PairKey
from .vectors import NeighborQuery, VectorStore, top_k_neighbors


class Strategy(Enum):
    LEXICAL = "lexical"
    STATIC_EMBEDDING = "static-embedding"
    CONTEXTUAL_EMBEDDING = "contextual-embedding"


class Fallback(Enum):
    KEEP_ORIGINAL = "keep"
    DROP_SENTENCE = "drop"


SKIP_NO_BASE_EVIDENCE = "NoBaseEvidence"
SKIP_ALREADY_WINNING = "AlreadyWinning"
SKIP_SENTENCE_DROPPED = "SentenceDropped"


class StaleReport(ValueError):
    """A report record no longer matches the corpus it is applied to."""


@dataclass(frozen=True, slots=True)
class ConverterConfig:
    strategy: Strategy = Strategy.LEXICAL
    k: int = 10
    policy: NormalizationPolicy = NormalizationPolicy()
    on_no_replacement: Fallback = Fallback.KEEP_ORIGINAL


@dataclass(frozen=True, slots=True)
class Evidence:
    pair: PairKey
    relation: str
    count: int


@dataclass(frozen=True, slots=True)
class ConversionRecord:
    sentence_index: int
    token_id: int
    key: PairKey
    old_relation: str
    new_relation: str
    evidence: tuple[Evidence, ...]
    strategy: Strategy

    def pooled_counts(self) -> dict[str, int]:
        pooled: Counter[str] = Counter()
        for ev in self.evidence:
            pooled[ev.relation] += ev.count
        return dict(pooled)


@dataclass(frozen=True, slots=True)
class SkippedArc:
    sentence_index: int
    token_id: int
    key: PairKey
    old_relation: str
    reason: str


@dataclass(slots=True)
class ConversionReport:
    strategy: Strategy
    applied: list[ConversionRecord] = field(default_factory=list)
    skipped: list[SkippedArc] = field(default_factory=list)
    dropped_sentences: list[int] = field(default_factory=list)

    def totals(self) -> dict[tuple[str, str], int]:
        out: Counter[tuple[str, str]] = Counter()
        for rec in self.applied:
            out[(rec.old_relation, rec.new_relation)] += 1
        return dict(out)


@dataclass(frozen=True, slots=True)
class _Decision:
    new_relation: str | None  # None: no surviving candidate
    evidence: tuple[Evidence, ...]


def _pool_candidates(
    key: PairKey, candidates: set[PairKey], base_index: PairIndex
) -> _Decision:
    """Keep candidates attested in base, pool counts, pick the winner.

    Evidence holds every (pair, relation, count) of the surviving
    candidates, so the pooled vote is fully auditable.  Ties break to the
    lexicographically smallest label.
    """
    evidence = []
    pooled: Counter[str] = Counter()
    for cand in sorted(candidates):
        counts = base_index.entries.get(cand)
        if not counts:
            continue
        for relation in sorted(counts):
            evidence.append(Evidence(cand, relation, counts[relation]))
            pooled[relation] += counts[relation]
    if not pooled:
        return _Decision(None, ())
    winner = min(pooled, key=lambda rel: (-pooled[rel], rel))
    return _Decision(winner, tuple(evidence))


def _decide_lexical(key: PairKey, base_index: PairIndex, cfg: ConverterConfig) -> _Decision:
    return _pool_candidates(key, {key}, base_index)


def _decide_embedding(
    key: PairKey, base_index: PairIndex, store: VectorStore, cfg: ConverterConfig
) -> _Decision:
    heads = {key.head_form}
    heads.update(
        cfg.policy.normalize(n.word)
        for n in top_k_neighbors(store, NeighborQuery(key.head_form, cfg.k))
    )
    deps = {key.dep_form}
    deps.update(
        cfg.policy.normalize(n.word)
        for n in top_k_neighbors(store, NeighborQuery(key.dep_form, cfg.k))
    )
    candidates = {PairKey(h, d) for h in heads for d in deps}
    return _pool_candidates(key, candidates, base_index)


def convert_lexical(
    augment: Corpus,
    base_index: PairIndex,
    ms: MismatchSet,
    cfg: ConverterConfig = ConverterConfig(),
) -> tuple[Corpus, ConversionReport]:
    """Relabel each mismatched arc with the base corpus's most frequent
    relation for the exact word pair; arcs with no base evidence follow
    ``cfg.on_no_replacement``."""
    decisions = {
        (m.key, m.augment_relation): _decide_lexical(m.key, base_index, cfg) for m in ms.items
    }
    return _apply_decisions(augment, decisions, cfg)


def convert_embedding(
    augment: Corpus,
    base_index: PairIndex,
    ms: MismatchSet,
    store: VectorStore,
    cfg: ConverterConfig,
) -> tuple[Corpus, ConversionReport]:
    """Relabel each mismatched arc with the most frequent relation pooled
    over base-attested neighbor pairs (plus the original pair)."""
    decisions = {
        (m.key, m.augment_relation): _decide_embedding(m.key, base_index, store, cfg)
        for m in ms.items
    }
    return _apply_decisions(augment, decisions, cfg)


def _apply_decisions(
    augment: Corpus,
    decisions: dict[tuple[PairKey, str], _Decision],
    cfg: ConverterConfig,
) -> tuple[Corpus, ConversionReport]:
    report = ConversionReport(strategy=cfg.strategy)
    out_sentences: list[Sentence] = []

    for sent_index, sentence in enumerate(augment.sentences):
        tokens = sentence.tokens
        n = len(tokens)
        new_sentence = sentence
        drop = False
        pending: list[ConversionRecord] = []
        pending_skips: list[SkippedArc] = []

        for tok_index, token in enumerate(tokens):
            if not 0 < token.head <= n:
                continue
            key = PairKey(
                cfg.policy.normalize(tokens[token.head - 1].form),
                cfg.policy.normalize(token.form),
            )
            decision = decisions.get((key, token.deprel))
            if decision is None:
                continue
            if decision.new_relation is None:
                pending_skips.append(
                    SkippedArc(sent_index, token.id, key, token.deprel, SKIP_NO_BASE_EVIDENCE)
                )
                if cfg.on_no_replacement is Fallback.DROP_SENTENCE:
                    drop = True
                continue
            if decision.new_relation == token.deprel:
                pending_skips.append(
                    SkippedArc(sent_index, token.id, key, token.deprel, SKIP_ALREADY_WINNING)
                )
                continue
            pending.append(
                ConversionRecord(
                    sentence_index=sent_index,
                    token_id=token.id,
                    key=key,
                    old_relation=token.deprel,
                    new_relation=decision.new_relation,
                    evidence=decision.evidence,
                    strategy=cfg.strategy,
                )
            )

        if drop:
            report.dropped_sentences.append(sent_index)
            report.skipped.extend(pending_skips)
            report.skipped.extend(
                SkippedArc(rec.sentence_index, rec.token_id, rec.key, rec.old_relation,
                           SKIP_SENTENCE_DROPPED)
                for rec in pending
            )
            continue

        report.skipped.extend(pending_skips)
        for rec in pending:
            new_sentence = with_deprel(new_sentence, rec.token_id - 1, rec.new_relation)
            report.applied.append(rec)
        out_sentences.append(new_sentence)

    return Corpus(sentences=out_sentences, source_path=augment.source_path), report


def apply_plan(augment: Corpus, report: ConversionReport) -> Corpus:
    """Materialize a report's relabelings (and sentence drops) on a corpus.

    Raises :class:`StaleReport` when a record's (sentence, token, old
    relation) no longer matches, so a report can never be applied to the
    wrong corpus silently.
    """
    sentences = list(augment.sentences)
    for rec in report.applied:
        if rec.sentence_index >= len(sentences):
            raise StaleReport(f"record targets missing sentence {rec.sentence_index}")
        sentence = sentences[rec.sentence_index]
        if rec.token_id < 1 or rec.token_id > len(sentence.tokens):
            raise StaleReport(
                f"record targets missing token {rec.token_id} in sentence {rec.sentence_index}"
            )
        token = sentence.tokens[rec.token_id - 1]
        if token.deprel != rec.old_relation:
            raise StaleReport(
                f"sentence {rec.sentence_index} token {rec.token_id}: expected relation "
                f"{rec.old_relation!r}, found {token.deprel!r}"
            )
        sentences[rec.sentence_index] = with_deprel(
            sentence, rec.token_id - 1, rec.new_relation
        )
    dropped = set(report.dropped_sentences)
    kept = [s for i, s in enumerate(sentences) if i not in dropped]
    return Corpus(sentences=kept, source_path=augment.source_path)


def report_to_json_dict(report: ConversionReport) -> dict:
    return {
        "strategy": report.strategy.value,
        "applied_count": len(report.applied),
        "skipped_count": len(report.skipped),
        "dropped_sentences": report.dropped_sentences,
        "totals": [
            {"old_relation": old, "new_relation": new, "count": count}
            for (old, new), count in sorted(report.totals().items())
        ],
        "applied": [
            {
                "sentence_index": rec.sentence_index,
                "token_id": rec.token_id,
                "head_form": rec.key.head_form,
                "dep_form": rec.key.dep_form,
                "old_relation": rec.old_relation,
                "new_relation": rec.new_relation,
                "evidence": [
                    {
                        "head_form": ev.pair.head_form,
                        "dep_form": ev.pair.dep_form,
                        "relation": ev.relation,
                        "count": ev.count,
                    }
                    for ev in rec.evidence
                ],
            }
            for rec in report.applied
        ],
        "skipped": [
            {
                "sentence_index": s.sentence_index,
                "token_id": s.token_id,
                "head_form": s.key.head_form,
                "dep_form": s.key.dep_form,
                "old_relation": s.old_relation,
                "reason": s.reason,
            }
            for s in report.skipped
        ],
    }


def write_report_json(report: ConversionReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(report_to_json_dict(report), f, indent=2)
        f.write("\n")


def write_report_tsv(report: ConversionReport, path: str | Path) -> None:
    """Summary TSV: old_relation, new_relation, count."""
    with open(path, "w", encoding="utf-8") as f:
        for (old, new), count in sorted(report.totals().items()):
            f.write(f"{old}\t{new}\t{count}\n")
