"""Attachment scoring, significance comparison, and prediction analysis.

UAS counts tokens whose predicted head matches gold; LAS additionally
requires the full relation label (subtypes included) to match.  Root
attachment counts like any other head: a gold head of 0 must be predicted
as 0.  Punctuation is counted unless explicitly excluded.

The significance comparison is a paired bootstrap over sentences — the
method is an artifact choice and is labeled as such in all outputs.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .conllu import Corpus


class AlignmentError(ValueError):
    def __init__(self, sentence_index: int, reason: str):
        self.sentence_index = sentence_index
        super().__init__(f"sentence {sentence_index}: {reason}")


@dataclass(slots=True)
class ScoreResult:
    uas: float
    las: float
    counted_tokens: int
    per_sentence: list[tuple[int, int, int]]  # (correct_heads, correct_labeled, tokens)

    def human_line(self) -> str:
        return f"UAS {self.uas:.2f} LAS {self.las:.2f} ({self.counted_tokens} tokens)"

    def to_json_dict(self) -> dict:
        return {"uas": self.uas, "las": self.las, "tokens": self.counted_tokens}


@dataclass(frozen=True, slots=True)
class SignificanceConfig:
    alpha: float = 0.05
    resamples: int = 10000
    seed: int = 0
    metric: str = "las"  # "las" or "uas"

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.metric not in ("las", "uas"):
            raise ValueError(f"metric must be 'las' or 'uas', got {self.metric!r}")


@dataclass(frozen=True, slots=True)
class ConfusionEntry:
    gold_relation: str
    incorrect_predictions: int
    most_frequent_incorrect_label: str
    count: int


def _check_alignment(gold: Corpus, predicted: Corpus) -> None:
    if len(gold) != len(predicted):
        raise AlignmentError(
            min(len(gold), len(predicted)),
            f"sentence counts differ: gold {len(gold)}, predicted {len(predicted)}",
        )
    for i, (g, p) in enumerate(zip(gold.sentences, predicted.sentences)):
        if len(g.tokens) != len(p.tokens):
            raise AlignmentError(i, f"token counts differ: gold {len(g.tokens)}, predicted {len(p.tokens)}")
        for gt, pt in zip(g.tokens, p.tokens):
            if gt.form != pt.form:
                raise AlignmentError(i, f"token {gt.id} forms differ: {gt.form!r} vs {pt.form!r}")


def score(gold: Corpus, predicted: Corpus, exclude_punct: bool = False) -> ScoreResult:
    """UAS/LAS over all syntactic-word tokens.

    ``exclude_punct`` drops tokens whose gold deprel is exactly "punct",
    for comparisons against tools with that convention.
    """
    _check_alignment(gold, predicted)
    per_sentence = []
    total = heads_ok = labels_ok = 0
    for g, p in zip(gold.sentences, predicted.sentences):
        sent_total = sent_heads = sent_labels = 0
        for gt, pt in zip(g.tokens, p.tokens):
            if exclude_punct and gt.deprel == "punct":
                continue
            sent_total += 1
            if gt.head == pt.head:
                sent_heads += 1
                if gt.deprel == pt.deprel:
                    sent_labels += 1
        per_sentence.append((sent_heads, sent_labels, sent_total))
        total += sent_total
        heads_ok += sent_heads
        labels_ok += sent_labels
    uas = 100.0 * heads_ok / total if total else 0.0
    las = 100.0 * labels_ok / total if total else 0.0
    return ScoreResult(uas=uas, las=las, counted_tokens=total, per_sentence=per_sentence)


def _metric(counts: list[tuple[int, int, int]], metric: str, indices=None) -> float:
    rows = counts if indices is None else [counts[i] for i in indices]
    tokens = sum(r[2] for r in rows)
    if tokens == 0:
        return 0.0
    correct = sum(r[0] for r in rows) if metric == "uas" else sum(r[1] for r in rows)
    return 100.0 * correct / tokens


def compare_significance(
    gold: Corpus,
    pred_a: Corpus,
    pred_b: Corpus,
    cfg: SignificanceConfig = SignificanceConfig(),
) -> tuple[float, str]:
    """Paired bootstrap over sentences on the chosen metric.

    Protocol (pinned for reproducibility): score both systems per
    sentence and sort the paired per-sentence counts canonically, so the
    result is invariant to input sentence order; the full-set winner is
    the side with the higher metric.  For each of ``resamples``
    iterations, draw n sentence indices with replacement from PCG64
    seeded with ``cfg.seed`` and recompute the winner-minus-loser
    difference; p = (t + 1) / (resamples + 1) where t counts iterations
    with difference <= 0.  An equal full-set metric short-circuits to
    p = 1.0 and better = "tie".
    """
    a = score(gold, pred_a).per_sentence
    b = score(gold, pred_b).per_sentence

    full_a = _metric(a, cfg.metric)
    full_b = _metric(b, cfg.metric)
    if full_a == full_b:
        return 1.0, "tie"
    better = "a" if full_a > full_b else "b"
    win, lose = (a, b) if better == "a" else (b, a)

    paired = sorted(zip(win, lose))
    col = 0 if cfg.metric == "uas" else 1
    win_correct = np.array([w[col] for w, _ in paired], dtype=np.float64)
    win_tokens = np.array([w[2] for w, _ in paired], dtype=np.float64)
    lose_correct = np.array([l[col] for _, l in paired], dtype=np.float64)
    lose_tokens = np.array([l[2] for _, l in paired], dtype=np.float64)

    n = len(a)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    at_or_below = 0
    for _ in range(cfg.resamples):
        idx = rng.integers(0, n, size=n)
        delta = win_correct[idx].sum() / win_tokens[idx].sum() - lose_correct[
            idx
        ].sum() / lose_tokens[idx].sum()
        if delta <= 0.0:
            at_or_below += 1
    p_value = (at_or_below + 1) / (cfg.resamples + 1)
    return p_value, better


def prediction_analysis(
    gold: Corpus,
    pred_unconverted: Corpus,
    pred_converted: Corpus,
    threshold: int = 50,
) -> tuple[list[ConfusionEntry], list[ConfusionEntry]]:
    """Per-system confusion tables under the uniquely-wrong filter.

    Only tokens where exactly one system's label is wrong are considered.
    For each system, its wrong tokens are grouped by gold relation; groups
    larger than ``threshold`` are reported with their modal incorrect
    label (ties to the lexicographically smallest).
    """
    _check_alignment(gold, pred_unconverted)
    _check_alignment(gold, pred_converted)

    wrong: dict[str, dict[str, Counter[str]]] = {"u": {}, "c": {}}
    for g, pu, pc in zip(gold.sentences, pred_unconverted.sentences, pred_converted.sentences):
        for gt, ut, ct in zip(g.tokens, pu.tokens, pc.tokens):
            u_wrong = ut.deprel != gt.deprel
            c_wrong = ct.deprel != gt.deprel
            if u_wrong == c_wrong:
                continue
            side, label = ("u", ut.deprel) if u_wrong else ("c", ct.deprel)
            wrong[side].setdefault(gt.deprel, Counter())[label] += 1

    def build(side: str) -> list[ConfusionEntry]:
        entries = []
        for gold_rel in sorted(wrong[side]):
            counter = wrong[side][gold_rel]
            total = sum(counter.values())
            if total <= threshold:
                continue
            modal = min(counter, key=lambda lab: (-counter[lab], lab))
            entries.append(ConfusionEntry(gold_rel, total, modal, counter[modal]))
        return entries

    return build("u"), build("c")


def write_confusion_tsv(entries: list[ConfusionEntry], path: str | Path) -> None:
    """TSV: gold_relation, incorrect_predictions, most_frequent_incorrect_label, count."""
    with open(path, "w", encoding="utf-8") as f:
        for e in entries:
            f.write(
                f"{e.gold_relation}\t{e.incorrect_predictions}"
                f"\t{e.most_frequent_incorrect_label}\t{e.count}\n"
            )


def write_score_json(result: ScoreResult, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(result.to_json_dict(), f, indent=2)
        f.write("\n")
