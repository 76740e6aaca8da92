"""Per-form mean-pooled contextual embeddings in vector text format.

Each sentence of the input corpus is embedded once; subword pieces are
averaged into their CoNLL-U token, and every occurrence of a surface form
is averaged into one type-level vector.  The output file starts with a
``<count> <dim>`` header and one row per form, which is exactly what the
harmonization tool's vector loader consumes.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
import torch
from transformers import AutoModel, AutoTokenizer

from .reader import SentenceText, read_sentences

log = logging.getLogger("formvec")


class LayerChoice(Enum):
    LAST_HIDDEN = "last-hidden"
    SUM_LAST4 = "sum-last4"


class TokenizationMismatch(ValueError):
    """A token inside the encoded window got no subword pieces."""

    def __init__(self, sentence_index: int, form: str):
        self.sentence_index = sentence_index
        super().__init__(f"sentence {sentence_index}: no pieces align to form {form!r}")


@dataclass(frozen=True, slots=True)
class ExportConfig:
    input_path: str
    output_path: str
    model_id: str
    layer: LayerChoice = LayerChoice.LAST_HIDDEN
    batch_size: int = 8
    max_length: int = 512
    lowercase: bool = False


@dataclass(slots=True)
class ExportStats:
    forms_written: int = 0
    dim: int = 0
    sentences: int = 0
    skipped_sentences: int = 0
    truncated_sentences: int = 0
    skipped_forms: int = 0
    warnings: list[str] = field(default_factory=list)

    def warn(self, message: str) -> None:
        self.warnings.append(message)
        log.warning(message)


def export(cfg: ExportConfig) -> ExportStats:
    """Run the export; returns counters for everything skipped or truncated."""
    sentences = read_sentences(cfg.input_path)
    stats = ExportStats(sentences=len(sentences))

    tokenizer = AutoTokenizer.from_pretrained(cfg.model_id)
    model = AutoModel.from_pretrained(cfg.model_id)
    model.eval()

    sums: dict[str, np.ndarray] = {}
    counts: dict[str, int] = {}

    for batch_start in range(0, len(sentences), cfg.batch_size):
        batch = sentences[batch_start : batch_start + cfg.batch_size]
        _embed_batch(batch, batch_start, tokenizer, model, cfg, sums, counts, stats)

    dim = model.config.hidden_size
    rows = []
    for form in sorted(sums):
        if " " in form:
            stats.skipped_forms += 1
            stats.warn(f"form {form!r} contains a space and cannot be emitted")
            continue
        rows.append((form, sums[form] / counts[form]))

    with open(cfg.output_path, "w", encoding="utf-8") as f:
        f.write(f"{len(rows)} {dim}\n")
        for form, vec in rows:
            f.write(form + " " + " ".join(format(x, ".8g") for x in vec) + "\n")

    stats.forms_written = len(rows)
    stats.dim = dim
    log.info(
        "wrote %d forms (dim %d) from %d sentences; skipped %d sentences, "
        "%d truncated, %d forms dropped",
        stats.forms_written, dim, stats.sentences, stats.skipped_sentences,
        stats.truncated_sentences, stats.skipped_forms,
    )
    return stats


def _embed_batch(
    batch: list[SentenceText],
    batch_start: int,
    tokenizer,
    model,
    cfg: ExportConfig,
    sums: dict[str, np.ndarray],
    counts: dict[str, int],
    stats: ExportStats,
) -> None:
    encoded = tokenizer(
        [s.text for s in batch],
        padding=True,
        truncation=True,
        max_length=cfg.max_length,
        return_offsets_mapping=True,
        return_tensors="pt",
    )
    offsets = encoded.pop("offset_mapping")
    with torch.no_grad():
        output = model(**encoded, output_hidden_states=cfg.layer is LayerChoice.SUM_LAST4)
    if cfg.layer is LayerChoice.SUM_LAST4:
        reps = torch.stack(output.hidden_states[-4:]).sum(dim=0)
    else:
        reps = output.last_hidden_state
    reps = reps.numpy()
    mask = encoded["attention_mask"].numpy()
    offsets = offsets.numpy()

    for row, sentence in enumerate(batch):
        sent_index = batch_start + row
        piece_spans = [
            (int(start), int(end), pos)
            for pos, (start, end) in enumerate(offsets[row])
            if mask[row][pos] and (start, end) != (0, 0)
        ]
        covered_end = max((end for _s, end, _p in piece_spans), default=0)
        if covered_end < len(sentence.text):
            stats.truncated_sentences += 1
            stats.warn(
                f"sentence {sent_index} truncated at {covered_end}/{len(sentence.text)} chars"
            )

        try:
            contributions = _align(sentence, sent_index, piece_spans, reps[row], covered_end)
        except TokenizationMismatch as exc:
            stats.skipped_sentences += 1
            stats.warn(f"skipped: {exc}")
            continue

        for form, vec in contributions:
            key = form.lower() if cfg.lowercase else form
            if key in sums:
                sums[key] += vec
                counts[key] += 1
            else:
                sums[key] = vec.astype(np.float64, copy=True)
                counts[key] = 1


def _align(
    sentence: SentenceText,
    sent_index: int,
    piece_spans: list[tuple[int, int, int]],
    reps: np.ndarray,
    covered_end: int,
) -> list[tuple[str, np.ndarray]]:
    """Mean the pieces overlapping each token span; a token beyond the
    truncation point contributes nothing, a token inside it with no
    pieces is an alignment failure."""
    contributions = []
    for span in sentence.spans:
        positions = [
            pos for start, end, pos in piece_spans if start < span.end and end > span.start
        ]
        if not positions:
            if span.start >= covered_end:
                continue  # lost to truncation, already warned
            raise TokenizationMismatch(sent_index, span.form)
        contributions.append((span.form, reps[positions].mean(axis=0)))
    return contributions
