"""Command line for the embedding exporter."""
from __future__ import annotations

import argparse
import logging
import sys

from .exporter import ExportConfig, LayerChoice, export


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="formvec",
        description="Embed a CoNLL-U corpus with a masked-LM checkpoint and write "
        "per-form mean-pooled vectors in plain text.",
    )
    parser.add_argument("--input", required=True, help="CoNLL-U corpus to embed")
    parser.add_argument("--output", required=True, help="vector text file to write")
    parser.add_argument("--model", required=True,
                        help="model identifier or local checkpoint directory")
    parser.add_argument("--layer", choices=[c.value for c in LayerChoice],
                        default=LayerChoice.LAST_HIDDEN.value)
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument("--max-length", type=int, default=512)
    parser.add_argument("--lowercase", action="store_true",
                        help="lowercase forms (match the consumer's normalization)")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    cfg = ExportConfig(
        input_path=args.input,
        output_path=args.output,
        model_id=args.model,
        layer=LayerChoice(args.layer),
        batch_size=args.batch_size,
        max_length=args.max_length,
        lowercase=args.lowercase,
    )
    try:
        stats = export(cfg)
    except (OSError, ValueError) as exc:
        print(f"formvec: error: {exc}", file=sys.stderr)
        return 2
    print(
        f"{stats.forms_written} forms (dim {stats.dim}) from {stats.sentences} sentences; "
        f"{stats.skipped_sentences} sentences skipped, {stats.truncated_sentences} truncated"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
