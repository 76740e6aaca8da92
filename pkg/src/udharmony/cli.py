"""Command-line pipeline: detect, convert, sample, eval, report.

Configuration precedence is flags over config file over defaults; the
effective configuration and a run manifest (versions, input/output
checksums) are echoed into every output directory so runs are
reproducible from their artifacts alone.

Exit codes: 0 success, 2 configuration/input error, 3 data-alignment
error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .conllu import parse_file, write_file
from .convert import (
    ConverterConfig,
    Fallback,
    Strategy,
    convert_embedding,
    convert_lexical,
    write_report_json,
    write_report_tsv,
)
from .evaluate import (
    AlignmentError,
    SignificanceConfig,
    compare_significance,
    prediction_analysis,
    score,
    write_confusion_tsv,
    write_score_json,
)
from .mismatch import detect, write_json as write_mismatch_json, write_tsv as write_mismatch_tsv
from .pairs import NormalizationPolicy, build_index
from .plots import render_confusion_figure
from .sampling import SamplePlan, sample, write_manifest
from .vectors import load_vectors_file


class InputError(ValueError):
    """Configuration or input problem; maps to exit code 2."""


class MissingVectors(InputError):
    pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _require_inputs(paths: dict[str, str | None]) -> None:
    # Fail fast: every referenced input must be readable before any work.
    for name, value in paths.items():
        if value is None:
            continue
        p = Path(value)
        if not p.is_file():
            raise InputError(f"{name} path does not exist: {value}")


def _load_config_file(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise InputError(f"config file does not exist: {path}")
    values: dict[str, str] = {}
    for line_no, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"{path}:{line_no}: expected 'key = value'")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _effective_config(defaults: dict, config_file: dict[str, str], explicit: dict) -> dict:
    merged = dict(defaults)
    for key, raw in config_file.items():
        if key not in defaults:
            raise InputError(f"unknown config key: {key}")
        default = defaults[key]
        if isinstance(default, bool):
            merged[key] = raw.lower() in ("1", "true", "yes", "on")
        elif isinstance(default, int):
            merged[key] = int(raw)
        elif isinstance(default, float):
            merged[key] = float(raw)
        else:
            merged[key] = raw
    merged.update(explicit)
    return merged


def _write_provenance(out_dir: Path, subcommand: str, cfg: dict, inputs: list[str],
                      outputs: list[Path]) -> None:
    lines = [f"{key} = {cfg[key]}" for key in sorted(cfg)]
    (out_dir / "run_config.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    manifest = {
        "tool": "udharmony",
        "subcommand": subcommand,
        "versions": {
            "udharmony": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
        "config": {k: cfg[k] for k in sorted(cfg)},
        "inputs": {p: _sha256(Path(p)) for p in inputs},
        "outputs": {out.name: _sha256(out) for out in sorted(outputs)},
    }
    with open(out_dir / "run_manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")


def _int_list(raw: str) -> list[int]:
    try:
        return [int(x) for x in raw.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"expected a comma-separated integer list, got {raw!r}") from None


DETECT_DEFAULTS = {"lowercase": False, "lenient": False}


def cmd_detect(ns: argparse.Namespace) -> int:
    cfg = _effective_config(DETECT_DEFAULTS, _load_config_file(ns.config), ns.explicit)
    _require_inputs({"base": ns.base, "augment": ns.augment})
    out_dir = Path(ns.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    policy = NormalizationPolicy(lowercase=cfg["lowercase"])
    strict = not cfg["lenient"]
    base = build_index(parse_file(ns.base, strict=strict), policy)
    augment = build_index(parse_file(ns.augment, strict=strict), policy)
    ms = detect(base, augment)

    tsv = out_dir / "mismatches.tsv"
    js = out_dir / "mismatches.json"
    write_mismatch_tsv(ms, tsv)
    write_mismatch_json(ms, js)
    _write_provenance(out_dir, "detect", cfg, [ns.base, ns.augment], [tsv, js])
    print(f"{len(ms)} mismatch items written to {tsv}")
    return 0


CONVERT_DEFAULTS = {
    "strategy": "lexical",
    "k": 10,
    "lowercase": False,
    "lenient": False,
    "on_no_replacement": "keep",
    "dry_run": False,
}


def cmd_convert(ns: argparse.Namespace) -> int:
    cfg = _effective_config(CONVERT_DEFAULTS, _load_config_file(ns.config), ns.explicit)
    strategy = Strategy(cfg["strategy"])
    if strategy is not Strategy.LEXICAL and ns.vectors is None:
        raise MissingVectors(f"strategy {strategy.value} requires --vectors")
    _require_inputs({"base": ns.base, "augment": ns.augment, "vectors": ns.vectors})
    out_dir = Path(ns.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    policy = NormalizationPolicy(lowercase=cfg["lowercase"])
    strict = not cfg["lenient"]
    base_index = build_index(parse_file(ns.base, strict=strict), policy)
    augment = parse_file(ns.augment, strict=strict)
    ms = detect(base_index, build_index(augment, policy))

    conv_cfg = ConverterConfig(
        strategy=strategy,
        k=cfg["k"],
        policy=policy,
        on_no_replacement=Fallback(cfg["on_no_replacement"]),
    )
    if strategy is Strategy.LEXICAL:
        converted, report = convert_lexical(augment, base_index, ms, conv_cfg)
    else:
        store = load_vectors_file(ns.vectors, policy)
        converted, report = convert_embedding(augment, base_index, ms, store, conv_cfg)

    outputs = []
    report_json = out_dir / "conversion_report.json"
    report_tsv = out_dir / "conversion_summary.tsv"
    write_report_json(report, report_json)
    write_report_tsv(report, report_tsv)
    outputs += [report_json, report_tsv]
    if not cfg["dry_run"]:
        converted_path = out_dir / "converted.conllu"
        write_file(converted, converted_path)
        outputs.append(converted_path)

    inputs = [ns.base, ns.augment] + ([ns.vectors] if ns.vectors else [])
    _write_provenance(out_dir, "convert", cfg, inputs, outputs)
    print(
        f"{len(report.applied)} arcs relabeled, {len(report.skipped)} skipped"
        + (" (dry run)" if cfg["dry_run"] else "")
    )
    return 0


SAMPLE_DEFAULTS = {
    "tiers": "250,500,1000,2000,4000",
    "seeds": "1,2,3",
    "lenient": False,
}


def cmd_sample(ns: argparse.Namespace) -> int:
    cfg = _effective_config(SAMPLE_DEFAULTS, _load_config_file(ns.config), ns.explicit)
    _require_inputs({"base": ns.base, "augment": ns.augment})
    out_dir = Path(ns.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    tiers = _int_list(cfg["tiers"])
    seeds = _int_list(cfg["seeds"])
    strict = not cfg["lenient"]
    base = parse_file(ns.base, strict=strict)
    augment = parse_file(ns.augment, strict=strict)

    outputs = []
    for tier in tiers:
        for seed in seeds:
            corpus, manifest = sample(SamplePlan(tier, base, augment, seed))
            conllu_path = out_dir / f"train_t{tier}_s{seed}.conllu"
            manifest_path = out_dir / f"train_t{tier}_s{seed}.manifest.json"
            write_file(corpus, conllu_path)
            write_manifest(manifest, manifest_path)
            outputs += [conllu_path, manifest_path]

    _write_provenance(out_dir, "sample", cfg, [ns.base, ns.augment], outputs)
    print(f"{len(tiers) * len(seeds)} samples written to {out_dir}")
    return 0


EVAL_DEFAULTS = {"exclude_punct": False, "lenient": False}


def cmd_eval(ns: argparse.Namespace) -> int:
    cfg = _effective_config(EVAL_DEFAULTS, _load_config_file(ns.config), ns.explicit)
    _require_inputs({"gold": ns.gold, "pred": ns.pred})
    out_dir = Path(ns.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    strict = not cfg["lenient"]
    gold = parse_file(ns.gold, strict=strict)
    pred = parse_file(ns.pred, strict=strict)
    result = score(gold, pred, exclude_punct=cfg["exclude_punct"])

    score_path = out_dir / "score.json"
    write_score_json(result, score_path)
    _write_provenance(out_dir, "eval", cfg, [ns.gold, ns.pred], [score_path])
    print(result.human_line())
    return 0


REPORT_DEFAULTS = {
    "threshold": 50,
    "alpha": 0.05,
    "resamples": 10000,
    "seed": 0,
    "metric": "las",
    "exclude_punct": False,
    "lenient": False,
}


def cmd_report(ns: argparse.Namespace) -> int:
    cfg = _effective_config(REPORT_DEFAULTS, _load_config_file(ns.config), ns.explicit)
    _require_inputs(
        {"gold": ns.gold, "unconverted": ns.unconverted, "converted": ns.converted}
    )
    out_dir = Path(ns.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    strict = not cfg["lenient"]
    gold = parse_file(ns.gold, strict=strict)
    pred_u = parse_file(ns.unconverted, strict=strict)
    pred_c = parse_file(ns.converted, strict=strict)

    entries_u, entries_c = prediction_analysis(gold, pred_u, pred_c, threshold=cfg["threshold"])
    tsv_u = out_dir / "confusion_unconverted.tsv"
    tsv_c = out_dir / "confusion_converted.tsv"
    write_confusion_tsv(entries_u, tsv_u)
    write_confusion_tsv(entries_c, tsv_c)

    figure_path = out_dir / "confusion.png"
    render_confusion_figure(entries_u, entries_c, figure_path, cfg["threshold"])

    sig_cfg = SignificanceConfig(
        alpha=cfg["alpha"], resamples=cfg["resamples"], seed=cfg["seed"], metric=cfg["metric"]
    )
    p_value, better = compare_significance(gold, pred_u, pred_c, sig_cfg)
    sig_path = out_dir / "significance.json"
    label = {"a": "unconverted", "b": "converted", "tie": "tie"}[better]
    with open(sig_path, "w", encoding="utf-8") as f:
        json.dump(
            {
                "method": "paired-bootstrap (artifact choice)",
                "metric": cfg["metric"],
                "alpha": cfg["alpha"],
                "resamples": cfg["resamples"],
                "seed": cfg["seed"],
                "p_value": p_value,
                "better": label,
                "significant": p_value < cfg["alpha"],
            },
            f,
            indent=2,
        )
        f.write("\n")

    _write_provenance(
        out_dir,
        "report",
        cfg,
        [ns.gold, ns.unconverted, ns.converted],
        [tsv_u, tsv_c, figure_path, sig_path],
    )
    print(f"report written to {out_dir} (better: {label}, p={p_value:.4f})")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="udharmony",
        description="Detect and harmonize dependency-relation annotation differences "
        "between CoNLL-U treebanks.",
    )
    parser.add_argument("--version", action="version", version=f"udharmony {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat key=value config file (flags take precedence)")
        p.add_argument("--output-dir", "-o", required=True, help="directory for all outputs")
        p.add_argument("--lenient", action="store_true", default=argparse.SUPPRESS,
                       help="downgrade tree-structure violations to warnings")

    p = sub.add_parser("detect", help="write the mismatch table for a corpus pair")
    common(p)
    p.add_argument("--base", required=True, help="base corpus (.conllu)")
    p.add_argument("--augment", required=True, help="augment corpus (.conllu)")
    p.add_argument("--lowercase", action="store_true", default=argparse.SUPPRESS,
                   help="lowercase forms before pairing")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("convert", help="rewrite mismatched relations in the augment corpus")
    common(p)
    p.add_argument("--base", required=True)
    p.add_argument("--augment", required=True)
    p.add_argument("--strategy", choices=[s.value for s in Strategy],
                   default=argparse.SUPPRESS)
    p.add_argument("--vectors", help="vector file (required for embedding strategies)")
    p.add_argument("--k", type=int, default=argparse.SUPPRESS,
                   help="neighbors per word for embedding strategies (default 10)")
    p.add_argument("--lowercase", action="store_true", default=argparse.SUPPRESS)
    p.add_argument("--on-no-replacement", dest="on_no_replacement",
                   choices=[f.value for f in Fallback], default=argparse.SUPPRESS)
    p.add_argument("--dry-run", dest="dry_run", action="store_true", default=argparse.SUPPRESS,
                   help="write the report but not the converted corpus")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("sample", help="draw seeded half-and-half training samples")
    common(p)
    p.add_argument("--base", required=True)
    p.add_argument("--augment", required=True)
    p.add_argument("--tiers", default=argparse.SUPPRESS,
                   help="comma-separated sentence totals (default 250,500,1000,2000,4000)")
    p.add_argument("--seeds", default=argparse.SUPPRESS,
                   help="comma-separated seeds (default 1,2,3)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("eval", help="UAS/LAS of a prediction against gold")
    common(p)
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--exclude-punct", dest="exclude_punct", action="store_true",
                   default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="confusion tables, figure, and significance block")
    common(p)
    p.add_argument("--gold", required=True)
    p.add_argument("--unconverted", required=True, help="first system's predictions")
    p.add_argument("--converted", required=True, help="second system's predictions")
    p.add_argument("--threshold", type=int, default=argparse.SUPPRESS,
                   help="report gold relations wrong more than this many times (default 50)")
    p.add_argument("--alpha", type=float, default=argparse.SUPPRESS)
    p.add_argument("--resamples", type=int, default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--metric", choices=["las", "uas"], default=argparse.SUPPRESS)
    p.add_argument("--exclude-punct", dest="exclude_punct", action="store_true",
                   default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_report)

    return parser


_CONFIGURABLE = {
    "lowercase", "lenient", "strategy", "k", "on_no_replacement", "dry_run",
    "tiers", "seeds", "exclude_punct", "threshold", "alpha", "resamples",
    "seed", "metric",
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    # Suppressed defaults: only explicitly-passed flags are present, so the
    # config file can fill the gap between flags and defaults.
    ns.explicit = {k: v for k, v in vars(ns).items() if k in _CONFIGURABLE}
    try:
        return ns.func(ns)
    except AlignmentError as exc:
        print(f"udharmony: alignment error: {exc}", file=sys.stderr)
        return 3
    except (InputError, ValueError, OSError) as exc:
        print(f"udharmony: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
