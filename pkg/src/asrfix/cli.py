"""Command-line interface for the correction-corpus toolkit.

Every value a subcommand needs can come from a flag, a key=value config
file (--config), or a built-in default, in that order of precedence.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline
from .corrector import ARTICLE_SCOPE, SEGMENT_SCOPE, apply_corrections, parse_correction_json
from .manifest import ManifestError, load_manifest
from .prompts import PROMPT_TYPE_NAMES, PromptType
from .scorer import ScoreReport, score_pair
from .segmenter import split_segments
from .util import dump_json, load_kv_file, parse_bool, write_jsonl, write_jsonl_line


class CliError(ValueError):
    pass


def _setting(args, config: dict, key: str, default=None, cast=None):
    value = getattr(args, key, None)
    if value is None:
        value = config.get(key)
        if value is not None and cast is not None:
            value = cast(value)
    return default if value is None else value


def _require(value, name: str):
    if value is None:
        raise CliError(f"missing required setting: {name}")
    return value


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n", "utf-8")
    else:
        print(text)


def _load_report(path: str) -> ScoreReport:
    data = json.loads(Path(path).read_text("utf-8"))
    return ScoreReport.from_dict(data.get("scores", data))


def _cmd_build(args, config) -> int:
    summary = pipeline.run_build(
        _require(_setting(args, config, "manifest"), "manifest"),
        _require(_setting(args, config, "out"), "out"),
        PromptType(_require(_setting(args, config, "prompt_type"), "prompt-type")),
        lexicon_path=_setting(args, config, "lexicon"),
        templates_path=_setting(args, config, "templates"),
        seed=_setting(args, config, "seed", pipeline.DEFAULT_SEED, int),
        min_error_len=_setting(args, config, "min_error_len", 4, int),
        unique_cap=_setting(args, config, "unique_cap", 16, int),
    )
    print(dump_json(summary))
    return 0


def _cmd_baseline(args, config) -> int:
    summary = pipeline.run_baseline(
        _require(_setting(args, config, "manifest"), "manifest"),
        _require(_setting(args, config, "out"), "out"),
    )
    print(dump_json(summary))
    return 0


def _cmd_eval(args, config) -> int:
    endpoint = _setting(args, config, "endpoint")
    cache = _setting(args, config, "cache")
    offline = _setting(args, config, "offline", False, parse_bool)
    if endpoint is None and not offline:
        raise CliError("eval needs --endpoint, or --offline with a --cache file")
    summary = pipeline.run_eval(
        _require(_setting(args, config, "manifest"), "manifest"),
        _require(_setting(args, config, "out"), "out"),
        PromptType(_require(_setting(args, config, "prompt_type"), "prompt-type")),
        endpoint_url=endpoint,
        cache_path=cache,
        offline=offline,
        templates_path=_setting(args, config, "templates"),
        baseline_dir=_setting(args, config, "baseline"),
        timeout=_setting(args, config, "timeout", 30.0, float),
        retries=_setting(args, config, "retries", 2, int),
        workers=_setting(args, config, "workers", pipeline.DEFAULT_WORKERS, int),
    )
    print(dump_json(summary))
    return 0


def _cmd_stats(args, config) -> int:
    stats = pipeline.run_stats(_require(_setting(args, config, "manifest"), "manifest"))
    _write_or_print(dump_json(stats), _setting(args, config, "out"))
    return 0


def _cmd_score(args, config) -> int:
    ref = Path(_require(_setting(args, config, "ref"), "ref")).read_text("utf-8")
    hyp = Path(_require(_setting(args, config, "hyp"), "hyp")).read_text("utf-8")
    baseline_path = _setting(args, config, "baseline")
    baseline = _load_report(baseline_path) if baseline_path else None
    report = score_pair(ref, hyp)
    _write_or_print(dump_json(report.to_dict(baseline)), _setting(args, config, "out"))
    return 0


def _cmd_apply(args, config) -> int:
    corrections_path = _require(_setting(args, config, "corrections"), "corrections")
    raw = Path(corrections_path).read_text("utf-8")
    in_path = _setting(args, config, "in_file")
    doc_id = _setting(args, config, "doc_id")

    if in_path is not None:
        corrections = parse_correction_json(raw, SEGMENT_SCOPE)
        segments = [Path(in_path).read_text("utf-8")]
    elif doc_id is not None:
        records = load_manifest(_require(_setting(args, config, "manifest"), "manifest"))
        matches = [rec for rec in records if rec.doc_id == doc_id]
        if not matches:
            raise CliError(f"doc_id {doc_id!r} not in manifest")
        record = matches[0]
        corrections = parse_correction_json(raw, ARTICLE_SCOPE)
        segments = [seg.hyp_text for seg in split_segments(record.resolve_ref(), record.hyp_text)]
    else:
        raise CliError("apply needs --in (segment scope) or --manifest with --doc-id")

    corrected, report = apply_corrections(segments, corrections)
    _write_or_print("".join(corrected), _setting(args, config, "out"))
    print(
        dump_json(
            {
                "applied": report.applied,
                "not_found": report.not_found,
                "ambiguous": report.ambiguous,
            }
        ),
        file=sys.stderr,
    )
    return 0


def _cmd_extract(args, config) -> int:
    pair_rows, unresolved_rows = pipeline.run_extract(
        _require(_setting(args, config, "manifest"), "manifest"),
        lexicon_path=_setting(args, config, "lexicon"),
        min_error_len=_setting(args, config, "min_error_len", 4, int),
        unique_cap=_setting(args, config, "unique_cap", 16, int),
    )
    out = _setting(args, config, "out")
    if out:
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_jsonl(out_dir / "pairs.jsonl", pair_rows)
        write_jsonl(out_dir / "unresolved.jsonl", unresolved_rows)
    else:
        for row in pair_rows:
            write_jsonl_line(sys.stdout, row)
    print(
        f"pairs: {len(pair_rows)}, unresolved: {len(unresolved_rows)}",
        file=sys.stderr,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asrfix",
        description="Corpus tools for full-text ASR error correction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, func) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key=value config file; flags override it")
        p.set_defaults(func=func)
        return p

    p = add("build", "extract pairs and emit fine-tuning datasets", _cmd_build)
    p.add_argument("--manifest")
    p.add_argument("--out")
    p.add_argument("--prompt-type", choices=PROMPT_TYPE_NAMES)
    p.add_argument("--lexicon")
    p.add_argument("--templates")
    p.add_argument("--seed", type=int)
    p.add_argument("--min-error-len", type=int)
    p.add_argument("--unique-cap", type=int)

    p = add("baseline", "score uncorrected hypotheses per split", _cmd_baseline)
    p.add_argument("--manifest")
    p.add_argument("--out")

    p = add("eval", "query a model endpoint and score its corrections", _cmd_eval)
    p.add_argument("--manifest")
    p.add_argument("--out")
    p.add_argument("--prompt-type", choices=PROMPT_TYPE_NAMES)
    p.add_argument("--endpoint")
    p.add_argument("--templates")
    p.add_argument("--cache", help="model outputs JSONL, written through and reused")
    p.add_argument("--offline", action="store_true", default=None)
    p.add_argument("--baseline", help="directory of baseline score files, adds ERR")
    p.add_argument("--timeout", type=float)
    p.add_argument("--retries", type=int)
    p.add_argument("--workers", type=int)

    p = add("stats", "corpus statistics from a manifest", _cmd_stats)
    p.add_argument("--manifest")
    p.add_argument("--out")

    p = add("apply", "apply correction JSON to hypothesis text", _cmd_apply)
    p.add_argument("--corrections")
    p.add_argument("--in", dest="in_file", help="segment text file (segment scope)")
    p.add_argument("--manifest")
    p.add_argument("--doc-id", help="apply article-scope corrections to this document")
    p.add_argument("--out")

    p = add("score", "score a hypothesis file against a reference file", _cmd_score)
    p.add_argument("--ref")
    p.add_argument("--hyp")
    p.add_argument("--baseline", help="baseline score JSON, adds ERR")
    p.add_argument("--out")

    p = add("extract", "emit error-correction pairs for a manifest", _cmd_extract)
    p.add_argument("--manifest")
    p.add_argument("--lexicon")
    p.add_argument("--min-error-len", type=int)
    p.add_argument("--unique-cap", type=int)
    p.add_argument("--out", help="directory for pairs.jsonl/unresolved.jsonl")

    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(name)s: %(message)s"
    )
    args = build_parser().parse_args(argv)
    config = load_kv_file(args.config) if args.config else {}
    try:
        return args.func(args, config)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ManifestError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
