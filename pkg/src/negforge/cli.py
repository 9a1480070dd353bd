"""Command-line entry point.

Subcommands: ingest, match, negate, pairs, stats, loss-check, eval-cloze.
Records are emitted as line-delimited JSON by default; ``--format table``
renders aligned text. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import cloze
from .conllu import ConlluError, parse_conllu_file, to_conllu, within_length_limit
from .objective import kl_loss, ul_loss
from .pairs import DatasetError, sample_dataset, write_dataset
from .pattern import PatternError, compile_pattern
from .rules import (
    ApplyError,
    RuleLoadError,
    coverage_stats,
    load_default_ruleset,
    load_ruleset_file,
    negate,
    render,
)

RULES_ENV = "NEGFORGE_RULES"
SEED_MAX = 2**64


class _UsageError(Exception):
    pass


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < SEED_MAX:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        raise _UsageError(message)


class DataError(Exception):
    pass


def _load_rules(path: str | None):
    path = path or os.environ.get(RULES_ENV)
    try:
        if path:
            return load_ruleset_file(path)
        return load_default_ruleset()
    except (OSError, RuleLoadError) as exc:
        raise DataError(f"cannot load rules: {exc}") from exc


def _read_corpus(paths, on_error="raise"):
    sentences = []
    for path in paths:
        try:
            sentences.extend(parse_conllu_file(path, on_error=on_error))
        except (OSError, ConlluError) as exc:
            raise DataError(f"{path}: {exc}") from exc
    return sentences


def _emit(records, fmt, out=sys.stdout):
    if fmt == "jsonl":
        for record in records:
            out.write(json.dumps(record, ensure_ascii=False) + "\n")
        return
    records = list(records)
    if not records:
        return
    headers = list(records[0].keys())
    rows = [headers] + [[str(r.get(h, "")) for h in headers] for r in records]
    widths = [max(len(row[i]) for row in rows) for i in range(len(headers))]
    for row in rows:
        out.write("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n")


def _add_format(parser):
    parser.add_argument(
        "--format",
        choices=("jsonl", "table"),
        default="jsonl",
        help="output as line-delimited JSON (default) or an aligned table",
    )


def cmd_ingest(args) -> int:
    on_error = "skip" if args.skip_errors else "raise"
    sentences = _read_corpus(args.inputs, on_error=on_error)
    if args.echo:
        for sentence in sentences:
            sys.stdout.write(to_conllu(sentence))
    summary = {
        "sentences": len(sentences),
        "tokens": sum(len(s.tokens) for s in sentences),
        "within_limit": sum(
            1 for s in sentences if within_length_limit(s, args.max_words)
        ),
        "max_words": args.max_words,
    }
    _emit([summary], args.format)
    return 0


def cmd_match(args) -> int:
    try:
        pattern = compile_pattern(args.pattern)
    except PatternError as exc:
        raise DataError(f"bad pattern: {exc}") from exc
    records = []
    for sentence in _read_corpus(args.inputs):
        for match in pattern.match_all(sentence):
            records.append(
                {
                    "sent_id": sentence.sent_id,
                    "anchor": match.anchor,
                    **{
                        name: f"{idx}:{sentence.token(idx).form}"
                        for name, idx in sorted(match.captures.items())
                    },
                }
            )
    _emit(records, args.format)
    return 0


def cmd_negate(args) -> int:
    rules = _load_rules(args.rules)
    records = []
    for sentence in _read_corpus(args.inputs):
        try:
            outcome = negate(rules, sentence)
        except ApplyError as exc:
            raise DataError(f"{sentence.sent_id}: {exc}") from exc
        record = {"sent_id": sentence.sent_id, "original": render(sentence.tokens)}
        if outcome is None:
            record.update({"negated": None, "ul_token": None, "rule": None})
        else:
            record.update(
                {
                    "negated": render(outcome.tokens, recapitalize=args.recapitalize),
                    "ul_token": outcome.ul_token.form,
                    "ul_index": outcome.ul_index,
                    "rule": outcome.rule_name,
                }
            )
        records.append(record)
    _emit(records, args.format)
    return 0


def cmd_pairs(args) -> int:
    rules = _load_rules(args.rules)
    corpus = _read_corpus(args.inputs)
    try:
        examples, manifest = sample_dataset(
            corpus,
            rules,
            n_per_objective=args.n,
            seed=args.seed,
            max_words=args.max_words,
            disjoint_pools=args.disjoint_pools,
        )
    except DatasetError as exc:
        raise DataError(str(exc)) from exc
    write_dataset(examples, manifest, args.out, args.manifest)
    _emit([manifest["counts"] | {"dataset": args.out}], args.format)
    return 0


def cmd_stats(args) -> int:
    rules = _load_rules(args.rules)
    counts, unmatched = coverage_stats(rules, _read_corpus(args.inputs))
    records = [{"rule": name, "matched": count} for name, count in counts.items()]
    records.append({"rule": "(unmatched)", "matched": unmatched})
    records.append({"rule": "(total)", "matched": sum(counts.values()) + unmatched})
    _emit(records, args.format)
    return 0


def cmd_loss_check(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"{args.input}: {exc}") from exc
    if not isinstance(data, list):
        raise DataError("loss-check input must be a JSON array of records")
    records = []
    for i, raw in enumerate(data):
        try:
            if "p_u" in raw:
                records.append({"index": i, "ul_loss": ul_loss(raw["p_u"])})
            elif "teacher" in raw and "student" in raw:
                records.append(
                    {"index": i, "kl_loss": kl_loss(raw["teacher"], raw["student"])}
                )
            else:
                raise DataError(
                    f"record {i}: expected 'p_u' or 'teacher'+'student' fields"
                )
        except ValueError as exc:
            raise DataError(f"record {i}: {exc}") from exc
    _emit(records, args.format)
    return 0


def cmd_eval_cloze(args) -> int:
    if args.queries:
        try:
            with open(args.queries, encoding="utf-8") as handle:
                queries = cloze.load_queries(handle)
        except (OSError, KeyError, json.JSONDecodeError, cloze.ClozeError) as exc:
            raise DataError(f"{args.queries}: {exc}") from exc
    else:
        if not (args.templates and args.facts):
            raise _UsageError("provide --queries, or both --templates and --facts")
        try:
            templates = {
                t.relation: t
                for t in cloze.load_templates(
                    open(args.templates, encoding="utf-8").read()
                )
            }
            queries = []
            with open(args.facts, encoding="utf-8") as handle:
                for line in handle:
                    if not line.strip():
                        continue
                    fact = json.loads(line)
                    template = templates[fact["relation"]]
                    for polarity in (cloze.POSITIVE, cloze.NEGATED):
                        queries.append(
                            cloze.instantiate(
                                template, fact["subject"], fact["object"], polarity
                            )
                        )
        except (OSError, KeyError, json.JSONDecodeError, cloze.ClozeError) as exc:
            raise DataError(f"cannot build queries: {exc}") from exc
        if args.queries_out:
            with open(args.queries_out, "w", encoding="utf-8") as handle:
                for query in queries:
                    handle.write(query.to_json() + "\n")

    if not args.preds:
        if not args.queries_out:
            raise _UsageError("nothing to do: give --preds to score, or --queries-out")
        return 0

    reports = {}
    for labeled in args.preds:
        name, _, path = labeled.rpartition("=")
        name = name or path
        try:
            with open(path, encoding="utf-8") as handle:
                predictions = cloze.load_predictions(handle)
            reports[name] = cloze.aggregate(
                predictions, queries, k=args.k, case_insensitive=args.case_insensitive
            )
        except (OSError, KeyError, json.JSONDecodeError, cloze.ClozeError) as exc:
            raise DataError(f"{path}: {exc}") from exc

    if args.report:
        payload = {name: cloze.report_to_dict(r) for name, r in reports.items()}
        with open(args.report, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write("\n")
    if args.format == "table":
        sys.stdout.write(cloze.format_report_table(reports))
    else:
        for name, report in reports.items():
            sys.stdout.write(
                json.dumps({"model": name, **cloze.report_to_dict(report)}) + "\n"
            )
    return 0


def build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(
        prog="negforge",
        description="Flip sentence polarity over dependency parses; build "
        "reference-paired training data; score cloze predictions.",
        epilog="A global '--config FILE' (JSON object keyed by long flag names, "
        "e.g. {\"rules\": ..., \"seed\": ...}) supplies defaults for any "
        "subcommand; explicit flags win.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("ingest", help="validate CoNLL-U input and report counts")
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE",
                   help="CoNLL-U input file(s)")
    p.add_argument("--skip-errors", action="store_true",
                   help="drop malformed sentences instead of aborting")
    p.add_argument("--echo", action="store_true",
                   help="re-serialize parsed sentences to stdout")
    p.add_argument("--max-words", type=int, default=20,
                   help="word-count limit used for the within_limit figure")
    _add_format(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("match", help="run one pattern over a corpus, print captures")
    p.add_argument("--pattern", required=True, help="pattern text to compile")
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE",
                   help="CoNLL-U input file(s)")
    _add_format(p)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("negate", help="emit original/negated records per sentence")
    p.add_argument("--rules", help=f"rule file (default: ${RULES_ENV} or bundled rules)")
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE",
                   help="CoNLL-U input file(s)")
    p.add_argument("--recapitalize", action="store_true",
                   help="uppercase the first letter of negated output")
    _add_format(p)
    p.set_defaults(func=cmd_negate)

    p = sub.add_parser("pairs", help="sample a balanced training dataset")
    p.add_argument("--rules", help=f"rule file (default: ${RULES_ENV} or bundled rules)")
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE",
                   help="CoNLL-U input file(s)")
    p.add_argument("--out", required=True, help="output dataset path (JSONL)")
    p.add_argument("--manifest", help="manifest path (default: <out>.manifest.json)")
    p.add_argument("--n", type=int, default=20000, help="examples per objective")
    p.add_argument("--seed", type=_seed, default=0, help="sampling seed (unsigned 64-bit)")
    p.add_argument("--max-words", type=int, default=20, help="sentence length filter")
    p.add_argument("--disjoint-pools", action="store_true",
                   help="draw contradictory and copy sources from disjoint sentences")
    _add_format(p)
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("stats", help="per-rule match census over a corpus")
    p.add_argument("--rules", help=f"rule file (default: ${RULES_ENV} or bundled rules)")
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE",
                   help="CoNLL-U input file(s)")
    _add_format(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("loss-check", help="evaluate loss kernels on a records file")
    p.add_argument("--in", dest="input", required=True, metavar="FILE",
                   help="JSON array of {p_u} or {teacher, student} records")
    _add_format(p)
    p.set_defaults(func=cmd_loss_check)

    p = sub.add_parser("eval-cloze", help="score prediction files against cloze queries")
    p.add_argument("--queries", help="pre-built queries (JSONL)")
    p.add_argument("--templates", help="relation templates (JSON array)")
    p.add_argument("--facts", help="subject/object facts (JSONL), used with --templates")
    p.add_argument("--queries-out", help="write instantiated queries here")
    p.add_argument("--preds", nargs="*", default=[], metavar="[NAME=]FILE",
                   help="prediction file(s), optionally labeled; omit to only "
                   "instantiate queries")
    p.add_argument("--k", type=int, default=1, help="precision cutoff for positives")
    p.add_argument("--case-insensitive", action="store_true",
                   help="compare candidate tokens case-insensitively")
    p.add_argument("--report", help="write a JSON report to this path")
    _add_format(p)
    p.set_defaults(func=cmd_eval_cloze)

    return parser, dict(sub.choices)


def _extract_config(argv: list[str]) -> tuple[list[str], dict]:
    """Pull a global --config FILE out of argv and load its JSON object."""
    if "--config" not in argv:
        return argv, {}
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise _UsageError("--config requires a file path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    try:
        with open(path, encoding="utf-8") as handle:
            config = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(config, dict):
        raise DataError(f"config {path} must hold a JSON object")
    return rest, {key.replace("-", "_"): value for key, value in config.items()}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subcommands = build_parser()
    try:
        argv, config = _extract_config(argv)
        if config:
            alias = {"in": ("inputs", "input")}  # --in maps onto two dests
            for child in subcommands.values():
                actions = {action.dest: action for action in child._actions}
                defaults = {}
                for key, value in config.items():
                    for dest in alias.get(key, (key,)):
                        if dest in actions:
                            defaults[dest] = value
                            actions[dest].required = False
                child.set_defaults(**defaults)
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_usage(sys.stderr)
            return 1
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except DataError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ConlluError, RuleLoadError, ApplyError, PatternError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
