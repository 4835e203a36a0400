"""Command-line pipeline: every stage reads and writes plain files.

Exit codes: 0 success, 1 usage error, 2 data/validation error. Every
subcommand accepts ``--seed`` and echoes its effective configuration into its
output (JSON outputs embed a ``cli_config`` key; CSV outputs get a
``<out>.meta.json`` sidecar), so any result can be reproduced from the files
alone.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import adversarial, bench, boruta, corpus, features, lexicons, metrics, rules, sampling
from .errors import ContractError, ToxbenchError
from .learners import importance, list_algorithms, load_model, make_spec, save_model, train, vote_ensemble

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _sidecar(out_path: Path, config: dict, extra: dict | None = None) -> None:
    payload = {"cli_config": config}
    if extra:
        payload.update(extra)
    meta = out_path.with_name(out_path.name + ".meta.json")
    meta.write_text(json.dumps(payload, indent=2), encoding="utf-8")


def _read_comments_csv(path: Path, priority) -> list[tuple[str, str]]:
    """Rows of (text, class) from either an ingest output or a raw Jigsaw file."""
    with open(path, encoding="utf-8", errors="replace", newline="") as fh:
        header = next(csv.reader(fh), None)
    if header is None:
        raise ContractError(f"{path}: empty file")
    if all(col in header for col in corpus.JIGSAW_COLUMNS):
        comments = corpus.load_jigsaw_csv(path)
        return [(c.text, corpus.resolve_class(c.flags, priority)) for c in comments]
    if "text" in header and "class" in header:
        t_pos, c_pos = header.index("text"), header.index("class")
        rows = []
        with open(path, encoding="utf-8", errors="replace", newline="") as fh:
            reader = csv.reader(fh)
            next(reader)
            for row in reader:
                if row:
                    rows.append((row[t_pos], row[c_pos]))
        return rows
    raise ContractError(
        f"{path}: expected either the Jigsaw schema or columns 'text' and 'class'"
    )


def _parse_priority(value: str | None):
    if value is None:
        return corpus.DEFAULT_PRIORITY
    return tuple(part.strip() for part in value.split(",") if part.strip())


def _parse_hyper(pairs) -> dict:
    out = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ContractError(f"--hyper expects key=value, got {pair!r}")
        key, raw = pair.split("=", 1)
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _parse_op(spec: str) -> adversarial.PerturbOp:
    kind, _, arg = spec.partition("=")
    if kind == "delete":
        return adversarial.DeleteToken(arg)
    if kind == "negate":
        return adversarial.NegateBefore(arg)
    if kind == "replace":
        frm, sep, to = arg.partition("=>")
        if not sep:
            raise ContractError(f"replace op expects 'replace=from=>to', got {spec!r}")
        return adversarial.ReplaceSpan(frm, to)
    if kind == "repeat":
        return adversarial.RepeatTwice()
    if kind == "pronoun":
        frm, sep, to = arg.partition("=>")
        if not sep:
            raise ContractError(f"pronoun op expects 'pronoun=w1,w2=>to', got {spec!r}")
        return adversarial.PronounShift(tuple(w.strip() for w in frm.split(",")), to)
    if kind == "exclaim":
        return adversarial.AppendExclamation()
    raise ContractError(f"unknown op {spec!r}; kinds: delete, negate, replace, repeat, pronoun, exclaim")


def _scheme_from_args(args) -> dict:
    if args.holdout is not None:
        return {"holdout": args.holdout}
    return {"folds": args.folds, "repeats": args.repeats}


# --- subcommand implementations ----------------------------------------


def _cmd_ingest(args) -> int:
    priority = _parse_priority(args.priority)
    comments = corpus.load_jigsaw_csv(args.input)
    out = Path(args.out)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "text", "class"])
        for c in comments:
            writer.writerow([c.id, c.text, corpus.resolve_class(c.flags, priority)])
    _sidecar(out, {"command": "ingest", "input": str(args.input), "out": str(out),
                   "priority": list(priority), "seed": args.seed,
                   "rows": len(comments)})
    return 0


def _cmd_features(args) -> int:
    priority = _parse_priority(args.priority)
    lex = lexicons.load_lexicon_set(args.lexicons)
    rows = _read_comments_csv(Path(args.input), priority)
    dataset = features.extract_dataset(rows, lex)
    out = Path(args.out)
    dataset.to_csv(out)
    _sidecar(
        out,
        {"command": "features", "input": str(args.input), "out": str(out),
         "lexicons": str(args.lexicons or lexicons.default_lexicon_dir()),
         "priority": list(priority), "seed": args.seed, "rows": len(dataset)},
        extra={"schema": features.DEFAULT_REGISTRY.schema()},
    )
    return 0


def _cmd_rebalance(args) -> int:
    dataset = corpus.Dataset.from_csv(args.input)
    balanced = sampling.rebalance(dataset, args.mode, seed=args.seed)
    out = Path(args.out)
    balanced.to_csv(out)
    _sidecar(out, {"command": "rebalance", "input": str(args.input), "out": str(out),
                   "mode": args.mode, "seed": args.seed,
                   "class_counts": balanced.class_counts()})
    return 0


def _cmd_train(args) -> int:
    dataset = corpus.Dataset.from_csv(args.input)
    spec = make_spec(args.algo, _parse_hyper(args.hyper))
    model = train(spec, dataset, seed=args.seed)
    payload = model.to_jsonable()
    payload["cli_config"] = {
        "command": "train", "input": str(args.input), "out": str(args.out),
        "algo": args.algo, "hyper": dict(spec.hyperparameters), "seed": args.seed,
    }
    Path(args.out).write_text(json.dumps(payload), encoding="utf-8")
    return 0


def _cmd_eval(args) -> int:
    model = load_model(args.model)
    dataset = corpus.Dataset.from_csv(args.input)
    predictions = model.predict(dataset.X)
    hard = metrics.evaluate_hard(predictions, list(dataset.y), labels=model.classes)
    proba = model.predict_proba(dataset.X)
    soft = metrics.evaluate_proba(proba, list(dataset.y), model.classes)
    payload = {
        "hard": hard.to_jsonable(),
        "proba": soft.to_jsonable(),
        "cli_config": {
            "command": "eval", "model": str(args.model), "input": str(args.input),
            "out": str(args.out), "seed": args.seed,
        },
    }
    Path(args.out).write_text(json.dumps(payload, indent=2), encoding="utf-8")
    if args.pr_csv:
        metrics.pr_curves_to_csv(soft.curves, args.pr_csv)
    return 0


def _cmd_bench(args) -> int:
    dataset = corpus.Dataset.from_csv(args.input)
    config = bench.SuiteConfig(
        algorithms=tuple(a.strip() for a in args.algos.split(",") if a.strip()),
        scheme=_scheme_from_args(args),
        seed=args.seed,
        timing_reps=args.timing_reps,
        rebalance_mode=args.mode,
        pool_kappa=args.pool_kappa,
        parallel=args.parallel,
        time_budget_s=args.budget,
        environment_note=args.note,
    )
    report = bench.run_suite(config, dataset)
    bench.emit_report(report, args.out)
    return 0


def _cmd_rank(args) -> int:
    dataset = corpus.Dataset.from_csv(args.input)
    forest_hyper = {"n_trees": args.trees, "max_depth": args.tree_depth}
    config = boruta.BorutaConfig(
        max_iterations=args.iterations,
        alpha=args.alpha,
        forest_spec=make_spec("forest", forest_hyper),
        seed=args.seed,
    )
    report = boruta.rank_features(dataset, config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report.to_csv(out / "boruta.csv")
    payload = report.to_jsonable()
    payload["cli_config"] = {
        "command": "rank", "input": str(args.input), "out": str(out),
        "iterations": args.iterations, "alpha": args.alpha,
        "trees": args.trees, "tree_depth": args.tree_depth, "seed": args.seed,
    }
    (out / "boruta.json").write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return 0


def _cmd_rules(args) -> int:
    model = load_model(args.model)
    ruleset = rules.extract_rules(model)
    out = Path(args.out)
    out.write_text(ruleset.render(), encoding="utf-8")
    _sidecar(out, {"command": "rules", "model": str(args.model), "out": str(out),
                   "seed": args.seed, "rules": len(ruleset)})
    if args.json_out:
        payload = ruleset.to_jsonable()
        payload["cli_config"] = {"command": "rules", "model": str(args.model), "seed": args.seed}
        Path(args.json_out).write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return 0


def _cmd_perturb(args) -> int:
    model = load_model(args.model)
    lex = lexicons.load_lexicon_set(args.lexicons)
    ops = [_parse_op(spec) for spec in args.op or ()]
    report = adversarial.probe(model, lex, args.text, ops)
    payload = report.to_jsonable()
    payload["cli_config"] = {
        "command": "perturb", "model": str(args.model), "text": args.text,
        "ops": list(args.op or ()), "seed": args.seed,
        "lexicons": str(args.lexicons or lexicons.default_lexicon_dir()),
    }
    Path(args.out).write_text(json.dumps(payload, indent=2), encoding="utf-8")
    if args.table:
        sys.stdout.write(report.render_table())
    return 0


def _cmd_lexcheck(args) -> int:
    lex = lexicons.load_lexicon_set(args.lexicons)
    report = lexicons.validate(lex)
    payload = report.to_jsonable()
    payload["cli_config"] = {
        "command": "lexcheck", "seed": args.seed,
        "lexicons": str(args.lexicons or lexicons.default_lexicon_dir()),
    }
    Path(args.out).write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return 0


def _cmd_algos(args) -> int:
    sys.stdout.write(json.dumps(list_algorithms(), indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toxbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--seed", type=int, default=0)
        return p

    p = add("ingest", _cmd_ingest, help="raw Jigsaw CSV -> id,text,class CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--priority", help="comma-separated toxic label priority")

    p = add("features", _cmd_features, help="comments CSV -> feature matrix CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lexicons", help="lexicon directory (default: shipped)")
    p.add_argument("--priority")

    p = add("rebalance", _cmd_rebalance, help="feature matrix -> balanced matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", required=True, choices=sampling.REBALANCE_MODES)

    p = add("train", _cmd_train, help="feature matrix + algorithm -> model JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--algo", required=True)
    p.add_argument("--hyper", action="append", help="key=value, repeatable")

    p = add("eval", _cmd_eval, help="model + matrix -> metrics JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pr-csv", help="also dump PR curve points as CSV")

    p = add("bench", _cmd_bench, help="suite config + matrix -> report files")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--algos", required=True, help="comma-separated registry names")
    p.add_argument("--holdout", type=float)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--mode", choices=sampling.REBALANCE_MODES,
                   help="rebalance training folds only")
    p.add_argument("--timing-reps", type=int, default=1)
    p.add_argument("--pool-kappa", action="store_true")
    p.add_argument("--parallel", action="store_true",
                   help="train concurrently; relative times become non-comparable")
    p.add_argument("--budget", type=float, help="per-algorithm fit budget, seconds")
    p.add_argument("--note", default="", help="free-text environment note")

    p = add("rank", _cmd_rank, help="feature matrix -> Boruta ranking CSV/JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--tree-depth", type=int, default=7)

    p = add("rules", _cmd_rules, help="CART model -> if-then rule text")
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--json-out")

    p = add("perturb", _cmd_perturb, help="model + text + ops -> probe report")
    p.add_argument("--model", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lexicons")
    p.add_argument("--op", action="append",
                   help="delete=w | negate=w | replace=a=>b | repeat | pronoun=a,b=>c | exclaim")
    p.add_argument("--table", action="store_true", help="print a readable table to stdout")

    p = add("lexcheck", _cmd_lexcheck, help="lexicon directory -> validation report")
    p.add_argument("--lexicons")
    p.add_argument("--out", required=True)

    add("algos", _cmd_algos, help="list registry algorithms and defaults")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ToxbenchError as exc:
        print(f"toxbench {args.command}: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"toxbench {args.command}: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
