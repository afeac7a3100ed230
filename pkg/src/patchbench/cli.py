"""Command-line surface for the toolkit.

Subcommands: ingest, split, sample, templates, compile, evaluate, run,
compare, report. `--backend` accepts stub:copy, stub:fixed=<text>,
stub:table=<file>, or remote:<url>; with no explicit backend the
PATCHBENCH_WORKER_URL environment variable selects a remote worker.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import corpus, harness, metrics, template
from .harness.experiment import ExperimentResult


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patchbench")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("ingest", help="convert a dataset export to canonical JSONL")
    p.add_argument("--input", required=True)
    p.add_argument("--schema", default="canonical", choices=sorted(corpus.SCHEMAS))
    p.add_argument("--out-file", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("split", help="8:1:1 split of a dataset, manifest to disk")
    p.add_argument("--dataset", required=True)
    p.add_argument("--schema", default="canonical", choices=sorted(corpus.SCHEMAS))
    p.add_argument("--seed-list", default="1")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("sample", help="seeded fraction or shot sampling")
    p.add_argument("--dataset", required=True)
    p.add_argument("--schema", default="canonical", choices=sorted(corpus.SCHEMAS))
    p.add_argument("--mode", choices=("fraction", "shots"), required=True)
    p.add_argument("--fraction", type=float, default=0.01)
    p.add_argument("--shots", type=int, default=32)
    p.add_argument("--reserve-test", type=int, default=0, help="reserve a disjoint test set first")
    p.add_argument("--seed-list", default="1,2,3")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("templates", help="list builtin templates or render one")
    p.add_argument("action", choices=("list", "render"))
    p.add_argument("--id", dest="template_id")
    p.add_argument("--set", dest="template_set", default="all", choices=("bp", "kp", "all"))
    p.add_argument("--style", default="infilling", choices=("infilling", "generative"))
    p.set_defaults(func=cmd_templates)

    p = sub.add_parser("compile", help="compile a template against instances")
    p.add_argument("--template", required=True)
    p.add_argument("--style", default="infilling", choices=("infilling", "generative"))
    p.add_argument("--dataset", required=True)
    p.add_argument("--schema", default="canonical", choices=sorted(corpus.SCHEMAS))
    p.add_argument("--id", dest="instance_id", help="compile one instance (default: all)")
    p.add_argument("--out-file", help="write JSONL here instead of stdout")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("evaluate", help="EM / SC / CodeBLEU over prediction pairs")
    p.add_argument("--pairs", required=True, help="JSONL of {id, language, prediction, reference}")
    p.add_argument("--weights", default="0.25,0.25,0.25,0.25")
    p.add_argument("--mode", default="rate", choices=("rate", "count"))
    p.add_argument("--compat-tokenizer", action="store_true", help="whitespace-split tokens")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run", help="run an experiment spec end to end")
    p.add_argument("--config", required=True)
    p.add_argument("--backend")
    p.add_argument("--seed-list")
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="relative EM improvement over a baseline run")
    p.add_argument("--results", nargs="+", required=True, help="result.json files")
    p.add_argument("--baseline", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="emit a table layout from result files")
    p.add_argument("--results", nargs="+", required=True)
    p.add_argument("--layout", required=True, choices=harness.LAYOUTS)
    p.add_argument("--out-file")
    p.set_defaults(func=cmd_report)

    return parser


def _seeds(text: str) -> tuple[int, ...]:
    return tuple(int(s) for s in text.split(",") if s.strip())


def cmd_ingest(args) -> int:
    instances = corpus.load_dataset(args.input, args.schema)
    corpus.write_canonical(instances, args.out_file)
    print(f"wrote {len(instances)} instances to {args.out_file}")
    return 0


def cmd_split(args) -> int:
    instances = corpus.load_dataset(args.dataset, args.schema)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for seed in _seeds(args.seed_list):
        split = corpus.split_dataset(instances, seed)
        path = out / f"split_seed_{seed}.json"
        split.save(path)
        print(f"seed {seed}: train {len(split.train)} / val {len(split.val)} / test {len(split.test)} -> {path}")
    return 0


def cmd_sample(args) -> int:
    instances = corpus.load_dataset(args.dataset, args.schema)
    ids = [inst.id for inst in instances]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for seed in _seeds(args.seed_list):
        if args.mode == "fraction":
            sample = corpus.sample_fraction(ids, args.fraction, seed)
            payload = {"seed": seed, "mode": "fraction", "fraction": args.fraction, "ids": sample}
        else:
            reserved: list[str] = []
            if args.reserve_test:
                from .corpus.sampling import seeded_shuffle

                reserved = seeded_shuffle(ids, seed)[: args.reserve_test]
            sample = corpus.sample_shots(ids, args.shots, seed, reserved=set(reserved))
            payload = {"seed": seed, "mode": "shots", "k": args.shots, "ids": sample, "reserved_test": reserved}
        path = out / f"sample_seed_{seed}.json"
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"seed {seed}: {len(sample)} ids -> {path}")
    return 0


def cmd_templates(args) -> int:
    if args.action == "list":
        sets = ("bp", "kp") if args.template_set == "all" else (args.template_set,)
        for s in sets:
            for t in template.builtin_templates(s, args.style):
                print(f"{t.id:40s} {t.kind:16s} {t.model_style:10s} {template.render_table_form(t)}")
        return 0
    if not args.template_id:
        raise ValueError("templates render needs --id")
    t = template.get_builtin(args.template_id, args.style)
    print(template.render_table_form(t))
    for warning in template.validate_for_style(t, args.style):
        print(f"warning: {warning}")
    return 0


def cmd_compile(args) -> int:
    t = template.get_builtin(args.template, args.style)
    instances = corpus.load_dataset(args.dataset, args.schema)
    if args.instance_id:
        instances = [inst for inst in instances if inst.id == args.instance_id]
        if not instances:
            raise ValueError(f"no instance with id {args.instance_id!r}")
    lines = [json.dumps(template.instantiate(t, inst).to_wire(), sort_keys=True) for inst in instances]
    if args.out_file:
        Path(args.out_file).write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {len(lines)} compiled prompts to {args.out_file}")
    else:
        for line in lines:
            print(line)
    return 0


def cmd_evaluate(args) -> int:
    weights = tuple(float(w) for w in args.weights.split(","))
    config = metrics.CodeBleuConfig(
        weights=weights, tokenizer="whitespace" if args.compat_tokenizer else "lexer"
    )
    reports = []
    with open(args.pairs, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            rec = json.loads(line)
            try:
                reports.append(
                    metrics.evaluate_pair(
                        str(rec["id"]), rec["prediction"], rec["reference"], rec["language"], config
                    )
                )
            except KeyError as exc:
                raise ValueError(f"{args.pairs}:{lineno}: missing field {exc}") from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "reports.jsonl").open("w", encoding="utf-8") as fh:
        for rep in reports:
            fh.write(json.dumps(rep.to_dict(), sort_keys=True) + "\n")
    summary = metrics.aggregate(reports, args.mode)
    (out / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_run(args) -> int:
    overrides: dict = {}
    backend = args.backend or os.environ.get("PATCHBENCH_WORKER_URL")
    if backend:
        if backend.startswith("http://") or backend.startswith("https://"):
            backend = f"remote:{backend}"
        overrides["backend"] = backend
    if args.seed_list:
        overrides["seeds"] = [s for s in args.seed_list.split(",") if s.strip()]
    if args.out:
        overrides["out"] = args.out
    spec = harness.load_spec(args.config, overrides)
    result = harness.run_experiment(spec)
    print(json.dumps({"label": result.label, "cross_seed": result.cross_seed, "failed_seeds": result.failed_seeds}, sort_keys=True))
    return 0 if not result.failed_seeds else 1


def _load_results(paths: list[str]) -> list[ExperimentResult]:
    return [ExperimentResult.from_dict(json.loads(Path(p).read_text(encoding="utf-8"))) for p in paths]


def cmd_compare(args) -> int:
    rows = harness.compare_runs(_load_results(args.results), args.baseline)
    for row in rows:
        print(f"{row.label:30s} EM {row.em:7.2f}  {row.display}")
    return 0


def cmd_report(args) -> int:
    text = harness.emit_report(_load_results(args.results), args.layout)
    if args.out_file:
        Path(args.out_file).write_text(text, encoding="utf-8")
        print(f"wrote {args.layout} report to {args.out_file}")
    else:
        print(text, end="")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
