"""Operator command line.

Subcommands: analyze a URL, generate/validate worm packs, run headless bot
sessions, verify session logs by replay, dump the rule catalog, and serve
the HTTP session protocol for the game client. ``PHISHPOND_PACK`` supplies
the default pack path wherever one is accepted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from phishpond.bots import BotPolicy, run_simulation
from phishpond.engine import GameConfig
from phishpond.logbook import PackMismatch, read_log, replay, write_log
from phishpond.pack import (
    ContentPack,
    PackLoadError,
    generate_pack,
    load_pack,
    validate_pack,
    write_pack,
)
from phishpond.rules import Verdict, analyze, builtin_ruleset, catalog_json
from phishpond.urls import MalformedUrl, parse_url

EXIT_OK = 0
EXIT_PHISHING = 1
EXIT_ERROR = 2


def _pack_path(value: str | None) -> Path:
    path = value or os.environ.get("PHISHPOND_PACK")
    if not path:
        raise SystemExit("no pack given: pass --pack or set PHISHPOND_PACK")
    return Path(path)


def _load_pack_file(path: Path) -> ContentPack:
    with path.open("r", encoding="utf-8") as handle:
        return load_pack(handle)


def _load_config(path: str | None) -> GameConfig:
    if path is None:
        return GameConfig()
    with open(path, "r", encoding="utf-8") as handle:
        return GameConfig.from_json(json.load(handle))


def cmd_analyze(args: argparse.Namespace) -> int:
    brands = [b.strip().lower() for b in args.brands.split(",") if b.strip()]
    try:
        parsed = parse_url(args.url)
    except MalformedUrl as exc:
        if args.json:
            print(json.dumps({"error": "malformed_url", "detail": str(exc),
                              "offset": exc.offset}))
        else:
            print(f"malformed URL: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report = analyze(parsed, builtin_ruleset(), brands)
    if args.json:
        print(json.dumps({"url": args.url, **report.to_json()}, ensure_ascii=False))
    else:
        print(f"verdict: {report.verdict.value}")
        for finding in report.findings:
            cid = finding.component
            print(f"  [{finding.rule_id}] {cid.kind.value}[{cid.index}]"
                  f" bytes {finding.span.start}..{finding.span.end}")
            print(f"      {finding.explanation}")
    return EXIT_PHISHING if report.verdict is Verdict.PHISHING else EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    pack = _load_pack_file(_pack_path(args.pack))
    config = _load_config(args.config)
    policy = BotPolicy.parse(args.policy, seed=args.bot_seed)
    sim = run_simulation(pack, config, args.seed, policy)
    if args.log:
        with open(args.log, "w", encoding="utf-8") as handle:
            write_log(sim.log, handle)
    report = sim.report
    if args.json:
        print(json.dumps(report.to_json(), ensure_ascii=False))
    else:
        stats = report.stats
        print(f"final phase: {sim.final_state.phase.value}"
              f"  score: {sim.final_state.score}")
        print(f"classify {stats.classify_correct}/{stats.classify_total}"
              f"  locate {stats.locate_correct}/{stats.locate_total}"
              f"  help {stats.help_requests}")
        print(f"pk={report.pk:.4f} ck={report.ck:.4f}"
              f" interaction={report.interaction:.4f}"
              f" self_efficacy={report.self_efficacy:.4f}")
    return EXIT_OK


def cmd_pack_generate(args: argparse.Namespace) -> int:
    brands = tuple(b.strip().lower() for b in args.brands.split(",") if b.strip())
    pack = generate_pack(
        seed=args.seed, name=args.name, version=args.version,
        brands=brands, per_tier=args.per_tier,
    )
    with open(args.out, "w", encoding="utf-8") as handle:
        write_pack(pack, handle)
    print(f"wrote {len(pack.items)} worms to {args.out}")
    return EXIT_OK


def cmd_pack_validate(args: argparse.Namespace) -> int:
    path = _pack_path(args.path)
    try:
        pack = _load_pack_file(path)
    except PackLoadError as exc:
        if args.json:
            print(json.dumps({"errors": [
                {"line": i.line, "code": i.code, "message": i.message}
                for i in exc.issues
            ]}))
        else:
            for issue in exc.issues:
                print(str(issue), file=sys.stderr)
        return EXIT_PHISHING
    report = validate_pack(pack, builtin_ruleset())
    if args.json:
        print(json.dumps({"errors": [], "warnings": [
            {"item": w.item_index, "url": w.url, "code": w.code, "message": w.message}
            for w in report.warnings
        ]}))
    else:
        print(f"{path}: {len(pack.items)} worms, ok")
        for warning in report.warnings:
            print(f"warning: item {warning.item_index} ({warning.url}): {warning.message}")
    if report.warnings and args.strict:
        return EXIT_PHISHING
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        with open(args.log, "r", encoding="utf-8") as handle:
            log = read_log(handle)
        pack = _load_pack_file(_pack_path(args.pack))
        result = replay(log, pack)
    except (PackMismatch, PackLoadError, ValueError) as exc:
        print(f"replay failed: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if result.verified:
        print(f"verified: {len(log.records)} records")
        return EXIT_OK
    print(f"diverged at seq {result.diverged_at}: {result.detail}", file=sys.stderr)
    return EXIT_PHISHING


def cmd_rules(args: argparse.Namespace) -> int:
    ruleset = builtin_ruleset()
    if args.json:
        print(catalog_json(ruleset))
    else:
        for rule in ruleset:
            flag = "paper" if rule.paper_anchored else "added"
            print(f"[{rule.id}] severity {rule.severity} ({flag})")
            print(f"    tip: {rule.hint}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from phishpond.server import create_app

    pack = _load_pack_file(_pack_path(args.pack))
    app = create_app(pack, default_config=_load_config(args.config))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phishpond")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one URL; exit 0 legit, 1 phishing, 2 malformed")
    p.add_argument("url")
    p.add_argument("--brands", default="hsbc,paypal,google",
                   help="comma-separated brand names the rules watch for")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="run one headless bot session")
    p.add_argument("--pack", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--policy", default="oracle",
                   help="oracle | random:P | learner:START:END")
    p.add_argument("--bot-seed", type=int, default=0)
    p.add_argument("--log", default=None, help="write the session log here")
    p.add_argument("--config", default=None, help="path to a config JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pack", help="pack tooling")
    pack_sub = p.add_subparsers(dest="pack_command", required=True)

    g = pack_sub.add_parser("generate", help="generate a seeded worm pack")
    g.add_argument("--out", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--brands", default="hsbc,paypal,google")
    g.add_argument("--per-tier", type=int, default=6)
    g.add_argument("--name", default="starter")
    g.add_argument("--version", default="1")
    g.set_defaults(func=cmd_pack_generate)

    v = pack_sub.add_parser("validate", help="check a pack and cross-check labels")
    v.add_argument("path", nargs="?", default=None)
    v.add_argument("--strict", action="store_true",
                   help="exit nonzero when rules disagree with labels")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_pack_validate)

    p = sub.add_parser("replay", help="re-simulate a log; exit 0 verified, 1 diverged")
    p.add_argument("--log", required=True)
    p.add_argument("--pack", default=None)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("rules", help="print the rule catalog")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_rules)

    p = sub.add_parser("serve", help="serve the HTTP session protocol")
    p.add_argument("--pack", default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PackLoadError as exc:
        for issue in exc.issues:
            print(str(issue), file=sys.stderr)
        return EXIT_ERROR
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
