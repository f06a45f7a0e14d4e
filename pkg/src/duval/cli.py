"""Command-line front end: ``duval {list,verify,graph-aut,table}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .catalog import FAIL, emit_report, load_catalog, run_all, verify_case
from .dualgraph import MAX_GROUP, graph_automorphisms, graph_group_fingerprint, load_graph
from .errors import DuvalError
from .grouptool import match_named_group
from .wps import mode_label, normalize_mode

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_CATALOG = "catalog.json"


@dataclass
class CliConfig:
    command: str
    case_id: str | None = None
    all_cases: bool = False
    lam: str | None = None
    fmt: str = "markdown"
    catalog_path: str = DEFAULT_CATALOG
    graph_path: str | None = None


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _lambda_arg(text: str) -> str:
    try:
        return mode_label(normalize_mode(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"invalid lambda {text!r}: use p/q, 'generic' or 'sixth-root'") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="duval", description="Verify automorphism groups of Du Val del Pezzo surfaces.")
    common = _Parser(add_help=False)
    common.add_argument("--catalog", dest="catalog_path", default=None,
                        help="catalog file (default: $DUVAL_CATALOG or ./catalog.json)")
    common.add_argument("--format", dest="fmt", choices=("markdown", "json"), default="markdown")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sub.add_parser("list", parents=[common], help="list catalog cases")

    v = sub.add_parser("verify", parents=[common], help="verify one case or all cases")
    target = v.add_mutually_exclusive_group()
    target.add_argument("--case", dest="case_id")
    target.add_argument("--all", dest="all_cases", action="store_true")
    v.add_argument("--lambda", dest="lam", type=_lambda_arg, default=None,
                   help="lambda mode: p/q, 'generic' or 'sixth-root' (default: every listed mode)")

    g = sub.add_parser("graph-aut", parents=[common], help="automorphism group of a dual graph")
    g.add_argument("--graph", dest="graph_path")

    sub.add_parser("table", parents=[common], help="verify everything and print the table")
    return p


def parse_config(argv) -> CliConfig:
    ns = build_parser().parse_args(argv)
    cfg = CliConfig(command=ns.command, fmt=ns.fmt)
    cfg.catalog_path = ns.catalog_path or os.environ.get("DUVAL_CATALOG") or DEFAULT_CATALOG
    cfg.case_id = getattr(ns, "case_id", None)
    cfg.all_cases = getattr(ns, "all_cases", False)
    cfg.lam = getattr(ns, "lam", None)
    cfg.graph_path = getattr(ns, "graph_path", None)
    if cfg.command == "verify" and not (cfg.case_id or cfg.all_cases):
        raise _UsageError("verify requires --case ID or --all")
    if cfg.command == "graph-aut" and not cfg.graph_path:
        raise _UsageError("graph-aut requires --graph PATH")
    return cfg


def _cmd_list(cfg, out):
    recs = load_catalog(cfg.catalog_path)
    if cfg.fmt == "json":
        rows = [{"id": r.id, "degree": r.degree, "singularityType": r.singularity_type,
                 "lambdaModes": list(r.lambda_modes), "metadataOnly": r.metadata_only} for r in recs]
        out.write(json.dumps(rows, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    else:
        for r in recs:
            tag = " (metadata only)" if r.metadata_only else ""
            out.write(f"{r.id}\t{r.degree}\t{r.singularity_type}\t{','.join(r.lambda_modes)}{tag}\n")
    return EXIT_OK


def _cmd_verify(cfg, out, err):
    recs = load_catalog(cfg.catalog_path)
    if cfg.all_cases:
        reports, _ = run_all(recs, "all" if cfg.lam is None else [cfg.lam])
        detail = False
    else:
        found = [r for r in recs if r.id == cfg.case_id]
        if not found:
            err.write(f"duval: unknown case {cfg.case_id!r}\n")
            return EXIT_USAGE
        rec = found[0]
        modes = rec.lambda_modes if cfg.lam is None else [cfg.lam]
        if not rec.metadata_only:
            bad = [m for m in modes if m not in rec.lambda_modes]
            if bad:
                err.write(f"duval: case {rec.id} has no lambda mode {bad[0]!r} "
                          f"(listed: {', '.join(rec.lambda_modes)})\n")
                return EXIT_USAGE
        else:
            modes = rec.lambda_modes[:1]
        reports = [verify_case(rec, m) for m in modes]
        detail = True
    out.write(emit_report(reports, cfg.fmt, detail=detail))
    return EXIT_FAIL if any(r.verdict == FAIL for r in reports) else EXIT_OK


def _cmd_graph(cfg, out):
    g = load_graph(cfg.graph_path)
    auts = graph_automorphisms(g)
    name = None
    if len(auts) <= MAX_GROUP:
        name = match_named_group(graph_group_fingerprint(g, auts))
    if cfg.fmt == "json":
        doc = {"graph": cfg.graph_path, "vertices": g.n, "order": len(auts), "group": name,
               "automorphisms": [[g.ids[x] for x in p] for p in auts]}
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        out.write(f"order {len(auts)}, {name or 'unnamed'}\n")
    return EXIT_OK


def _cmd_table(cfg, out):
    recs = load_catalog(cfg.catalog_path)
    reports, summary = run_all(recs)
    out.write(emit_report(reports, cfg.fmt))
    return EXIT_FAIL if summary["failed"] else EXIT_OK


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else list(argv))
    except _UsageError as exc:
        err.write(build_parser().format_usage())
        err.write(f"duval: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        if cfg.command == "list":
            return _cmd_list(cfg, out)
        if cfg.command == "verify":
            return _cmd_verify(cfg, out, err)
        if cfg.command == "graph-aut":
            return _cmd_graph(cfg, out)
        return _cmd_table(cfg, out)
    except (DuvalError, OSError, ValueError) as exc:
        err.write(f"duval: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
