"""Command-line entry point.

    changepat run --repo PATH [--range REV] [--tau 0.9] [--out DIR] ...
    changepat explain REPORT.json GROUP_ID
    changepat make-repo SNAPSHOT_DIR REPO_DIR
    changepat demo NAME REPO_DIR
    changepat parse FILE [--profile NAME]

Exit status: 0 success (warnings allowed), 2 configuration error,
3 repository or process error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path

from .aterm import render_aterm
from .frontend import ProfileError, SourceSyntaxError, parse_source, resolve_profile
from .pipeline import FORMATS, ConfigError, RunConfig, explain_group, run_pipeline
from .similarity import SIDE_RULES, format_tau
from .vcs import DEFAULT_MAX_FILE_BYTES, VCSError, build_fixture_repo

EXIT_OK, EXIT_CONFIG, EXIT_REPO = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _sweep(text: str) -> tuple[float, float, float]:
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected START:STOP:STEP") from None
    return start, stop, step


def _formats(text: str) -> frozenset[str]:
    items = frozenset(p.strip() for p in text.split(",") if p.strip())
    bad = items - FORMATS
    if bad or not items:
        raise argparse.ArgumentTypeError(f"formats are a comma list of {', '.join(sorted(FORMATS))}")
    return items


def corpus_names() -> list[str]:
    root = resources.files("changepat") / "corpora"
    return sorted(p.name for p in root.iterdir() if p.is_dir())


def corpus_path(name: str) -> Path:
    path = Path(str(resources.files("changepat") / "corpora" / name))
    if not path.is_dir():
        raise KeyError(name)
    return path


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="changepat", description="Mine structural change patterns from git history.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="analyze a repository")
    run.add_argument("--repo", default=".")
    run.add_argument("--range", dest="rev_range", default="HEAD")
    run.add_argument("--profile", default="minilang", help="built-in name or profile file")
    run.add_argument("--tau", type=float, default=0.9)
    run.add_argument("--tau-sweep", type=_sweep, metavar="START:STOP:STEP")
    run.add_argument("--side-rule", choices=SIDE_RULES, default="after",
                     help="which side mutations are compared and generalized by")
    run.add_argument("--out", dest="output_dir")
    run.add_argument("--format", dest="formats", type=_formats, default=FORMATS)
    run.add_argument("--include-initial", action="store_true",
                     help="pair files of the root commit with empty text")
    run.add_argument("--max-file-bytes", type=int, default=DEFAULT_MAX_FILE_BYTES)

    ex = sub.add_parser("explain", help="describe one group of a groups.json report")
    ex.add_argument("report")
    ex.add_argument("group_id")

    mk = sub.add_parser("make-repo", help="build a git repository from numbered snapshot directories")
    mk.add_argument("snapshots")
    mk.add_argument("repo")

    demo = sub.add_parser("demo", help="materialize a bundled demo corpus as a git repository")
    demo.add_argument("name", help="one of: " + ", ".join(corpus_names()))
    demo.add_argument("repo")

    ps = sub.add_parser("parse", help="print the aterm of a source file")
    ps.add_argument("file")
    ps.add_argument("--profile", default="minilang")
    return ap


def _cmd_run(args) -> int:
    cfg = RunConfig(
        repo_path=args.repo,
        rev_range=args.rev_range,
        profile=args.profile,
        tau=args.tau,
        tau_sweep=args.tau_sweep,
        side_rule=args.side_rule,
        output_dir=args.output_dir,
        formats=args.formats,
        include_initial=args.include_initial,
        max_file_bytes=args.max_file_bytes,
    )
    report = run_pipeline(cfg)
    if not args.output_dir:
        sys.stdout.write(report.patterns_text())
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(
        f"{report.pairs} version pairs, {len(report.changes)} changes, "
        f"{len(report.groups)} groups at tau={format_tau(report.tau)}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_explain(args) -> int:
    try:
        data = json.loads(Path(args.report).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read report {args.report}: {exc}") from None
    try:
        sys.stdout.write(explain_group(data, args.group_id))
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    return EXIT_OK


def _cmd_make_repo(args) -> int:
    if not Path(args.snapshots).is_dir():
        raise ConfigError(f"no such snapshot directory: {args.snapshots}")
    for commit in build_fixture_repo(args.snapshots, args.repo):
        print(commit)
    return EXIT_OK


def _cmd_demo(args) -> int:
    try:
        src = corpus_path(args.name)
    except KeyError:
        raise ConfigError(f"unknown corpus {args.name!r}; choose from {', '.join(corpus_names())}") from None
    for commit in build_fixture_repo(src, args.repo):
        print(commit)
    return EXIT_OK


def _cmd_parse(args) -> int:
    profile = resolve_profile(args.profile)
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(exc)) from None
    try:
        print(render_aterm(parse_source(text, profile)))
    except SourceSyntaxError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK


COMMANDS = {
    "run": _cmd_run,
    "explain": _cmd_explain,
    "make-repo": _cmd_make_repo,
    "demo": _cmd_demo,
    "parse": _cmd_parse,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ProfileError) as exc:
        print(f"changepat: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except VCSError as exc:
        print(f"changepat: {exc}", file=sys.stderr)
        return EXIT_REPO


if __name__ == "__main__":
    sys.exit(main())
