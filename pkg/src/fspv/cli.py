"""``fspv`` command line: check, export, explore and translate Gaia liveness.

Exit codes: 0 pass, 1 violations found, 2 input/syntax/semantic error,
3 state limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import warnings
from pathlib import Path
from typing import Optional, TextIO

from . import gaia
from .analyzer import Report, Violation
from .compiler import compile_process, default_limit
from .composer import build_target
from .errors import FspError, StateLimitExceeded
from .jsonreport import report_to_json
from .lts import ERROR, Lts, check_deterministic, to_aut, to_dot
from .syntax import format_spec, parse_text
from .syntax.tree import Spec
from .verify import verify

EXIT_PASS, EXIT_FAIL, EXIT_ERROR, EXIT_LIMIT = 0, 1, 2, 3


class _Abort(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _Abort(EXIT_ERROR, f"{path}: cannot read: {exc.strerror or exc}") from None


def _load(path: str) -> Spec:
    text = _read(path)
    try:
        return parse_text(text)
    except FspError as exc:
        raise _Abort(EXIT_ERROR, f"{path}:{exc}") from None


def _pick_target(spec: Spec, target: Optional[str]) -> str:
    """Explicit target, else the last composite, else the first process."""
    if target:
        if target not in spec.targets:
            raise _Abort(EXIT_ERROR, f"no process or composite named {target!r}")
        return target
    if spec.composites:
        return spec.composites[-1].name
    if spec.processes:
        return spec.processes[0].name
    raise _Abort(EXIT_ERROR, "the input defines no process")


def _limit(args) -> int:
    return args.limit if args.limit is not None else default_limit()


def _build(spec: Spec, target: str, limit: int) -> Lts:
    try:
        return build_target(spec, target, limit=limit)
    except StateLimitExceeded as exc:
        raise _Abort(EXIT_LIMIT, str(exc)) from None
    except FspError as exc:
        raise _Abort(EXIT_ERROR, str(exc)) from None


def _export(lts: Lts, dot: Optional[str], aut: Optional[str]) -> None:
    for path, render in ((dot, to_dot), (aut, to_aut)):
        if path:
            try:
                Path(path).write_text(render(lts))
            except OSError as exc:
                raise _Abort(EXIT_ERROR, f"{path}: cannot write: {exc.strerror or exc}") from None


def _print_steps(labels: list[str], out: TextIO, indent: str = "  ") -> None:
    if not labels:
        print(f"{indent}(empty)", file=out)
    for i, label in enumerate(labels, 1):
        print(f"{indent}{i:>3}  {label}", file=out)


def format_violation(v: Violation, out: TextIO) -> None:
    head = f"{v.kind} violation: {v.subject}"
    if v.note:
        head += f" ({v.note})"
    print(head, file=out)
    print("  trace:", file=out)
    _print_steps(v.trace, out, "    ")
    if v.cycle is not None:
        print("  cycle:", file=out)
        _print_steps(v.cycle, out, "    ")


def format_report(report: Report, out: TextIO) -> None:
    s = report.stats
    print(f"{report.target}: {report.result}", file=out)
    print(f"  states {s.states}, transitions {s.transitions}, alphabet {s.alphabet}, "
          f"terminal sets {report.terminal_sets}, {s.elapsed_ms} ms", file=out)
    for w in report.warnings:
        print(f"warning: {w}", file=out)
    for v in report.violations:
        format_violation(v, out)


# -- commands ------------------------------------------------------------------

def cmd_check(args, out: TextIO) -> int:
    spec = _load(args.file)
    target = _pick_target(spec, args.target)
    try:
        # warnings are part of the report output, not the interpreter's
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = verify(spec, target, limit=_limit(args))
    except StateLimitExceeded as exc:
        raise _Abort(EXIT_LIMIT, str(exc)) from None
    except FspError as exc:
        raise _Abort(EXIT_ERROR, str(exc)) from None
    if args.dot or args.aut:
        _export(_build(spec, target, _limit(args)), args.dot, args.aut)
    if args.json:
        json.dump(report_to_json(report), out, indent=2)
        print(file=out)
    else:
        format_report(report, out)
    return EXIT_FAIL if report.violations else EXIT_PASS


def cmd_export(args, out: TextIO) -> int:
    spec = _load(args.file)
    target = _pick_target(spec, args.target)
    lts = _build(spec, target, _limit(args))
    if not (args.dot or args.aut):
        out.write(to_aut(lts))
    _export(lts, args.dot, args.aut)
    return EXIT_PASS


def cmd_gaia(args, out: TextIO) -> int:
    text = _read(args.file)
    try:
        role = gaia.parse_liveness(text, bang_as_choice=args.gaia_bang_as_choice)
        spec = gaia.to_fsp(role)
        fsp_text = format_spec(spec)
        emitted = parse_text(fsp_text)
        for name in emitted.targets:
            check_deterministic(compile_process(emitted, name, _limit(args)))
    except StateLimitExceeded as exc:
        raise _Abort(EXIT_LIMIT, str(exc)) from None
    except FspError as exc:
        raise _Abort(EXIT_ERROR, f"{args.file}:{exc}") from None
    header = [f"// activity {label} = {name}" for label, name in gaia.activity_map(role).items()]
    result = "\n".join(header) + "\n\n" + fsp_text
    if args.out:
        try:
            Path(args.out).write_text(result)
        except OSError as exc:
            raise _Abort(EXIT_ERROR, f"{args.out}: cannot write: {exc.strerror or exc}") from None
    else:
        out.write(result)
    return EXIT_PASS


class Explorer:
    """Step through an LTS by hand.

    Commands: a menu number takes that transition, ``back`` undoes one step,
    ``trace`` prints the path, ``random N`` takes up to N uniformly random
    steps, ``quit`` leaves.  In ERROR or a state without transitions only
    ``back`` and ``quit`` are accepted.
    """

    def __init__(self, lts: Lts, seed: int = 0):
        self.lts = lts
        self.rng = random.Random(seed)
        self.state = lts.initial
        self.history: list[tuple[int, str]] = []  # (previous state, label taken)

    @property
    def trace(self) -> list[str]:
        return [label for _, label in self.history]

    def options(self) -> list[tuple[str, int]]:
        return [] if self.state == ERROR else self.lts.edges(self.state)

    def stuck(self) -> bool:
        return not self.options()

    def take(self, choice: int) -> None:
        label, target = self.options()[choice]
        self.history.append((self.state, label))
        self.state = target

    def back(self) -> bool:
        if not self.history:
            return False
        self.state, _ = self.history.pop()
        return True

    def random_walk(self, steps: int) -> int:
        taken = 0
        while taken < steps and not self.stuck():
            self.take(self.rng.randrange(len(self.options())))
            taken += 1
        return taken

    def _show(self, out: TextIO) -> None:
        if self.state == ERROR:
            print("*** ERROR reached: back or quit ***", file=out)
            return
        if self.stuck():
            kind = "end" if self.state in self.lts.end_states else "deadlock"
            print(f"*** terminal state {self.state} ({kind}): back or quit ***", file=out)
            return
        print(f"state {self.state}", file=out)
        for i, (label, target) in enumerate(self.options(), 1):
            mark = "  -> ERROR" if target == ERROR else ""
            print(f"  {i}. {label}{mark}", file=out)

    def run(self, inp: TextIO, out: TextIO) -> None:
        self._show(out)
        while True:
            print("> ", end="", file=out)
            out.flush()
            line = inp.readline()
            if not line:
                print(file=out)
                return
            words = line.split()
            if not words:
                continue
            cmd = words[0].lower()
            if cmd in ("quit", "q", "exit"):
                return
            if cmd == "back":
                if not self.back():
                    print("already at the initial state", file=out)
                self._show(out)
                continue
            if self.stuck():
                print("only back or quit are possible here", file=out)
                continue
            if cmd == "trace":
                _print_steps(self.trace, out)
            elif cmd == "random":
                try:
                    n = int(words[1]) if len(words) > 1 else 1
                except ValueError:
                    print("usage: random N", file=out)
                    continue
                taken = self.random_walk(max(n, 0))
                print(f"took {taken} random step(s)", file=out)
                _print_steps(self.trace, out)
                self._show(out)
            elif cmd.isdigit() and 1 <= int(cmd) <= len(self.options()):
                self.take(int(cmd) - 1)
                self._show(out)
            else:
                print(f"unknown command {line.strip()!r}; enter 1..{len(self.options())}, "
                      "back, trace, random N or quit", file=out)


def cmd_explore(args, out: TextIO, inp: Optional[TextIO] = None) -> int:
    spec = _load(args.file)
    target = _pick_target(spec, args.target)
    lts = _build(spec, target, _limit(args))
    Explorer(lts, args.seed).run(inp or sys.stdin, out)
    return EXIT_PASS


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fspv", description="Check FSP-lite models of agent systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_cmd(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("file", help="FSP-lite source ('-' for standard input)")
        p.add_argument("--target", help="process or composite to build (default: last composite)")
        p.add_argument("--limit", type=int, help="state cap (default: FSPV_LIMIT or 1048576)")
        return p

    p = model_cmd("check", "run safety, deadlock and progress checks")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--dot", help="also write the LTS as Graphviz DOT")
    p.add_argument("--aut", help="also write the LTS in Aldebaran format")

    p = model_cmd("export", "write the LTS as DOT and/or .aut (.aut on stdout if neither is given)")
    p.add_argument("--dot")
    p.add_argument("--aut")

    p = model_cmd("explore", "step through the LTS interactively")
    p.add_argument("--seed", type=int, default=0, help="seed for 'random N' (default 0)")

    p = sub.add_parser("gaia", help="translate Gaia liveness expressions to FSP-lite")
    p.add_argument("file")
    p.add_argument("--out", help="output .fsp path (default: standard output)")
    p.add_argument("--limit", type=int)
    p.add_argument("--gaia-bang-as-choice", action="store_true",
                   help="read the non-standard '!' operator as choice '|'")
    return parser


def main(argv: Optional[list[str]] = None, stdout: Optional[TextIO] = None,
         stderr: Optional[TextIO] = None, stdin: Optional[TextIO] = None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args, out)
        if args.command == "export":
            return cmd_export(args, out)
        if args.command == "explore":
            return cmd_explore(args, out, stdin)
        return cmd_gaia(args, out)
    except _Abort as exc:
        print(f"fspv: {exc}", file=err)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
