"""Bundled case-study models with golden expectations.

Layout: ``corpus/<name>.fsp`` plus, for gated fixtures, ``<name>.expect.json``
(target name and golden JSON report) and ``<name>.aut.golden``.  The header
comment of every ``.fsp`` names its source and lists deviations from the
printed listing.  Goldens are written by ``scripts/generate_goldens.py`` from
independent oracles, never by hand.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

from .analyzer import Report
from .errors import DuplicateDefinition
from .jsonreport import report_to_json
from .syntax import check_references, parse_text
from .syntax.tree import Spec

SOURCES = ("paper-verbatim", "paper-adapted", "derived", "exploratory")

_SOURCE = re.compile(r"^//\s*source:\s*([a-z-]+)")
_NOTE = re.compile(r"^//\s+-\s+(.*)$")


def corpus_dir() -> Path:
    return Path(str(resources.files("fspv").joinpath("corpus")))


@dataclass
class Fixture:
    name: str
    path: Path
    source: str
    text: str
    notes: list[str] = field(default_factory=list)
    target: Optional[str] = None
    expected: Optional[dict] = None  # golden JSON report
    aut_golden: Optional[str] = None

    @property
    def gating(self) -> bool:
        return self.expected is not None

    @property
    def aut_digest(self) -> Optional[str]:
        if self.aut_golden is None:
            return None
        return hashlib.sha256(self.aut_golden.encode()).hexdigest()

    def spec(self) -> Spec:
        return parse_text(self.text)


def _header(text: str) -> tuple[str, list[str]]:
    source, notes = None, []
    for line in text.splitlines():
        if not line.startswith("//"):
            break
        m = _SOURCE.match(line)
        if m:
            source = m.group(1)
            continue
        m = _NOTE.match(line)
        if m:
            notes.append(m.group(1).strip())
    if source not in SOURCES:
        raise ValueError(f"fixture header must declare a source, one of {', '.join(SOURCES)}")
    return source, notes


def load_fixture(name: str, directory: Optional[Path] = None) -> Fixture:
    directory = corpus_dir() if directory is None else Path(directory)
    path = directory / f"{name}.fsp"
    text = path.read_text()
    source, notes = _header(text)
    fx = Fixture(name, path, source, text, notes)
    expect = directory / f"{name}.expect.json"
    if expect.exists():
        data = json.loads(expect.read_text())
        fx.target = data["target"]
        fx.expected = data["report"]
    golden = directory / f"{name}.aut.golden"
    if golden.exists():
        fx.aut_golden = golden.read_text()
    return fx


def load_corpus(directory: Optional[Path] = None) -> list[Fixture]:
    """Every fixture in the corpus directory, sorted by name; each must parse."""
    directory = corpus_dir() if directory is None else Path(directory)
    fixtures = [load_fixture(p.stem, directory) for p in sorted(directory.glob("*.fsp"))]
    for fx in fixtures:
        fx.spec()
    return fixtures


def merge_specs(*specs: Spec) -> Spec:
    """Union of several specs.  Repeated names are allowed only with identical definitions."""
    consts: dict[str, int] = {}
    ranges: dict[str, tuple[int, int]] = {}
    groups: dict[str, dict[str, Any]] = {"process": {}, "composite": {}, "progress": {}}
    properties: set[str] = set()

    def put(table: dict, name: str, value) -> None:
        if name in table and table[name] != value:
            raise DuplicateDefinition(name)
        table[name] = value

    for s in specs:
        for k, v in s.constants.items():
            put(consts, k, v)
        for k, v in s.ranges.items():
            put(ranges, k, v)
        for p in s.processes:
            put(groups["process"], p.name, p)
        for c in s.composites:
            put(groups["composite"], c.name, c)
        for g in s.progress:
            put(groups["progress"], g.name, g)
        properties |= s.properties
    merged = Spec(consts, ranges, tuple(groups["process"].values()), tuple(groups["composite"].values()),
                  frozenset(properties), tuple(groups["progress"].values()))
    check_references(merged)
    return merged


def load_system(*names: str, extra: str = "") -> Spec:
    """Merge the named fixtures with an extra FSP fragment (e.g. a composite over them)."""
    specs = [load_fixture(n).spec() for n in names]
    if extra:
        specs.append(parse_text(extra, check=False))
    return merge_specs(*specs)


@dataclass
class Comparison:
    diffs: list[str]

    @property
    def ok(self) -> bool:
        return not self.diffs

    def __bool__(self) -> bool:
        return self.ok


def _diff(path: str, want, got, out: list[str]) -> None:
    if isinstance(want, dict) and isinstance(got, dict):
        for k in sorted(set(want) | set(got)):
            sub = f"{path}.{k}" if path else k
            if k not in got:
                out.append(f"{sub}: missing")
            elif k not in want:
                out.append(f"{sub}: unexpected {got[k]!r}")
            else:
                _diff(sub, want[k], got[k], out)
    elif isinstance(want, list) and isinstance(got, list):
        if len(want) != len(got):
            out.append(f"{path}: expected {len(want)} items, got {len(got)}")
        for i, (w, g) in enumerate(zip(want, got)):
            _diff(f"{path}[{i}]", w, g, out)
    elif want != got:
        out.append(f"{path}: expected {want!r}, got {got!r}")


def golden_compare(expected: Union[Fixture, dict], report: Union[Report, dict]) -> Comparison:
    """Field-by-field comparison of a fresh report against a golden one.

    ``stats.elapsed_ms`` is ignored; traces are compared label by label.
    """
    if isinstance(expected, Fixture):
        if expected.expected is None:
            raise ValueError(f"fixture {expected.name} has no golden report")
        expected = expected.expected
    got = report_to_json(report) if isinstance(report, Report) else report
    want = json.loads(json.dumps(expected))
    got = json.loads(json.dumps(got))
    for d in (want, got):
        d.get("stats", {}).pop("elapsed_ms", None)
    out: list[str] = []
    _diff("", want, got, out)
    return Comparison(out)
