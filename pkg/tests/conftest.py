from __future__ import annotations

import oracles
from fspv.lts import ERROR, Lts


def edges_of(lts: Lts) -> list[list[tuple[str, object]]]:
    """Per-state ``(label, target)`` lists in the oracle's representation."""
    return [[(lab, oracles.ERR if t == ERROR else t) for lab, t in lts.edges(s)] for s in range(lts.num_states)]


def to_oracle(lts: Lts) -> oracles.OLts:
    return oracles.OLts(edges_of(lts), set(lts.end_states), set(lts.stop_states))


def same_lts(lts: Lts, expected: oracles.OLts) -> bool:
    return edges_of(lts) == expected.edges and set(lts.end_states) == expected.end


# PASS/FAIL lines recorded by tests/test_acceptance.py
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
