from __future__ import annotations

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import to_oracle
from fspv.analyzer import check_deadlock, check_progress, check_safety, run_all, terminal_sets
from fspv.composer import build_target
from fspv.corpus import load_fixture, load_system
from fspv.errors import UnknownProgressLabel
from fspv.jsonreport import load_schema, report_from_json, report_to_json
from fspv.lts import ERROR, from_edges
from fspv.syntax import parse_text
from fspv.verify import verify

BAD = "BADDRIVER = (c[1].full.moveto[1] -> STOP).\n||BAD = (BADDRIVER || NOLOSS)."
GOOD = ("GOODDRIVER = (c[1].empty.loaded -> c[1].full.moveto[1] -> c[1].full.moveto[2] "
        "-> c[1].full.unloaded -> GOODDRIVER).\n||GOOD = (GOODDRIVER || c[1]:NOLOSS_Stock).")
CR = "||CR = (CARRIER || ROUTE).\nprogress UNLOAD = {waitforunloading}"


def stop():
    return build_target(parse_text("P = STOP."), "P")


# -- safety -------------------------------------------------------------------------

def test_bad_driver_violates_noloss():
    report = verify(load_system("noloss", extra=BAD), "BAD")
    assert [(v.kind, v.subject, v.trace) for v in report.violations if v.kind == "safety"] == [
        ("safety", "NOLOSS_Stock", ["c.1.full.moveto.1"])]


def test_good_driver_passes():
    report = verify(load_system("noloss", extra=GOOD), "GOOD")
    assert report.result == "PASS"
    assert report.stats.states == 4


def test_no_error_means_no_safety_violation():
    assert check_safety(build_target(load_fixture("carrier").spec(), "CARRIER")) is None


# -- deadlock -----------------------------------------------------------------------

def test_carrier_route_is_deadlock_free():
    assert check_deadlock(build_target(load_system("route", "carrier", extra=CR), "CR")) is None


def test_stocksystem_deadlock_trace():
    v = check_deadlock(build_target(load_fixture("stock").spec(), "STOCKSYSTEM"))
    assert v.trace.count("decrementStockA") == 2 and v.trace.count("incrementStockB") == 2
    assert {"stockEmptyA", "stockFullB"} <= set(v.trace)
    assert v.note == "terminal-STOP"


def test_stop_deadlocks_immediately():
    v = check_deadlock(stop())
    assert v.trace == [] and v.note == "terminal-STOP"


def test_end_state_is_not_a_deadlock():
    lts = build_target(parse_text("P = (a -> END)."), "P")
    assert check_deadlock(lts) is None
    assert terminal_sets(lts) == []


# -- terminal sets and progress -----------------------------------------------------

def test_carrier_route_single_terminal_set():
    sets = terminal_sets(build_target(load_system("route", "carrier", extra=CR), "CR"))
    assert len(sets) == 1 and len(sets[0][0]) == 28 and "waitforunloading" in sets[0][1]


def test_stop_terminal_set_is_empty():
    assert terminal_sets(stop()) == [(frozenset({0}), frozenset())]


def test_non_bottom_component_excluded():
    lts = build_target(parse_text("P = (a -> P | b -> Q),\nQ = (c -> Q)."), "P")
    assert terminal_sets(lts) == [(frozenset({1}), frozenset({"c"}))]


def test_progress_unload_holds():
    report = verify(load_system("route", "carrier", extra=CR), "CR")
    assert report.result == "PASS" and report.stats.states == 28


def test_progress_on_stop_fails_with_empty_cycle():
    with pytest.warns(UnknownProgressLabel):
        [v] = check_progress(stop(), [("ANY", ["a"])])
    assert (v.kind, v.subject, v.trace, v.cycle) == ("progress", "ANY", [], [])


def test_progress_cycle_is_a_lasso():
    lts = build_target(parse_text("P = (a -> Q),\nQ = (b -> c -> Q)."), "P")
    with pytest.warns(UnknownProgressLabel):
        [v] = check_progress(lts, [("D", ["d"])])
    assert v.trace == ["a"] and v.cycle == ["b", "c"]


def test_progress_send_after_relabel_warns():
    spec = parse_text(load_fixture("stock").text + "\nprogress SEND = {send}")
    with pytest.warns(UnknownProgressLabel):
        report = verify(spec, "STOCKSYSTEM")
    kinds = [v.kind for v in report.violations]
    assert kinds == ["deadlock", "progress"]
    assert report.violations[1].cycle == []
    assert any("send" in w for w in report.warnings)


def test_stocksystem_fails_with_one_deadlock():
    report = verify(load_fixture("stock").spec(), "STOCKSYSTEM")
    assert report.result == "FAIL" and [v.kind for v in report.violations] == ["deadlock"]


def test_stop_process_report():
    report = run_all(stop())
    assert report.result == "FAIL" and report.stats.states == 1


# -- random systems against path enumeration ------------------------------------------

@st.composite
def checked_lts(draw):
    n = draw(st.integers(1, 6))
    edges = [[] for _ in range(n)]
    for _ in range(draw(st.integers(0, 12))):
        s = draw(st.integers(0, n - 1))
        t = draw(st.one_of(st.integers(0, n - 1), st.just(ERROR))) if draw(st.booleans()) else draw(st.integers(0, n - 1))
        edges[s].append((draw(st.sampled_from(["a", "b", "c"])), t))
    ends = frozenset(draw(st.sets(st.integers(0, n - 1), max_size=2)))
    progress = draw(st.lists(st.sets(st.sampled_from(["a", "b", "c"]), min_size=1), max_size=2))
    return from_edges("R", edges, ends), [(f"G{i}", sorted(p)) for i, p in enumerate(progress)]


@pytest.mark.filterwarnings("ignore::fspv.errors.UnknownProgressLabel")
@settings(max_examples=500, deadline=None)
@given(checked_lts())
def test_report_matches_path_enumeration(case):
    lts, progress = case
    got = report_to_json(run_all(lts, progress))
    got["stats"]["elapsed_ms"] = 0.0
    want = oracles.report(to_oracle(lts), "R", progress)
    assert got == want


# -- JSON form ------------------------------------------------------------------------

def test_json_roundtrip_and_schema():
    spec = parse_text(load_fixture("stock").text + "\nprogress SEND = {send}")
    with pytest.warns(UnknownProgressLabel):
        report = verify(spec, "STOCKSYSTEM")
    data = report_to_json(report)
    jsonschema.validate(data, load_schema())
    back = report_from_json(data)
    assert back == report


def test_json_rejects_inconsistent_result():
    data = report_to_json(run_all(stop()))
    data["result"] = "PASS"
    with pytest.raises(ValueError):
        report_from_json(data)
