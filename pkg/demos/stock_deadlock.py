"""Find and read the deadlock in the two-stock transfer system.

Run:  python demos/stock_deadlock.py
"""

from __future__ import annotations

from fspv import build_target, verify
from fspv.corpus import load_fixture


def main() -> None:
    fx = load_fixture("stock")
    lts = build_target(fx.spec(), "STOCKSYSTEM")
    print(f"STOCKSYSTEM: {lts.num_states} states, {lts.num_transitions} transitions")

    report = verify(fx.spec(), "STOCKSYSTEM")
    print(f"result: {report.result}")
    for v in report.violations:
        print(f"{v.kind} ({v.note}), shortest trace:")
        for i, label in enumerate(v.trace, 1):
            print(f"  {i:>2}  {label}")

    # Both managers stop once the transfer is done: stock A hits zero, stock B
    # hits its cap.  The system has nowhere left to go, so the deadlock is the
    # intended end of the protocol rather than a bug in the wiring.
    stuck = [s for s in range(lts.num_states) if not lts.transitions[s]]
    print(f"states without transitions: {stuck}")


if __name__ == "__main__":
    main()
