"""Write corpus goldens (<name>.expect.json, <name>.aut.golden) from tests/oracles.py.

The oracles expand every model by hand and never call fspv, so the goldens
check the library rather than echo it.  Run from the repository root:

    python3 scripts/generate_goldens.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

import oracles  # noqa: E402

CORPUS = ROOT / "src" / "fspv" / "corpus"

STOCK_WIRING = {"receive": "decrementStockA", "send": "incrementStockB"}


def fixtures():
    """name -> (target, oracle LTS, safety subject)."""
    stock = oracles.naive_product([oracles.relabel(oracles.stock_full(), STOCK_WIRING),
                                   oracles.relabel(oracles.stock_empty(), STOCK_WIRING)])
    return {
        "route": ("ROUTE", oracles.route(), "ERROR"),
        "carrier": ("CARRIER", oracles.carrier(), "ERROR"),
        "stock": ("STOCKSYSTEM", stock, "ERROR"),
        "noloss": ("NOLOSS_Stock", oracles.noloss_stock(), "NOLOSS_Stock"),
        "loader": ("LOADER", oracles.self_loop("waitforloading"), "ERROR"),
        "unloader": ("UNLOADER", oracles.self_loop("waitforunloading"), "ERROR"),
    }


def main() -> None:
    for name, (target, lts, subject) in fixtures().items():
        expect = {"target": target, "report": oracles.report(lts, target, subject=subject)}
        (CORPUS / f"{name}.expect.json").write_text(json.dumps(expect, indent=2) + "\n")
        (CORPUS / f"{name}.aut.golden").write_text(oracles.aut(lts))
        print(f"{name}: {target} {lts.n} states, {lts.transitions} transitions")


if __name__ == "__main__":
    main()
