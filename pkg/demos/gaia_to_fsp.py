"""Translate the carrier's Gaia liveness expressions into FSP-lite and check them.

Run:  python demos/gaia_to_fsp.py
"""

from __future__ import annotations

from fspv import compile_process, format_spec, parse_text, run_all
from fspv.corpus import corpus_dir
from fspv.gaia import activity_map, parse_liveness, to_fsp
from fspv.lts import check_deterministic


def main() -> None:
    source = (corpus_dir() / "move_full.gaia").read_text()
    print(source)

    # the listing uses '!' between alternatives; read it as ordinary choice
    role = parse_liveness(source, bang_as_choice=True)
    fsp = format_spec(to_fsp(role))
    print(fsp)

    spec = parse_text(fsp)
    for name in spec.targets:
        lts = compile_process(spec, name)
        check_deterministic(lts)
        report = run_all(lts)
        print(f"{name}: {lts.num_states} states, {lts.num_transitions} transitions, {report.result}")

    print("activities:", ", ".join(sorted(activity_map(role).values())))


if __name__ == "__main__":
    main()
