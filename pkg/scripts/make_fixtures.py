"""Regenerate the JSON fixtures shipped in src/gyrokit/data.

    python3 scripts/make_fixtures.py

The order-8 fixture is the first non-associative table (in canonical-form
order) produced by the exhaustive search.
"""

from __future__ import annotations

import json
from pathlib import Path

from gyrokit.core import Exhaustive, check_identities
from gyrokit.finite import cyclic, from_table
from gyrokit.search import SearchOptions, search_all
from gyrokit.subquotient import enumerate_subgyrogroups, is_L_subgyrogroup
from gyrokit.topo import admissible_chain, build_model

DATA = Path(__file__).resolve().parents[1] / "src" / "gyrokit" / "data"


def write(name: str, payload) -> None:
    (DATA / name).write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")


def main() -> None:
    DATA.mkdir(exist_ok=True)
    write("z2.json", cyclic(2).to_json())
    z6 = cyclic(6)
    write("z6.json", z6.to_json())
    write("z6-model.json", {"table_ref": "z6.json", "base": [[0], [0, 3], list(range(6))]})
    write("z6-coset-model.json", {"table_ref": "z6.json", "base": [[0, 3], list(range(6))]})

    non_groups = search_all(SearchOptions(8, non_groups_only=True))
    g = from_table(non_groups[0].table)
    write("fixture8.json", g.to_json())
    write("fixture8_transcript.json", {
        "search": {"order": 8, "non_groups_found": len(non_groups)},
        "axioms": [r.to_dict() for r in g.reports],
        "identities": [r.to_dict() for r in check_identities(g, Exhaustive())],
        "nontrivial_gyrations": [list(p) for p in g.nontrivial_gyrations()],
        "is_group": g.is_group(),
    })
    write("fixture8_subgyro.json", [
        {"h": H.sorted(), "l_subgyrogroup": is_L_subgyrogroup(g, H)}
        for H in enumerate_subgyrogroups(g)
    ])

    full = list(range(8))
    models = {
        "fixture8-model.json": [full, [0, 1, 2, 3], [0, 1], [0]],
        "fixture8-coarse-model.json": [full, [0, 1, 4, 5], [0, 1]],
        "fixture8-chain-model.json": [full, [0, 4, 5], [0]],
    }
    chains = {}
    for name, base in models.items():
        write(name, {"table_ref": "fixture8.json", "base": base})
        m = build_model(g, base)
        chains[name] = [admissible_chain(m, U).to_json() for U in m.base]
    write("fixture8_chains.json", chains)


if __name__ == "__main__":
    main()
