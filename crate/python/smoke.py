#!/usr/bin/env python3
"""Smoke test for the graphsplice Python extension.

Builds nothing itself: it locates the cdylib produced by
`cargo build -p graphsplice-py`, imports it as a module, and checks a few
known answers on two small plumbing diagrams. Run from anywhere:

    cargo build -p graphsplice-py
    python3 python/smoke.py
"""

import json
import pathlib
import shutil
import sys
import sysconfig
import tempfile

REPO = pathlib.Path(__file__).resolve().parent.parent

E8 = """
# Poincare sphere: central -2 vertex with arms of length 1, 2, 4.
v c -2
v a1 -2
v b1 -2
v b2 -2
v c1 -2
v c2 -2
v c3 -2
v c4 -2
e c a1
e c b1
e b1 b2
e c c1
e c1 c2
e c2 c3
e c3 c4
"""

DUMBBELL = """
v l1 -2
v l2 -2
v u -3
v w -3
v r1 -2
v r2 -2
e l1 u
e l2 u
e u w
e w r1
e w r2
"""


def find_cdylib():
    candidates = []
    for profile in ("debug", "release"):
        d = REPO / "target" / profile
        candidates += sorted(d.glob("libgraphsplice.so"))
        candidates += sorted(d.glob("libgraphsplice.dylib"))
        candidates += sorted(d.glob("graphsplice.dll"))
    if not candidates:
        sys.exit("cdylib not found; run `cargo build -p graphsplice-py` first")
    # Prefer the most recently built artifact.
    return max(candidates, key=lambda p: p.stat().st_mtime)


def import_module(tmp):
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    target = pathlib.Path(tmp) / f"graphsplice{suffix}"
    shutil.copy2(find_cdylib(), target)
    sys.path.insert(0, tmp)
    import graphsplice

    return graphsplice


def main():
    with tempfile.TemporaryDirectory() as tmp:
        gs = import_module(tmp)

        report = json.loads(gs.derive(DUMBBELL))
        assert report["h1_order"] == "48", report["h1_order"]
        assert report["det"] == "48"
        assert report["zhs"] is False
        assert len(report["splice"]["nodes"]) == 2

        e8_report = json.loads(gs.derive(E8))
        assert e8_report["h1_order"] == "1"
        assert gs.zhs(E8) is True

        verdict = json.loads(gs.check(E8))
        assert verdict["verdict"] is True
        assert verdict["input_digest"] == e8_report["input_digest"]

        decomp = json.loads(gs.decomp(DUMBBELL))
        assert decomp["reduced_matrix"] == [["-2", "1"], ["1", "-2"]]

        split = json.loads(gs.cover(DUMBBELL, "u-w"))
        assert split["degree"] == "48"
        assert split["d0"] == "2" and split["d1"] == "2"
        assert split["sides"][0]["piece"]["order"] == "24"

        plan = json.loads(gs.uac(DUMBBELL))["cover_plan"]
        assert plan["type"] == "split"
        assert plan["children"][0]["type"] == "brieskorn"
        assert plan["children"][0]["weights"] == ["2", "2", "4"]

        uac_e8 = json.loads(gs.uac(E8))["cover_plan"]
        assert uac_e8 == {"type": "brieskorn", "weights": ["2", "3", "5"],
                          "orientation_reversed": False, "degree": "1"}

        dot = gs.render_dot(E8)
        assert dot.startswith("digraph") and '(+)' in dot
        assert 'taillabel="5"' in dot

        splice = json.loads(gs.splice(DUMBBELL))
        assert [n["sign"] for n in splice["nodes"]] == [1, 1]

        # Canonical text form round-trips.
        canon = gs.normalize(DUMBBELL)
        assert gs.normalize(canon) == canon
        assert json.loads(gs.derive(canon))["h1_order"] == "48"

        # Error mapping: bad grammar and bad edge specs raise ValueError.
        for bad_call in (lambda: gs.derive("v a\n"),
                         lambda: gs.cover(DUMBBELL, "u-z")):
            try:
                bad_call()
            except ValueError:
                pass
            else:
                raise AssertionError("expected ValueError")

        print("smoke ok")


if __name__ == "__main__":
    main()
