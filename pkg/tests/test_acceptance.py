"""One exact check per acceptance criterion, at levels r = 3 and r = 5.

Each test records a single PASS/FAIL line (shown in the terminal summary and
printed when run as a script).  Every comparison is exact equality in Q(q)
or in the tangle basis; there is no numerical tolerance anywhere.
"""

import json
import os
import subprocess
import sys
import time

import pytest

from tlfunctor import jw
from tlfunctor.appendix import appendix_oracles
from tlfunctor.cli import main as cli_main
from tlfunctor.errors import PoleAtRootOfUnity
from tlfunctor.extended import (
    ExtMorphism,
    fullness_check,
    parse,
    relations_well_defined,
    verify_c_d_images,
    verify_domination,
    verify_quotient_relations,
)
from tlfunctor.functor import context, verify_generators, verify_idempotent_images
from tlfunctor.scalars import RingTag, quantum_int, scalar_from_json
from tlfunctor.tangles import TLMorphism, catalan, enumerate_tangles
from tlfunctor.uq import matrix_from_json, named_morphism
from tlfunctor.verify import suite_jw_generic, suite_jw_recursions, suite_uq

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

LEVELS = (3, 5)


def record(number, title, ok, detail):
    line = f"CRITERION {number} {'PASS' if ok else 'FAIL'}  {title}  [{detail}]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def from_reports(number, title, reports):
    parts, failed = [], []
    for rep in reports:
        n_ok = sum(c.passed for c in rep.checks)
        parts.append(f"{rep.title}: {n_ok}/{len(rep.checks)}")
        failed += [f"{rep.title}/{c.name}" for c in rep.failures]
    ok = not failed and all(rep.checks for rep in reports)
    detail = "; ".join(parts) + ("; failing: " + " | ".join(failed) if failed else "")
    return record(number, title, ok, detail)


def test_criterion_01_generic_idempotents():
    reps = [suite_jw_generic(r) for r in LEVELS]
    assert from_reports(1, "generic-ring idempotent identities", reps)


def test_criterion_02_recursions():
    reps = [suite_jw_recursions(r) for r in LEVELS]
    assert from_reports(2, "recursions agree with definitions; termwise specialization", reps)


def test_criterion_03_specialization_boundary():
    bad = []
    for r in LEVELS:
        R = RingTag.root(r)
        for m in range(2 * r):
            try:
                jw.build_f(m, R)
                built = True
            except PoleAtRootOfUnity:
                built = False
            if built != (m <= r - 1 or m == 2 * r - 1):
                bad.append(f"r={r} m={m}")
    detail = "f_m fails exactly for r <= m <= 2r-2 at r=3,5" if not bad else "wrong at " + ", ".join(bad)
    assert record(3, "specialization boundary", not bad, detail)


def test_criterion_04_quantum_group():
    reps = [suite_uq(r) for r in LEVELS]
    assert from_reports(4, "quantum-group modules, dimension table, module relations", reps)


def test_criterion_05_appendix():
    reps = [appendix_oracles(r) for r in LEVELS]
    assert from_reports(5, "closed-form identities for embedded bases", reps)


def test_criterion_06_functor():
    reps = [verify_idempotent_images(r) for r in LEVELS] + [verify_generators(r) for r in LEVELS]
    assert from_reports(6, "images of idempotents, scalar factors, two-route projectors", reps)


def test_criterion_07_well_defined():
    reps = [relations_well_defined(r) for r in LEVELS]
    assert from_reports(7, "defining relations of the extended generators hold", reps)


def test_criterion_08_c_d_scalars():
    reps = [verify_c_d_images(r) for r in LEVELS]
    assert from_reports(8, "images of c and d with exact scalars", reps)


def test_criterion_09_domination():
    reps = [verify_domination(r, 6) for r in LEVELS]
    assert from_reports(9, "domination: counts, identity matrix, diagram identity", reps)


def test_criterion_10_fullness():
    not_full = []
    ranks = 0
    for m in range(6):
        for m2 in range(6):
            res = fullness_check(m, m2, 3)
            ranks += res.dimension
            if not res.full:
                not_full.append(f"({m},{m2}) {res.rank}/{res.dimension}")
    named = fullness_check(5, 1, 3)
    witness = fullness_check(5, 2, 3)
    gap = named.tangle_rank < named.rank
    detail = (
        f"all 36 pairs at r=3 FULL: {not not_full}"
        + (f" (not full: {', '.join(not_full)})" if not_full else "")
        + f"; (5,1): tangle rank {named.tangle_rank} vs rank {named.rank} of {named.dimension}"
        + f"; (5,2): tangle rank {witness.tangle_rank} vs rank {witness.rank} of {witness.dimension}"
    )
    assert record(10, "fullness at r=3 and a tangle-only rank gap at (5,1)", not not_full and gap, detail)


def test_criterion_11_quotient_relations():
    reps = [verify_quotient_relations(r) for r in LEVELS]
    assert from_reports(11, "relations in the quotient category", reps)


def _round_trips():
    G, R = RingTag.generic(), RingTag.root(5)
    ok = True
    for ring in (G, R):
        f = jw.build_f(4, ring)
        ok &= TLMorphism.from_json(json.loads(json.dumps(f.to_json()))) == f
        s = quantum_int(3, ring) / quantum_int(2, ring)
        ok &= scalar_from_json(json.loads(json.dumps(s.to_json()))) == s
    g = jw.build_g(6, R)
    ok &= TLMorphism.from_json(json.loads(json.dumps(g.to_json()))) == g
    mm = named_morphism("gamma", 6, 5, "-")
    ok &= matrix_from_json(json.loads(json.dumps(mm.to_json())), 5) == mm.matrix
    w = parse("(p+ * id:1) ; (id:3 * cap) + (p- * id:1) ; (id:3 * cap)", 5)
    back = ExtMorphism.from_json(json.loads(json.dumps(w.to_json())))
    ok &= back.to_json() == w.to_json() and back.image(context(5)) == w.image(context(5))
    return ok


def _exit_codes():
    quiet = open(os.devnull, "w")
    old = sys.stdout, sys.stderr
    sys.stdout = sys.stderr = quiet
    try:
        codes = {
            "ok": cli_main(["verify", "--r", "3", "--suite", "scalars"]),
            "even": cli_main(["verify", "--r", "4", "--suite", "scalars"]),
            "suite": cli_main(["verify", "--suite", "unknown"]),
            "pole": cli_main(["idempotent", "--r", "3", "f", "3"]),
            "parse": cli_main(["eval", "--r", "3", "p+ ; (i+"]),
            "shape": cli_main(["eval", "--r", "3", "p+ ; p+"]),
            "full": cli_main(["fullness", "--r", "3", "5", "2", "--budget", "0"]),
        }
    finally:
        sys.stdout, sys.stderr = old
        quiet.close()
    want = {"ok": 0, "even": 2, "suite": 2, "pole": 2, "parse": 2, "shape": 2, "full": 0}
    return codes == want, codes


def test_criterion_12_infrastructure():
    catalan_ok = all(
        len(enumerate_tangles(m, n)) == (catalan((m + n) // 2) if (m + n) % 2 == 0 else 0)
        for m in range(11)
        for n in range(11 - m)
    )
    json_ok = _round_trips()
    codes_ok, codes = _exit_codes()
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "tlfunctor", "verify", "--r", "3", "--suite", "all", "--format", "json"],
        capture_output=True,
        text=True,
    )
    elapsed = time.perf_counter() - start
    report = json.loads(proc.stdout)
    # exit 1 iff some identity in the run is false
    consistent = proc.returncode == (0 if report["ok"] else 1)
    timely = elapsed < 15 * 60
    n_ok = sum(c["passed"] for c in report["checks"])
    detail = (
        f"catalan {catalan_ok}; json {json_ok}; exit codes {codes_ok} {codes}; "
        f"verify --suite all at r=3 finished in {elapsed:.0f}s with exit {proc.returncode} "
        f"({n_ok}/{len(report['checks'])} identities true)"
    )
    ok = catalan_ok and json_ok and codes_ok and consistent and timely
    assert record(12, "tangle counts, JSON round trips, exit codes, full run time", ok, detail)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
