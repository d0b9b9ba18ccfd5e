"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
Time bounds are pinned below; all equalities are exact.
"""

import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path


sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import load_fixture, minimal_sphere, random_cochain, random_complex, random_form  # noqa: E402
from sullivan.apl import E, I, S  # noqa: E402
from sullivan.dga import FreeDga  # noqa: E402
from sullivan.forms import PolyForm, de_rham, dupont_h, dupont_h_injection, dupont_h_vertex, dupont_projector  # noqa: E402
from sullivan.forms import injections, whitney_map  # noqa: E402
from sullivan.iso import ImmediateNo, Iso, build_orbit_instance, check_isomorphism, solve_orbit  # noqa: E402
from sullivan.pipeline import decide_rhe, model_run  # noqa: E402
from sullivan.simplicial import boundary_of_simplex  # noqa: E402

LIMIT_EXAMPLE = 1.0
LIMIT_REDUCTIONS = 60.0
LIMIT_SPHERE_MODEL = 120.0
LIMIT_SOLVER = 10.0
LIMIT_PIPELINE = 300.0
MIN_REDUCTION_CASES = 200


def report(number, ok, text, elapsed=None, limit=None):
    timing = f" [{elapsed:.2f} s < {limit:g} s]" if limit is not None else ""
    return f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {text}{timing}"


def emit(capsys, line):
    if capsys is None:
        print(line)
        return
    with capsys.disabled():
        print("\n" + line)


# -- criterion bodies -------------------------------------------------------------------


def criterion_1():
    m = lambda exps, dts=(), c=1: PolyForm.monomial(2, exps, dts, c)  # noqa: E731
    third = Fraction(1, 3)
    eta = m((2, 0), (2,))
    checks = [
        dupont_h_vertex(eta, 1) == m((2, 1), c=-third) + m((1, 1), c=-third) + m((0, 1), c=-third),
        dupont_h_injection(eta, (1, 2)).is_zero(),
        dupont_h(eta) == m((1, 1), c=-third) + m((2, 1), c=-third),
        dupont_h(eta.diff()) == m((1, 0), (2,), 2 * third) + m((1, 1), (1,), 2 * third) + m((2, 0), (2,), -2 * third),
        dupont_projector(eta) == (m((1, 0), (2,)) - m((0, 1), (1,))).scale(third),
        dupont_h(eta).diff() + dupont_h(eta.diff()) == dupont_projector(eta) - eta,
    ]
    return all(checks), f"{sum(checks)}/6 reference values for t1^2 dt2 on Delta[2] exact"


def criterion_2(cases=220, seed=20261015):
    rng = random.Random(seed)
    failures = 0
    done = 0
    for trial in range(cases):
        X = minimal_sphere(rng.randint(2, 3)) if trial % 5 == 0 else random_complex(rng, 3, 30)
        if X.dim > 3 or sum(X.f_vector) > 30:
            continue
        k = rng.randint(0, X.dim)
        phi = random_form(rng, X, k)
        c = random_cochain(rng, X, k)
        n = X.dim
        cochain = {f: Fraction(rng.randint(-3, 3)) for f in injections(k, n)}
        ok = (
            I(E(c)) == c
            and E(I(phi)) - phi == S(phi.diff()) + S(phi).diff()
            and S(S(phi)).is_zero()
            and I(S(phi)).is_zero()
            and S(E(c)).is_zero()
            and de_rham(whitney_map(cochain, n), k) == cochain
        )
        failures += not ok
        done += 1
    return failures == 0 and done >= MIN_REDUCTION_CASES, f"{done} randomized cases, {failures} failures"


def _sphere_check(n):
    run = model_run(boundary_of_simplex(n), 4, assert_simply_connected=True)
    return run.state, all(a.passed for a in run.audits)


def criterion_3():
    out = {}
    s2, audit2 = _sphere_check(3)
    M = s2.model
    ok2 = [g.degree for g in M.generators] == [2, 3] and M.d_gen[0] == {} and \
        list(M.d_gen[1]) == [(2, 0)] and M.d_gen[1][(2, 0)] != 0
    s3, audit3 = _sphere_check(4)
    N = s3.model
    ok3 = [g.degree for g in N.generators] == [3] and N.d_gen[0] == {}
    out["s2"], out["s3"] = s2.to_json(), s3.to_json()
    ok = ok2 and ok3 and audit2 and audit3
    return ok, f"S^2 -> {M.to_json()['generators']}, S^3 -> {N.to_json()['generators']}, audits {audit2 and audit3}", out


def criterion_4():
    A = FreeDga([("x", 2), ("y", 3)], {"y": "x^2"})
    B = FreeDga([("x", 2), ("y", 3)], {"y": "2*x^2"})
    res = solve_orbit(build_orbit_instance(A, B))
    ok_iso = isinstance(res, Iso) and check_isomorphism(A, B, res.blocks)
    blocks = {p: [[str(v) for v in row] for row in b.to_rows()] for p, b in res.blocks.items()} if ok_iso else None
    no = build_orbit_instance(FreeDga([("x", 2)]), A)
    ok_no = isinstance(no, ImmediateNo) and no.degree == 3
    out = {"iso_blocks": {str(k): v for k, v in sorted(blocks.items())} if blocks else None,
           "immediate_no": [no.degree, no.source_dim, no.target_dim] if ok_no else None}
    return ok_iso and ok_no, f"iso g2={blocks and blocks[2]} g3={blocks and blocks[3]}, ImmediateNo at degree {getattr(no, 'degree', None)}", out


def criterion_5():
    s2, s3 = boundary_of_simplex(3), boundary_of_simplex(4)
    cp2, wedge = load_fixture("cp2_9"), load_fixture("s2_wedge_s4")
    v1 = decide_rhe(s2, s2, assert_simply_connected=True)
    v2 = decide_rhe(s2, s3, assert_simply_connected=True)
    v3 = decide_rhe(cp2, wedge, assert_simply_connected=True)
    w = v3.evidence.get("witness", {})
    ok = (v1.answer == "Equivalent" and v2.answer == "NotEquivalent" and v3.answer == "NotEquivalent"
          and w.get("invariant") == "generator_count" and w.get("degree") == 3)
    out = {"s2_s2": v1.to_json(), "s2_s3": v2.to_json(), "cp2_wedge": v3.to_json()}
    return ok, f"{v1.answer}, {v2.answer}, {v3.answer} (witness {w.get('invariant')} in degree {w.get('degree')})", out


def serialized_outputs() -> str:
    data = {"3": criterion_3()[2], "4": criterion_4()[2], "5": criterion_5()[2]}
    return json.dumps(data, indent=1, sort_keys=False)


def criterion_6():
    here = serialized_outputs()
    runs = []
    for seed in ("0", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        res = subprocess.run([sys.executable, __file__, "--emit"], capture_output=True, env=env, check=True)
        runs.append(res.stdout.decode())
    ok = all(r == here + "\n" for r in runs)
    return ok, f"3 runs (in-process, 2 fresh interpreters with different hash seeds), {len(here)} bytes, identical={ok}"


# -- pytest entry points ---------------------------------------------------------------------


def _timed(fn):
    t = time.perf_counter()
    res = fn()
    return res, time.perf_counter() - t


def test_criterion_1_reference_values(capsys):
    (ok, text), dt = _timed(criterion_1)
    emit(capsys, report(1, ok and dt < LIMIT_EXAMPLE, text, dt, LIMIT_EXAMPLE))
    assert ok and dt < LIMIT_EXAMPLE


def test_criterion_2_reduction_identities(capsys):
    (ok, text), dt = _timed(criterion_2)
    emit(capsys, report(2, ok and dt < LIMIT_REDUCTIONS, text, dt, LIMIT_REDUCTIONS))
    assert ok and dt < LIMIT_REDUCTIONS


def test_criterion_3_sphere_models(capsys):
    (ok, text, _), dt = _timed(criterion_3)
    # two models; each must be below the bound, so the sum is a safe check
    emit(capsys, report(3, ok and dt < LIMIT_SPHERE_MODEL, text, dt, LIMIT_SPHERE_MODEL))
    assert ok and dt < LIMIT_SPHERE_MODEL


def test_criterion_4_solver(capsys):
    (ok, text, _), dt = _timed(criterion_4)
    emit(capsys, report(4, ok and dt < LIMIT_SOLVER, text, dt, LIMIT_SOLVER))
    assert ok and dt < LIMIT_SOLVER


def test_criterion_5_pipeline(capsys):
    (ok, text, _), dt = _timed(criterion_5)
    emit(capsys, report(5, ok and dt < LIMIT_PIPELINE, text, dt, LIMIT_PIPELINE))
    assert ok and dt < LIMIT_PIPELINE


def test_criterion_6_determinism(capsys):
    (ok, text), dt = _timed(criterion_6)
    emit(capsys, report(6, ok, text))
    assert ok


if __name__ == "__main__":
    if "--emit" in sys.argv:
        print(serialized_outputs())
        sys.exit(0)
    results = []
    for fn in (test_criterion_1_reference_values, test_criterion_2_reduction_identities, test_criterion_3_sphere_models,
               test_criterion_4_solver, test_criterion_5_pipeline, test_criterion_6_determinism):
        try:
            fn(None)
            results.append(True)
        except AssertionError:
            results.append(False)
    sys.exit(0 if all(results) else 1)
