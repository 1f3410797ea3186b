"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line (printed in the terminal summary
and to stdout) and then asserts.  Time limits are wall-clock seconds on a
cold oracle cache.
"""

import random
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE
from gentorsion import word_problem
from gentorsion.alexander import (
    KNOWN_POLYNOMIALS,
    LaurentPolynomial,
    abelianize,
    alexander_polynomial,
    fox_derivative,
    parse_polynomial,
    positive_real_roots,
)
from gentorsion.cli import AUTO_BOUNDS
from gentorsion.presentations import CATALOG_NAMES, abelianization, catalog, connected_sum, torus_group
from gentorsion.rewriting import kb_complete_torus
from gentorsion.search import NotFound, SearchBounds, search, search_auto
from gentorsion.torsion import (
    builtin_certificates,
    commuting_powers_certificate,
    expand_commutator,
    flattened_product,
    transport,
    verify,
)
from gentorsion.words import Word, commutator, concat, cyclic_permutations, invert


def record(n, title, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


@pytest.fixture(autouse=True)
def cold_cache():
    word_problem._ORACLES.clear()
    yield


def test_1_builtin_certificates():
    times, statuses = {}, {}
    for name, cert in builtin_certificates().items():
        t0 = time.perf_counter()
        res = verify(cert)
        times[name] = time.perf_counter() - t0
        statuses[name] = res
    all_ok = all(r.verified for r in statuses.values()) and all(t < 5.0 for t in times.values())

    # the first 5_2 proof: every membership word is checked, and the relator
    # substitution aB^3a = B^2a^2B^2 is exactly a relator of the presentation
    first = statuses["fivetwo_first"]
    P = catalog("5_2")
    steps = [e for e in first.transcript if e["check"].startswith("step")]
    members_ok = len(steps) == 9 and all(e["result"].startswith("trivial") for e in steps)
    insertions = [e for e in steps if "relator_insertions" in e]
    sub = concat(P.word("aBBBa"), invert(P.word("BBaaBB")))
    forms = set(cyclic_permutations(P.relators[0]) + cyclic_permutations(invert(P.relators[0])))
    sub_ok = sub in forms and word_problem.get_oracle(P).equal(P.word("aBBBa"), P.word("BBaaBB")).trivial
    ok = all_ok and members_ok and bool(insertions) and sub_ok
    detail = ", ".join(f"{n} {statuses[n].status} k={statuses[n].k} {times[n]:.2f}s" for n in statuses)
    detail += f"; 9 memberships checked: {members_ok}; relator substitution aB^3a = B^2a^2B^2: {sub_ok}"
    record(1, "built-in certificates verify in < 5 s each", ok, detail)


def test_2_commutator_expansion():
    x, y = Word.gen(0), Word.gen(1)
    t0 = time.perf_counter()
    bad = []
    for p in range(1, 7):
        for q in range(1, 7):
            if flattened_product(commutator(x, y), expand_commutator(p, q)) != commutator(x ** p, y ** q):
                bad.append((p, q))
    dt = time.perf_counter() - t0
    record(2, "expand_commutator free-group identity, 36 cases, < 1 s", not bad and dt < 1.0, f"failures={bad}, {dt:.3f}s")


def test_3_torus_commutator_torsion():
    t0 = time.perf_counter()
    results = {}
    for p, q in [(2, 3), (2, 5), (3, 4), (3, 5)]:
        P = torus_group(p, q)
        cert = commuting_powers_certificate(P, P.word("x"), P.word("y"), p, q)
        res = verify(cert)
        results[(p, q)] = (res.status, res.k)
    dt = time.perf_counter() - t0
    ok = all(s == "verified" for s, _ in results.values()) and dt < 10.0
    record(3, "commuting-powers certificates on four torus groups, < 10 s", ok, f"{results}, {dt:.2f}s")


def test_4_alexander_table():
    expected = {
        "4_1": "t^2 - 3t + 1",
        "5_2": "2t^2 - 3t + 2",
        "3_1": "t^2 - t + 1",
        "5_1": "t^4 - t^3 + t^2 - t + 1",
    }
    t0 = time.perf_counter()
    got = {k: alexander_polynomial(catalog(k)) for k in expected}
    dt = time.perf_counter() - t0
    mism = {k: got[k].pretty() for k in expected if got[k] != parse_polynomial(expected[k])}
    record(4, "Alexander polynomials exact, < 1 s", not mism and dt < 1.0, f"mismatches={mism}, {dt:.3f}s")


def test_5_root_claims():
    t0 = time.perf_counter()
    want = {"4_1": 2, "5_2": 0, "6_1": 2, "6_2": 2, "6_3": 0}
    polys = {
        "4_1": alexander_polynomial(catalog("4_1")),
        "5_2": alexander_polynomial(catalog("5_2")),
    }
    for k in ("6_1", "6_2", "6_3"):
        polys[k] = parse_polynomial(KNOWN_POLYNOMIALS[k][0])
    reports = {k: positive_real_roots(f) for k, f in polys.items()}
    dt = time.perf_counter() - t0
    counts = {k: r.positive_real_roots for k, r in reports.items()}
    counts_ok = counts == want
    sixone_ok = reports["6_1"].exact_roots == [Fraction(1, 2), Fraction(2)]
    iv = reports["6_2"].intervals
    narrow = all(b - a <= Fraction(1, 1024) for a, b in iv)

    def covered(value):
        return any(a <= Fraction(value) <= b for a, b in iv)

    big, small = covered("2.15372"), covered("0.446431")
    ok = counts_ok and sixone_ok and narrow and big and small and dt < 1.0
    shown = ", ".join(f"[{float(a):.6f}, {float(b):.6f}]" for a, b in iv)
    detail = (
        f"counts={counts}, 6_1 exact roots 1/2 and 2: {sixone_ok}, 6_2 intervals {shown}; "
        f"contains 2.15372: {big}; contains 0.446431: {small}; {dt:.3f}s"
    )
    record(5, "positive real root counts and 6_2 isolating intervals, < 1 s", ok, detail)


def test_6_search_rediscovery():
    T = torus_group(2, 3)
    t0 = time.perf_counter()
    r1 = search(T, commutator(T.word("x"), T.word("y")), SearchBounds(max_conjugator_length=2))
    dt1 = time.perf_counter() - t0
    ok1 = not isinstance(r1, NotFound) and verify(r1).verified and dt1 < 10.0
    F = catalog("5_2")
    t0 = time.perf_counter()
    r2 = search(F, F.word("AbaB"), SearchBounds())
    dt2 = time.perf_counter() - t0
    ok2 = not isinstance(r2, NotFound) and verify(r2).verified and dt2 < 300.0
    detail = f"trefoil [x,y] conjugator length 2: {ok1} {dt1:.2f}s; 5_2 AbaB default bounds {SearchBounds()}: {ok2} {dt2:.2f}s"
    record(6, "search rediscovers trefoil (< 10 s) and 5_2 (< 5 min) certificates", ok1 and ok2, detail)


def test_7_knot_sanity():
    problems = []
    for name in CATALOG_NAMES:
        P = catalog(name)
        weights = abelianization(P).weights
        for r in P.relators:
            total = LaurentPolynomial()
            for j in range(P.rank):
                t_j = LaurentPolynomial({weights[j]: 1}) - LaurentPolynomial({0: 1})
                total = total + abelianize(fox_derivative(r, j), weights) * t_j
            if total:
                problems.append(f"{name}: Fox identity")
        if name == "klein":
            continue
        d = alexander_polynomial(P)
        if abs(d(1)) != 1:
            problems.append(f"{name}: |D(1)| = {abs(d(1))}")
        if not d.is_palindromic_up_to_sign():
            problems.append(f"{name}: not palindromic")
    record(7, "|D(1)| = 1, palindromic, fundamental Fox identity", not problems, f"problems={problems}")


def test_8_oracle_cross_validation():
    disagreements = {}
    trivial_seen = {}
    for p, q in [(2, 3), (2, 5)]:
        rng = random.Random(8_000 + 10 * p + q)
        rs = kb_complete_torus(p, q)
        r = torus_group(p, q).relators[0]
        bad = 0
        trivial = 0
        for i in range(500):
            if i % 5 == 0:
                # a product of relator conjugates, so trivial cases are exercised
                w = Word(())
                for _ in range(rng.randint(1, 3)):
                    c = Word(rng.choice((1, -1, 2, -2)) for _ in range(rng.randint(0, 4)))
                    w = concat(w, concat(concat(invert(c), r if rng.random() < 0.5 else invert(r)), c))
                u, v = w, Word(())
            else:
                u = Word(rng.choice((1, -1, 2, -2)) for _ in range(rng.randint(0, 12)))
                v = Word(rng.choice((1, -1, 2, -2)) for _ in range(rng.randint(0, 12)))
            torus = word_problem.torus_is_trivial(p, q, concat(u, invert(v)))
            kb = rs.normal_form(u) == rs.normal_form(v)
            trivial += torus
            bad += torus != kb
        disagreements[(p, q)] = bad
        trivial_seen[(p, q)] = trivial
    ok = all(v == 0 for v in disagreements.values())
    record(8, "torus solver vs completed rewriting, 500 words per group", ok, f"disagreements={disagreements}, trivial cases={trivial_seen}")


def test_9_negative_control():
    P = catalog("4_1")
    t0 = time.perf_counter()
    cert, misses = search_auto(P, AUTO_BOUNDS)
    dt = time.perf_counter() - t0
    ok = cert is None and misses and all(isinstance(m, NotFound) for m in misses)
    detail = (
        f"{len(misses)} candidate bases, all NotFound under {AUTO_BOUNDS}; "
        f"closure sizes {[m.closure_size for m in misses]}; {dt:.1f}s; bounded consistency check, not a proof"
    )
    record(9, "4_1 auto search returns NotFound", ok, detail)


def test_10_transport():
    t0 = time.perf_counter()
    S, inc1, _ = connected_sum(catalog("3_1"), catalog("5_2"))
    moved = transport(builtin_certificates()["trefoil"], inc1, S)
    res = verify(moved)
    dt = time.perf_counter() - t0
    record(10, "trefoil certificate transported into 3_1 # 5_2 verifies, < 30 s", res.verified and dt < 30.0, f"{res.status} k={res.k} {dt:.2f}s")
