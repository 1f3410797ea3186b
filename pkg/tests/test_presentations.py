import dataclasses
import json

import pytest
from hypothesis import given, strategies as st

from gentorsion.presentations import (
    CATALOG_NAMES,
    PresentationError,
    abelianization,
    catalog,
    connected_sum,
    load_presentation,
    parse_presentation,
    presentation_from_json,
    presentation_to_json,
    render_presentation,
    torus_group,
)
from gentorsion.smith import integer_kernel, smith_normal_form
from gentorsion.words import cyclic_permutations, invert


def test_parse_equation_and_sugar():
    P = parse_presentation("<x,y | x2 = y3>")
    assert P.generators == ("x", "y")
    assert [P.render(r) for r in P.relators] == ["xxYYY"]
    Q = parse_presentation("<a,b | ab3a = ba2b>")
    assert [Q.render(r) for r in Q.relators] == ["abbbaBAAB"]


def test_parse_degenerate():
    F = parse_presentation("<x | >")
    assert F.relators == ()
    with pytest.raises(PresentationError):
        parse_presentation("<x | xX>")
    with pytest.raises(Exception):
        parse_presentation("<x | y>")


def test_catalog_entries():
    assert render_presentation(catalog("klein")) == "<x,y | Yxyx>"
    assert render_presentation(catalog("5_2")) == "<a,b | bbAAbbaBBBa>"
    assert render_presentation(catalog("4_1")) == "<a,b | abbbaBAAB>"
    assert catalog("4_1").fibred is True
    assert catalog("5_2").fibred is False
    with pytest.raises(PresentationError, match="available"):
        catalog("7_3")


def test_torus_group():
    P = torus_group(2, 3)
    assert P.name == "3_1" and P.fibred
    assert [P.render(r) for r in P.relators] == ["xxYYY"]
    assert torus_group(2, 5).name == "5_1"
    with pytest.raises(PresentationError):
        torus_group(1, 5)
    with pytest.raises(PresentationError):
        torus_group(2, -1)


@pytest.mark.parametrize("name", [n for n in CATALOG_NAMES if n != "klein"] + ["T(3,4)", "T(3,5)"])
def test_knot_abelianization_and_meridian(name):
    P = load_presentation(name)
    ab = abelianization(P)
    assert ab.infinite_cyclic
    assert abs(ab.image(P.meridian)) == 1
    for r in P.relators:
        assert ab.image(r) == 0


def test_abelianization_values():
    assert abelianization(torus_group(2, 3)).weights == (3, 2)
    assert abelianization(catalog("4_1")).weights == (1, 0)
    assert abelianization(catalog("5_2")).weights == (1, 0)
    k = abelianization(catalog("klein"))
    assert k.invariant_factors == (2,) and k.free_rank == 1 and k.weights == (0, 1)
    assert not k.infinite_cyclic


def test_connected_sum():
    P, i1, i2 = connected_sum(torus_group(2, 3), torus_group(2, 3))
    assert P.rank == 4 and len(P.relators) == 3
    assert len(set(i1 + i2)) == 4
    assert abelianization(P).infinite_cyclic
    Q, j1, j2 = connected_sum(catalog("3_1"), catalog("5_2"))
    assert Q.rank == 4 and len(Q.relators) == 3
    assert abelianization(Q).free_rank == 1
    forms = set()
    for r in Q.relators:
        forms.update(cyclic_permutations(r))
        forms.update(cyclic_permutations(invert(r)))
    for src, inc in ((catalog("3_1"), j1), (catalog("5_2"), j2)):
        for r in src.relators:
            assert r.rename(inc) in forms


def test_connected_sum_with_unknot():
    U = parse_presentation("<m | >")
    U = dataclasses.replace(U, meridian=U.word("m"))
    P, _, inc = connected_sum(catalog("4_1"), U)
    assert P.generators == ("a", "b", "m")
    assert [P.render(r) for r in P.relators] == ["abbbaBAAB", "aM"]


def test_connected_sum_needs_meridians():
    with pytest.raises(PresentationError):
        connected_sum(catalog("klein"), catalog("4_1"))


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_round_trips(name):
    P = catalog(name)
    Q = parse_presentation(render_presentation(P))
    assert Q.generators == P.generators and Q.relators == P.relators
    data = json.loads(json.dumps(presentation_to_json(P)))
    assert presentation_from_json(data) == P


def test_load_sources(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("<a,b | aBAb>", encoding="utf-8")
    assert load_presentation(str(f)).rank == 2
    j = tmp_path / "g.json"
    j.write_text(json.dumps(presentation_to_json(catalog("5_2"))), encoding="utf-8")
    assert load_presentation(str(j)) == catalog("5_2")
    assert load_presentation("3_1#5_2").rank == 4
    with pytest.raises(PresentationError):
        load_presentation("7_3")


small = st.integers(min_value=-6, max_value=6)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3))
def test_smith_normal_form(M):
    D, U, V = smith_normal_form(M)
    m, n = len(M), 3

    def mul(A, B):
        return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]

    assert mul(mul(U, M), V) == D
    diag = [D[i][i] for i in range(min(m, n))]
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        if a:
            assert b % a == 0
        else:
            assert b == 0
    for v in integer_kernel(M, n):
        assert all(sum(r[k] * v[k] for k in range(n)) == 0 for r in M)
