import pytest

from coxbunch.cones import cone_from_generators as C
from coxbunch.fans import (
    DoNotGenerateLattice,
    DoNotSpanCone,
    Fan,
    NotAFan,
    RayOutsideSupport,
    export_fan,
    is_complete,
    parse_fan,
    polytopal_fan_with_rays,
    rays,
    stellar_subdivide,
    verify_fan,
)

QUADRANTS = [C([(1, 0), (0, 1)]), C([(-1, 0), (0, 1)]), C([(-1, 0), (0, -1)]), C([(1, 0), (0, -1)])]


def test_quadrant_fan():
    F = verify_fan(QUADRANTS)
    assert is_complete(F)
    assert rays(F) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert not is_complete(verify_fan(QUADRANTS[:1]))


def test_not_a_fan():
    with pytest.raises(NotAFan) as e:
        verify_fan([C([(1, 0), (0, 1)]), C([(1, 1), (0, 1)])])
    assert e.value.pair == (0, 1)


def test_faces_are_dropped():
    F = verify_fan([QUADRANTS[0], C([(1, 0)])])
    assert F.maximal_cones == (QUADRANTS[0],)


def test_empty_fan_has_no_rays():
    assert rays(Fan(2, ())) == []


def test_stellar_subdivision():
    F = verify_fan(QUADRANTS[:1])
    G = stellar_subdivide(F, (1, 1))
    assert set(G.maximal_cones) == {C([(1, 0), (1, 1)]), C([(1, 1), (0, 1)])}
    assert stellar_subdivide(G, (1, 1)) == G
    orth = verify_fan([C([(1, 0, 0), (0, 1, 0), (0, 0, 1)])])
    H = stellar_subdivide(orth, (1, 1, 1))
    assert len(H) == 3 and all(c.is_simplicial() for c in H)
    with pytest.raises(RayOutsideSupport):
        stellar_subdivide(F, (-1, 0))


def test_stellar_subdivision_preserves_completeness():
    F = verify_fan(QUADRANTS)
    for v in [(1, 1), (2, 1), (-1, 3), (0, 1)]:
        F = stellar_subdivide(F, v)
        assert is_complete(F)
        assert tuple(v) in rays(F) or (0, 1) == tuple(v)


def test_polytopal_fans():
    assert polytopal_fan_with_rays([(1, 0), (0, 1), (-1, 0), (0, -1)]) == verify_fan(QUADRANTS)
    P2 = polytopal_fan_with_rays([(1, 0), (0, 1), (-1, -1)])
    assert len(P2) == 3 and is_complete(P2)
    F = polytopal_fan_with_rays([(1, 0), (0, 1), (-1, -1), (1, 1)])
    assert len(F) == 4 and is_complete(F) and (1, 1) in rays(F)
    with pytest.raises(DoNotSpanCone):
        polytopal_fan_with_rays([(1, 0), (0, 1)])
    with pytest.raises(DoNotGenerateLattice):
        polytopal_fan_with_rays([(1, 0), (1, 2), (-1, -2), (-1, 0)])


def test_polytopal_fan_with_interior_vectors():
    vs = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1), (1, 1, 0), (0, 1, 1), (-1, 0, -1)]
    F = polytopal_fan_with_rays(vs)
    assert is_complete(F)
    assert rays(F) == sorted(vs)


def test_export_roundtrip():
    F = polytopal_fan_with_rays([(1, 0), (0, 1), (-1, -1), (1, 1)])
    text = export_fan(F)
    assert text.splitlines()[0] == "2"
    assert parse_fan(text) == F
    assert export_fan(Fan(0, (C([], 0),))) == "0\n{}\n"
