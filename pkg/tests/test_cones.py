import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from coxbunch.cones import (
    DimensionMismatch,
    NotContained,
    RatCone,
    cone_from_generators,
    dual,
    face_relation,
    in_relative_interior,
    interior_contains,
    intersect,
    orthant_face,
    relative_interior_point,
)

C = cone_from_generators
QUADRANT = C([(1, 0), (0, 1)])


def test_generators_and_redundancy():
    assert QUADRANT.rays == ((0, 1), (1, 0))
    assert set(QUADRANT.facets) == {(1, 0), (0, 1)}
    assert C([(1, 0), (1, 1), (0, 1)]) == QUADRANT
    zero = RatCone.zero(3)
    assert zero.dim == 0 and zero.is_strictly_convex()


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        C([(1, 0), (1, 0, 0)])


def test_dual_examples():
    assert dual(C([(1, 0, 0), (0, 1, 0), (0, 0, 1)])) == C([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    half = RatCone.from_inequalities([(1, 0)])
    assert dual(half) == C([(1, 0)])
    assert dual(C([(1, 0), (1, 2)])) == C([(0, 1), (2, -1)])


def test_intersection_examples():
    assert intersect(QUADRANT, QUADRANT) == QUADRANT
    below_diagonal = RatCone.from_inequalities([(1, -1)])
    assert intersect(QUADRANT, below_diagonal) == C([(1, 0), (1, 1)])


def test_g24_quotient_sample_cone():
    w = {1: (1, 0, 1), 2: (1, 1, 1), 3: (0, 1, 1), 4: (0, -1, 1), 5: (-1, -1, 1), 6: (-1, 0, 1)}
    faces = [(1, 3, 5), (2, 4, 6), (1, 6, 2, 5), (1, 6, 3, 4), (2, 5, 3, 4)]
    S = intersect(*[C([w[i] for i in f]) for f in faces])
    assert set(S.rays) == {(1, -1, 3), (-1, -2, 3), (-1, 1, 3), (-2, -1, 3), (2, 1, 3), (1, 2, 3)}
    assert S.in_relative_interior((0, 0, 4))


def test_interior_examples():
    assert QUADRANT.in_relative_interior((1, 1))
    assert not QUADRANT.in_relative_interior((1, 0))
    assert RatCone.zero(2).in_relative_interior((0, 0))


def test_relative_interior_point_examples():
    assert relative_interior_point(QUADRANT) == (1, 1)
    assert relative_interior_point(C([(2, 4)])) == (1, 2)
    assert relative_interior_point(C([(1, 0), (1, 2)])) == (2, 2)


def test_shape_predicates():
    orth = orthant_face(range(3), 3)
    assert orth.dim == 3 and orth.is_strictly_convex() and orth.spans_fulldim()
    line = C([(1, -1), (-1, 1)])
    assert line.dim == 1 and not line.is_strictly_convex()
    assert C([(1, 0), (0, 1)]).is_regular()
    c = C([(1, 0), (1, 2)])
    assert c.is_simplicial() and not c.is_regular()


def test_face_relation_examples():
    assert face_relation(C([(1, 0)]), QUADRANT) == "Face"
    assert face_relation(C([(1, 1)]), QUADRANT) == "NotFace"
    assert face_relation(RatCone.zero(2), QUADRANT) == "Face"
    with pytest.raises(NotContained):
        face_relation(C([(-1, 0)]), QUADRANT)


def test_e6_sample_cone_regular():
    cols = [
        (0, 1, 1, 2, 2, 2, 2),
        (2, 3, 4, 4, 5, 6, 3),
        (1, 1, 2, 3, 3, 3, 3),
        (2, 3, 4, 4, 5, 6, 4),
        (2, 3, 4, 5, 5, 6, 5),
        (2, 3, 4, 6, 6, 6, 6),
        (1, 2, 2, 4, 4, 4, 4),
    ]
    assert C(cols).is_regular()


# -- properties -----------------------------------------------------------------

vec = st.integers(-9, 9)


@st.composite
def cones(draw, max_dim=4):
    d = draw(st.integers(1, max_dim))
    gens = draw(st.lists(st.tuples(*[vec] * d), min_size=0, max_size=6))
    return RatCone.from_generators(gens, d)


@settings(max_examples=200, deadline=None)
@given(cones())
def test_dual_is_involution(c):
    assert dual(dual(c)) == c


@settings(max_examples=200, deadline=None)
@given(cones())
def test_double_description_is_consistent(c):
    for g in c.generators:
        assert all(sum(a * b for a, b in zip(f, g)) >= 0 for f in c.facets)
        assert all(sum(a * b for a, b in zip(e, g)) == 0 for e in c.equations)
    # the facet list is irredundant: dropping one facet enlarges the cone
    for i in range(len(c.facets)):
        rest = c.facets[:i] + c.facets[i + 1:]
        assert RatCone.from_inequalities(rest, c.equations, c.ambient_dim) != c


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda d: st.tuples(cones_in(d), cones_in(d), cones_in(d))))
def test_intersection_algebra(abc):
    a, b, c = abc
    assert intersect(a, b) == intersect(b, a)
    assert intersect(intersect(a, b), c) == intersect(a, intersect(b, c))
    assert intersect(a, dual(dual(a))) == a


def cones_in(d):
    return st.lists(st.tuples(*[vec] * d), max_size=5).map(lambda g: RatCone.from_generators(g, d))


@settings(max_examples=200, deadline=None)
@given(cones())
def test_relative_interior_point_is_interior(c):
    assert in_relative_interior(c, relative_interior_point(c))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda d: st.tuples(st.sets(st.integers(0, d - 1)), st.tuples(*[vec] * d))))
def test_orthant_face_interior_is_coordinate_test(data):
    s, v = data
    d = len(v)
    face = orthant_face(sorted(s), d)
    assert face.in_relative_interior(v) == all((x > 0) == (i in s) and (x >= 0) for i, x in enumerate(v))


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 4).flatmap(lambda d: st.tuples(cones_in(d), cones_in(d), st.lists(st.integers(1, 5), min_size=6, max_size=6))))
def test_interior_witness(data):
    outer, inner, weights = data
    assume(outer.contains_cone(inner))
    decided = interior_contains(outer, inner)
    # other strictly positive combinations of the rays are also relative interior points
    p = [0] * inner.ambient_dim
    for w, r in zip(weights, inner.rays):
        p = [a + w * b for a, b in zip(p, r)]
    assert inner.in_relative_interior(p)
    assert outer.in_relative_interior(p) == decided
