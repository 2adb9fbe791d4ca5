import pytest

from coxbunch import bunched as B
from coxbunch.cones import RatCone, interiors_meet
from coxbunch.exactlin import matmul
from coxbunch.fans import export_fan, is_complete

G24 = [[(1, (1, 0, 0, 0, 0, 1)), (-1, (0, 1, 0, 0, 1, 0)), (1, (0, 0, 1, 1, 0, 0))]]
Q1 = RatCone.from_generators([(1,)], 1)


def one_based(faces):
    return [tuple(i + 1 for i in f) for f in faces]


def test_validate_presentation():
    R = B.validate_presentation([(1,)] * 6, G24)
    assert R.dim_R == 5
    with pytest.raises(B.RelationNotHomogeneous):
        B.validate_presentation([(1,)] * 5 + [(2,)], G24)
    P = B.validate_presentation([(1, 0), (0, 1), (1, 1), (1, 2)])
    assert P.dim_R == 4
    with pytest.raises(B.TooFewGenerators):
        B.validate_presentation([(1, 0)], class_rank=2)
    with pytest.raises(B.DegreesDontGenerate):
        B.validate_presentation([(2,), (4,)])


def test_divisible_relation_warns(caplog):
    B.validate_presentation([(1,)] * 3, [[(1, (1, 1, 0)), (1, (1, 0, 1))]])
    assert "divisible" in caplog.text


def test_fface_nu_count():
    R = B.validate_presentation([(1,)] * 6, G24)
    assert not B.is_fface(R, (0, 5))
    assert B.is_fface(R, (0, 1))
    assert B.is_fface(R, range(6))
    ff = B.enumerate_ffaces(R)
    by_hand = [f for f in B.all_faces(6) if sum(1 for s in [{0, 5}, {1, 4}, {2, 3}] if s <= set(f)) != 1]
    assert list(ff) == by_hand
    assert (0, 5) not in ff and (1, 4) not in ff and (2, 3) not in ff


def test_ffaces_polynomial_and_squares():
    P = B.validate_presentation([(1,)] * 3)
    assert len(B.enumerate_ffaces(P)) == 8
    R = B.validate_presentation([(1,), (1,)], [[(1, (2, 0)), (1, (0, 2))]])
    assert B.enumerate_ffaces(R) == ((), (0, 1))


def test_oracle_required_and_table():
    rels = [[(1, (1, 1, 0, 0)), (1, (0, 0, 1, 1))], [(1, (1, 0, 1, 0)), (1, (0, 1, 0, 1))]]
    R = B.validate_presentation([(1,)] * 4, rels)
    with pytest.raises(B.OracleRequired):
        B.is_fface(R, (0,))
    T = B.validate_presentation([(1,)] * 4, rels, fface_table=[(), (0, 1, 2, 3)])
    assert B.enumerate_ffaces(T) == ((), (0, 1, 2, 3))


def test_too_many_generators():
    R = B.validate_presentation([(1,)] * 6)
    with pytest.raises(B.TooManyGenerators):
        B.enumerate_ffaces(R, max_generators=5)


def test_g24_quotient_rlv_and_cov(g24_quotient):
    R, phi = g24_quotient
    singular = [(1, 3, 5), (2, 4, 6), (1, 2, 5, 6), (1, 3, 4, 6), (2, 3, 4, 5)]
    facets = [tuple(j for j in range(1, 7) if j != i) for i in range(1, 7)]
    expected = set(singular) | set(facets) | {tuple(range(1, 7))}
    assert set(one_based(B.relevant_faces(R, phi))) == expected
    assert set(one_based(B.covering_collection(R, phi))) == set(singular)


def test_plain_g24(g24_plain):
    R, phi = g24_plain
    ff = B.enumerate_ffaces(R)
    assert B.relevant_faces(R, phi) == [f for f in ff if f]
    assert one_based(B.covering_collection(R, phi)) == [(i,) for i in range(1, 7)]
    fan = B.minimal_ambient_fan(R, phi)
    assert fan.ambient_rank == 5 and len(fan) == 6 and is_complete(fan)
    assert B.extend_to_bunch(R, phi) == [Q1]
    assert B.projectivize(R).cones == (Q1,)


def test_polynomial_identity_grading():
    R = B.validate_presentation([(1, 0), (0, 1)])
    full = RatCone.from_generators([(1, 0), (0, 1)], 2)
    assert B.relevant_faces(R, [full]) == [(0, 1)]
    fan = B.minimal_ambient_fan(R, [full])
    assert fan.ambient_rank == 0 and export_fan(fan) == "0\n{}\n"


def test_validate_fbunch_errors():
    R = B.validate_presentation([(1, 0), (0, 1), (1, 1), (1, 2)])
    with pytest.raises(B.OverlapViolation):
        B.validate_fbunch(R, [RatCone.from_generators([(1, 0), (0, 1)], 2), RatCone.from_generators([(1, 1), (1, 2)], 2)])
    with pytest.raises(B.NotProjectedFFace):
        B.validate_fbunch(R, [RatCone.from_generators([(1, 3)], 2)])
    with pytest.raises(B.MaximalityViolation):
        B.validate_fbunch(R, [RatCone.from_generators([(1, 0), (1, 2)], 2)])
    # waiving maximality moves the failure on to the facet condition
    with pytest.raises(B.FacetConditionFails):
        B.validate_fbunch(R, [RatCone.from_generators([(1, 0), (1, 2)], 2)], skip_maximality=True)
    with pytest.raises(B.EmptyBunch):
        B.validate_fbunch(R, [])
    with pytest.raises(B.FacetConditionFails):
        B.validate_fbunch(B.validate_presentation([(1, 0), (0, 1), (1, 1)]), [(2,)])


def test_rank1_quadric_bunch_is_valid():
    R = B.validate_presentation([(1,)] * 5, [[(1, (1, 0, 0, 0, 1)), (-1, (0, 1, 0, 1, 0)), (1, (0, 0, 2, 0, 0))]])
    assert B.validate_fbunch(R, [Q1]).cones == (Q1,)


def test_gale_setup():
    R = B.validate_presentation([(1,)] * 3)
    g = B.gale_setup(R)
    assert g.quotient_rank == 2
    assert not any(any(row) for row in matmul(R.Q, tuple(zip(*g.P))))
    assert B.gale_setup(B.validate_presentation([(1, 0), (0, 1)])).quotient_rank == 0


def test_gale_e6(e6):
    R, _ = e6
    vs = {v for v in B.gale_images(R)}
    assert B.gale_setup(R).quotient_rank == 3
    assert len(vs) == 10


def test_costar():
    assert B.costar((), 3) == (0, 1, 2)
    assert B.costar((0, 2), 4) == (1, 3)
    assert B.costar((0, 1, 2), 3) == ()


def test_e6_covering_and_fan(e6):
    R, phi = e6
    expected = {
        (1, 2, 3, 4, 7, 8, 9, 10), (1, 2, 3, 5, 6, 8, 9, 10), (1, 2, 3, 6, 7, 8, 9, 10),
        (1, 2, 4, 5, 7, 8, 9, 10), (2, 4, 5, 6, 7, 8, 9, 10), (1, 3, 4, 5, 7, 8, 9, 10),
        (1, 2, 3, 4, 5, 6, 8, 9), (1, 3, 4, 5, 6, 7, 8, 10), (2, 3, 4, 5, 6, 7, 9, 10),
        (1, 2, 3, 4, 5, 6, 7),
    }
    assert set(one_based(B.covering_collection(R, phi))) == expected
    fan = B.minimal_ambient_fan(R, phi)
    assert sorted(c.dim for c in fan) == [2] * 9 + [3]
    assert not is_complete(fan)


def test_bunch_from_fan_p2():
    from coxbunch.fans import polytopal_fan_with_rays

    F = polytopal_fan_with_rays([(1, 0), (0, 1), (-1, -1)])
    # the Gale dual of Q = [1 1 1] may use another basis; build the fan from its own images
    R = B.validate_presentation([(1,)] * 3)
    F = polytopal_fan_with_rays(B.gale_images(R))
    assert B.bunch_from_fan(F, R.Q) == [Q1]


def test_extend_to_bunch_g24_quotient(g24_quotient):
    R, phi = g24_quotient
    theta = B.extend_to_bunch(R, phi)
    assert theta
    for s in theta:
        for t in phi:
            assert interiors_meet(s, t)


def test_projectivize_g24_quotient(g24_quotient):
    R, phi = g24_quotient
    new = B.projectivize(R)
    from coxbunch.cones import intersect

    S = intersect(*new.cones)
    assert all(t.in_relative_interior(S.relative_interior_point()) for t in new.cones)


def test_projectivize_precondition():
    R = B.validate_presentation([(1,), (1,), (0,)])
    with pytest.raises(B.PreconditionFailed):
        B.projectivize(R)
    S = B.validate_presentation([(1,), (-1,), (1,)])
    with pytest.raises(B.PreconditionFailed):
        B.projectivize(S)


def test_covering_members_overlap(g24_quotient, e6):
    for R, phi in (g24_quotient, e6):
        cov = B.covering_collection(R, phi)
        for a in cov:
            for b in cov:
                assert interiors_meet(R.image(a), R.image(b))


def test_relevant_structure(g24_quotient, g24_plain, e6):
    for R, phi in (g24_quotient, g24_plain, e6):
        ff = set(B.enumerate_ffaces(R))
        rlv = B.relevant_faces(R, phi)
        cov = B.covering_collection(R, phi)
        assert set(rlv) <= ff and set(cov) <= set(rlv)
        assert all(any(set(c) <= set(f) for c in cov) for f in rlv)


def test_facet_images_meet_when_lattice_generated(g24_quotient, e6):
    # strictly convex Q(γ), facet images generating K and pairwise overlapping
    # force a common interior point
    from coxbunch.cones import intersect

    for R, _ in (g24_quotient, e6):
        facets = [R.image([j for j in range(R.r) if j != i]) for i in range(R.r)]
        common = intersect(*facets)
        p = common.relative_interior_point()
        assert all(f.in_relative_interior(p) for f in facets)
