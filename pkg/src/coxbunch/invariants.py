"""Invariants of the variety attached to a bunched ring.

Everything here is read off from the degree matrix, the relations and the
F-bunch: Picard group, divisor cones, local class groups of the strata,
canonical class, Gorenstein/Fano status and the intrinsic-quadric tests.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .bunched import (
    DEFAULT_MAX_GENERATORS,
    FBunch,
    RingPresentation,
    ValidationError,
    covering_collection,
    has_only_constants,
    relevant_faces,
    validate_fbunch,
    validate_presentation,
)
from .cones import RatCone, cone_sum, dual, intersect
from .exactlin import (
    Sublattice,
    from_columns,
    image_lattice,
    lattice_index,
    lattice_intersection,
    lattice_member,
    rref,
)


class NegativeDimension(ValidationError):
    def __init__(self, d: int):
        super().__init__("NegativeDimension", f"computed dimension {d} is negative")


class Undetermined(ValidationError):
    def __init__(self):
        super().__init__(
            "Undetermined",
            "projectivity test needs Q(γ) strictly convex and all degrees nonzero",
        )


class NotRelevant(ValidationError):
    def __init__(self, face):
        super().__init__("NotRelevant", f"face {[i + 1 for i in face]} is not relevant")


class NotAQuadric(ValidationError):
    def __init__(self, why: str):
        super().__init__("NotAQuadric", why)


class DegreeAsymmetry(ValidationError):
    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(
            f"DegreeAsymmetry({i + 1},{j + 1})", f"w_{i + 1} + w_{j + 1} differs from deg(q)"
        )


class RankDeficient(ValidationError):
    def __init__(self, rk: int, r: int):
        super().__init__("RankDeficient", f"quadric has rank {rk} < {r}")


class SymmetryViolation(ValidationError):
    def __init__(self, why: str):
        super().__init__("SymmetryViolation", why)


class TooFewVariables(ValidationError):
    def __init__(self, n: int):
        super().__init__("TooFewVariables", f"a full intrinsic quadric needs r >= 5, got {n}")


class MultiplicityOutOfRange(ValidationError):
    def __init__(self, why: str):
        super().__init__("MultiplicityOutOfRange", why)


class GorensteinStatus(str, enum.Enum):
    GORENSTEIN = "Gorenstein"
    Q_GORENSTEIN = "QGorenstein"
    NEITHER = "Neither"


class FanoStatus(str, enum.Enum):
    FANO = "Fano"
    Q_FANO = "QFano"
    NOT_FANO = "NotFano"


# -- basics ------------------------------------------------------------------


def dimension(R: RingPresentation) -> int:
    """``r − d − k`` under the complete-intersection convention."""
    d = R.dim_R - R.class_rank
    if d < 0:
        raise NegativeDimension(d)
    return d


def face_lattice(R: RingPresentation, face) -> Sublattice:
    """``Q(lin(γ₀) ∩ E)``: the lattice generated by the degrees in ``face``."""
    cols = [R.degrees[i] for i in face]
    return image_lattice(from_columns(cols, R.class_rank), len(cols))


def picard_group(R: RingPresentation, Phi, max_generators: int = DEFAULT_MAX_GENERATORS) -> tuple[Sublattice, int | float]:
    """Intersection of the face lattices over the covering collection, and its index."""
    cov = covering_collection(R, Phi, max_generators)
    L = Sublattice.full(R.class_rank)
    for f in cov:
        L = lattice_intersection(L, face_lattice(R, f))
    return L, lattice_index(L, Sublattice.full(R.class_rank))


# -- cones -------------------------------------------------------------------


@dataclass(frozen=True)
class ConeProfile:
    """Divisor cones in ``K_Q``.

    The ample cone is the open set ``⋂ τ°``; it is represented by the closed
    semiample cone together with ``ample_nonempty``. ``mori`` lives in the dual
    of ``Pic_Q``: in ``K_Q`` coordinates when the Picard group has full rank,
    otherwise in coordinates dual to ``mori_basis`` (a basis of ``Pic_Q``).
    """

    effective: RatCone
    moving: RatCone
    semiample: RatCone
    ample_nonempty: bool
    mori: RatCone
    mori_basis: tuple[tuple[int, ...], ...] | None = None

    @property
    def ample_generators(self) -> tuple[tuple[int, ...], ...]:
        """Rays whose open cone is the ample cone (when it is nonempty)."""
        return self.semiample.rays if self.ample_nonempty else ()


def effective_cone(R: RingPresentation) -> RatCone:
    return R.image(R.full_face())


def moving_cone(R: RingPresentation) -> RatCone:
    full = R.full_face()
    facets = [R.image([j for j in full if j != i]) for i in full]
    return intersect(*facets)


def semiample_cone(Phi) -> RatCone:
    return intersect(*list(Phi))


def ample_nonempty(Phi) -> bool:
    taus = list(Phi)
    p = semiample_cone(taus).relative_interior_point()
    return all(t.in_relative_interior(p) for t in taus)


def _restrict_to_span(C: RatCone, basis: Sequence[Sequence[int]]) -> RatCone:
    """``{c : Σ c_i b_i ∈ C}`` in the coordinates of ``basis``."""
    m = len(basis)

    def pull(a):
        return tuple(sum(a[j] * b[j] for j in range(len(a))) for b in basis)

    return RatCone.from_inequalities(
        [pull(f) for f in C.facets], [pull(e) for e in C.equations], m
    )


def mori_cone(R: RingPresentation, Phi, pic: Sublattice | None = None, max_generators: int = DEFAULT_MAX_GENERATORS) -> tuple[RatCone, tuple | None]:
    """``Σ (Pic_Q ∩ τ)^∨`` with duals taken inside ``Pic_Q``."""
    if pic is None:
        pic, _ = picard_group(R, Phi, max_generators)
    k = R.class_rank
    if pic.rank == k:
        return cone_sum([dual(t) for t in Phi], k), None
    basis = pic.generators
    m = len(basis)
    parts = [dual(_restrict_to_span(t, basis)) for t in Phi]
    return cone_sum(parts, m), tuple(basis)


def divisor_cones(R: RingPresentation, Phi, max_generators: int = DEFAULT_MAX_GENERATORS) -> ConeProfile:
    phi = list(Phi)
    mori, mb = mori_cone(R, phi, max_generators=max_generators)
    return ConeProfile(
        effective=effective_cone(R),
        moving=moving_cone(R),
        semiample=semiample_cone(phi),
        ample_nonempty=ample_nonempty(phi),
        mori=mori,
        mori_basis=mb,
    )


def is_projective(R: RingPresentation, Phi) -> bool:
    """``⋂ τ° ≠ ∅``, valid when ``O(X)`` consists of constants only.

    Raises:
      Undetermined: if that hypothesis fails.
    """
    if not has_only_constants(R):
        raise Undetermined()
    return ample_nonempty(Phi)


# -- local class groups --------------------------------------------------------


@dataclass(frozen=True)
class StratumReport:
    face: tuple[int, ...]
    q_factorial: bool
    factorial: bool
    smooth: bool | None = None


def effective_xhat_smooth(R: RingPresentation) -> bool | None:
    """The user flag, or the automatic assertion for full-rank quadrics."""
    if R.xhat_smooth is not None:
        return R.xhat_smooth
    try:
        return True if quadric_checks(R).xhat_smooth else None
    except ValidationError:
        return None


def stratum_reports(R: RingPresentation, Phi, max_generators: int = DEFAULT_MAX_GENERATORS) -> list[StratumReport]:
    smooth_flag = effective_xhat_smooth(R)
    out = []
    for f in relevant_faces(R, Phi, max_generators):
        qf = R.image(f).spans_fulldim()
        fac = R.image_lattice_surjective(f)
        out.append(StratumReport(f, qf, fac, fac if smooth_flag else None))
    return out


def is_smooth(R: RingPresentation, Phi, max_generators: int = DEFAULT_MAX_GENERATORS) -> bool | None:
    """Smoothness of every stratum; ``None`` when the characteristic space is not known smooth."""
    reps = stratum_reports(R, Phi, max_generators)
    if any(s.smooth is None for s in reps):
        return None
    return all(s.smooth for s in reps)


def is_q_factorial(R: RingPresentation, Phi) -> bool:
    return all(t.spans_fulldim() for t in Phi)


def is_geometric_quotient(R: RingPresentation, Phi) -> bool:
    return is_q_factorial(R, Phi)


def _check_relevant(R, Phi, face):
    face = tuple(sorted(face))
    if face not in relevant_faces(R, Phi):
        raise NotRelevant(face)
    return face


def is_cartier(R: RingPresentation, Phi, w: Sequence[int], face) -> bool:
    face = _check_relevant(R, Phi, face)
    return lattice_member(face_lattice(R, face), w)


def is_q_cartier(R: RingPresentation, Phi, w: Sequence[int], face) -> bool:
    face = _check_relevant(R, Phi, face)
    return R.image(face).in_lin_span(w)


def is_cartier_everywhere(R: RingPresentation, Phi, w: Sequence[int]) -> bool:
    """Membership in every face lattice of the covering collection, i.e. in Pic."""
    pic, _ = picard_group(R, Phi)
    return lattice_member(pic, w)


# -- canonical class -----------------------------------------------------------


def canonical_class(R: RingPresentation) -> tuple[int, ...]:
    """``Σ deg(g_j) − Σ w_i``."""
    k = R.class_rank
    total = [0] * k
    for d in R.relation_degrees():
        total = [a + b for a, b in zip(total, d)]
    for w in R.degrees:
        total = [a - b for a, b in zip(total, w)]
    return tuple(total)


def anticanonical_class(R: RingPresentation) -> tuple[int, ...]:
    return tuple(-x for x in canonical_class(R))


def gorenstein_status(R: RingPresentation, Phi, max_generators: int = DEFAULT_MAX_GENERATORS) -> GorensteinStatus:
    a = anticanonical_class(R)
    if not all(t.in_lin_span(a) for t in Phi):
        return GorensteinStatus.NEITHER
    if all(lattice_member(face_lattice(R, f), a) for f in relevant_faces(R, Phi, max_generators)):
        return GorensteinStatus.GORENSTEIN
    return GorensteinStatus.Q_GORENSTEIN


def fano_status(R: RingPresentation, Phi, max_generators: int = DEFAULT_MAX_GENERATORS) -> FanoStatus:
    a = anticanonical_class(R)
    if not all(t.in_relative_interior(a) for t in Phi):
        return FanoStatus.NOT_FANO
    pic, _ = picard_group(R, Phi, max_generators)
    return FanoStatus.FANO if lattice_member(pic, a) else FanoStatus.Q_FANO


# -- intrinsic quadrics --------------------------------------------------------


@dataclass(frozen=True)
class QuadricReport:
    rank: int
    degree: tuple[int, ...]
    xhat_smooth: bool
    class_rank_bound: bool
    ring_dim_bound: bool

    @property
    def bounds_hold(self) -> bool:
        return self.class_rank_bound and self.ring_dim_bound


def quadric_matrix(R: RingPresentation) -> list[list[Fraction]]:
    """Symmetric coefficient matrix of the single quadratic relation.

    Raises:
      NotAQuadric: not exactly one relation, or a term of total degree ≠ 2.
    """
    if len(R.relations) != 1:
        raise NotAQuadric("exactly one relation is required")
    g = R.relations[0]
    if any(t != 2 for t in g.total_degrees()):
        raise NotAQuadric("every term must have total degree 2")
    r = R.r
    A = [[Fraction(0)] * r for _ in range(r)]
    for c, u in g.terms:
        idx = [i for i, e in enumerate(u) for _ in range(e)]
        i, j = idx
        if i == j:
            A[i][i] += c
        else:
            A[i][j] += c / 2
            A[j][i] += c / 2
    return A


def quadric_checks(R: RingPresentation) -> QuadricReport:
    """Degree symmetry, full rank and the dimension bounds of a full intrinsic quadric.

    Raises:
      NotAQuadric, DegreeAsymmetry, RankDeficient.
    """
    A = quadric_matrix(R)
    deg = R.relation_degrees()[0]
    r = R.r
    for i in range(r):
        for j in range(i, r):
            if A[i][j] != 0:
                s = tuple(a + b for a, b in zip(R.degrees[i], R.degrees[j]))
                if s != deg:
                    raise DegreeAsymmetry(i, j)
    rk = sum(1 for row in rref([list(row) for row in A], r) if any(row))
    if rk < r:
        raise RankDeficient(rk, r)
    dim = R.dim_R - R.class_rank
    return QuadricReport(
        rank=rk,
        degree=deg,
        xhat_smooth=has_only_constants(R),
        class_rank_bound=R.class_rank <= dim + 3,
        ring_dim_bound=R.dim_R <= 2 * dim + 3,
    )


def _quadric_relation(pairs: Sequence[tuple[int, int]], r: int) -> list[tuple[int, tuple[int, ...]]]:
    """``Σ ± T_i T_j`` with alternating signs, one term per pair."""
    terms = []
    for n, (i, j) in enumerate(pairs):
        u = [0] * r
        u[i] += 1
        u[j] += 1
        terms.append((1 if n % 2 == 0 else -1, tuple(u)))
    return terms


def build_rank1_quadric(ws: Sequence[int], mus: Sequence[int]) -> tuple[RingPresentation, FBunch]:
    """Full intrinsic quadric with class group ``Z`` and bunch ``{Q≥0}``.

    The degrees ``ws[i]`` are repeated ``mus[i]`` times; the variable in
    position ``p`` is paired with the one in position ``r − 1 − p``, and a
    lone middle variable is squared.

    Raises:
      SymmetryViolation: weights not increasing and positive, ``w_i + w_{n−i+1}``
        not constant, multiplicities not symmetric, or weights not coprime.
      TooFewVariables: ``Σ μ_i < 5``.
    """
    ws, mus = list(ws), list(mus)
    if len(ws) != len(mus) or not ws:
        raise SymmetryViolation("need one multiplicity per weight")
    if any(m < 1 for m in mus):
        raise SymmetryViolation("multiplicities must be positive")
    if ws[0] < 1 or any(a >= b for a, b in zip(ws, ws[1:])):
        raise SymmetryViolation("weights must be strictly increasing positive integers")
    n = len(ws)
    total = ws[0] + ws[-1]
    for i in range(n):
        if ws[i] + ws[n - 1 - i] != total:
            raise SymmetryViolation(f"w_{i + 1} + w_{n - i} != {total}")
        if mus[i] != mus[n - 1 - i]:
            raise SymmetryViolation(f"mu_{i + 1} != mu_{n - i}")
    if math.gcd(*ws) != 1:
        raise SymmetryViolation("weights must generate Z")
    r = sum(mus)
    if r < 5:
        raise TooFewVariables(r)
    degrees = [(w,) for w, m in zip(ws, mus) for _ in range(m)]
    pairs = [(p, r - 1 - p) for p in range((r + 1) // 2)]
    R = validate_presentation(degrees, [_quadric_relation(pairs, r)], 1)
    R = _with_auto_smooth(R)
    return R, validate_fbunch(R, [RatCone.from_generators([(1,)], 1)])


def build_rank2_quadric(side: str, mu) -> tuple[RingPresentation, FBunch]:
    """The two rank-2 families of smooth full intrinsic quadrics.

    Left: ``x = (1,0)`` and ``y = (0,1)`` each ``μ`` times, ``q = Σ T_{x_i} T_{y_i}``.
    Right: ``x = (1,0)`` ``μ1`` times, ``y = (0,1)`` ``μ2`` times and
    ``x' = (−1,2)`` ``μ1`` times, ``q = Σ T_{x_i} T_{x'_i} + Σ T_{y_j}²``.
    In both cases ``Φ = {cone(x, y)}``.

    Raises:
      MultiplicityOutOfRange: bad side or multiplicities.
      TooFewVariables: right side with ``2μ1 + μ2 < 5``.
    """
    side = side.lower()
    if side == "left":
        m = mu if isinstance(mu, int) else (mu[0] if len(mu) == 1 else None)
        if m is None or m < 3:
            raise MultiplicityOutOfRange("left side needs a single multiplicity mu >= 3")
        r = 2 * m
        degrees = [(1, 0)] * m + [(0, 1)] * m
        terms = []
        for i in range(m):
            u = [0] * r
            u[i] = u[m + i] = 1
            terms.append((1, tuple(u)))
    elif side == "right":
        if isinstance(mu, int) or len(mu) != 2:
            raise MultiplicityOutOfRange("right side needs two multiplicities (mu1, mu2)")
        m1, m2 = mu
        if m1 < 1 or m2 < 1:
            raise MultiplicityOutOfRange("right side needs mu1 >= 1 and mu2 >= 1")
        if 2 * m1 + m2 < 5:
            raise TooFewVariables(2 * m1 + m2)
        r = 2 * m1 + m2
        degrees = [(1, 0)] * m1 + [(0, 1)] * m2 + [(-1, 2)] * m1
        terms = []
        for i in range(m1):
            u = [0] * r
            u[i] = u[m1 + m2 + i] = 1
            terms.append((1, tuple(u)))
        for j in range(m2):
            u = [0] * r
            u[m1 + j] = 2
            terms.append((1, tuple(u)))
    else:
        raise MultiplicityOutOfRange(f"unknown side {side!r}")
    R = validate_presentation(degrees, [terms], 2)
    R = _with_auto_smooth(R)
    tau = RatCone.from_generators([(1, 0), (0, 1)], 2)
    return R, validate_fbunch(R, [tau])


def _with_auto_smooth(R: RingPresentation) -> RingPresentation:
    if R.xhat_smooth is None and quadric_checks(R).xhat_smooth:
        return replace(R, xhat_smooth=True)
    return R
