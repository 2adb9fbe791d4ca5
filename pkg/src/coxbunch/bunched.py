"""Bunched-ring presentations and their combinatorics.

A presentation records the degrees ``w_1..w_r`` of a system of generators in
``K = Z^k`` together with the defining relations. Faces ``γ₀`` of the positive
orthant ``γ ⊂ Q^r`` are encoded as sorted tuples of 0-based indices; the CLI
translates to and from the 1-based convention ``T_1..T_r``.
"""

from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cones import (
    FaceIndexSet,
    RatCone,
    interior_contains,
    interiors_meet,
)
from .exactlin import (
    IntMatrix,
    from_columns,
    is_surjective,
    kernel_basis,
    matmul,
    rank,
    transpose,
)
from .fans import Fan, polytopal_fan_with_rays, verify_fan

log = logging.getLogger(__name__)

DEFAULT_MAX_GENERATORS = 24


# -- errors ------------------------------------------------------------------


class ValidationError(ValueError):
    """Base class for violations of the bunched-ring axioms.

    ``diagnostic`` is a short machine-readable label such as
    ``FacetConditionFails(3)``; indices in it are 1-based.
    """

    def __init__(self, diagnostic: str, detail: str = ""):
        self.diagnostic = diagnostic
        super().__init__(f"{diagnostic}: {detail}" if detail else diagnostic)


def _label(face: Iterable[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in face) + "}"


class DegreesDontGenerate(ValidationError):
    def __init__(self):
        super().__init__("DegreesDontGenerate", "the degrees do not generate the class group")


class RelationNotHomogeneous(ValidationError):
    def __init__(self, relation: int, a: int, b: int):
        self.relation, self.terms = relation, (a, b)
        super().__init__(
            f"RelationNotHomogeneous({relation + 1},{a + 1},{b + 1})",
            f"terms {a + 1} and {b + 1} of relation {relation + 1} have different degrees",
        )


class TooFewGenerators(ValidationError):
    def __init__(self, r: int, k: int):
        super().__init__("TooFewGenerators", f"{r} generators cannot generate Z^{k}")


class MalformedRelation(ValidationError):
    def __init__(self, relation: int, why: str):
        super().__init__(f"MalformedRelation({relation + 1})", why)


class OracleRequired(ValidationError):
    def __init__(self):
        super().__init__(
            "OracleRequired",
            "F-faces of a ring with several relations need an explicit fface_table",
        )


class TooManyGenerators(ValidationError):
    def __init__(self, r: int, bound: int):
        super().__init__("TooManyGenerators", f"r = {r} exceeds the face-scan bound {bound}")


class NotProjectedFFace(ValidationError):
    def __init__(self, index: int, cone: RatCone):
        self.cone = cone
        super().__init__(
            f"NotProjectedFFace({index + 1})",
            f"bunch cone {index + 1} {list(cone.rays)} is not the image of an F-face",
        )


class OverlapViolation(ValidationError):
    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(
            f"OverlapViolation({i + 1},{j + 1})",
            f"bunch cones {i + 1} and {j + 1} do not overlap properly",
        )


class MaximalityViolation(ValidationError):
    def __init__(self, face: FaceIndexSet):
        self.face = face
        super().__init__(
            f"MaximalityViolation({_label(face)})",
            f"the image of F-face {_label(face)} overlaps every bunch cone but is missing",
        )


class FacetConditionFails(ValidationError):
    def __init__(self, i: int, why: str):
        self.index = i
        super().__init__(f"FacetConditionFails({i + 1})", why)


class EmptyBunch(ValidationError):
    def __init__(self):
        super().__init__("EmptyBunch", "an F-bunch must be nonempty")


class RaysIncompatible(ValidationError):
    def __init__(self, why: str):
        super().__init__("RaysIncompatible", why)


class PreconditionFailed(ValidationError):
    def __init__(self, why: str):
        super().__init__("PreconditionFailed", why)


# -- data model --------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """A polynomial ``Σ α_u T^u`` stored as (coefficient, exponent vector) pairs."""

    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]

    @classmethod
    def of(cls, terms: Iterable[tuple]) -> "Relation":
        return cls(tuple((Fraction(c), tuple(int(e) for e in u)) for c, u in terms))

    def supports(self) -> list[frozenset[int]]:
        return [frozenset(i for i, e in enumerate(u) if e) for _, u in self.terms]

    def degree(self, degrees: Sequence[Sequence[int]]) -> tuple[int, ...]:
        _, u = self.terms[0]
        return _degree_of(u, degrees)

    def total_degrees(self) -> list[int]:
        return [sum(u) for _, u in self.terms]


def _degree_of(u: Sequence[int], degrees: Sequence[Sequence[int]]) -> tuple[int, ...]:
    k = len(degrees[0]) if degrees else 0
    return tuple(sum(e * w[j] for e, w in zip(u, degrees)) for j in range(k))


@dataclass(frozen=True)
class RingPresentation:
    """Degrees ``w_i`` (one tuple per generator) and homogeneous relations.

    Attributes:
      class_rank: rank ``k`` of the class group ``K = Z^k``.
      degrees: ``w_1..w_r`` as integer tuples of length ``k``.
      relations: the defining relations.
      xhat_smooth: user assertion that the characteristic space is smooth;
        ``None`` when unknown.
      fface_table: explicit list of F-faces, for rings with several relations.
    """

    class_rank: int
    degrees: tuple[tuple[int, ...], ...]
    relations: tuple[Relation, ...] = ()
    xhat_smooth: bool | None = None
    fface_table: frozenset[FaceIndexSet] | None = None

    @property
    def r(self) -> int:
        return len(self.degrees)

    @property
    def num_generators(self) -> int:
        return len(self.degrees)

    @property
    def dim_R(self) -> int:
        return self.r - len(self.relations)

    @property
    def Q(self) -> IntMatrix:
        return from_columns(self.degrees, self.class_rank)

    def image(self, face: Iterable[int]) -> RatCone:
        """The projected cone ``Q(γ₀)``."""
        return _image(self.degrees, self.class_rank, tuple(sorted(face)))

    def image_lattice_surjective(self, face: Iterable[int]) -> bool:
        cols = [self.degrees[i] for i in face]
        return is_surjective(from_columns(cols, self.class_rank), len(cols))

    def relation_degrees(self) -> list[tuple[int, ...]]:
        return [g.degree(self.degrees) for g in self.relations]

    def full_face(self) -> FaceIndexSet:
        return tuple(range(self.r))


@functools.lru_cache(maxsize=1 << 16)
def _image(degrees, k: int, face: FaceIndexSet) -> RatCone:
    return RatCone.from_generators([degrees[i] for i in face], k)


def validate_presentation(
    degrees: Sequence[Sequence[int]],
    relations: Sequence[Relation | Iterable[tuple]] = (),
    class_rank: int | None = None,
    xhat_smooth: bool | None = None,
    fface_table: Iterable[Iterable[int]] | None = None,
) -> RingPresentation:
    """Check the presentation axioms and build a :class:`RingPresentation`.

    Raises:
      TooFewGenerators: fewer generators than the class-group rank.
      DegreesDontGenerate: the degrees do not generate ``Z^k``.
      RelationNotHomogeneous: two terms of a relation have different degrees.
      MalformedRelation: fewer than two terms, repeated or ill-sized exponents.
    """
    degs = tuple(tuple(int(x) for x in w) for w in degrees)
    if class_rank is None:
        if not degs:
            raise ValueError("class rank needed when there are no generators")
        class_rank = len(degs[0])
    k = class_rank
    if any(len(w) != k for w in degs):
        raise ValueError("every degree must have length equal to the class rank")
    r = len(degs)
    if r < k:
        raise TooFewGenerators(r, k)
    if not is_surjective(from_columns(degs, k), r):
        raise DegreesDontGenerate()
    rels = []
    for j, g in enumerate(relations):
        g = g if isinstance(g, Relation) else Relation.of(g)
        if len(g.terms) < 2:
            raise MalformedRelation(j, "a relation needs at least two terms")
        exps = [u for _, u in g.terms]
        if any(len(u) != r for u in exps):
            raise MalformedRelation(j, f"exponent vectors must have length {r}")
        if any(e < 0 for u in exps for e in u):
            raise MalformedRelation(j, "exponents must be nonnegative")
        if len(set(exps)) != len(exps):
            raise MalformedRelation(j, "exponent vectors must be pairwise distinct")
        if any(c == 0 for c, _ in g.terms):
            raise MalformedRelation(j, "coefficients must be nonzero")
        d0 = _degree_of(exps[0], degs)
        for b, u in enumerate(exps[1:], start=1):
            if _degree_of(u, degs) != d0:
                raise RelationNotHomogeneous(j, 0, b)
        common = frozenset.intersection(*g.supports())
        if common:
            log.warning(
                "relation %d is divisible by T_%d; it cannot be prime",
                j + 1,
                min(common) + 1,
            )
        rels.append(g)
    table = None
    if fface_table is not None:
        table = frozenset(tuple(sorted(set(f))) for f in fface_table)
        if any(i < 0 or i >= r for f in table for i in f):
            raise ValueError("fface_table index out of range")
    return RingPresentation(k, degs, tuple(rels), xhat_smooth, table)


# -- F-faces -----------------------------------------------------------------


def nu(R: RingPresentation, face: Iterable[int]) -> int:
    """Number of terms of the single relation whose support lies in ``face``."""
    s = frozenset(face)
    return sum(1 for sup in R.relations[0].supports() if sup <= s)


def is_fface(R: RingPresentation, face: Iterable[int]) -> bool:
    """Decide whether ``face`` is an F-face.

    Without relations every face is one. With a single relation the face is an
    F-face exactly when the number of terms supported inside it differs from
    one. An explicit ``fface_table`` takes precedence when supplied.

    Raises:
      OracleRequired: several relations and no ``fface_table``.
    """
    face = tuple(sorted(face))
    if R.fface_table is not None:
        return face in R.fface_table
    if not R.relations:
        return True
    if len(R.relations) == 1:
        return nu(R, face) != 1
    raise OracleRequired()


def all_faces(r: int) -> Iterable[FaceIndexSet]:
    """Faces of the orthant ordered by size, then lexicographically."""
    for n in range(r + 1):
        yield from itertools.combinations(range(r), n)


@functools.lru_cache(maxsize=256)
def enumerate_ffaces(R: RingPresentation, max_generators: int = DEFAULT_MAX_GENERATORS) -> tuple[FaceIndexSet, ...]:
    """All F-faces in canonical order.

    Raises:
      TooManyGenerators: ``r`` exceeds ``max_generators``.
      OracleRequired: see :func:`is_fface`.
    """
    if R.r > max_generators:
        raise TooManyGenerators(R.r, max_generators)
    if R.fface_table is None and len(R.relations) > 1:
        raise OracleRequired()
    return tuple(f for f in all_faces(R.r) if is_fface(R, f))


def projected_ffaces(R: RingPresentation, max_generators: int = DEFAULT_MAX_GENERATORS) -> dict[RatCone, FaceIndexSet]:
    """Distinct images ``Q(γ₀)`` of F-faces, each with its first witness."""
    out: dict[RatCone, FaceIndexSet] = {}
    for f in enumerate_ffaces(R, max_generators):
        out.setdefault(R.image(f), f)
    return out


# -- F-bunches ---------------------------------------------------------------


@dataclass(frozen=True)
class FBunch:
    """A validated F-bunch: cones in ``K_Q`` plus a witness F-face for each."""

    cones: tuple[RatCone, ...]
    witnesses: tuple[FaceIndexSet, ...] = field(default=())

    def __iter__(self):
        return iter(self.cones)

    def __len__(self) -> int:
        return len(self.cones)


def _proper_overlap(a: RatCone, b: RatCone) -> bool:
    """``∅ ≠ a° ∩ b° ≠ b°``."""
    return interiors_meet(a, b) and not interior_contains(a, b)


def validate_fbunch(
    R: RingPresentation,
    cones: Sequence[RatCone | Sequence[int]],
    skip_maximality: bool = False,
    max_generators: int = DEFAULT_MAX_GENERATORS,
) -> FBunch:
    """Check the F-bunch axioms for ``cones`` and attach witnesses.

    Each entry is either a :class:`RatCone` in ``K_Q`` or a face (0-based index
    tuple) standing for its image. Repeated cones are merged.

    Raises:
      EmptyBunch, NotProjectedFFace, OverlapViolation, MaximalityViolation,
      FacetConditionFails.
    """
    if not cones:
        raise EmptyBunch()
    pf = projected_ffaces(R, max_generators)
    members: list[RatCone] = []
    witnesses: list[FaceIndexSet] = []
    for idx, c in enumerate(cones):
        given = None
        if not isinstance(c, RatCone):
            given = tuple(sorted(c))
            c = R.image(given)
        if c.ambient_dim != R.class_rank:
            raise NotProjectedFFace(idx, c)
        if c in members:
            continue
        if given is not None and is_fface(R, given):
            wit = given
        elif c in pf:
            wit = pf[c]
        else:
            raise NotProjectedFFace(idx, c)
        members.append(c)
        witnesses.append(wit)
    for i, j in itertools.combinations(range(len(members)), 2):
        a, b = members[i], members[j]
        if not (_proper_overlap(a, b) and _proper_overlap(b, a)):
            raise OverlapViolation(i, j)
    if not skip_maximality:
        for c, wit in pf.items():
            if c in members:
                continue
            if all(_proper_overlap(c, s) for s in members):
                raise MaximalityViolation(wit)
    else:
        log.warning("F-bunch maximality check skipped on request")
    full = R.full_face()
    for i in range(R.r):
        facet = tuple(j for j in full if j != i)
        if not R.image_lattice_surjective(facet):
            raise FacetConditionFails(i, f"the degrees other than w_{i + 1} do not generate K")
        img = R.image(facet)
        if not any(interior_contains(img, t) for t in members):
            raise FacetConditionFails(
                i, f"no bunch cone has interior inside the image of the facet without e_{i + 1}"
            )
    order = sorted(range(len(members)), key=lambda i: witnesses[i])
    return FBunch(tuple(members[i] for i in order), tuple(witnesses[i] for i in order))


def relevant_faces(R: RingPresentation, Phi: FBunch | Sequence[RatCone], max_generators: int = DEFAULT_MAX_GENERATORS) -> list[FaceIndexSet]:
    """F-faces ``γ₀`` with ``Q(γ₀)° ⊇ τ°`` for some ``τ`` in the bunch."""
    taus = list(Phi)
    out = []
    for f in enumerate_ffaces(R, max_generators):
        img = R.image(f)
        if img.dim < min(t.dim for t in taus):
            continue
        if any(interior_contains(img, t) for t in taus):
            out.append(f)
    return out


def minimal_faces(faces: Sequence[FaceIndexSet]) -> list[FaceIndexSet]:
    sets = [frozenset(f) for f in faces]
    return [f for f, s in zip(faces, sets) if not any(o < s for o in sets)]


def covering_collection(R: RingPresentation, Phi, max_generators: int = DEFAULT_MAX_GENERATORS) -> list[FaceIndexSet]:
    """Inclusion-minimal relevant faces."""
    return minimal_faces(relevant_faces(R, Phi, max_generators))


# -- Gale duality ------------------------------------------------------------


@dataclass(frozen=True)
class GaleData:
    """The Gale transform: ``P`` (n x r) with ``P·e_i = v_i``."""

    quotient_rank: int
    P: IntMatrix

    def images(self) -> list[tuple[int, ...]]:
        """Gale images ``v_1..v_r`` (columns of ``P``)."""
        r = len(self.P[0]) if self.P else 0
        return [tuple(row[i] for row in self.P) for i in range(r)] if self.quotient_rank else []


def gale_setup(R: RingPresentation) -> GaleData:
    """Transpose of the saturated kernel basis of the degree matrix."""
    Q = R.Q
    ker = kernel_basis(Q, R.r)  # r x n, columns span ker(Q)
    n = R.r - R.class_rank
    if n == 0:
        return GaleData(0, ())
    P = transpose(ker)
    if any(any(row) for row in matmul(Q, ker)):
        raise AssertionError("kernel basis not annihilated by the degree matrix")
    if rank(P, R.r) != n:
        raise AssertionError("Gale matrix has deficient rank")
    return GaleData(n, P)


def gale_images(R: RingPresentation) -> list[tuple[int, ...]]:
    g = gale_setup(R)
    if g.quotient_rank == 0:
        return [() for _ in range(R.r)]
    return g.images()


def costar(face: Iterable[int], r: int) -> FaceIndexSet:
    """Complementary index set, i.e. the face of the dual orthant paired with ``face``."""
    s = set(face)
    return tuple(i for i in range(r) if i not in s)


def _p_cone(vs: Sequence[tuple[int, ...]], idx: Iterable[int], n: int) -> RatCone:
    return RatCone.from_generators([vs[i] for i in idx], n)


def minimal_ambient_fan(R: RingPresentation, Phi, max_generators: int = DEFAULT_MAX_GENERATORS) -> Fan:
    """Fan in ``Z^n`` whose maximal cones are the maximal ``P(γ₀*)``, ``γ₀`` in cov.

    Raises:
      NotAFan: the cones are not compatible, which signals an invalid bunch.
    """
    n = R.r - R.class_rank
    vs = gale_images(R)
    cones = [_p_cone(vs, costar(f, R.r), n) for f in covering_collection(R, Phi, max_generators)]
    uniq = list(dict.fromkeys(cones))
    maximal = [c for c in uniq if not any(o != c and o.contains_cone(c) for o in uniq)]
    return verify_fan(maximal, n)


def extend_to_bunch(R: RingPresentation, Phi, max_generators: int = DEFAULT_MAX_GENERATORS) -> list[RatCone]:
    """Greedily enlarge ``Φ`` over all projected faces, keep the minimal cones.

    Candidate faces are scanned in lexicographic order of their index sets; a
    candidate image is added when its relative interior meets that of every
    cone collected so far.
    """
    if R.r > max_generators:
        raise TooManyGenerators(R.r, max_generators)
    theta: list[RatCone] = list(dict.fromkeys(Phi))
    for f in sorted(all_faces(R.r)):
        img = R.image(f)
        if img in theta:
            continue
        if all(interiors_meet(img, t) for t in theta):
            theta.append(img)
    minimal = [c for c in theta if not any(o != c and c.contains_cone(o) for o in theta)]
    return sorted(minimal, key=lambda c: c.rays)


def bunch_from_fan(F: Fan, Q: IntMatrix | Sequence[Sequence[int]], r: int | None = None) -> list[RatCone]:
    """The bunch of projected faces corresponding to a fan on the Gale images.

    For each maximal cone ``σ`` the indices ``J = {i : v_i ∈ σ}`` give the face
    ``γ₀`` complementary to ``J``; the result is the set of minimal ``Q(γ₀)``.

    Raises:
      RaysIncompatible: a fan cone is not generated by the Gale images it contains.
    """
    Q = tuple(tuple(row) for row in Q)
    k = len(Q)
    if r is None:
        r = len(Q[0]) if Q else 0
    degrees = tuple(tuple(Q[j][i] for j in range(k)) for i in range(r))
    R = RingPresentation(k, degrees)
    n = r - k
    if F.ambient_rank != n:
        raise RaysIncompatible(f"fan lives in rank {F.ambient_rank}, expected {n}")
    vs = gale_images(R)
    images = []
    for sigma in F.maximal_cones:
        J = [i for i in range(r) if sigma.contains(vs[i])]
        if _p_cone(vs, J, n) != sigma:
            raise RaysIncompatible(f"cone {list(sigma.rays)} is not spanned by Gale images")
        images.append(R.image(costar(J, r)))
    uniq = list(dict.fromkeys(images))
    minimal = [c for c in uniq if not any(o != c and c.contains_cone(o) for o in uniq)]
    return sorted(minimal, key=lambda c: c.rays)


def has_only_constants(R: RingPresentation) -> bool:
    """``Q(γ)`` is strictly convex and no degree vanishes."""
    if any(not any(w) for w in R.degrees):
        return False
    return R.image(R.full_face()).is_strictly_convex()


def projectivize(R: RingPresentation, max_generators: int = DEFAULT_MAX_GENERATORS) -> FBunch:
    """An F-bunch for ``R`` whose variety is projective.

    Builds a complete polytopal fan on the Gale images, reads off the bunch
    ``Θ'`` it corresponds to, and keeps the minimal images of the F-faces
    relevant for ``Θ'``.

    Raises:
      PreconditionFailed: ``Q(γ)`` not strictly convex, a zero degree, or Gale
        images that do not positively span.
    """
    if not has_only_constants(R):
        raise PreconditionFailed("Q(γ) must be strictly convex with all degrees nonzero")
    n = R.r - R.class_rank
    if n == 0:
        theta = [R.image(R.full_face())]
    else:
        vs = gale_images(R)
        if any(not any(v) for v in vs):
            raise PreconditionFailed("a Gale image vanishes")
        fan = polytopal_fan_with_rays(vs)
        theta = bunch_from_fan(fan, R.Q, R.r)
    rlv = relevant_faces(R, theta, max_generators)
    imgs = list(dict.fromkeys(R.image(f) for f in rlv))
    phi = [c for c in imgs if not any(o != c and c.contains_cone(o) for o in imgs)]
    return validate_fbunch(R, phi, max_generators=max_generators)
