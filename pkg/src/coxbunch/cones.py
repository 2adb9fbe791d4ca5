"""Rational polyhedral cones with eager double description.

Every :class:`RatCone` carries both of its descriptions:

* V-side: primitive integer extremal rays (taken modulo the lineality space and
  projected onto its orthogonal complement, so they are canonical) plus a
  canonical basis of the lineality space;
* H-side: primitive inner facet normals (projected into the linear span) plus a
  canonical basis of the orthogonal complement of the span.

Membership and relative-interior questions therefore reduce to sign checks on
exact integers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactlin import (
    Sublattice,
    canonical_subspace_basis,
    clear_denominators,
    elementary_divisors,
    from_columns,
    primitive,
)

Vec = tuple[int, ...]
FaceIndexSet = tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


class NonIntegralGenerators(ValueError):
    pass


class NotContained(ValueError):
    pass


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


# -- double description ------------------------------------------------------


def _dd(ineqs: Sequence[Vec], dim: int) -> tuple[list[Vec], list[Vec]]:
    """Generators of ``{x : a.x >= 0 for a in ineqs}``.

    Returns ``(lineality, rays)``: a basis of the lineality space and the
    extremal rays, both as integer vectors (rays not yet canonicalised).
    """
    lin: list[Vec] = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[Vec] = []
    zeros: list[frozenset[int]] = []  # processed inequalities tight at each ray
    for k, a in enumerate(ineqs):
        if not any(a):
            continue
        pivot = next((l for l in lin if dot(a, l)), None)
        if pivot is not None:
            ap = dot(a, pivot)
            new_lin = []
            for l in lin:
                if l is pivot:
                    continue
                al = dot(a, l)
                if al:
                    l = primitive(tuple(ap * x - al * y for x, y in zip(l, pivot)))
                new_lin.append(l)
            new_rays = []
            for r in rays:
                ar = dot(a, r)
                if ar:
                    s = 1 if ap > 0 else -1
                    r = primitive(tuple(s * (ap * x - ar * y) for x, y in zip(r, pivot)))
                new_rays.append(r)
            sign = 1 if ap > 0 else -1
            new_rays.append(tuple(sign * x for x in pivot))
            zeros = [z | {k} for z in zeros] + [frozenset(range(k))]
            lin, rays = new_lin, new_rays
            continue
        vals = [dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | {k} for i in zer]
        for p in pos:
            for n in neg:
                common = zeros[p] & zeros[n]
                if any(
                    j != p and j != n and common <= zeros[j] for j in range(len(rays))
                ):
                    continue
                vp, vn = vals[p], vals[n]
                r = primitive(tuple(vp * x - vn * y for x, y in zip(rays[n], rays[p])))
                new_rays.append(r)
                new_zeros.append(common | {k})
        rays, zeros = new_rays, new_zeros
    return lin, rays


def _projector(basis: Sequence[Vec], dim: int) -> list[list[int]] | None:
    """Integer multiple of the orthogonal projection onto ``span(basis)^⊥``.

    Returns ``d·I − Bᵀ·adj(B·Bᵀ)·B`` with ``d = det(B·Bᵀ) > 0``, or ``None`` when
    the basis is empty. ``basis`` must be linearly independent.
    """
    if not basis:
        return None
    m = len(basis)
    G = [[Fraction(dot(a, b)) for b in basis] for a in basis]
    # Gauss-Jordan inverse over Q of the (small) Gram matrix
    aug = [row + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(G)]
    for c in range(m):
        p = next(i for i in range(c, m) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for i in range(m):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    inv = [row[m:] for row in aug]
    d = 1
    for row in inv:
        for x in row:
            d = d * x.denominator // math.gcd(d, x.denominator)
    adj = [[int(x * d) for x in row] for row in inv]
    # M = d I - B^T adj B
    AB = [[sum(adj[i][l] * basis[l][j] for l in range(m)) for j in range(dim)] for i in range(m)]
    return [
        [d * int(i == j) - sum(basis[l][i] * AB[l][j] for l in range(m)) for j in range(dim)]
        for i in range(dim)
    ]


def _canonical_rays(rays: Iterable[Sequence], lineality: Sequence[Vec]) -> tuple[Vec, ...]:
    out = set()
    rays = list(rays)
    if not rays:
        return ()
    dim = len(rays[0])
    proj = _projector(lineality, dim)
    for r in rays:
        r = clear_denominators(r)
        if proj is not None:
            r = tuple(dot(row, r) for row in proj)
        if any(r):
            out.add(primitive(r))
    return tuple(sorted(out))


# -- the cone type -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RatCone:
    ambient_dim: int
    rays: tuple[Vec, ...]
    lineality: tuple[Vec, ...]
    facets: tuple[Vec, ...]
    equations: tuple[Vec, ...]

    # construction ----------------------------------------------------------

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence], dim: int | None = None) -> "RatCone":
        gens = [tuple(g) for g in gens]
        if dim is None:
            if not gens:
                raise DimensionMismatch("ambient dimension needed for an empty generator list")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise DimensionMismatch("generators of different dimensions")
        ints = [clear_denominators(g) for g in gens]
        ints = [g for g in ints if any(g)]
        # dual cone {u : g.u >= 0}: its lineality is the orthogonal complement
        dual_lin, dual_rays = _dd(ints, dim)
        equations = canonical_subspace_basis(dual_lin, dim)
        span_perp = equations
        facets = _canonical_rays(dual_rays, span_perp)
        return cls._from_h(facets, equations, dim, hint=ints)

    @classmethod
    def from_inequalities(
        cls,
        ineqs: Sequence[Sequence],
        equations: Sequence[Sequence] = (),
        dim: int | None = None,
    ) -> "RatCone":
        """Cone ``{x : a.x >= 0, e.x = 0}``; the H-data need not be irredundant."""
        rows = [clear_denominators(a) for a in ineqs]
        eqs = [clear_denominators(e) for e in equations]
        if dim is None:
            dim = len((rows + eqs)[0])
        system = rows + eqs + [tuple(-x for x in e) for e in eqs]
        lin, rays = _dd(system, dim)
        return cls.from_generators(list(rays) + list(lin) + [tuple(-x for x in l) for l in lin], dim)

    @classmethod
    def _from_h(cls, facets, equations, dim, hint=None) -> "RatCone":
        system = list(facets) + list(equations) + [tuple(-x for x in e) for e in equations]
        lin, rays = _dd(system, dim)
        lineality = canonical_subspace_basis(lin, dim)
        rays = _canonical_rays(rays, lineality)
        return cls(dim, rays, lineality, tuple(facets), tuple(equations))

    @classmethod
    def zero(cls, dim: int) -> "RatCone":
        return cls.from_generators([], dim)

    @classmethod
    def full_space(cls, dim: int) -> "RatCone":
        return cls.from_inequalities([], [], dim)

    # basic data ------------------------------------------------------------

    @property
    def generators(self) -> tuple[Vec, ...]:
        """Irredundant generators: rays, then the lineality basis and its negatives."""
        return self.rays + self.lineality + tuple(tuple(-x for x in l) for l in self.lineality)

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality)

    def _key(self):
        return (self.ambient_dim, self.rays, self.lineality)

    def __eq__(self, other) -> bool:
        return isinstance(other, RatCone) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        extra = f", lineality={list(self.lineality)}" if self.lineality else ""
        return f"RatCone({list(self.rays)}{extra})"

    # membership ------------------------------------------------------------

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector dimension")
        return all(dot(e, v) == 0 for e in self.equations) and all(
            dot(f, v) >= 0 for f in self.facets
        )

    __contains__ = contains

    def in_relative_interior(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector dimension")
        return all(dot(e, v) == 0 for e in self.equations) and all(
            dot(f, v) > 0 for f in self.facets
        )

    def contains_cone(self, other: "RatCone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def relative_interior_point(self) -> Vec:
        """Sum of the irredundant generators (``0`` for the zero cone or a subspace)."""
        s = [0] * self.ambient_dim
        for r in self.rays:
            s = [a + b for a, b in zip(s, r)]
        return tuple(s)

    def in_lin_span(self, v: Sequence) -> bool:
        return all(dot(e, v) == 0 for e in self.equations)

    # shape -----------------------------------------------------------------

    def is_strictly_convex(self) -> bool:
        return not self.lineality

    def spans_fulldim(self) -> bool:
        return not self.equations

    def is_simplicial(self) -> bool:
        if self.lineality:
            return False
        return len(self.rays) == self.dim

    def is_regular(self) -> bool:
        """Simplicial, and the rays extend to a lattice basis."""
        if not self.is_simplicial():
            return False
        if not self.rays:
            return True
        M = from_columns(self.rays, self.ambient_dim)
        return all(d == 1 for d in elementary_divisors(M, len(self.rays))) and len(
            elementary_divisors(M, len(self.rays))
        ) == len(self.rays)

    def lattice(self) -> Sublattice:
        """Lattice generated by the primitive generators."""
        return Sublattice.generated_by(self.generators, self.ambient_dim)


# -- operations --------------------------------------------------------------


def cone_from_generators(vs: Sequence[Sequence], dim: int | None = None) -> RatCone:
    return RatCone.from_generators(vs, dim)


def dual(C: RatCone) -> RatCone:
    """The dual cone; read off directly from the stored double description."""
    return RatCone(C.ambient_dim, C.facets, C.equations, C.rays, C.lineality)


def intersect(*cones: RatCone) -> RatCone:
    if not cones:
        raise ValueError("nothing to intersect")
    dim = cones[0].ambient_dim
    if any(c.ambient_dim != dim for c in cones):
        raise DimensionMismatch("cones in different ambient spaces")
    if len(cones) == 1:
        return cones[0]
    ineqs = [f for c in cones for f in c.facets]
    eqs = [e for c in cones for e in c.equations]
    return RatCone.from_inequalities(ineqs, eqs, dim)


def cone_sum(cones: Sequence[RatCone], dim: int) -> RatCone:
    return RatCone.from_generators([g for c in cones for g in c.generators], dim)


def contains(C: RatCone, v) -> bool:
    return C.contains(v)


def in_relative_interior(C: RatCone, v) -> bool:
    return C.in_relative_interior(v)


def relative_interior_point(C: RatCone) -> Vec:
    return C.relative_interior_point()


def cone_dim(C: RatCone) -> int:
    return C.dim


def is_strictly_convex(C: RatCone) -> bool:
    return C.is_strictly_convex()


def spans_fulldim(C: RatCone) -> bool:
    return C.spans_fulldim()


def is_regular(C: RatCone) -> bool:
    return C.is_regular()


def is_simplicial(C: RatCone) -> bool:
    return C.is_simplicial()


def interior_contains(outer: RatCone, inner: RatCone) -> bool:
    """Decide ``inner° ⊆ outer°``.

    It suffices that ``inner ⊆ outer`` and one relative interior point of
    ``inner`` lies in ``outer°``: a face of ``outer`` meeting the relatively
    open set ``inner°`` would contain all of it.
    """
    return outer.contains_cone(inner) and outer.in_relative_interior(
        inner.relative_interior_point()
    )


def interiors_meet(A: RatCone, B: RatCone) -> bool:
    """Decide ``A° ∩ B° ≠ ∅``.

    When the relative interiors meet, ``(A ∩ B)° = A° ∩ B°``; so it is enough to
    test one relative interior point of ``A ∩ B``.
    """
    p = intersect(A, B).relative_interior_point()
    return A.in_relative_interior(p) and B.in_relative_interior(p)


def overlap(A: RatCone, B: RatCone) -> bool:
    """``∅ ≠ A° ∩ B° ≠ B°`` as required between distinct bunch members."""
    return interiors_meet(A, B) and not interior_contains(A, B)


def _face_generators(C: RatCone, v: Sequence) -> list[Vec]:
    """Generators of the smallest face of ``C`` containing ``v`` (assumed in ``C``)."""
    tight = [f for f in C.facets if dot(f, v) == 0]
    on = [r for r in C.rays if all(dot(f, r) == 0 for f in tight)]
    return on + list(C.lineality) + [tuple(-x for x in l) for l in C.lineality]


def minimal_face_containing(C: RatCone, v: Sequence) -> RatCone:
    return RatCone.from_generators(_face_generators(C, v), C.ambient_dim)


def face_relation(C1: RatCone, C2: RatCone) -> str:
    """``"Face"`` if ``C1`` is a face of ``C2``, else ``"NotFace"``.

    The smallest face of ``C2`` meeting ``C1°`` always contains ``C1``, so
    ``C1`` is a face exactly when that face's generators lie in ``C1``.

    Raises:
      NotContained: if ``C1`` is not a subset of ``C2``.
    """
    if not C2.contains_cone(C1):
        raise NotContained("first cone is not contained in the second")
    gens = _face_generators(C2, C1.relative_interior_point())
    return "Face" if all(C1.contains(g) for g in gens) else "NotFace"


def is_face(C1: RatCone, C2: RatCone) -> bool:
    return C2.contains_cone(C1) and face_relation(C1, C2) == "Face"


def facets_as_cones(C: RatCone) -> list[RatCone]:
    out = []
    for f in C.facets:
        out.append(
            RatCone.from_generators(
                [r for r in C.rays if dot(f, r) == 0]
                + list(C.lineality)
                + [tuple(-x for x in l) for l in C.lineality],
                C.ambient_dim,
            )
        )
    return out


def orthant_face(indices: Iterable[int], r: int) -> RatCone:
    """``cone(e_i : i in indices)`` inside ``Q^r``."""
    return RatCone.from_generators(
        [tuple(int(i == j) for j in range(r)) for i in indices], r
    )


def subsets(n: int) -> Iterable[FaceIndexSet]:
    """All index subsets of ``range(n)``, ordered by size then lexicographically."""
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)
