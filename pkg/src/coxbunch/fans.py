"""Fans of strictly convex rational cones.

A :class:`Fan` is stored through its maximal cones only; faces are derived on
demand. Besides validation this module provides stellar subdivision and the
construction of a complete polytopal fan with a prescribed set of rays, which
drives the projectivization of bunched rings.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cones import RatCone, dot, facets_as_cones, intersect, is_face
from .exactlin import from_columns, is_surjective, primitive


class NotAFan(ValueError):
    """Two cones intersect in something that is not a face of both."""

    def __init__(self, pair: tuple[int, int], reason: str = "intersection is not a common face"):
        self.pair = pair
        super().__init__(f"NotAFan({pair[0]}, {pair[1]}): {reason}")


class RayOutsideSupport(ValueError):
    pass


class DoNotSpanCone(ValueError):
    pass


class DoNotGenerateLattice(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    """A fan given by its maximal cones, kept in canonical order."""

    ambient_rank: int
    maximal_cones: tuple[RatCone, ...]

    def __iter__(self):
        return iter(self.maximal_cones)

    def __len__(self) -> int:
        return len(self.maximal_cones)

    def rays(self) -> list[tuple[int, ...]]:
        return rays(self)

    def support_contains(self, v: Sequence[int]) -> bool:
        return any(c.contains(v) for c in self.maximal_cones)


def _cone_key(c: RatCone):
    return (-c.dim, c.rays)


def _canonical(ambient_rank: int, cones: Iterable[RatCone]) -> Fan:
    uniq = {c: None for c in cones}
    return Fan(ambient_rank, tuple(sorted(uniq, key=lambda c: c.rays)))


def verify_fan(maximal_cones: Sequence[RatCone], ambient_rank: int | None = None) -> Fan:
    """Validate a collection of cones as a fan and return it in canonical form.

    Cones that are faces of other cones in the list are dropped.

    Args:
      maximal_cones: strictly convex cones, all in the same ambient space.
      ambient_rank: required when the list is empty.

    Raises:
      NotAFan: with the (0-based) indices of the first offending pair.
    """
    cones = list(maximal_cones)
    if ambient_rank is None:
        if not cones:
            raise ValueError("ambient rank needed for an empty fan")
        ambient_rank = cones[0].ambient_dim
    for i, c in enumerate(cones):
        if c.ambient_dim != ambient_rank:
            raise NotAFan((i, i), "cone lives in a different ambient space")
        if not c.is_strictly_convex():
            raise NotAFan((i, i), "cone is not strictly convex")
    for i, j in itertools.combinations(range(len(cones)), 2):
        a, b = cones[i], cones[j]
        meet = intersect(a, b)
        if not (is_face(meet, a) and is_face(meet, b)):
            raise NotAFan((i, j))
    keep = []
    for i, c in enumerate(cones):
        dominated = any(
            j != i and o != c and o.contains_cone(c) for j, o in enumerate(cones)
        )
        if not dominated:
            keep.append(c)
    return _canonical(ambient_rank, keep)


def rays(F: Fan) -> list[tuple[int, ...]]:
    """Primitive generators of the one-dimensional cones, sorted."""
    return sorted({r for c in F.maximal_cones for r in c.rays})


def stellar_subdivide(F: Fan, v: Sequence[int]) -> Fan:
    """Insert the ray through ``v`` by stellar subdivision.

    Every maximal cone containing ``v`` is replaced by the cones spanned by
    ``v`` and those of its facets that miss ``v``.

    Raises:
      RayOutsideSupport: if no cone of ``F`` contains ``v``.
    """
    v = primitive(v)
    if len(v) != F.ambient_rank:
        raise ValueError("vector dimension differs from the fan's ambient rank")
    if not F.support_contains(v):
        raise RayOutsideSupport(f"{list(v)} is not in the support of the fan")
    if v in rays(F):
        return F
    out: list[RatCone] = []
    for c in F.maximal_cones:
        if not c.contains(v):
            out.append(c)
            continue
        for facet in facets_as_cones(c):
            if facet.contains(v):
                continue
            out.append(RatCone.from_generators(list(facet.rays) + [v], F.ambient_rank))
    # cones of dimension below the maximum may now be faces of new cones
    maximal = [c for c in out if not any(o != c and o.contains_cone(c) for o in out)]
    return _canonical(F.ambient_rank, maximal)


def face_fan_of_hull(vs: Sequence[Sequence[int]], n: int) -> list[RatCone]:
    """Cones over the facets of ``conv(vs)``; assumes 0 is an interior point."""
    lifted = [tuple(v) + (1,) for v in vs]
    hull = RatCone.from_generators(lifted, n + 1)
    cones = []
    for f in hull.facets:
        on = [tuple(v) for v in vs if dot(f, tuple(v) + (1,)) == 0]
        cones.append(RatCone.from_generators(on, n))
    return cones


def polytopal_fan_with_rays(vs: Sequence[Sequence[int]]) -> Fan:
    """A complete polytopal fan whose rays are exactly the rays through ``vs``.

    Starts from the face fan of ``conv(vs)`` and stellar-subdivides at every
    vector that is not yet a ray.

    Raises:
      DoNotGenerateLattice: if the vectors do not generate ``Z^n``.
      DoNotSpanCone: if they do not positively span ``Q^n``.
    """
    vs = [primitive(v) for v in vs]
    if not vs:
        raise DoNotSpanCone("no vectors given")
    n = len(vs[0])
    vs = sorted(set(vs))
    if not is_surjective(from_columns(vs, n), len(vs)):
        raise DoNotGenerateLattice("the vectors do not generate the lattice")
    spanned = RatCone.from_generators(vs, n)
    if spanned.facets or spanned.equations:
        raise DoNotSpanCone("the vectors do not positively span the space")
    if n == 0:
        return Fan(0, (RatCone.zero(0),))
    F = verify_fan(face_fan_of_hull(vs, n), n)
    for v in vs:
        F = stellar_subdivide(F, v)
    return F


def is_complete(F: Fan) -> bool:
    """Decide whether the maximal cones cover the ambient space.

    For a pure full-dimensional fan this holds exactly when every facet of
    every maximal cone is shared with precisely one other maximal cone.
    """
    n = F.ambient_rank
    if not F.maximal_cones:
        return False
    if n == 0:
        return True
    if any(c.dim != n for c in F.maximal_cones):
        return False
    counts: dict[RatCone, int] = {}
    for c in F.maximal_cones:
        for facet in facets_as_cones(c):
            counts[facet] = counts.get(facet, 0) + 1
    return all(k == 2 for k in counts.values())


# -- text format -------------------------------------------------------------


def _fmt(v: Sequence[int]) -> str:
    return "[" + " ".join(str(x) for x in v) + "]"


def export_fan(F: Fan) -> str:
    """Serialize: ambient rank, then one maximal cone per line.

    Each cone is written as its sorted primitive rays in brackets; the zero
    cone is written as ``{}``. Lines are sorted lexicographically by ray list.
    """
    lines = [str(F.ambient_rank)]
    for c in sorted(F.maximal_cones, key=lambda c: c.rays):
        lines.append(" ".join(_fmt(r) for r in c.rays) if c.rays else "{}")
    return "\n".join(lines) + "\n"


_VEC = re.compile(r"\[([^\]]*)\]")


def parse_fan(text: str) -> Fan:
    """Inverse of :func:`export_fan`; the result is re-verified."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty fan document")
    n = int(lines[0])
    cones = []
    for ln in lines[1:]:
        if ln == "{}":
            cones.append(RatCone.zero(n))
            continue
        vecs = [tuple(int(x) for x in m.split()) for m in _VEC.findall(ln)]
        if not vecs or any(len(v) != n for v in vecs):
            raise ValueError(f"malformed cone line: {ln!r}")
        cones.append(RatCone.from_generators(vecs, n))
    return verify_fan(cones, n)
