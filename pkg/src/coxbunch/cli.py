"""Command line interface.

Input documents are JSON objects::

    {
      "class_rank": 3,
      "degrees": [[1, 0, 1], {"degree": [0, 1, 1], "multiplicity": 2}],
      "relations": [{"terms": [{"coeff": "1", "exponents": [1, 0, 0]}, ...]}],
      "bunch": [{"face": [1, 3, 5]}, {"generators": [[1, 0, 1], [0, 1, 1]]}],
      "flags": {"xhat_smooth": true, "skip_maximality_check": false},
      "fface_table": [[1, 2], [1, 2, 3]],
      "description": "free text"
    }

Indices are 1-based, as in ``T_1..T_r``. Unknown keys are rejected.

Exit codes: 0 success, 1 I/O or parse error, 2 validation error, 3 a
classification claim of ``quadric`` failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import bunched as B
from . import invariants as I
from .cones import RatCone
from .exactlin import INFINITE
from .fans import NotAFan, export_fan, is_complete

log = logging.getLogger("coxbunch")

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2
EXIT_MISMATCH = 3

_TOP_KEYS = {"class_rank", "degrees", "relations", "bunch", "flags", "fface_table", "description"}
_FLAG_KEYS = {"xhat_smooth", "skip_maximality_check"}


class ParseError(ValueError):
    pass


@dataclass
class Document:
    raw: dict
    presentation: B.RingPresentation
    bunch: list  # RatCone or 0-based face tuples
    skip_maximality: bool


def _int_list(x, what: str) -> list[int]:
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise ParseError(f"{what} must be a list of integers")
    return list(x)


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ParseError(f"unknown key(s) in {where}: {', '.join(extra)}")


def _faces(x, r: int, what: str) -> list[tuple[int, ...]]:
    if not isinstance(x, list):
        raise ParseError(f"{what} must be a list of index lists")
    out = []
    for f in x:
        idx = _int_list(f, what)
        if any(i < 1 or i > r for i in idx):
            raise ParseError(f"{what}: indices must lie in 1..{r}")
        out.append(tuple(sorted(i - 1 for i in idx)))
    return out


def parse_document(doc: Any) -> Document:
    """Turn a decoded JSON object into a validated presentation and raw bunch.

    Raises:
      ParseError: structural problems with the document.
      ValidationError: the data violate the presentation axioms.
    """
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    _check_keys(doc, _TOP_KEYS, "document")
    if "degrees" not in doc:
        raise ParseError("missing key: degrees")
    degrees: list[list[int]] = []
    for entry in doc["degrees"]:
        if isinstance(entry, dict):
            _check_keys(entry, {"degree", "multiplicity"}, "degree entry")
            w = _int_list(entry.get("degree"), "degree")
            m = entry.get("multiplicity", 1)
            if not isinstance(m, int) or m < 1:
                raise ParseError("multiplicity must be a positive integer")
            degrees.extend([w] * m)
        else:
            degrees.append(_int_list(entry, "degree"))
    k = doc.get("class_rank", len(degrees[0]) if degrees else None)
    if not isinstance(k, int) or k < 0:
        raise ParseError("class_rank must be a nonnegative integer")
    if any(len(w) != k for w in degrees):
        raise ParseError(f"every degree must have length class_rank = {k}")
    r = len(degrees)
    relations = []
    for rel in doc.get("relations", []):
        if not isinstance(rel, dict):
            raise ParseError("relation must be an object with key 'terms'")
        _check_keys(rel, {"terms"}, "relation")
        terms = []
        for t in rel.get("terms", []):
            if not isinstance(t, dict):
                raise ParseError("term must be an object")
            _check_keys(t, {"coeff", "exponents"}, "term")
            try:
                c = Fraction(str(t.get("coeff", "1")))
            except (ValueError, ZeroDivisionError) as e:
                raise ParseError(f"bad coefficient {t.get('coeff')!r}") from e
            terms.append((c, tuple(_int_list(t.get("exponents"), "exponents"))))
        relations.append(terms)
    flags = doc.get("flags", {})
    if not isinstance(flags, dict):
        raise ParseError("flags must be an object")
    _check_keys(flags, _FLAG_KEYS, "flags")
    xs = flags.get("xhat_smooth")
    if xs is not None and not isinstance(xs, bool):
        raise ParseError("xhat_smooth must be a boolean")
    table = None
    if "fface_table" in doc:
        table = _faces(doc["fface_table"], r, "fface_table")
    bunch = []
    for c in doc.get("bunch", []):
        if not isinstance(c, dict) or len(c) != 1:
            raise ParseError("bunch entries are objects with exactly one of 'face' or 'generators'")
        _check_keys(c, {"face", "generators"}, "bunch entry")
        if "face" in c:
            bunch.extend(_faces([c["face"]], r, "face"))
        else:
            gens = [_int_list(g, "generator") for g in c["generators"]]
            if any(len(g) != k for g in gens):
                raise ParseError(f"bunch generators must have length {k}")
            bunch.append(RatCone.from_generators(gens, k))
    R = B.validate_presentation(degrees, relations, k, xs, table)
    return Document(doc, R, bunch, bool(flags.get("skip_maximality_check", False)))


def load_document(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e
    return parse_document(doc)


# -- reports -----------------------------------------------------------------


def _one_based(face) -> list[int]:
    return [i + 1 for i in face]


def _cone_json(c: RatCone) -> dict:
    return {"rays": [list(v) for v in c.rays], "lineality": [list(v) for v in c.lineality]}


def analyze(R: B.RingPresentation, phi, max_generators: int = B.DEFAULT_MAX_GENERATORS) -> dict:
    """Every invariant of the bunched ring as a JSON-compatible dict."""
    rlv = B.relevant_faces(R, phi, max_generators)
    cov = B.minimal_faces(rlv)
    pic, index = I.picard_group(R, phi, max_generators)
    prof = I.divisor_cones(R, phi, max_generators)
    try:
        projective = I.is_projective(R, phi)
    except I.Undetermined:
        projective = None
    fan = B.minimal_ambient_fan(R, phi, max_generators)
    strata = I.stratum_reports(R, phi, max_generators)
    return {
        "schema": SCHEMA_VERSION,
        "presentation": {
            "num_generators": R.r,
            "class_rank": R.class_rank,
            "degrees": [list(w) for w in R.degrees],
            "relation_degrees": [list(d) for d in R.relation_degrees()],
            "bunch": [_cone_json(c) for c in phi],
        },
        "dimension": I.dimension(R),
        "only_constants": B.has_only_constants(R),
        "relevant_faces": [_one_based(f) for f in rlv],
        "covering_collection": [_one_based(f) for f in cov],
        "picard": {
            "basis": [list(v) for v in pic.generators],
            "index": "infinite" if index == INFINITE else int(index),
        },
        "cones": {
            "effective": _cone_json(prof.effective),
            "moving": _cone_json(prof.moving),
            "semiample": _cone_json(prof.semiample),
            "ample_nonempty": prof.ample_nonempty,
            "mori": _cone_json(prof.mori),
            "mori_basis": None if prof.mori_basis is None else [list(v) for v in prof.mori_basis],
        },
        "strata": [
            {
                "face": _one_based(s.face),
                "q_factorial": s.q_factorial,
                "factorial": s.factorial,
                "smooth": s.smooth,
            }
            for s in strata
        ],
        "canonical_class": list(I.canonical_class(R)),
        "q_factorial": I.is_q_factorial(R, phi),
        "gorenstein": I.gorenstein_status(R, phi, max_generators).value,
        "fano": I.fano_status(R, phi, max_generators).value,
        "projective": projective,
        "smooth": I.is_smooth(R, phi, max_generators),
        "ambient_fan": {
            "rank": fan.ambient_rank,
            "maximal_cones": [[list(v) for v in c.rays] for c in fan.maximal_cones],
            "complete": is_complete(fan),
        },
    }


def dump_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _rays(c: dict) -> str:
    s = " ".join(_vec(v) for v in c["rays"]) or "0"
    if c["lineality"]:
        s += "  + span " + " ".join(_vec(v) for v in c["lineality"])
    return s


def _faces_text(fs) -> str:
    return " ".join("{" + ",".join(map(str, f)) + "}" for f in fs)


def render_text(rep: dict) -> str:
    """Aligned plain-text rendering of an :func:`analyze` report."""
    p = rep["presentation"]
    pic = rep["picard"]
    cones = rep["cones"]
    rows = [
        ("generators", str(p["num_generators"])),
        ("class rank", str(p["class_rank"])),
        ("degrees", " ".join(_vec(w) for w in p["degrees"])),
        ("relation degrees", " ".join(_vec(w) for w in p["relation_degrees"]) or "-"),
        ("dimension", str(rep["dimension"])),
        ("O(X) = K", str(rep["only_constants"])),
        ("relevant faces", _faces_text(rep["relevant_faces"])),
        ("covering collection", _faces_text(rep["covering_collection"])),
        ("Picard basis", " ".join(_vec(v) for v in pic["basis"]) or "0"),
        ("Picard index", str(pic["index"])),
        ("effective cone", _rays(cones["effective"])),
        ("moving cone", _rays(cones["moving"])),
        ("semiample cone", _rays(cones["semiample"])),
        ("ample cone nonempty", str(cones["ample_nonempty"])),
        ("Mori cone", _rays(cones["mori"])),
        ("canonical class", _vec(rep["canonical_class"])),
        ("Q-factorial", str(rep["q_factorial"])),
        ("Gorenstein", rep["gorenstein"]),
        ("Fano", rep["fano"]),
        ("projective", "undetermined" if rep["projective"] is None else str(rep["projective"])),
        ("smooth", "unknown" if rep["smooth"] is None else str(rep["smooth"])),
    ]
    width = max(len(k) for k, _ in rows)
    out = [f"{k.ljust(width)}  {v}" for k, v in rows]
    out.append("")
    out.append("strata")
    header = ("face", "Q-factorial", "factorial", "smooth")
    table = [header] + [
        (
            "{" + ",".join(map(str, s["face"])) + "}",
            str(s["q_factorial"]),
            str(s["factorial"]),
            "unknown" if s["smooth"] is None else str(s["smooth"]),
        )
        for s in rep["strata"]
    ]
    widths = [max(len(row[c]) for row in table) for c in range(4)]
    for row in table:
        out.append("  " + "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    fan = rep["ambient_fan"]
    out.append("")
    out.append(f"minimal ambient fan (rank {fan['rank']}, complete: {fan['complete']})")
    for c in fan["maximal_cones"]:
        out.append("  " + (" ".join(_vec(v) for v in c) or "0"))
    return "\n".join(out) + "\n"


# -- commands ----------------------------------------------------------------


def _bunch(doc: Document, args) -> B.FBunch:
    return B.validate_fbunch(
        doc.presentation,
        doc.bunch,
        skip_maximality=doc.skip_maximality or args.skip_maximality,
        max_generators=args.max_generators,
    )


def cmd_validate(args) -> int:
    doc = load_document(args.path)
    phi = _bunch(doc, args)
    print(f"ok: {doc.presentation.r} generators, class rank {doc.presentation.class_rank}, "
          f"{len(phi)} bunch cone(s)")
    return EXIT_OK


def cmd_analyze(args) -> int:
    doc = load_document(args.path)
    phi = _bunch(doc, args)
    rep = analyze(doc.presentation, phi, args.max_generators)
    sys.stdout.write(dump_json(rep) if args.json else render_text(rep))
    return EXIT_OK


def cmd_fan(args) -> int:
    doc = load_document(args.path)
    phi = _bunch(doc, args)
    sys.stdout.write(export_fan(B.minimal_ambient_fan(doc.presentation, phi, args.max_generators)))
    return EXIT_OK


def cmd_projectivize(args) -> int:
    doc = load_document(args.path)
    new = B.projectivize(doc.presentation, args.max_generators)
    out = dict(doc.raw)
    out["bunch"] = [{"face": _one_based(w)} for w in new.witnesses]
    text = json.dumps(out, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


_PARAMETER_ERRORS = (I.SymmetryViolation, I.TooFewVariables, I.MultiplicityOutOfRange)


def quadric_claims(kind: str, rep: dict, params) -> list[str]:
    """The classification statements for a built quadric that ``rep`` contradicts."""
    bad = []
    if kind == "rank1":
        expected_dim = sum(params) - 2
        if not rep["q_factorial"]:
            bad.append("expected Q-factorial")
        if rep["fano"] not in ("QFano", "Fano"):
            bad.append("expected Q-Fano")
    else:
        side, mu = params
        expected_dim = 2 * mu[0] - 3 if side == "left" else 2 * mu[0] + mu[1] - 3
        if rep["smooth"] is not True:
            bad.append("expected smooth")
        want_fano = side == "left"
        if (rep["fano"] == "Fano") != want_fano:
            bad.append("expected Fano" if want_fano else "expected not Fano")
    if rep["projective"] is not True:
        bad.append("expected projective")
    if rep["dimension"] != expected_dim:
        bad.append(f"expected dimension {expected_dim}, got {rep['dimension']}")
    return bad


def cmd_quadric(args) -> int:
    try:
        if args.rank == "rank1":
            if args.mult is None:
                args.mult = [1] * len(args.weights)
            R, phi = I.build_rank1_quadric(args.weights, args.mult)
            params = args.mult
        else:
            mu = args.mu[0] if args.side == "left" and len(args.mu) == 1 else tuple(args.mu)
            R, phi = I.build_rank2_quadric(args.side, mu)
            params = (args.side, tuple(args.mu))
    except _PARAMETER_ERRORS:
        raise
    except B.ValidationError as e:
        print(f"classification mismatch: construction rejected: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    rep = analyze(R, phi, args.max_generators)
    sys.stdout.write(dump_json(rep) if args.json else render_text(rep))
    bad = quadric_claims(args.rank, rep, params)
    for msg in bad:
        print(f"classification mismatch: {msg}", file=sys.stderr)
    return EXIT_MISMATCH if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--max-generators",
        type=int,
        default=B.DEFAULT_MAX_GENERATORS,
        metavar="N",
        help="bound on r for scans over all faces (default %(default)s)",
    )
    common.add_argument(
        "--skip-maximality",
        action="store_true",
        help="downgrade the F-bunch maximality check to a warning",
    )

    ap = argparse.ArgumentParser(
        prog="coxbunch",
        description="Invariants of varieties given by bunched rings.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a bunched-ring document")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", parents=[common], help="compute all invariants")
    p.add_argument("path")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="machine-readable report")
    fmt.add_argument("--text", action="store_true", help="aligned text report (default)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("fan", parents=[common], help="export the minimal ambient fan")
    p.add_argument("path")
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("projectivize", parents=[common], help="replace the bunch by a projective one")
    p.add_argument("path")
    p.add_argument("-o", "--output", help="write the new document here instead of stdout")
    p.set_defaults(func=cmd_projectivize)

    q = sub.add_parser("quadric", help="build and check intrinsic quadrics")
    qsub = q.add_subparsers(dest="rank", required=True)
    p = qsub.add_parser("rank1", parents=[common], help="class group Z")
    p.add_argument("--weights", type=int, nargs="+", required=True)
    p.add_argument("--mult", type=int, nargs="+", help="multiplicities (default all 1)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_quadric)
    p = qsub.add_parser("rank2", parents=[common], help="class group Z^2")
    p.add_argument("--side", choices=["left", "right"], required=True)
    p.add_argument("--mu", type=int, nargs="+", required=True, help="mu (left) or mu1 mu2 (right)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_quadric)
    return ap


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="warning: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (B.ValidationError, NotAFan) as e:
        print(f"invalid: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as e:
        # remaining structural problems (e.g. ill-sized data) count as parse errors
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
