"""Canonical JSON forms for the objects the command line passes around.

Every number is a string: integers in decimal ("-3"), rationals reduced as
"p/q".  Serialization is deterministic (sorted keys, fixed separators, one
trailing newline) so identical inputs give byte-identical outputs.
"""

import json
from fractions import Fraction

from .divisors import TDivisor
from .polyhedral import Fan, Polytope, RationalPolytope


class InputError(Exception):
    """Malformed input on stdin or the command line."""


def rat_str(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s):
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {s!r}")


def parse_int(s):
    x = parse_rat(s)
    if x.denominator != 1:
        raise InputError(f"not an integer: {s!r}")
    return x.numerator


def _vec_strs(v):
    return [rat_str(x) for x in v]


def fan_to_obj(fan):
    return {
        "kind": "fan",
        "rank": str(fan.rank),
        "rays": [_vec_strs(r) for r in fan.rays],
        "max_cones": [[str(i) for i in sorted(s)]
                      for s in sorted(tuple(sorted(s))
                                      for s in fan.max_index_sets)],
    }


def poly_to_obj(P):
    return {
        "kind": "polytope",
        "dim": str(P.dim),
        "vertices": [_vec_strs(v) for v in P.vertices],
    }


def ratpoly_to_obj(Q):
    if isinstance(Q, Polytope):
        return poly_to_obj(Q)
    return {
        "kind": "rational-polytope",
        "dim": str(Q.dim),
        "vertices": [_vec_strs(v) for v in Q.vertices],
    }


def divisor_to_obj(D):
    return {
        "kind": "divisor",
        "fan": fan_to_obj(D.fan),
        "coeffs": _vec_strs(D.coeffs),
    }


def cone_to_obj(cone, **extra):
    obj = {
        "kind": "cone",
        "dim": str(cone.dim),
        "generators": [_vec_strs(g) for g in cone.generators],
    }
    if cone.extremal_rays is not None:
        obj["extremal_rays"] = [_vec_strs(g) for g in cone.extremal_rays]
    obj.update(extra)
    return obj


def _require(obj, kind):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError("input is not a tagged JSON object")
    if obj["kind"] != kind:
        raise InputError(f"expected a {kind}, got {obj['kind']}")
    return obj


def fan_from_obj(obj):
    _require(obj, "fan")
    try:
        rank = parse_int(obj["rank"])
        rays = [tuple(parse_int(x) for x in r) for r in obj["rays"]]
        cones = [frozenset(parse_int(i) for i in s) for s in obj["max_cones"]]
    except (KeyError, TypeError):
        raise InputError("fan object needs rank, rays and max_cones")
    try:
        return Fan.from_cones(rank, rays, cones)
    except (ValueError, IndexError) as e:
        raise InputError(f"bad fan: {e}")


def poly_from_obj(obj):
    if isinstance(obj, dict) and obj.get("kind") == "rational-polytope":
        raise InputError("expected a lattice polytope, got a rational one")
    _require(obj, "polytope")
    try:
        verts = [tuple(parse_int(x) for x in v) for v in obj["vertices"]]
    except (KeyError, TypeError):
        raise InputError("polytope object needs vertices")
    if not verts:
        raise InputError("polytope has no vertices")
    try:
        return Polytope.from_vertices(verts)
    except ValueError as e:
        raise InputError(f"bad polytope: {e}")


def divisor_from_obj(obj):
    _require(obj, "divisor")
    try:
        fan = fan_from_obj(obj["fan"])
        coeffs = [parse_rat(c) for c in obj["coeffs"]]
    except (KeyError, TypeError):
        raise InputError("divisor object needs fan and coeffs")
    try:
        return TDivisor(fan, tuple(coeffs))
    except ValueError as e:
        raise InputError(f"bad divisor: {e}")


def dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON input: {e}")
