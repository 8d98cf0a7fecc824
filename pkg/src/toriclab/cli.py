"""Command line front end.

Three groups of subcommands:

  poly  <cmd>   read a lattice polytope (JSON) from stdin or a file
  fan   <cmd>   read a complete fan (JSON) from stdin or a file
  gen   <cmd>   construct an object and write it to stdout

Objects stream between invocations as single JSON documents, so commands
compose with shell pipes.  Exit codes: 0 success, 2 malformed input,
3 classifier hypothesis violated, 64 unknown subcommand.
"""

import argparse
import os
import sys

from .adjunction import (adjoint_polytope, is_q_normal, nef_value, q_codegree,
                         sigma_value)
from .catalog import (dilate_polytope, gen_bundle_over_projective_space,
                      gen_contra, gen_losev_manin, gen_projective_space,
                      product_polytope)
from .cayley import CayleySpec, HypothesisViolation, build_cayley, classify, \
    simplex
from .cycles import chow_ring, ne_k_cone
from .divisors import picard_rank, polytope_of_divisor
from .intersection import curve_class, eff_cone, mori_cone, mov_cone, nef_cone
from .jsonio import (InputError, cone_to_obj, dumps, fan_from_obj, fan_to_obj,
                     loads, parse_int, parse_rat, poly_from_obj, poly_to_obj,
                     rat_str, ratpoly_to_obj)
from .latticepoints import (codegree, degree, h_star, interior_lattice_points,
                            lattice_points, normalized_volume)
from .mmp import all_mmp_runs, eff_extremal_flags, run_mmp
from .polyhedral import Polytope, is_complete, is_simplicial, is_smooth, walls

USAGE = """\
usage: toriclab <group> <command> [options] [file]

  poly  info | adjoint | qcodeg | nefvalue | qnormal | classify | hstar
  fan   info | mori | nef | eff | mov | mmp | cycles | walls
  gen   pn | bundle | contra | losev-manin | cayley | product | dilate

poly/fan commands read one JSON object from stdin (or a file argument);
gen commands write one to stdout, so invocations compose with pipes:

  toriclab gen pn 2 | toriclab fan mori
  toriclab gen contra 2 --emit L | toriclab poly qcodeg

All commands take --format {json,text} (default json).  JSON integers are
decimal strings, rationals reduced "p/q".  Exit codes: 0 ok, 2 bad input,
3 hypothesis violation, 64 unknown subcommand.
"""


def thread_cap():
    """Upper bound on worker threads; everything here runs sequentially, so
    the cap is respected trivially, but the variable is validated for the
    benefit of wrapper scripts."""
    raw = os.environ.get("TORICLAB_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise InputError("TORICLAB_THREADS must be a positive integer")
    return n


def _parser(prog, reads=None):
    p = argparse.ArgumentParser(prog="toriclab " + prog)
    p.add_argument("--format", choices=("json", "text"), default="json")
    if reads is not None:
        p.add_argument("file", nargs="?", default="-",
                       help=f"{reads} JSON file (default: stdin)")
    return p


def _read_obj(path):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as e:
            raise InputError(str(e))
    return loads(text)


def _read_poly(path):
    return poly_from_obj(_read_obj(path))


def _read_fan(path):
    return fan_from_obj(_read_obj(path))


def _emit(args, obj, text_lines):
    if args.format == "json":
        sys.stdout.write(dumps(obj))
    else:
        sys.stdout.write("".join(line + "\n" for line in text_lines))


def _vec_text(v):
    return " ".join(rat_str(x) for x in v)


def _object_text(obj):
    kind = obj.get("kind", "?")
    lines = [kind]
    if kind == "fan":
        lines.append("rank " + obj["rank"])
        lines += ["ray " + " ".join(r) for r in obj["rays"]]
        lines += ["cone " + " ".join(s) for s in obj["max_cones"]]
    else:
        lines.append("dim " + obj["dim"])
        lines += ["vertex " + " ".join(v) for v in obj["vertices"]]
    return lines


def _emit_object(args, obj):
    _emit(args, obj, _object_text(obj))


def _cone_text(cone_obj, label):
    lines = [label, "dim " + cone_obj["dim"]]
    lines += ["generator " + " ".join(g) for g in cone_obj["generators"]]
    lines += ["extremal " + " ".join(g)
              for g in cone_obj.get("extremal_rays", ())]
    return lines


# ---------------------------------------------------------------------------
# poly

def _poly_info(rest):
    args = _parser("poly info", "polytope").parse_args(rest)
    P = _read_poly(args.file)
    obj = {
        "kind": "polytope-info",
        "dim": str(P.dim),
        "n_vertices": str(len(P.vertices)),
        "n_facets": str(len(P.facets)),
        "n_lattice_points": str(len(lattice_points(P))),
        "n_interior_points": str(len(interior_lattice_points(P))),
        "normalized_volume": str(normalized_volume(P)),
        "degree": str(degree(P)),
        "codegree": str(codegree(P)),
    }
    _emit(args, obj, [f"{k} {v}" for k, v in obj.items() if k != "kind"])


def _poly_adjoint(rest):
    p = _parser("poly adjoint", "polytope")
    p.add_argument("--t", required=True, help="adjoint level, rational >= 0")
    args = p.parse_args(rest)
    P = _read_poly(args.file)
    Q = adjoint_polytope(P, parse_rat(args.t))
    obj = ratpoly_to_obj(Q)
    _emit_object(args, obj)


def _poly_qcodeg(rest):
    args = _parser("poly qcodeg", "polytope").parse_args(rest)
    v = q_codegree(_read_poly(args.file))
    _emit(args, {"kind": "value", "q_codegree": rat_str(v)}, [rat_str(v)])


def _poly_nefvalue(rest):
    args = _parser("poly nefvalue", "polytope").parse_args(rest)
    v = nef_value(_read_poly(args.file))
    _emit(args, {"kind": "value", "nef_value": rat_str(v)}, [rat_str(v)])


def _poly_qnormal(rest):
    args = _parser("poly qnormal", "polytope").parse_args(rest)
    P = _read_poly(args.file)
    qn = is_q_normal(P)
    obj = {"kind": "q-normality", "q_normal": qn,
           "q_codegree": rat_str(q_codegree(P)),
           "nef_value": rat_str(nef_value(P))}
    _emit(args, obj, ["true" if qn else "false"])


def _poly_classify(rest):
    args = _parser("poly classify", "polytope").parse_args(rest)
    res = classify(_read_poly(args.file))
    obj = {"kind": "classification", "label": res.label, "n": str(res.n),
           "tau": rat_str(res.tau)}
    if res.s is not None:
        obj["s"] = str(res.s)
    if res.k is not None:
        obj["k"] = str(res.k)
    if res.degrees is not None:
        obj["degrees"] = [str(d) for d in res.degrees]
    if res.factors is not None:
        obj["factors"] = [poly_to_obj(F) for F in res.factors]
    if res.detail:
        obj["detail"] = res.detail
    lines = [res.label, f"n {res.n}", f"tau {rat_str(res.tau)}"]
    for key in ("s", "k"):
        if obj.get(key) is not None:
            lines.append(f"{key} {obj[key]}")
    if res.degrees is not None:
        lines.append("degrees " + " ".join(str(d) for d in res.degrees))
    if res.detail:
        lines.append(res.detail)
    _emit(args, obj, lines)


def _poly_hstar(rest):
    args = _parser("poly hstar", "polytope").parse_args(rest)
    h = h_star(_read_poly(args.file))
    obj = {"kind": "h-star",
           "coefficients": [str(c) for c in h.coefficients],
           "degree": str(h.degree), "volume": str(h.volume)}
    _emit(args, obj, [" ".join(obj["coefficients"])])


# ---------------------------------------------------------------------------
# fan

def _fan_info(rest):
    args = _parser("fan info", "fan").parse_args(rest)
    f = _read_fan(args.file)
    obj = {
        "kind": "fan-info",
        "rank": str(f.rank),
        "n_rays": str(len(f.rays)),
        "n_max_cones": str(len(f.max_cones)),
        "smooth": is_smooth(f),
        "complete": is_complete(f),
        "simplicial": is_simplicial(f),
        "picard_rank": str(picard_rank(f)),
    }
    _emit(args, obj, [f"{k} {str(v).lower() if isinstance(v, bool) else v}"
                      for k, v in obj.items() if k != "kind"])


def _fan_mori(rest):
    args = _parser("fan mori", "fan").parse_args(rest)
    cone = mori_cone(_read_fan(args.file))
    obj = cone_to_obj(cone, kind="mori-cone")
    _emit(args, obj, _cone_text(obj, "mori-cone"))


def _fan_nef(rest):
    args = _parser("fan nef", "fan").parse_args(rest)
    cone = nef_cone(_read_fan(args.file))
    obj = cone_to_obj(cone, kind="nef-cone")
    _emit(args, obj, _cone_text(obj, "nef-cone"))


def _fan_eff(rest):
    p = _parser("fan eff", "fan")
    p.add_argument("--flags", action="store_true",
                   help="report, per ray, whether its divisor class is "
                        "extremal in the pseudo-effective cone")
    args = p.parse_args(rest)
    f = _read_fan(args.file)
    if args.flags:
        flags = eff_extremal_flags(f)
        ordered = [flags[i] for i in range(len(f.rays))]
        obj = {"kind": "eff-flags", "flags": ordered,
               "n_true": str(sum(ordered))}
        lines = [f"ray {i} {'true' if b else 'false'}"
                 for i, b in enumerate(ordered)]
        lines.append(f"{sum(ordered)} of {len(ordered)} extremal")
        _emit(args, obj, lines)
        return
    cone = eff_cone(f)
    obj = cone_to_obj(cone, kind="eff-cone")
    _emit(args, obj, _cone_text(obj, "eff-cone"))


def _fan_mov(rest):
    args = _parser("fan mov", "fan").parse_args(rest)
    cone = mov_cone(_read_fan(args.file))
    obj = cone_to_obj(cone, kind="mov-cone")
    _emit(args, obj, _cone_text(obj, "mov-cone"))


def _trace_obj(trace):
    steps = []
    for st in trace.steps:
        rec = {"kind": st.kind,
               "n_rays_before": str(len(st.before.rays)),
               "n_rays_after": str(len(st.after.rays))}
        if st.relation:
            rec["relation"] = [rat_str(x) for x in st.relation]
        if st.kind == "fiber-end" and st.detail is not None:
            rec["target_rank"] = str(st.detail.target.rank)
            if st.detail.fiber_fan is not None:
                rec["fiber_rank"] = str(st.detail.fiber_fan.rank)
                rec["fiber_n_rays"] = str(len(st.detail.fiber_fan.rays))
        steps.append(rec)
    return {"kind": "mmp-trace", "end": trace.end_kind, "steps": steps}


def _trace_text(tobj):
    lines = []
    for i, st in enumerate(tobj["steps"]):
        extra = ""
        if "relation" in st:
            extra = "  rel " + " ".join(st["relation"])
        lines.append(f"step {i} {st['kind']} "
                     f"{st['n_rays_before']}->{st['n_rays_after']}{extra}")
    lines.append("end " + tobj["end"])
    return lines


def _fan_mmp(rest):
    p = _parser("fan mmp", "fan")
    p.add_argument("--all-branches", action="store_true",
                   help="explore every K-negative contraction, not just the "
                        "default policy")
    args = p.parse_args(rest)
    f = _read_fan(args.file)
    if args.all_branches:
        runs = all_mmp_runs(f)
        obj = {"kind": "mmp-census", "n_runs": str(len(runs)),
               "runs": [_trace_obj(t) for t in runs]}
        lines = []
        for j, t in enumerate(obj["runs"]):
            kinds = " ".join(st["kind"] for st in t["steps"])
            lines.append(f"run {j}: {kinds}")
        lines.append(f"{len(runs)} runs")
        _emit(args, obj, lines)
        return
    tobj = _trace_obj(run_mmp(f))
    _emit(args, tobj, _trace_text(tobj))


def _fan_cycles(rest):
    p = _parser("fan cycles", "fan")
    p.add_argument("--k", required=True, type=int,
                   help="cycle dimension for the ne_k cone")
    args = p.parse_args(rest)
    f = _read_fan(args.file)
    if not 0 <= args.k <= f.rank:
        raise InputError(f"k must lie between 0 and {f.rank}")
    ring = chow_ring(f)
    cone = ne_k_cone(ring, args.k)
    obj = cone_to_obj(cone, kind="ne-cone", k=str(args.k),
                      graded_dims=[str(d) for d in ring.dims()])
    lines = _cone_text(obj, f"ne_{args.k}")
    lines.append("graded dims " + " ".join(obj["graded_dims"]))
    _emit(args, obj, lines)


def _fan_walls(rest):
    args = _parser("fan walls", "fan").parse_args(rest)
    f = _read_fan(args.file)
    items = []
    for wcone, s1, s2 in walls(f):
        c = curve_class(f, (wcone, s1, s2))
        items.append({
            "wall": [str(i) for i in sorted(wcone.ray_indices)],
            "sides": sorted([sorted(str(i) for i in s1.ray_indices),
                             sorted(str(i) for i in s2.ray_indices)]),
            "curve_class": [rat_str(x) for x in c.coeffs],
        })
    obj = {"kind": "walls", "n_walls": str(len(items)), "walls": items}
    lines = [f"wall {{{','.join(w['wall'])}}}  curve " +
             " ".join(w["curve_class"]) for w in items]
    lines.append(f"{len(items)} walls")
    _emit(args, obj, lines)


# ---------------------------------------------------------------------------
# gen

def _gen_pn(rest):
    p = _parser("gen pn")
    p.add_argument("n", type=int)
    p.add_argument("--emit", choices=("fan", "simplex"), default="fan")
    args = p.parse_args(rest)
    if args.n < 1:
        raise InputError("n must be positive")
    if args.emit == "simplex":
        _emit_object(args, poly_to_obj(simplex(args.n)))
    else:
        _emit_object(args, fan_to_obj(gen_projective_space(args.n)))


def _gen_bundle(rest):
    p = _parser("gen bundle")
    p.add_argument("m", type=int, help="dimension of the projective base")
    p.add_argument("degrees", nargs="+", type=int,
                   help="twists a_0 <= ... <= a_k")
    args = p.parse_args(rest)
    if args.m < 1:
        raise InputError("base dimension must be positive")
    f = gen_bundle_over_projective_space(args.m, tuple(args.degrees))
    _emit_object(args, fan_to_obj(f))


def _gen_contra(rest):
    p = _parser("gen contra")
    p.add_argument("m", type=int)
    p.add_argument("--emit", choices=("fan", "L"), default="fan")
    args = p.parse_args(rest)
    if args.m < 2:
        raise InputError("m must be at least 2")
    X, L = gen_contra(args.m)
    if args.emit == "L":
        P = polytope_of_divisor(L)
        if not isinstance(P, Polytope):
            raise RuntimeError("polarization did not give a lattice polytope")
        _emit_object(args, poly_to_obj(P))
    else:
        _emit_object(args, fan_to_obj(X))


def _gen_losev_manin(rest):
    p = _parser("gen losev-manin")
    p.add_argument("n", type=int)
    args = p.parse_args(rest)
    if args.n < 1:
        raise InputError("n must be positive")
    _emit_object(args, fan_to_obj(gen_losev_manin(args.n)))


def _gen_cayley(rest):
    p = _parser("gen cayley")
    p.add_argument("s", type=int, help="dilation order of the join directions")
    p.add_argument("m", type=int, help="dimension of each simplex factor")
    p.add_argument("degrees", nargs="+", type=int,
                   help="two or more simplex dilations d_0 ... d_k")
    args = p.parse_args(rest)
    if args.s < 1 or args.m < 0 or any(d < 1 for d in args.degrees):
        raise InputError("s and degrees must be positive, m nonnegative")
    P = build_cayley(CayleySpec(args.s,
                                tuple(simplex(args.m, d)
                                      for d in args.degrees)))
    _emit_object(args, poly_to_obj(P))


def _gen_product(rest):
    p = _parser("gen product")
    p.add_argument("files", nargs="*",
                   help="two polytope files, or none to read a JSON array "
                        "of two polytopes from stdin")
    args = p.parse_args(rest)
    if len(args.files) == 2:
        P = _read_poly(args.files[0])
        Q = _read_poly(args.files[1])
    elif not args.files:
        arr = _read_obj("-")
        if not isinstance(arr, list) or len(arr) != 2:
            raise InputError("stdin must hold a JSON array of two polytopes")
        P, Q = poly_from_obj(arr[0]), poly_from_obj(arr[1])
    else:
        raise InputError("gen product takes exactly two files or none")
    _emit_object(args, poly_to_obj(product_polytope(P, Q)))


def _gen_dilate(rest):
    p = _parser("gen dilate", "polytope")
    p.add_argument("--k", required=True, type=int, help="dilation factor")
    args = p.parse_args(rest)
    if args.k < 1:
        raise InputError("dilation factor must be positive")
    P = _read_poly(args.file)
    _emit_object(args, poly_to_obj(dilate_polytope(P, args.k)))


_HANDLERS = {
    ("poly", "info"): _poly_info,
    ("poly", "adjoint"): _poly_adjoint,
    ("poly", "qcodeg"): _poly_qcodeg,
    ("poly", "nefvalue"): _poly_nefvalue,
    ("poly", "qnormal"): _poly_qnormal,
    ("poly", "classify"): _poly_classify,
    ("poly", "hstar"): _poly_hstar,
    ("fan", "info"): _fan_info,
    ("fan", "mori"): _fan_mori,
    ("fan", "nef"): _fan_nef,
    ("fan", "eff"): _fan_eff,
    ("fan", "mov"): _fan_mov,
    ("fan", "mmp"): _fan_mmp,
    ("fan", "cycles"): _fan_cycles,
    ("fan", "walls"): _fan_walls,
    ("gen", "pn"): _gen_pn,
    ("gen", "bundle"): _gen_bundle,
    ("gen", "contra"): _gen_contra,
    ("gen", "losev-manin"): _gen_losev_manin,
    ("gen", "cayley"): _gen_cayley,
    ("gen", "product"): _gen_product,
    ("gen", "dilate"): _gen_dilate,
}


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        thread_cap()
        if not argv or argv[0] in ("-h", "--help"):
            sys.stdout.write(USAGE)
            return 0
        if argv[0] not in ("poly", "fan", "gen"):
            sys.stderr.write(f"unknown command group: {argv[0]}\n\n" + USAGE)
            return 64
        if len(argv) > 1 and argv[1] in ("-h", "--help"):
            sys.stdout.write(USAGE)
            return 0
        if len(argv) < 2 or (argv[0], argv[1]) not in _HANDLERS:
            got = " ".join(argv[:2])
            sys.stderr.write(f"unknown subcommand: {got}\n\n" + USAGE)
            return 64
        code = _HANDLERS[(argv[0], argv[1])](argv[2:])
        return 0 if code is None else code
    except HypothesisViolation as e:
        sys.stderr.write(f"hypothesis violation ({e.which}): {e.detail}\n")
        return 3
    except InputError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
