"""Command-line front end: lnd-lab.

Exit codes are CI-friendly and separate verdicts from failures:

    0  success, and any verdict field is affirmatively true
    1  a checker ran fine but did not verify (Inconclusive, span too
       small, condition violated, ...)
    2  usage, parse, or input errors
    3  internal invariant failure (a bug, not bad input)

Reports print as text by default; --json emits a versioned document
{"schema": 1, ...} with sorted keys so reports diff cleanly.  Inputs are
embedded in every JSON report, so re-running a report reproduces its
verdict fields.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import catalog, denslab, tame
from .errors import InternalInvariantError, LndLabError
from .fields import (
    AffineVariety,
    Derivation,
    Inconclusive,
    LNDCertificate,
    OvershearField,
    PolynomialFlow,
    check_lnd,
    flow_lnd,
    flow_overshear,
    lie_bracket,
    make_derivation,
    make_overshear,
    make_shear,
    variety_from_json,
    variety_to_json,
)
from .idealquot import grevlex, groebner, lex
from .polyalg import GaussianRational, Ring, parse_poly

SCHEMA_VERSION = 1


@dataclass
class Workspace:
    """Resolved context for one invocation: a variety plus named fields."""

    variety: AffineVariety
    derivations: Dict[str, Derivation] = field(default_factory=dict)
    certificates: Dict[str, LNDCertificate] = field(default_factory=dict)
    overshears: Dict[str, OvershearField] = field(default_factory=dict)
    units: List[Tuple] = field(default_factory=list)
    ideal_candidates: List = field(default_factory=list)
    pair_candidates: List[Tuple[str, str]] = field(default_factory=list)
    bundle_name: Optional[str] = None

    def derivation(self, name: str) -> Derivation:
        if name in self.derivations:
            return self.derivations[name]
        raise LndLabError(
            f"no derivation named {name!r}; available: {sorted(self.derivations)}"
        )

    def certificate(self, name: str, max_iter: int = 64):
        if name in self.certificates:
            return self.certificates[name]
        verdict = check_lnd(self.derivation(name), max_iter=max_iter)
        if isinstance(verdict, LNDCertificate):
            self.certificates[name] = verdict
        return verdict

    def inputs_dict(self) -> dict:
        doc = {"variety": variety_to_json(self.variety)}
        if self.bundle_name:
            doc["bundle"] = self.bundle_name
        return doc


def workspace_from_bundle(bundle: catalog.VarietyBundle) -> Workspace:
    return Workspace(
        variety=bundle.variety,
        derivations={k: c.derivation for k, c in bundle.lnds.items()},
        certificates=dict(bundle.lnds),
        overshears=dict(bundle.overshears),
        units=list(bundle.units),
        ideal_candidates=list(bundle.ideal_candidates),
        pair_candidates=list(bundle.pair_candidates),
        bundle_name=bundle.name,
    )


def workspace_from_spec(doc: dict) -> Workspace:
    variety = variety_from_json(doc["variety"])
    ws = Workspace(variety=variety)
    for name, spec in doc.get("derivations", {}).items():
        images = [
            parse_poly(spec["images"].get(v, "0"), variety.ambient)
            for v in variety.ambient.vars
        ]
        ws.derivations[name] = make_derivation(variety, images)
    for name, spec in doc.get("overshears", {}).items():
        cert = ws.certificate(spec["base"])
        if isinstance(cert, Inconclusive):
            raise LndLabError(f"overshear base {spec['base']!r} did not certify")
        ws.overshears[name] = make_overshear(cert, spec["f"])
    for f_src, g_src in doc.get("units", []):
        ws.units.append((variety.element(f_src), variety.element(g_src)))
    for src in doc.get("ideal_candidates", []):
        ws.ideal_candidates.append(variety.element(src))
    return ws


def load_workspace(args) -> Workspace:
    if getattr(args, "bundle", None):
        return workspace_from_bundle(catalog.bundle_by_name(args.bundle))
    if getattr(args, "spec", None):
        with open(args.spec, "r", encoding="utf-8") as handle:
            return workspace_from_spec(json.load(handle))
    raise LndLabError("either --bundle or --spec is required")


def parse_exact_scalar(text: str) -> GaussianRational:
    value = parse_poly(text, Ring(()))
    return value.constant_value()


def parse_point(text: str, arity: int, exact: bool = True):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != arity:
        raise LndLabError(f"point needs {arity} components, got {len(parts)}")
    out = []
    for part in parts:
        try:
            out.append(parse_exact_scalar(part))
        except LndLabError:
            if exact:
                raise
            out.append(complex(float(part)))
    return tuple(out)


def parse_time(text: str):
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def parse_ring(text: str) -> Ring:
    return Ring(tuple(v.strip() for v in text.split(",") if v.strip()))


def parse_map(text: str, ring: Ring) -> tame.PolyMap:
    images = [parse_poly(part, ring) for part in text.split(";")]
    return tame.PolyMap(ring, tuple(images))


class Report:
    """Collects lines for humans and a dict for machines."""

    def __init__(self, command: str, inputs: dict):
        self.command = command
        self.inputs = inputs
        self.lines: List[str] = []
        self.result: dict = {}

    def say(self, line: str):
        self.lines.append(line)

    def emit(self, args, verified: Optional[bool]) -> int:
        if args.json:
            doc = {
                "schema": SCHEMA_VERSION,
                "command": self.command,
                "inputs": self.inputs,
                "result": self.result,
                "verified": verified,
            }
            print(json.dumps(doc, indent=2, sort_keys=True))
        else:
            for line in self.lines:
                print(line)
        if verified is None or verified:
            return 0
        return 1


def _derivation_images(d: Derivation) -> dict:
    return {v: str(img) for v, img in zip(d.variety.ambient.vars, d.images)}


# -- subcommand handlers ----------------------------------------------------


def cmd_parse(args) -> int:
    ring = parse_ring(args.ring)
    poly = parse_poly(args.expr, ring)
    report = Report("parse", {"ring": list(ring.vars), "expr": args.expr})
    report.result = {
        "canonical": str(poly),
        "terms": len(poly.terms),
        "total_degree": poly.total_degree(),
    }
    report.say(f"canonical: {poly}")
    report.say(f"terms: {len(poly.terms)}  total degree: {poly.total_degree()}")
    return report.emit(args, None)


def cmd_gb(args) -> int:
    if args.gens:
        ring = parse_ring(args.ring)
        gens = [parse_poly(part, ring) for part in args.gens.split(";")]
        inputs = {"ring": list(ring.vars), "gens": [str(g) for g in gens]}
    else:
        ws = load_workspace(args)
        ring = ws.variety.ambient
        gens = list(ws.variety.defining)
        inputs = ws.inputs_dict()
    report = Report("gb", inputs)
    if not gens:
        report.say("zero ideal: empty basis")
        report.result = {"basis": []}
        return report.emit(args, None)
    order = lex(ring) if args.order == "lex" else grevlex(ring)
    basis = groebner(gens, order)
    report.result = {"order": args.order, "basis": [str(g) for g in basis.gens]}
    report.say(f"reduced basis ({args.order}), {len(basis.gens)} generator(s):")
    for g in basis.gens:
        report.say(f"  {g}")
    return report.emit(args, None)


def cmd_check_lnd(args) -> int:
    ws = load_workspace(args)
    d = ws.derivation(args.derivation)
    verdict = check_lnd(d, max_iter=args.max_iter)
    inputs = ws.inputs_dict()
    inputs["derivation"] = {"name": args.derivation, "images": _derivation_images(d)}
    inputs["max_iter"] = args.max_iter
    report = Report("check-lnd", inputs)
    if isinstance(verdict, LNDCertificate):
        indices = dict(zip(ws.variety.ambient.vars, verdict.indices))
        report.result = {"verdict": "Nilpotent", "indices": indices}
        report.say(f"Nilpotent: indices {indices}")
        return report.emit(args, True)
    report.result = {"verdict": "Inconclusive", "max_iter": verdict.max_iter}
    report.say(f"Inconclusive at iteration bound {verdict.max_iter}")
    return report.emit(args, False)


def cmd_bracket(args) -> int:
    ws = load_workspace(args)
    left = ws.derivation(args.left)
    right = ws.derivation(args.right)
    bracket = lie_bracket(left, right)
    inputs = ws.inputs_dict()
    inputs["left"] = {"name": args.left, "images": _derivation_images(left)}
    inputs["right"] = {"name": args.right, "images": _derivation_images(right)}
    report = Report("bracket", inputs)
    report.result = {"images": _derivation_images(bracket), "zero": bracket.is_zero()}
    report.say(f"[{args.left}, {args.right}]:")
    for v, img in _derivation_images(bracket).items():
        report.say(f"  {v} -> {img}")
    return report.emit(args, None)


def _multiplied_field(args, ws: Workspace, report: Report):
    """Resolve --derivation/--f into (certificate, verdict_ok)."""
    verdict = ws.certificate(args.derivation, max_iter=args.max_iter)
    if isinstance(verdict, Inconclusive):
        report.result = {"verdict": "Inconclusive", "max_iter": verdict.max_iter}
        report.say(f"base field is not certified within {verdict.max_iter} iterations")
        return None
    return verdict


def cmd_shear(args) -> int:
    ws = load_workspace(args)
    inputs = ws.inputs_dict()
    inputs.update({"derivation": args.derivation, "f": args.f})
    report = Report("shear", inputs)
    cert = _multiplied_field(args, ws, report)
    if cert is None:
        return report.emit(args, False)
    try:
        shear = make_shear(cert, args.f)
    except LndLabError as exc:
        residue = getattr(exc, "residue", None)
        report.result = {"accepted": False, "residue": str(residue)}
        report.say(f"rejected: D(f) = {residue} is nonzero")
        return report.emit(args, False)
    indices = dict(zip(ws.variety.ambient.vars, shear.indices))
    report.result = {
        "accepted": True,
        "images": _derivation_images(shear.derivation),
        "indices": indices,
    }
    report.say("shear accepted:")
    for v, img in _derivation_images(shear.derivation).items():
        report.say(f"  {v} -> {img}")
    return report.emit(args, True)


def cmd_overshear(args) -> int:
    ws = load_workspace(args)
    inputs = ws.inputs_dict()
    inputs.update({"derivation": args.derivation, "f": args.f})
    report = Report("overshear", inputs)
    cert = _multiplied_field(args, ws, report)
    if cert is None:
        return report.emit(args, False)
    try:
        over = make_overshear(cert, args.f)
    except LndLabError as exc:
        residue = getattr(exc, "residue", None)
        report.result = {"accepted": False, "residue": str(residue)}
        report.say(f"rejected: D^2(f) = {residue} is nonzero")
        return report.emit(args, False)
    report.result = {
        "accepted": True,
        "f": str(over.f),
        "a": str(over.a),
        "is_shear": over.is_shear(),
    }
    report.say(f"overshear accepted: f = {over.f}, a = D(f) = {over.a}")
    report.say("degenerates to a shear" if over.is_shear() else "genuine overshear")
    return report.emit(args, True)


def _resolve_flow(args, ws: Workspace, report: Report):
    if args.overshear:
        over = ws.overshears.get(args.overshear)
        if over is None:
            raise LndLabError(
                f"no overshear named {args.overshear!r}; available: {sorted(ws.overshears)}"
            )
        return flow_overshear(over)
    if not args.derivation:
        raise LndLabError("flow needs --derivation or --overshear")
    cert = ws.certificate(args.derivation, max_iter=args.max_iter)
    if isinstance(cert, Inconclusive):
        report.result = {"verdict": "Inconclusive", "max_iter": cert.max_iter}
        report.say("field is not certified; no exact flow")
        return None
    if args.f:
        over = make_overshear(cert, args.f)
        return flow_overshear(over)
    return flow_lnd(cert)


def cmd_flow(args) -> int:
    ws = load_workspace(args)
    inputs = ws.inputs_dict()
    inputs.update(
        {
            "derivation": args.derivation,
            "overshear": args.overshear,
            "f": args.f,
            "time": args.time,
            "at": args.at,
        }
    )
    report = Report("flow", inputs)
    try:
        flow = _resolve_flow(args, ws, report)
    except LndLabError as exc:
        residue = getattr(exc, "residue", None)
        if residue is None:
            raise
        report.result = {"accepted": False, "residue": str(residue)}
        report.say(f"not an overshear: D^2(f) = {residue}")
        return report.emit(args, False)
    if flow is None:
        return report.emit(args, False)

    if isinstance(flow, PolynomialFlow):
        report.result["kind"] = "polynomial"
        report.result["time_var"] = flow.time_var
        report.result["images"] = {
            v: str(img) for v, img in zip(ws.variety.ambient.vars, flow.images)
        }
        report.say(f"polynomial flow in {flow.time_var}:")
        for v, img in report.result["images"].items():
            report.say(f"  {v} -> {img}")
    else:
        report.result["kind"] = "hybrid"
        report.result["base_images_in_s"] = {
            v: str(img)
            for v, img in zip(ws.variety.ambient.vars, flow.poly_flow_in_s.images)
        }
        report.result["f"] = str(flow.f)
        report.result["a"] = str(flow.a)
        report.say("hybrid flow: base flow in s with s = f*t*phi1(a*t)")
        report.say(f"  f = {flow.f}")
        report.say(f"  a = {flow.a}")
        for v, img in report.result["base_images_in_s"].items():
            report.say(f"  {v} -> {img}")

    if args.time is not None:
        t_exact = parse_time(args.time)
        if isinstance(flow, PolynomialFlow) and isinstance(t_exact, Fraction):
            exact_images = flow.at_time(t_exact)
            report.result["images_at_time"] = {
                v: str(img)
                for v, img in zip(ws.variety.ambient.vars, exact_images)
            }
            report.say(f"exact map at {flow.time_var} = {t_exact}:")
            for v, img in report.result["images_at_time"].items():
                report.say(f"  {v} -> {img}")

    if args.time is not None and args.at is not None:
        t = float(parse_time(args.time))
        point = parse_point(args.at, ws.variety.ambient.arity, exact=False)
        image = flow.eval(t, point)
        report.result["at"] = {
            "time": str(args.time),
            "point": args.at,
            "image": [[complex(v).real, complex(v).imag] for v in image],
        }
        pretty = ", ".join(f"{complex(v).real:.12g}{complex(v).imag:+.12g}i" for v in image)
        report.say(f"image at t = {args.time}: ({pretty})")
    return report.emit(args, None)


def cmd_flex(args) -> int:
    ws = load_workspace(args)
    names = (
        [n.strip() for n in args.fields.split(",")]
        if args.fields
        else sorted(ws.derivations)
    )
    certs = []
    for name in names:
        verdict = ws.certificate(name, max_iter=args.max_iter)
        if isinstance(verdict, Inconclusive):
            raise LndLabError(f"field {name!r} is not certified; flexibility needs LNDs")
        certs.append(verdict)

    points = []
    if args.at:
        points.append(parse_point(args.at, ws.variety.ambient.arity, exact=True))
    if args.random_points:
        if ws.variety.defining:
            raise LndLabError(
                "--random-points only samples free affine space; use --at on hypersurfaces"
            )
        rng = random.Random(args.seed)
        for _ in range(args.random_points):
            points.append(
                tuple(
                    GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
                    for _ in range(ws.variety.ambient.arity)
                )
            )
    if not points:
        raise LndLabError("flex needs --at and/or --random-points")

    inputs = ws.inputs_dict()
    inputs.update(
        {
            "fields": names,
            "points": [[str(c) for c in p] for p in points],
            "seed": args.seed,
        }
    )
    report = Report("flex", inputs)
    all_span = True
    results = []
    for point in points:
        flex = denslab.flexible_at(ws.variety, certs, point)
        results.append(flex.to_json_dict())
        all_span = all_span and flex.spans
        coords = ", ".join(str(c) for c in point)
        report.say(
            f"at ({coords}): rank {flex.rank} of tangent dim {flex.tangent_dim}"
            f" -> {'spans' if flex.spans else 'does not span'}"
        )
    report.result = {"reports": results, "spans_everywhere": all_span}
    return report.emit(args, all_span)


def cmd_saturate(args) -> int:
    ws = load_workspace(args)
    gens = []
    gen_sources = []
    for name in sorted(ws.derivations):
        verdict = ws.certificate(name, max_iter=args.max_iter)
        if isinstance(verdict, Inconclusive):
            raise LndLabError(f"field {name!r} is not certified")
        for over in denslab.overshear_generators(verdict, args.gen_deg):
            gens.append(over)
            gen_sources.append({"base": name, "f": str(over.f)})
    work_deg = args.work_deg if args.work_deg is not None else max(args.target_deg, args.gen_deg)
    result = denslab.lie_saturate(
        gens,
        target_deg=args.target_deg,
        work_deg=work_deg,
        max_len=args.max_len,
        variety=ws.variety,
    )
    inputs = ws.inputs_dict()
    inputs.update(
        {
            "gen_deg": args.gen_deg,
            "target_deg": args.target_deg,
            "work_deg": work_deg,
            "max_len": args.max_len,
            "generators": gen_sources,
        }
    )
    report = Report("saturate", inputs)
    report.result = {
        "span_dim": result.span_dim,
        "target_dim": result.target_dim,
        "certified": result.certified,
        "witness_count": len(result.witnesses),
    }
    if args.witnesses:
        report.result["witnesses"] = [
            w.to_json_dict(ws.variety) for w in result.witnesses
        ]
    report.say(
        f"span {result.span_dim} of {result.target_dim} tangent fields at degree"
        f" <= {args.target_deg} (word length <= {args.max_len}, work degree {work_deg})"
    )
    report.say("certified" if result.certified else "not certified at these bounds")
    return report.emit(args, result.certified)


def cmd_compat(args) -> int:
    ws = load_workspace(args)
    if args.pair:
        left_name, right_name = (p.strip() for p in args.pair.split(","))
    elif ws.pair_candidates:
        left_name, right_name = ws.pair_candidates[0]
    else:
        raise LndLabError("no --pair given and the bundle designates none")
    left = ws.certificate(left_name, max_iter=args.max_iter)
    right = ws.certificate(right_name, max_iter=args.max_iter)
    for name, verdict in ((left_name, left), (right_name, right)):
        if isinstance(verdict, Inconclusive):
            raise LndLabError(f"field {name!r} is not certified")
    if args.ideal:
        ideal_gens = [ws.variety.element(src) for src in args.ideal.split(";")]
    elif ws.ideal_candidates:
        ideal_gens = list(ws.ideal_candidates)
    else:
        raise LndLabError("no --ideal given and the bundle carries no candidates")
    result = denslab.check_compatible_pair(left, right, ideal_gens, args.bound)
    inputs = ws.inputs_dict()
    inputs.update(
        {
            "pair": [left_name, right_name],
            "ideal_gens": [str(g) for g in ideal_gens],
            "bound": args.bound,
        }
    )
    report = Report("compat", inputs)
    report.result = result.to_json_dict()
    if result.h is not None:
        report.say(f"h = {result.h} (theta^2(h) = 0, xi(h) = 0, theta(h) != 0)")
    else:
        report.say("no nondegenerate h found at this bound")
    report.say(
        f"ideal containment at bound {args.bound}: "
        + ("verified" if result.ideal_contained else "not verified")
    )
    report.say(
        "compatible at bound" if result.is_compatible_at_bound else "not verified at bound"
    )
    return report.emit(args, result.is_compatible_at_bound)


def cmd_unit(args) -> int:
    ws = load_workspace(args)
    pairs = []
    if args.f or args.g:
        if not (args.f and args.g):
            raise LndLabError("--f and --g go together")
        pairs.append((ws.variety.element(args.f), ws.variety.element(args.g)))
    else:
        pairs.extend(ws.units)
    inputs = ws.inputs_dict()
    inputs["witnesses"] = [[str(f), str(g)] for f, g in pairs]
    report = Report("unit", inputs)
    if not pairs:
        report.say("no unit witnesses to test")
        report.result = {"witnesses": [], "obstruction_found": False}
        return report.emit(args, False)
    results = []
    found = False
    for f, g in pairs:
        ok = denslab.verify_unit_witness(ws.variety, f, g)
        entry = {"f": str(f), "g": str(g), "verified": ok, "annihilated_by": {}}
        report.say(f"witness ({f}, {g}): " + ("verified" if ok else "not a nonconstant unit"))
        if ok:
            found = True
            for name in sorted(ws.derivations):
                verdict = ws.certificate(name, max_iter=args.max_iter)
                if isinstance(verdict, Inconclusive):
                    continue
                killed = denslab.lnd_annihilates_units(verdict, f, g)
                entry["annihilated_by"][name] = killed
                report.say(f"  {name} annihilates the unit: {killed}")
        results.append(entry)
    report.result = {"witnesses": results, "obstruction_found": found}
    return report.emit(args, found)


def cmd_decompose(args) -> int:
    ring = parse_ring(args.ring)
    target = parse_map(args.map, ring)
    result = tame.jvdk_decompose(target, max_steps=args.max_steps)
    report = Report(
        "decompose",
        {"ring": list(ring.vars), "map": [str(img) for img in target.images]},
    )
    if isinstance(result, tame.DecompositionInconclusive):
        report.result = {
            "decomposed": False,
            "steps": result.steps,
            "reason": result.reason,
        }
        report.say(f"inconclusive after {result.steps} step(s): {result.reason}")
        return report.emit(args, False)
    report.result = {
        "decomposed": True,
        "factors": result.to_json_list(),
        "recomposition_exact": True,
    }
    report.say(f"{len(result.factors)} factor(s), recomposition exact:")
    for factor in result.factors:
        report.say(f"  {factor.to_json_dict()}")
    return report.emit(args, True)


def _grid_from_args(args, arity: int) -> tame.Grid:
    if args.center:
        center = tuple(float(c) for c in args.center.split(","))
        if len(center) != arity:
            raise LndLabError(f"grid center needs {arity} components")
    else:
        center = (0.0,) * arity
    return tame.Grid(center=center, radius=args.radius, samples=args.samples)


def _comparison_side(args, ws: Optional[Workspace], which: str):
    map_src = getattr(args, f"map_{which}")
    flow_name = getattr(args, f"flow_{which}")
    time_src = getattr(args, f"time_{which}")
    if map_src:
        ring = ws.variety.ambient if ws else parse_ring(args.ring)
        return parse_map(map_src, ring), {"map": map_src}
    if flow_name:
        if ws is None:
            raise LndLabError("--flow-a/--flow-b need --bundle or --spec")
        if time_src is None:
            raise LndLabError(f"--flow-{which} needs --time-{which}")
        t = parse_time(time_src)
        if flow_name in ws.overshears:
            flow = flow_overshear(ws.overshears[flow_name])
        else:
            cert = ws.certificate(flow_name)
            if isinstance(cert, Inconclusive):
                raise LndLabError(f"field {flow_name!r} is not certified")
            flow = flow_lnd(cert)
        return (
            tame.FixedTimeFlow(flow, float(t)),
            {"flow": flow_name, "time": str(time_src)},
        )
    raise LndLabError(f"side {which!r} needs --map-{which} or --flow-{which}")


def cmd_compare(args) -> int:
    ws = None
    if args.bundle or args.spec:
        ws = load_workspace(args)
    side_a, desc_a = _comparison_side(args, ws, "a")
    side_b, desc_b = _comparison_side(args, ws, "b")
    arity = (
        ws.variety.ambient.arity
        if ws is not None
        else parse_ring(args.ring).arity
    )
    grid = _grid_from_args(args, arity)
    deviation = tame.compare_on_grid(side_a, side_b, grid)
    inputs = {
        "a": desc_a,
        "b": desc_b,
        "grid": {"center": list(grid.center), "radius": grid.radius, "samples": grid.samples},
        "tol": args.tol,
    }
    if ws is not None:
        inputs.update(ws.inputs_dict())
    else:
        inputs["ring"] = args.ring
    report = Report("compare", inputs)
    within = deviation <= args.tol
    report.result = {"max_deviation": deviation, "tol": args.tol, "within_tol": within}
    report.say(f"max deviation on grid: {deviation:.6g} (tolerance {args.tol:g})")
    return report.emit(args, within)


def cmd_bracket_fd(args) -> int:
    ws = load_workspace(args)
    left = ws.certificate(args.left, max_iter=args.max_iter)
    if isinstance(left, Inconclusive):
        raise LndLabError(f"field {args.left!r} is not certified")
    right = ws.derivation(args.right)
    point = parse_point(args.at, ws.variety.ambient.arity, exact=False)
    t = float(parse_time(args.time))
    result = tame.bracket_flow_check(left, right, point, t)
    inputs = ws.inputs_dict()
    inputs.update({"left": args.left, "right": args.right, "at": args.at, "time": args.time})
    report = Report("bracket-fd", inputs)
    report.result = result.to_json_dict()
    report.say(f"finite-difference vs exact bracket at t = {t:g}:")
    report.say(f"  abs error = {result.abs_error:.6g}")
    if args.tol is not None:
        within = result.abs_error <= args.tol
        report.result["within_tol"] = within
        return report.emit(args, within)
    return report.emit(args, None)


def cmd_bundle(args) -> int:
    if args.action == "list":
        report = Report("bundle", {"action": "list"})
        report.result = {"bundles": catalog.bundle_names()}
        for name in catalog.bundle_names():
            report.say(name)
        return report.emit(args, None)
    if not args.name:
        raise LndLabError("bundle show needs a bundle name")
    bundle = catalog.bundle_by_name(args.name)
    report = Report("bundle", {"action": "show", "name": args.name})
    report.result = bundle.to_json_dict()
    report.say(f"bundle {bundle.name}: vars {list(bundle.variety.ambient.vars)}")
    for q in bundle.variety.defining:
        report.say(f"  defining: {q} = 0")
    report.say(f"  fields: {', '.join(sorted(bundle.lnds))}")
    if bundle.overshears:
        report.say(f"  overshears: {', '.join(sorted(bundle.overshears))}")
    if bundle.units:
        report.say("  units: " + "; ".join(f"({f}, {g})" for f, g in bundle.units))
    if bundle.notes:
        report.say(f"  notes: {bundle.notes}")
    return report.emit(args, None)


# -- argument parsing --------------------------------------------------------


def _add_context(sub, required: bool = True):
    group = sub.add_mutually_exclusive_group(required=required)
    group.add_argument("--bundle", help="catalog bundle name (see `bundle list`)")
    group.add_argument("--spec", help="path to a JSON spec file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lnd-lab",
        description="exact certificates for derivations, flows, and density bounds",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled points")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("parse", help="parse and canonicalize a polynomial")
    p.add_argument("expr")
    p.add_argument("--ring", required=True, help="comma-separated variables")
    p.set_defaults(handler=cmd_parse)

    p = subs.add_parser("gb", help="reduced Groebner basis")
    _add_context(p, required=False)
    p.add_argument("--ring", help="comma-separated variables (with --gens)")
    p.add_argument("--gens", help="semicolon-separated generators")
    p.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
    p.set_defaults(handler=cmd_gb)

    p = subs.add_parser("check-lnd", help="certify local nilpotency")
    _add_context(p)
    p.add_argument("--derivation", required=True)
    p.add_argument("--max-iter", type=int, default=64)
    p.set_defaults(handler=cmd_check_lnd)

    p = subs.add_parser("bracket", help="Lie bracket of two named fields")
    _add_context(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(handler=cmd_bracket)

    p = subs.add_parser("shear", help="multiply a certified field by f in ker D")
    _add_context(p)
    p.add_argument("--derivation", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--max-iter", type=int, default=64)
    p.set_defaults(handler=cmd_shear)

    p = subs.add_parser("overshear", help="multiply a certified field by f in ker D^2")
    _add_context(p)
    p.add_argument("--derivation", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--max-iter", type=int, default=64)
    p.set_defaults(handler=cmd_overshear)

    p = subs.add_parser("flow", help="exact or hybrid flow of a field")
    _add_context(p)
    p.add_argument("--derivation", help="certified field to flow")
    p.add_argument("--overshear", help="bundled overshear sample to flow")
    p.add_argument("--f", help="overshear multiplier applied to --derivation")
    p.add_argument("--time", help="rational or float time")
    p.add_argument("--at", help="comma-separated point")
    p.add_argument("--max-iter", type=int, default=64)
    p.set_defaults(handler=cmd_flow)

    p = subs.add_parser("flex", help="do the fields span the tangent space?")
    _add_context(p)
    p.add_argument("--at", help="exact point on the variety")
    p.add_argument("--random-points", type=int, default=0, help="sample N rational points (affine space only)")
    p.add_argument("--fields", help="comma-separated field names (default: all)")
    p.add_argument("--max-iter", type=int, default=64)
    p.set_defaults(handler=cmd_flex)

    p = subs.add_parser("saturate", help="bounded-degree overshear density certificate")
    _add_context(p)
    p.add_argument("--gen-deg", type=int, default=2, help="multiplier degree bound for generators")
    p.add_argument("--target-deg", type=int, required=True)
    p.add_argument("--work-deg", type=int)
    p.add_argument("--max-len", type=int, default=2)
    p.add_argument("--witnesses", action="store_true", help="include witnesses in JSON output")
    p.add_argument("--max-iter", type=int, default=64)
    p.set_defaults(handler=cmd_saturate)

    p = subs.add_parser("compat", help="compatible-pair check at a degree bound")
    _add_context(p)
    p.add_argument("--pair", help="two field names, comma separated")
    p.add_argument("--ideal", help="semicolon-separated candidate ideal generators")
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--max-iter", type=int, default=64)
    p.set_defaults(handler=cmd_compat)

    p = subs.add_parser("unit", help="invertible-function obstruction")
    _add_context(p)
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--max-iter", type=int, default=64)
    p.set_defaults(handler=cmd_unit)

    p = subs.add_parser("decompose", help="elementary/affine factorization in the plane")
    p.add_argument("--ring", required=True)
    p.add_argument("--map", required=True, help="semicolon-separated images")
    p.add_argument("--max-steps", type=int, default=64)
    p.set_defaults(handler=cmd_decompose)

    p = subs.add_parser("compare", help="max deviation of two maps on a grid")
    _add_context(p, required=False)
    p.add_argument("--ring", help="ring for bare --map-a/--map-b")
    p.add_argument("--map-a")
    p.add_argument("--map-b")
    p.add_argument("--flow-a", help="field or overshear name (needs --time-a)")
    p.add_argument("--flow-b")
    p.add_argument("--time-a")
    p.add_argument("--time-b")
    p.add_argument("--center")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=cmd_compare)

    p = subs.add_parser("bracket-fd", help="flow-limit bracket check at finite t")
    _add_context(p)
    p.add_argument("--left", required=True, help="certified field (its flow is used)")
    p.add_argument("--right", required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--time", required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", type=int, default=64)
    p.set_defaults(handler=cmd_bracket_fd)

    p = subs.add_parser("bundle", help="list or show catalog bundles")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.set_defaults(handler=cmd_bundle)

    return parser


def run(argv: Sequence[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.handler(args)
    except InternalInvariantError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return 3
    except LndLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
