"""Command-line front end: scene files, experiment subcommands, CSV/JSON output.

Exit codes: 0 pass, 2 experiment threshold failure, 1 input or solver
error, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import numpy as np

from . import experiments as ex
from .cgo import AdmissibilityError, CgoParameters, decay_margin, profile_decay_check
from .geometry import Ball, Box, ConvexPolygon, GeometryError, SectorGeometry, TruncatedSector, neighborhood_region
from .incident import FourierBesselMode, IncidentWave, herglotz_from_samples, plane_wave, point_source
from .laplace import HarmonicHomogeneousPolynomial, LaplaceDomainError, cube_characteristic_fourier, sector_laplace
from .lsolver import (
    ContrastSpec,
    FarFieldPattern,
    LippmannSchwingerSolver,
    SolverError,
    build_contrast,
    far_field,
)
from .mie import MieResonanceError, MieScene, mie_far_field

EXIT_OK, EXIT_ERROR, EXIT_FAIL, EXIT_USAGE = 0, 1, 2, 64

_vec2 = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_vec = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 3}

SCENE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["dimension", "k", "scatterer", "contrast", "incident"],
    "additionalProperties": False,
    "properties": {
        "dimension": {"enum": [2, 3]},
        "k": {"type": "number", "exclusiveMinimum": 0},
        "scatterer": {
            "type": "object",
            "required": ["type"],
            "oneOf": [
                {"properties": {"type": {"const": "polygon"},
                                "vertices": {"type": "array", "items": _vec2, "minItems": 3}},
                 "required": ["vertices"], "additionalProperties": False},
                {"properties": {"type": {"const": "box"},
                                "extents": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0},
                                            "minItems": 2, "maxItems": 3},
                                "rotation": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
                                "translation": _vec},
                 "required": ["extents"], "additionalProperties": False},
                {"properties": {"type": {"const": "disk"}, "center": _vec,
                                "radius": {"type": "number", "exclusiveMinimum": 0}},
                 "required": ["center", "radius"], "additionalProperties": False},
            ],
        },
        "contrast": {
            "type": "object",
            "required": ["kind"],
            "oneOf": [
                {"properties": {"kind": {"const": "constant"}, "eta": {"type": "number"}},
                 "required": ["eta"], "additionalProperties": False},
                {"properties": {"kind": {"const": "hoelder"}, "eta": {"type": "number"},
                                "alpha": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                                "c": {"type": "number"}},
                 "required": ["eta", "alpha"], "additionalProperties": False},
                {"properties": {"kind": {"const": "polynomial"},
                                "terms": {"type": "array", "minItems": 1,
                                          "items": {"type": "array", "items": {"type": "number"},
                                                    "minItems": 3, "maxItems": 4}}},
                 "required": ["terms"], "additionalProperties": False},
            ],
        },
        "incident": {
            "type": "object",
            "required": ["type"],
            "oneOf": [
                {"properties": {"type": {"const": "plane"}, "angle": {"type": "number"}, "direction": _vec},
                 "additionalProperties": False},
                {"properties": {"type": {"const": "point_source"}, "source": _vec},
                 "required": ["source"], "additionalProperties": False},
                {"properties": {"type": {"const": "herglotz"},
                                "density": {"type": "array", "minItems": 8, "items": _vec2}},
                 "required": ["density"], "additionalProperties": False},
            ],
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "points_per_wavelength": {"type": "number", "minimum": 4},
                "padding_factor": {"const": 2},
                "n": {"type": "integer", "minimum": 4},
            },
        },
        "solver": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "tol": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.1},
                "max_iter": {"type": "integer", "minimum": 1},
                "method": {"enum": ["gmres", "born"]},
            },
        },
    },
}


class SceneError(ValueError):
    """Scene file rejected: malformed JSON, schema violation or broken hypothesis."""


@dataclass
class Scene:
    dimension: int
    k: float
    spec: ContrastSpec
    incident: IncidentWave
    n: int | None
    points_per_wavelength: float
    tol: float
    max_iter: int
    method: str
    raw: dict

    def contrast(self, n: int | None = None):
        return build_contrast(self.spec, n=n or self.n, k=self.k,
                              points_per_wavelength=self.points_per_wavelength)

    def solver(self, n: int | None = None) -> LippmannSchwingerSolver:
        return LippmannSchwingerSolver(self.contrast(n), self.k, tol=self.tol, max_iter=self.max_iter,
                                       method=self.method)


def _path(err: jsonschema.ValidationError) -> str:
    out = "scene"
    for p in err.absolute_path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _best_error(errors):
    # oneOf failures carry the per-branch errors in context; report the
    # branch whose "type"/"kind" discriminator matched
    err = min(errors, key=lambda e: (len(e.absolute_path), e.message))
    if err.validator == "oneOf" and err.context:
        branches = {}
        for e in err.context:
            branches.setdefault(e.relative_schema_path[0], []).append(e)
        for errs in branches.values():
            if not any(e.validator == "const" and len(e.relative_schema_path) == 4 for e in errs):
                return jsonschema.exceptions.best_match(errs)
    return err


def _scatterer(block: dict, dim: int):
    kind = block["type"]
    if kind == "polygon":
        if dim != 2:
            raise SceneError("scene.scatterer: polygons need dimension 2")
        try:
            return ConvexPolygon(block["vertices"])
        except GeometryError as e:
            raise SceneError(f"scene.scatterer.vertices: hypothesis 'convex polygon' violated: {e}") from e
    if kind == "box":
        if len(block["extents"]) != dim:
            raise SceneError("scene.scatterer.extents: length must equal dimension")
        try:
            return Box(block["extents"], block.get("rotation"), block.get("translation"))
        except GeometryError as e:
            raise SceneError(f"scene.scatterer: {e}") from e
    if len(block["center"]) != dim:
        raise SceneError("scene.scatterer.center: length must equal dimension")
    return Ball(block["center"], block["radius"])


def _incident(block: dict, k: float, dim: int) -> IncidentWave:
    kind = block["type"]
    if kind == "plane":
        if "direction" in block:
            d = np.asarray(block["direction"], dtype=float)
            if len(d) != dim or not np.linalg.norm(d) > 0:
                raise SceneError("scene.incident.direction: need a non-zero vector of length dimension")
            return plane_wave(k, d)
        if dim != 2:
            raise SceneError("scene.incident: 3D plane waves need 'direction'")
        return plane_wave(k, float(block.get("angle", 0.0)))
    if kind == "point_source":
        if len(block["source"]) != dim:
            raise SceneError("scene.incident.source: length must equal dimension")
        return point_source(k, block["source"])
    if dim != 2:
        raise SceneError("scene.incident: Herglotz densities in scene files are planar")
    g = np.array([complex(a, b) for a, b in block["density"]])
    return herglotz_from_samples(g, k)


def parse_scene(obj: dict) -> Scene:
    """Validate a scene dictionary and check the corner hypotheses."""
    errors = list(jsonschema.Draft202012Validator(SCENE_SCHEMA).iter_errors(obj))
    if errors:
        err = _best_error(errors)
        raise SceneError(f"{_path(err)}: {err.message}")
    dim, k = int(obj["dimension"]), float(obj["k"])
    scat = _scatterer(obj["scatterer"], dim)
    c = obj["contrast"]
    terms = tuple(tuple(t) for t in c.get("terms", ()))
    if c["kind"] == "polynomial" and any(len(t) != dim + 1 for t in terms):
        raise SceneError("scene.contrast.terms: each term is (powers..., coefficient) with one power per axis")
    spec = ContrastSpec(scat, c["kind"], float(c.get("eta", 0.0)), c.get("alpha"), float(c.get("c", 1.0)), terms)
    prof = spec.profile()
    for i, o in enumerate(np.asarray(scat.corners(), dtype=float)):
        qo = float(prof(o[None, :])[0])
        if abs(qo - 1.0) < 1e-14:
            raise SceneError(f"scene.contrast: hypothesis q(O) != 1 violated at corner {i} {tuple(o.tolist())}")
    grid = obj.get("grid", {})
    sol = obj.get("solver", {})
    inc = _incident(obj["incident"], k, dim)
    if inc.kind == "point_source" and bool(scat.contains(np.asarray(inc.source, dtype=float))):
        raise SceneError("scene.incident.source: point source lies inside the scatterer")
    return Scene(dim, k, spec, inc, grid.get("n"), float(grid.get("points_per_wavelength", 12)),
                 float(sol.get("tol", 1e-8)), int(sol.get("max_iter", 2000)), sol.get("method", "gmres"), obj)


def load_scene(path) -> Scene:
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SceneError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    try:
        return parse_scene(obj)
    except SceneError as e:
        raise SceneError(f"{path}: {e}") from e


# ----------------------------------------------------------------------------
# output formats
# ----------------------------------------------------------------------------


def fmt(x: float) -> str:
    """17 significant digits; plain 0 for zeros."""
    x = float(x)
    return "0" if x == 0 else f"{x:.17g}"


def _write_lines(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def far_field_rows(p: FarFieldPattern):
    if p.dimension == 2:
        theta = np.mod(p.theta, 2 * np.pi)
        order = np.argsort(theta, kind="stable")
        return "theta,re,im", [(theta[i], p.values[i].real, p.values[i].imag) for i in order]
    theta, phi = p.theta, np.mod(p.phi, 2 * np.pi)
    order = np.lexsort((phi, theta))
    return "theta,phi,re,im", [(theta[i], phi[i], p.values[i].real, p.values[i].imag) for i in order]


def emit_far_field_csv(p: FarFieldPattern, path) -> None:
    header, rows = far_field_rows(p)
    _write_lines(path, [header] + [",".join(fmt(v) for v in r) for r in rows])


def read_far_field_csv(path):
    with open(path, encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    header = rows[0]
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    return header, data


def _emit_table(path, header: str, rows):
    lines = [header]
    for r in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in r))
    _write_lines(path, lines)


def _emit_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _finish_report(rep: ex.ExperimentReport, out_dir, runtime: float) -> int:
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for name, (header, rows) in sorted(rep.tables.items()):
            path = d / f"{rep.experiment}_{name}.csv"
            _emit_table(path, header, rows)
            rep.artifacts[name] = path.name
        _emit_json(d / f"{rep.experiment}_report.json", rep.to_dict())
        _emit_json(d / f"{rep.experiment}_run.json", {"runtime_s": runtime, "created": time.time()})
    print(rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAIL


def _args_digest(a) -> str:
    # output location and dispatch do not change the numbers
    return ex.input_digest({k: v for k, v in vars(a).items() if k not in ("out_dir", "func")})


def _floats(text: str):
    return [float(v) for v in text.split(",")]


def _complexes(text: str):
    return np.array([complex(v.replace(" ", "")) for v in text.split(",")])


# ----------------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------------


def cmd_forward(a) -> int:
    scene = load_scene(a.scene)
    t0 = time.perf_counter()
    sol = scene.solver(a.n).solve(scene.incident)
    ff = far_field(sol, a.directions)
    runtime = time.perf_counter() - t0
    out = Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    emit_far_field_csv(ff, out / "farfield.csv")
    diag = sol.diagnostics()
    diag.pop("runtime", None)
    _emit_json(out / "diagnostics.json", diag)
    _emit_json(out / "run.json", {"runtime_s": runtime, "created": time.time()})
    print(json.dumps(diag, sort_keys=True))
    return EXIT_OK


def cmd_farfield(a) -> int:
    scene = load_scene(a.scene)
    ff = far_field(scene.solver(a.n).solve(scene.incident), a.directions)
    if a.out:
        emit_far_field_csv(ff, a.out)
    else:
        header, rows = far_field_rows(ff)
        sys.stdout.write(header + "\n" + "".join(",".join(fmt(v) for v in r) + "\n" for r in rows))
    return EXIT_OK


def cmd_mie_check(a) -> int:
    k = a.ka / a.radius
    scene = MieScene(a.radius, a.q0, k)
    spec = ContrastSpec(Ball((0.0, 0.0), a.radius), "constant", a.q0 - 1.0)
    inc = plane_wave(k, a.angle)
    t0 = time.perf_counter()
    sol = LippmannSchwingerSolver(build_contrast(spec, n=a.n), k, tol=1e-10).solve(inc)
    ff = far_field(sol, a.directions)
    runtime = time.perf_counter() - t0
    ref = mie_far_field(scene, a.angle, a.directions)
    err = ff.distance(ref) / ref.norm()
    rep = ex.ExperimentReport("mie-check", _args_digest(a))
    rep.metrics["relative_l2_error"] = ex.Metric(err, a.tol, "<=", "DERIVED: separation-of-variables series")
    rows = [(t, s.real, s.imag, m.real, m.imag) for t, s, m in zip(np.mod(ff.theta, 2 * np.pi), ff.values, ref.values)]
    rep.tables["comparison"] = ("theta,re_solver,im_solver,re_mie,im_mie", sorted(rows))
    return _finish_report(rep, a.out_dir, runtime)


def cmd_distinguish(a) -> int:
    sa, sb = load_scene(a.scene_a), load_scene(a.scene_b)
    for s, name in ((sa, "scene-a"), (sb, "scene-b")):
        if s.spec.scatterer.n_corners == 0:
            raise SceneError(f"{name}: hypothesis 'scatterer has a corner' violated")
    if abs(sa.k - sb.k) > 0 or sa.incident != sb.incident:
        raise SceneError("scene-a and scene-b must share k and the incident wave")
    t0 = time.perf_counter()
    rep = ex.run_distinguish(sa.spec, sb.spec, sa.incident, n=a.n, control=a.control)
    return _finish_report(rep, a.out_dir, time.perf_counter() - t0)


def cmd_nonscatter_scan(a) -> int:
    scene = load_scene(a.scene)
    if scene.spec.scatterer.n_corners == 0:
        raise SceneError("scene: hypothesis 'scatterer has a corner' violated")
    ks = np.linspace(a.k_min, a.k_max, a.nk)
    t0 = time.perf_counter()
    rep = ex.run_nonscattering_scan(scene.spec, ks, n=a.n, n_directions=a.directions,
                                    n_herglotz=a.herglotz, seed=a.seed)
    return _finish_report(rep, a.out_dir, time.perf_counter() - t0)


def _sector(a) -> TruncatedSector:
    return TruncatedSector(SectorGeometry((0.0, 0.0), a.phi0), a.radius)


def cmd_ortho_decay(a) -> int:
    ts = _sector(a)
    q = ex.hoelder_sector_contrast((0.0, 0.0), a.eta, a.alpha, a.c)
    v1 = FourierBesselMode(a.k, a.order)
    taus = np.linspace(a.tau_min, a.tau_max, a.ntau)
    t0 = time.perf_counter()
    rep = ex.run_orthogonality_decay(ts, q, v1, taus, a.phi, reference_eta=a.reference_eta)
    return _finish_report(rep, a.out_dir, time.perf_counter() - t0)


def cmd_cgo_decay(a) -> int:
    ts = _sector(a)
    region = neighborhood_region(ts, a.eps)
    rep = ex.ExperimentReport("cgo-decay", _args_digest(a))
    rows = []
    for tau in _floats(a.tau):
        r = profile_decay_check(CgoParameters(tau, a.k, phi=a.phi), region, a.samples)
        rows.append((tau, r["delta0"], r["max_profile"], r["bound"]))
        rep.metrics[f"excess_tau_{fmt(tau)}"] = ex.Metric(r["log_max_profile"] + tau * r["delta0"], 1e-12, "<=",
                                                          "THEOREM: exp(-tau delta0) bound on D_eps,R")
    closed = (0.5 * a.radius - a.eps) * math.cos(a.phi0 + a.eps + abs(a.phi))
    rep.metrics["delta0_closed_form_gap"] = ex.Metric(abs(decay_margin(ts, a.eps, a.phi) - closed), 1e-6, "<=",
                                                      "DERIVED: corner evaluation")
    rep.tables["profile"] = ("tau,delta0,max_profile,bound", rows)
    return _finish_report(rep, a.out_dir, 0.0)


def cmd_laplace(a) -> int:
    z = _complexes(a.z)
    if len(z) == 2:
        W = SectorGeometry((0.0, 0.0), a.phi0, a.orientation)
        coeffs = _complexes(a.coeffs) if a.coeffs else np.array([1.0, 0.0])
        H = HarmonicHomogeneousPolynomial(a.n, tuple(coeffs))
    elif len(z) == 3:
        W = SectorGeometry((0.0, 0.0, 0.0), 0.0, dimension=3)
        coeffs = _complexes(a.coeffs) if a.coeffs else np.eye(2 * a.n + 1)[a.n]
        H = HarmonicHomogeneousPolynomial(a.n, tuple(coeffs), dimension=3)
    else:
        raise ValueError("--z needs 2 or 3 components")
    v = sector_laplace(H, W, z)
    print(f"{v.real:.17g}" if v.imag == 0 else f"{v.real:.17g}{v.imag:+.17g}j")
    return EXIT_OK


def cmd_cube_fft(a) -> int:
    v = cube_characteristic_fourier(np.asarray(_floats(a.xi)), a.half_width)
    print(f"{float(np.real(v)):.17g}")
    return EXIT_OK


def cmd_green_check(a) -> int:
    ts = _sector(a)
    q = ex.hoelder_sector_contrast((0.0, 0.0), a.eta, a.alpha)
    w = ex.CornerBump(ts, a.amplitude)
    t0 = time.perf_counter()
    rep = ex.run_green_identity_check(ts, a.k, q, w, a.tau, a.phi)
    return _finish_report(rep, a.out_dir, time.perf_counter() - t0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cornerlab", description="Corner scattering numerical experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("forward", help="solve one scene; write far field CSV and diagnostics")
    s.add_argument("--scene", required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--n", type=int, default=None, help="cells along the longest side (overrides the scene)")
    s.add_argument("--directions", type=int, default=256)
    s.set_defaults(func=cmd_forward)

    s = sub.add_parser("farfield", help="solve one scene and print the far field CSV")
    s.add_argument("--scene", required=True)
    s.add_argument("--out", default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--directions", type=int, default=256)
    s.set_defaults(func=cmd_farfield)

    s = sub.add_parser("mie-check", help="grid solver vs disk series")
    s.add_argument("--ka", type=float, required=True)
    s.add_argument("--q0", type=float, default=1.5)
    s.add_argument("--radius", type=float, default=1.0)
    s.add_argument("--angle", type=float, default=0.0)
    s.add_argument("--n", type=int, default=256)
    s.add_argument("--directions", type=int, default=256)
    s.add_argument("--tol", type=float, default=2e-3)
    s.add_argument("--out-dir", default=None)
    s.set_defaults(func=cmd_mie_check)

    s = sub.add_parser("distinguish", help="far-field discrepancy of two scenes")
    s.add_argument("--scene-a", required=True)
    s.add_argument("--scene-b", required=True)
    s.add_argument("--n", type=int, default=64)
    s.add_argument("--control", action="store_true", help="scenes are identical; expect no discrepancy")
    s.add_argument("--out-dir", default=None)
    s.set_defaults(func=cmd_distinguish)

    s = sub.add_parser("nonscatter-scan", help="min normalized far-field norm over a k scan")
    s.add_argument("--scene", required=True)
    s.add_argument("--k-min", type=float, default=1.0)
    s.add_argument("--k-max", type=float, default=5.0)
    s.add_argument("--nk", type=int, default=64)
    s.add_argument("--directions", type=int, default=16)
    s.add_argument("--herglotz", type=int, default=8)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n", type=int, default=48)
    s.add_argument("--out-dir", default=None)
    s.set_defaults(func=cmd_nonscatter_scan)

    def sector_args(s):
        s.add_argument("--phi0", type=float, default=math.pi / 6)
        s.add_argument("--radius", type=float, default=1.0)
        s.add_argument("--k", type=float, default=2.0)
        s.add_argument("--phi", type=float, default=0.0)
        s.add_argument("--out-dir", default=None)

    s = sub.add_parser("ortho-decay", help="tau^{n+2} I(tau) vs the sector Laplace transform")
    sector_args(s)
    s.add_argument("--order", type=int, default=0)
    s.add_argument("--eta", type=float, default=0.5)
    s.add_argument("--alpha", type=float, default=None)
    s.add_argument("--c", type=float, default=1.0)
    s.add_argument("--reference-eta", type=float, default=None)
    s.add_argument("--tau-min", type=float, default=40.0)
    s.add_argument("--tau-max", type=float, default=80.0)
    s.add_argument("--ntau", type=int, default=9)
    s.set_defaults(func=cmd_ortho_decay)

    s = sub.add_parser("cgo-decay", help="CGO profile vs exp(-tau delta0) on D_eps,R")
    sector_args(s)
    s.add_argument("--eps", type=float, default=0.05)
    s.add_argument("--tau", default="10,20,40")
    s.add_argument("--samples", type=int, default=4096)
    s.set_defaults(func=cmd_cgo_decay)

    s = sub.add_parser("laplace", help="evaluate the sector Laplace transform F(z)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--phi0", type=float, default=math.pi / 6)
    s.add_argument("--orientation", type=float, default=0.0)
    s.add_argument("--z", required=True, help="comma-separated complex components, e.g. 1,0 or 1,1j")
    s.add_argument("--coeffs", default=None, help="2D: (a, b) for a Re z^n + b Im z^n; 3D: 2n+1 values")
    s.set_defaults(func=cmd_laplace)

    s = sub.add_parser("cube-fft", help="Fourier transform of a cube indicator")
    s.add_argument("--xi", required=True)
    s.add_argument("--half-width", type=float, default=1.0)
    s.set_defaults(func=cmd_cube_fft)

    s = sub.add_parser("green-check", help="Green identity on S_{R/2} with a synthetic w")
    sector_args(s)
    s.add_argument("--tau", type=float, default=30.0)
    s.add_argument("--eta", type=float, default=0.5)
    s.add_argument("--alpha", type=float, default=None)
    s.add_argument("--amplitude", type=float, default=1.0)
    s.set_defaults(func=cmd_green_check)
    return p


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (SceneError, GeometryError, AdmissibilityError, LaplaceDomainError, MieResonanceError,
            SolverError, ValueError, OSError) as e:
        print(f"cornerlab {args.command}: error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main():
    sys.exit(cli_main())
