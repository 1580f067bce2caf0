"""Command-line front end.

    isostring <spectrum|weyl|fields|evolve|invert|liouville|verify> --config scenario.json
              [--out DIR] [--t T ...] [--backend rational|float]

Exit codes: 0 success, 1 a ``verify`` property failed, 2 bad config or
input, 3 the flow broke down (partial output is still written), 4 numeric
backend failure.
"""

import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fields as fl
from .errors import (BetaZero, DegenerateBC, DegenerateSpectrum, LengthOverflow, NotAStieltjesFraction,
                     OrderingViolation, PoleAtZ, ValidationError)
from .flow import flow_rhs, integrate, lax_residuals
from .inverse import exact_solution
from .liouville import line_residuals, map_state
from .poly import to_fraction
from .string_core import (DIRICHLET, BoundaryConditions, char_poly, char_poly_propagated, eigenvalues,
                          new_string)
from .weyl_cf import cf_expand, partial_fractions, weyl_zero

SCHEMA_VERSION = 1
log = logging.getLogger("isostring")


class ConfigError(ValidationError):
    pass


@dataclass
class RunSpec:
    t_end: float = 0.1
    dt: float = 1e-2
    stride: int = 1
    backend: str = "rational"
    tol: float = 1e-10
    drift_tol: float = 1e-7
    t_values: list = field(default_factory=list)
    grid: int = 101


@dataclass
class ScenarioConfig:
    string: object
    bc: BoundaryConditions
    flow: fl.FlowSpec
    run: RunSpec


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ConfigError(f"{where}: expected a number or a 'p/q' string, got {value!r}")
    try:
        out = to_fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{where}: cannot read {value!r} as a number") from None
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite")
    return out


def _positive_float(value, where):
    v = float(_number(value, where))
    if not v > 0:
        raise ConfigError(f"{where}: must be positive")
    return v


def _end(spec, where):
    if not isinstance(spec, dict):
        raise ConfigError(f"{where}: expected an object with 'kind'")
    kind = str(spec.get("kind", "")).lower()
    if kind == "dirichlet":
        return DIRICHLET
    if kind == "neumann":
        return Fraction(0)
    if kind == "robin":
        if "value" not in spec:
            raise ConfigError(f"{where}.value: required for a robin end")
        v = _number(spec["value"], f"{where}.value")
        if v < 0:
            raise ConfigError(f"{where}.value: must be >= 0")
        return v
    raise ConfigError(f"{where}.kind: expected dirichlet, neumann or robin, got {spec.get('kind')!r}")


def _flow(spec):
    if spec is None:
        return fl.FlowSpec.limit()
    if not isinstance(spec, dict):
        raise ConfigError("flow: expected an object")
    kind = spec.get("kind", "limit")
    rescaled = spec.get("rescaled")
    if rescaled is not None and not isinstance(rescaled, bool):
        raise ConfigError("flow.rescaled: expected true, false or null")
    try:
        if kind == "limit":
            return fl.FlowSpec(fl.LIMIT, rescaled=rescaled)
        if kind == "single_pole":
            if "epsilon" not in spec:
                raise ConfigError("flow.epsilon: required for single_pole")
            return fl.FlowSpec(fl.SINGLE_POLE, epsilon=_number(spec["epsilon"], "flow.epsilon"),
                               rescaled=rescaled)
        if kind == "multi_pole":
            poles = spec.get("poles")
            if not isinstance(poles, list) or not poles:
                raise ConfigError("flow.poles: expected a non-empty list")
            pl = []
            for i, p in enumerate(poles):
                if not isinstance(p, dict) or "epsilon" not in p:
                    raise ConfigError(f"flow.poles[{i}]: expected {{'epsilon': .., 'mu': ..}}")
                pl.append((_number(p["epsilon"], f"flow.poles[{i}].epsilon"),
                           _number(p.get("mu", 1), f"flow.poles[{i}].mu")))
            return fl.FlowSpec(fl.MULTI_POLE, poles=tuple(pl),
                               mu0=_number(spec.get("mu0", 1), "flow.mu0"), rescaled=rescaled)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"flow: {exc}") from None
    raise ConfigError(f"flow.kind: expected limit, single_pole or multi_pole, got {kind!r}")


def _run(spec):
    spec = spec or {}
    if not isinstance(spec, dict):
        raise ConfigError("run: expected an object")
    r = RunSpec()
    if "t_end" in spec:
        r.t_end = float(_number(spec["t_end"], "run.t_end"))
        if r.t_end < 0:
            raise ConfigError("run.t_end: must be >= 0")
    for key in ("dt", "tol", "drift_tol"):
        if key in spec:
            setattr(r, key, _positive_float(spec[key], f"run.{key}"))
    for key in ("stride", "grid"):
        if key in spec:
            v = spec[key]
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ConfigError(f"run.{key}: expected a positive integer")
            setattr(r, key, v)
    if "backend" in spec:
        if spec["backend"] not in ("rational", "float"):
            raise ConfigError("run.backend: expected rational or float")
        r.backend = spec["backend"]
    if "t_values" in spec:
        if not isinstance(spec["t_values"], list):
            raise ConfigError("run.t_values: expected a list")
        r.t_values = [_number(t, f"run.t_values[{i}]") for i, t in enumerate(spec["t_values"])]
    return r


def parse_config(doc):
    """ScenarioConfig from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected an object")
    st = doc.get("string")
    if not isinstance(st, dict):
        raise ConfigError("string: expected an object with positions and masses")
    xs, ms = st.get("positions"), st.get("masses")
    if not isinstance(xs, list) or not isinstance(ms, list):
        raise ConfigError("string.positions / string.masses: expected lists")
    xs = [_number(x, f"string.positions[{i}]") for i, x in enumerate(xs)]
    ms = [_number(m, f"string.masses[{i}]") for i, m in enumerate(ms)]
    try:
        string = new_string(xs, ms)
    except ValidationError as exc:
        raise ConfigError(f"string: {exc}") from None
    bcd = doc.get("bc", {})
    if not isinstance(bcd, dict):
        raise ConfigError("bc: expected an object")
    bc = BoundaryConditions(_end(bcd.get("left", {"kind": "dirichlet"}), "bc.left"),
                            _end(bcd.get("right", {"kind": "dirichlet"}), "bc.right"))
    return ScenarioConfig(string, bc, _flow(doc.get("flow")), _run(doc.get("run")))


def load_config(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_config(doc)


# ---------------------------------------------------------------- output

def _num(v):
    return float(v)


def _exact(v):
    return str(v) if isinstance(v, Fraction) else repr(float(v))


def _bc_json(bc):
    enc = lambda p: "inf" if p is DIRICHLET else _num(p)
    return {"h": enc(bc.left), "H": enc(bc.right)}


def _write_json(out, name, payload):
    os.makedirs(out, exist_ok=True)
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    path = os.path.join(out, name)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
    return path


def _string_json(s):
    return {"positions": [_num(x) for x in s.positions], "masses": [_num(m) for m in s.masses]}


def _working(cfg, backend):
    if backend == "float":
        return cfg.string.as_float(), cfg.bc.as_float()
    return cfg.string.as_exact(), cfg.bc.as_exact()


def cmd_spectrum(cfg, args):
    s, bc = _working(cfg, args.backend)
    d = char_poly(cfg.string, cfg.bc)
    zs = eigenvalues(s, bc, args.backend)
    payload = {"bc": _bc_json(cfg.bc), "backend": args.backend,
               "eigenvalues": [_num(z) for z in zs],
               "eigenvalues_exact": [_exact(z) for z in zs] if args.backend == "rational" else None,
               "char_poly": [_num(c) for c in d.c],
               "char_poly_exact": [_exact(c) for c in d.c]}
    print(json.dumps({"eigenvalues": payload["eigenvalues"]}))
    _write_json(args.out, "spectrum.json", payload)
    return 0


def cmd_weyl(cfg, args):
    cf = cf_expand(cfg.string, cfg.bc)
    data = partial_fractions(cfg.string, cfg.bc, args.backend)
    payload = {"bc": _bc_json(cfg.bc), "backend": args.backend,
               "continued_fraction": {"l_last": _num(cf.l_last), "masses": [_num(m) for m in cf.masses],
                                      "lengths": [_num(l) for l in cf.lengths], "tail": _num(cf.tail)},
               "eigenvalues": [_num(z) for z in data.eigenvalues],
               "residues": [_num(a) for a in data.residues],
               "w_infinity": _num(data.w_infinity),
               "w_zero": _num(data.w_zero()), "w_zero_expected": _num(weyl_zero(cfg.bc.left))}
    print(json.dumps({"residues": payload["residues"]}))
    _write_json(args.out, "weyl.json", payload)
    return 0


def cmd_fields(cfg, args):
    s, bc = _working(cfg, args.backend)
    fs = fl.build_fields(s, bc, cfg.flow)
    b = fl.beta(fs, bc)
    grid = np.linspace(0.0, 1.0, cfg.run.grid)
    pts = [Fraction(k, cfg.run.grid - 1) for k in range(cfg.run.grid)] if args.backend == "rational" else grid
    res = fl.bc_residuals(fs, bc)
    payload = {"bc": _bc_json(cfg.bc), "flow": cfg.flow.kind, "rescaled": cfg.flow.is_rescaled,
               "x": grid.tolist(), "b0": [_num(fs.b0(x)) for x in pts],
               "b_minus": [{"epsilon": _num(e), "values": [_num(bk(x)) for x in pts]} for e, bk in fs.b_minus],
               "beta": {"constant": _num(b.constant),
                        "poles": [{"epsilon": _num(e), "coefficient": _num(c)} for e, c in b.poles]},
               "bc_residuals": {k: [_num(v) for v in vs] for k, vs in res.items()}}
    print(json.dumps({"beta": payload["beta"]}))
    _write_json(args.out, "fields.json", payload)
    return 0


def _write_csv(out, traj, n):
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "trajectory.csv")
    header = (["t"] + [f"x{j}" for j in range(1, n + 1)] + [f"m{j}" for j in range(1, n + 1)]
              + [f"z{j}" for j in range(1, n + 1)] + [f"I{j}" for j in range(1, n + 1)])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for t, s, inv, zs in zip(traj.times, traj.states, traj.invariants, traj.eigenvalues):
            w.writerow([f"{float(v):.17g}" for v in [t, *s.positions, *s.masses, *zs, *inv]])
    return path


def cmd_evolve(cfg, args):
    r = cfg.run
    t_end = float(args.t[-1]) if args.t else r.t_end
    time_kind = "rescaled" if cfg.flow.is_rescaled else "unrescaled"
    print(f"time convention: {time_kind}", file=sys.stderr)
    try:
        traj = integrate(cfg.string.as_float(), cfg.bc, cfg.flow, t_end=t_end, dt=r.dt, tol=r.tol,
                         stride=r.stride, drift_tol=r.drift_tol)
    except OrderingViolation as exc:
        _write_csv(args.out, exc.trajectory, cfg.string.n)
        last = exc.last_state
        _write_json(args.out, "breakdown.json", {"error": str(exc), "t": last.t,
                                                 "last_state": _string_json(last.string)})
        raise
    _write_csv(args.out, traj, cfg.string.n)
    _write_json(args.out, "evolve.json", {"time": time_kind, "t_end": t_end, "steps": traj.steps,
                                          "rejected": traj.rejected, "drift_alarm": traj.drift_alarm,
                                          "final": _string_json(traj.final())})
    return 0


def cmd_invert(cfg, args):
    ts = [to_fraction(t) for t in args.t] if args.t else (cfg.run.t_values or [to_fraction(cfg.run.t_end)])
    states = []
    try:
        for t in ts:
            res = exact_solution(cfg.string, cfg.bc, cfg.flow, t)
            states.append({"t": _num(t), **_string_json(res.string), "w_zero": _num(res.w_zero),
                           "w_zero_expected": _num(res.w_zero_expected)})
    finally:
        _write_json(args.out, "invert.json", {"bc": _bc_json(cfg.bc), "states": states})
    print(json.dumps({"t": [s["t"] for s in states]}))
    return 0


def cmd_liouville(cfg, args):
    s, bc = _working(cfg, "rational")
    st = map_state(s, fl.build_fields(s, bc, fl.FlowSpec(fl.LIMIT, rescaled=cfg.flow.rescaled)))
    grid = np.linspace(-6.0, 6.0, cfg.run.grid)
    payload = {"zeta": list(st.zeta), "masses": list(st.masses), "zeta_grid": grid.tolist(),
               "u_minus": [st.u_minus(z) for z in grid], "u0": [st.u0(z) for z in grid],
               "residuals": [list(r) for r in line_residuals(st)]}
    _write_json(args.out, "liouville.json", payload)
    print(json.dumps({"zeta": payload["zeta"], "masses": payload["masses"]}))
    return 0


# ---------------------------------------------------------------- verify

def _close(a, b, tol):
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(b)))


def verify_properties(cfg):
    """(name, passed, detail) for every property that applies to the scenario."""
    s, bc, spec = cfg.string.as_exact(), cfg.bc.as_exact(), cfg.flow
    out = []

    def check(name, fn):
        try:
            ok, detail = fn()
        except Exception as exc:   # a property that cannot even be evaluated has failed
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))

    check("char_poly additive == propagated", lambda: (char_poly(s, bc) == char_poly_propagated(s, bc), ""))

    def spectra():
        zr = eigenvalues(s, bc, "rational")
        zf = eigenvalues(s, bc, "float")
        return all(_close(a, b, 1e-9) for a, b in zip(zr, zf)) and len(zr) == len(zf) == s.n, str([float(z) for z in zr])
    check("eigenvalues rational == float", spectra)

    if bc.is_neumann_neumann and spec.is_rescaled:
        out.append(("fields", False, "rescaled fields need W(c0, c0_hat) != 0"))
        return out
    fs = fl.build_fields(s, bc, spec)
    b = fl.beta(fs, bc)

    def bcres():
        vals = [v for vs in fl.bc_residuals(fs, bc).values() for v in vs]
        return all(v == 0 for v in vals), ""
    check("boundary residuals vanish", bcres)
    check("beta field route == closed form",
          lambda: (all(b(z) == fl.beta_closed_form(s, bc, spec)(z) for z in map(Fraction, (1, 3, 7))), ""))
    zs = [Fraction(k, 3) + Fraction(1, 7) for k in range(1, 6)]

    def kcheck():
        vals = []
        for z in zs:
            try:
                vals.append(fl.k_diagnostic(fs, bc, z))
            except BetaZero:
                continue
        return all(v == -1 for v in vals), f"{len(vals)} samples"
    check("K == -1", kcheck)

    def lax():
        rows = lax_residuals(s, bc, fs, zs)
        return all(v == 0 for row in rows for pair in row for v in pair), ""
    check("jump-condition residuals vanish", lax)

    if s.n == 1:
        check("single mass is a fixed point", lambda: (all(v == 0 for part in flow_rhs(s, bc, spec) for v in part), ""))

    t_end = min(cfg.run.t_end, 0.05) if s.n > 1 else cfg.run.t_end

    def iso():
        traj = integrate(s.as_float(), bc, spec, t_end=t_end, dt=cfg.run.dt, tol=cfg.run.tol)
        drift = max([0.0] + [abs(a - b) / abs(b) for a, b in zip(traj.eigenvalues[-1], traj.eigenvalues[0])]
                    + [abs(a - b) / abs(b) for a, b in zip(traj.invariants[-1], traj.invariants[0])])
        return drift < 10 * cfg.run.drift_tol, f"drift {drift:.3g} at t={t_end}"
    check("isospectral integration", iso)

    if bc.right == 0 and (bc.left is DIRICHLET or bc.left > 0):
        def agree():
            traj = integrate(s.as_float(), bc, spec, t_end=t_end, dt=cfg.run.dt, tol=cfg.run.tol)
            ex = exact_solution(s, bc, spec, to_fraction(t_end))
            err = max(abs(float(a) - b) for a, b in zip(ex.string.positions + ex.string.masses,
                                                        traj.final().positions + traj.final().masses))
            return err < 1e-6 and _close(ex.w_zero, ex.w_zero_expected, 1e-10), f"max diff {err:.3g}"
        check("evolve == invert", agree)
        check("W(0) identity",
              lambda: (_close(partial_fractions(s, bc).w_zero(), weyl_zero(bc.left), 1e-10), ""))
    if spec.kind == fl.LIMIT and not bc.is_neumann_neumann:
        def line():
            st = map_state(s, fl.build_fields(s, bc, spec))
            r = max([0.0] + [abs(v) for pair in line_residuals(st) for v in pair])
            return r < 1e-10, f"max {r:.3g}"
        check("line constraint residuals vanish", line)
    return out


def cmd_verify(cfg, args):
    results = verify_properties(cfg)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
    _write_json(args.out, "verify.json",
                {"properties": [{"name": n, "passed": ok, "detail": d} for n, ok, d in results]})
    return 0 if all(ok for _, ok, _ in results) else 1


COMMANDS = {"spectrum": cmd_spectrum, "weyl": cmd_weyl, "fields": cmd_fields, "evolve": cmd_evolve,
            "invert": cmd_invert, "liouville": cmd_liouville, "verify": cmd_verify}


def build_parser():
    p = argparse.ArgumentParser(prog="isostring", description="Isospectral flows of discrete strings.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="scenario JSON file")
    p.add_argument("--out", default=".", help="directory for output files")
    p.add_argument("--t", nargs="+", default=None, help="time value(s) for evolve/invert")
    p.add_argument("--backend", choices=("rational", "float"), default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.t:
            args.t = [_number(t, "--t") for t in args.t]
        if args.backend is None:
            args.backend = cfg.run.backend
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (OrderingViolation, NotAStieltjesFraction, LengthOverflow) as exc:
        print(f"flow breakdown: {exc}", file=sys.stderr)
        return 3
    except (DegenerateSpectrum, PoleAtZ, BetaZero, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    except (ValidationError, DegenerateBC) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
