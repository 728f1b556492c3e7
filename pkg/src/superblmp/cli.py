"""superblmp command line: generate grids, verify suites, print Bell polynomials, check Baecklund steps.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 degenerate grid.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import backlund as B
from . import bell
from .descriptors import FAMILIES, build, emit, load
from .errors import BLMPError, DescriptorError, DivisionNearSingularity
from .grassmann import GeneratorSet
from .jet import JetOrder
from .residual import (DEFAULT_BOX, TOL_CLOSED, TOL_GRASSMANN, residual_blmp,
                       residual_bilinear, residual_susy_components, sample_points)
from .solutions import SolutionField
from .susy import Superpartner, SuperSoliton, schroedinger_check

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DEGENERATE = 0, 1, 2, 3
AXES = ("x", "y", "t")
MIN_FRACTION = 0.95


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    descriptors: list = field(default_factory=list)
    grid: dict = field(default_factory=dict)
    fix: dict = field(default_factory=dict)
    order: tuple | None = None
    tol: float | None = None
    out: str | None = None
    seed: int = 0
    points: int = 100
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for ax, (a, b, n) in self.grid.items():
            if ax not in AXES:
                raise UsageError(f"unknown axis {ax!r}")
            if not (math.isfinite(a) and math.isfinite(b)):
                raise UsageError(f"non-finite bounds for {ax}")
            if n < 2:
                raise UsageError(f"resolution of {ax} must be >= 2")


# -- argument parsing ------------------------------------------------------------

def parse_grid(spec):
    out = {}
    for part in filter(None, (spec or "").split(",")):
        try:
            ax, rng = part.split("=")
            a, b, n = rng.split(":")
            out[ax.strip()] = (float(a), float(b), int(n))
        except ValueError:
            raise UsageError(f"bad grid spec {part!r}; expected axis=a:b:n") from None
    return out


def parse_fix(spec):
    out = {}
    for part in filter(None, (spec or "").split(",")):
        try:
            ax, v = part.split("=")
            out[ax.strip()] = float(v)
        except ValueError:
            raise UsageError(f"bad --fix {part!r}; expected axis=value") from None
    return out


def _descriptors_from(args, cfg_data):
    if args.family:
        try:
            params = json.loads(args.params) if args.params else {}
        except json.JSONDecodeError as exc:
            raise DescriptorError(f"--params is not JSON: {exc}") from exc
        d = {"family": args.family, "params": params}
        for k in ("q", "m"):
            v = getattr(args, k, None)
            if v:
                d[k] = json.loads(v) if v.lstrip().startswith("{") else v
        return [d]
    if cfg_data is None:
        return []
    if isinstance(cfg_data, list):
        return cfg_data
    if "descriptors" in cfg_data:
        return list(cfg_data["descriptors"])
    if "descriptor" in cfg_data:
        return [cfg_data["descriptor"]]
    if "family" in cfg_data:
        return [cfg_data]
    return []


def make_config(args) -> RunConfig:
    data = load(args.config) if getattr(args, "config", None) else None
    opts = data if isinstance(data, dict) else {}
    grid = parse_grid(args.grid) if getattr(args, "grid", None) else {
        k: tuple(v) for k, v in opts.get("grid", {}).items()}
    fix = parse_fix(args.fix) if getattr(args, "fix", None) else dict(opts.get("fix", {}))
    order = tuple(opts["order"]) if "order" in opts else None
    return RunConfig(args.command, _descriptors_from(args, data), grid, fix, order,
                     args.tol if args.tol is not None else opts.get("tol"),
                     args.out, args.seed if args.seed is not None else int(opts.get("sample_seed", 0)),
                     int(opts.get("points", 100)), extra=opts)


# -- generate ----------------------------------------------------------------------

def _columns(obj):
    if isinstance(obj, (SuperSoliton, Superpartner)):
        G = obj.gens
        masks = [m for m in range(1 << len(G)) if bin(m).count("1") & 1]
        labels = ["*".join(G.labels(m)) for m in masks]
        return masks, labels
    return None, ["u"]


def _values(obj, masks, p, order):
    if masks is None:
        return [complex(obj.u(*p, order).value)]
    terms = obj.phi(*p, order).elem.value().terms
    return [complex(terms.get(m, 0.0)) for m in masks]


def cmd_generate(cfg: RunConfig, stream) -> int:
    if len(cfg.descriptors) != 1:
        raise UsageError("generate needs exactly one descriptor")
    obj = build(cfg.descriptors[0])
    axes = []
    for ax in AXES:
        if ax in cfg.grid:
            a, b, n = cfg.grid[ax]
            axes.append(list(np.linspace(a, b, int(n))))
        else:
            axes.append([cfg.fix.get(ax, 0.0)])
    order = JetOrder(*(cfg.order or (0, 0, 0)))
    masks, labels = _columns(obj)
    w = csv.writer(stream, lineterminator="\n")
    head = list(AXES)
    for lab in labels:
        head += [f"{lab}_re", f"{lab}_im"]
    w.writerow(head)
    skipped = total = 0
    for x, y, t in itertools.product(*axes):
        total += 1
        try:
            vals = _values(obj, masks, (x, y, t), order)
        except DivisionNearSingularity:
            skipped += 1
            vals = [complex(math.nan, math.nan)] * len(labels)
        row = [f"{v:.17g}" for v in (x, y, t)]
        for v in vals:
            row += [f"{v.real:.17g}", f"{v.imag:.17g}"]
        w.writerow(row)
    if total and skipped > total / 2:
        print(f"degenerate grid: {skipped}/{total} points singular", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


# -- verify ----------------------------------------------------------------------------

def classical_suite():
    """Descriptors checked by ``verify --suite classical``."""
    idq = {"name": "identity"}
    out = [{"family": "rational_similarity", "params": {"n": n},
            "q": [idq, {"name": "sin", "a": 0.5}, {"name": "poly", "coeffs": [0, 1, 0.2]}][n % 3]}
           for n in range(5)]
    out += [{"family": "n_soliton", "params": {"kappa": k}}
            for k in ([1.1], [0.5, 1.0], [0.4, 0.9, 1.3])]
    out += [{"family": f, "params": {"gamma": 0.8}}
            for f in ("negaton2", "positon2", "rational_soliton", "rational_positon")]
    out.append({"family": "complexiton", "params": {"alpha": 1.0, "beta": 1.0}})
    out += traveling_wave_suite()
    return out


def traveling_wave_suite():
    """The three registered (q, m) pairs for the traveling wave."""
    pairs = [({"name": "identity"}, {"name": "zero"}),
             ({"name": "identity"}, {"name": "sin", "a": 0.7}),
             ({"name": "poly", "coeffs": [0, 1, 0.3]}, {"name": "exp", "a": 0.5})]
    return [{"family": "traveling_wave", "params": {"a": 1.2, "alpha": 0.3, "c1": 2.0, "c2": 0.5},
             "q": q, "m": m} for q, m in pairs]


def super_suite():
    return [
        {"family": "super_soliton1", "params": {"kappa": [0.8], "rho": [1.3], "zeta": ["zeta1"]}},
        {"family": "super_soliton2", "params": {"kappa": [0.7, 1.3], "rho": [0.5, 2.0]}},
    ] + [{"family": "superpartner",
          "params": {"d1": d1, "d2": d2, "a": 0.9, "alpha": 0.2,
                     "beta1": 0.4, "beta2": -0.3, "beta3": 1.0},
          "m": {"name": "sin", "a": 0.7}} for d1, d2 in ((1, 0), (0, 1), (2, 1))]


SUITES = {"classical": classical_suite, "super": super_suite,
          "all": lambda: classical_suite() + super_suite()}


def verify_one(desc, pts, tol=None):
    """List of (check name, report, tolerance) for one descriptor."""
    obj = build(desc)
    if isinstance(obj, SolutionField):
        return [("blmp", residual_blmp(obj, pts), tol or TOL_CLOSED)]
    if isinstance(obj, SuperSoliton):
        return [("super_bilinear", residual_bilinear("super_bilinear", obj, pts=pts), tol or TOL_CLOSED)]
    return [("susy_components", residual_susy_components(obj.phi, pts), tol or TOL_GRASSMANN),
            ("schroedinger", schroedinger_check(obj.params), tol or TOL_GRASSMANN)]


def cmd_verify(cfg: RunConfig, stream) -> int:
    descs = list(cfg.descriptors)
    suite = cfg.extra.get("suite")
    if suite:
        descs += SUITES[suite]()
    pts = sample_points(cfg.points, seed=cfg.seed)
    ok = True
    for d in descs:
        for name, rep, tol in verify_one(d, pts, cfg.tol):
            passed = rep.passed(tol, MIN_FRACTION)
            ok &= passed
            rec = {"descriptor": emit(build(d)), "check": name, "tolerance": tol,
                   "passed": passed}
            rec.update(rep.to_dict())
            stream.write(json.dumps(rec, default=_json) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def _json(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(type(o))


# -- bell ----------------------------------------------------------------------------

def cmd_bell(kind, orders, show_label, stream) -> int:
    o = bell.parse_orders(orders)
    if kind == "Y":
        p = bell.bell_generate(*o)
    elif kind in ("YY", "binary"):
        p = bell.bell_binary(bell.bell_generate(*o))
    elif kind == "P":
        p = bell.bell_p_polynomial(*o)
    else:
        raise UsageError(f"unknown polynomial kind {kind!r}")
    text = p.render()
    if show_label:
        text = f"{bell.label(kind, *o)} = {text}"
    stream.write(text + "\n")
    return EXIT_OK


# -- backlund ------------------------------------------------------------------------

def _field_from(spec, gens):
    kind = spec.get("kind")
    if kind == "vacuum":
        return B.vacuum_pair(gens)
    if kind == "soliton_pair":
        return B.soliton_pair(gens, spec["kappa"], spec.get("rho", 0.0), spec.get("sigma"))
    if kind == "expsum":
        def terms(lst):
            return [(c.get("c", 1.0), c.get("kappa", 0.0), c.get("rho", 0.0),
                     c.get("omega", 0.0), gens.generator(c["sigma"]) if c.get("sigma") else None)
                    for c in lst]
        return B.BilinearPair(B.expsum_field(gens, terms(spec["tau"])),
                              B.expsum_field(gens, terms(spec["mu"])), gens)
    raise DescriptorError(f"unknown pair kind {kind!r}")


def cmd_backlund(cfg: RunConfig, stream) -> int:
    spec = cfg.extra
    if "seed" not in spec:
        raise DescriptorError("backlund config needs a 'seed' pair")
    gens = GeneratorSet.superspace(*spec.get("odd", []))
    seed = _field_from(spec["seed"], gens)
    tol = cfg.tol or TOL_CLOSED
    if "search" in spec:
        s = spec["search"]
        ans, names = B.soliton_ansatz(gens, s["kappa"], s.get("rho", 0.0), s.get("sigma"))
        res = B.backlund_search(seed, ans, s.get("x0", [0.0, 0.0, 0.5, 0.1]), names,
                                rng_seed=cfg.seed, raise_on_fail=False)
        stream.write(json.dumps({"search": res.as_dict(),
                                 "system": res.system.to_dict()}, default=_json) + "\n")
        return EXIT_OK if res.converged and res.system.max_rel <= tol else EXIT_FAIL
    cand = _field_from(spec["candidate"], gens)
    gamma = None
    if spec.get("gamma"):
        gamma = gens.zero()
        for name, c in spec["gamma"].items():
            gamma = gamma + gens.generator(name) * c
    prm = B.BacklundParams(spec.get("alpha", 1.0), spec.get("beta", 0.0), gamma)
    pts = sample_points(cfg.points, seed=cfg.seed)
    rep = B.check_proposition(seed, cand, prm, pts)
    stream.write(json.dumps(rep.to_dict(), default=_json) + "\n")
    ok = rep.relations.max_rel <= tol and rep.candidate_system.max_rel <= tol
    return EXIT_OK if ok else EXIT_FAIL


# -- entry point ---------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="superblmp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file (descriptor, list, or options object)")
        p.add_argument("--family", choices=FAMILIES)
        p.add_argument("--params", help="JSON object of family parameters")
        p.add_argument("--q", help="q(y) as a name or JSON function descriptor")
        p.add_argument("--m", help="m(y) as a name or JSON function descriptor")
        p.add_argument("--tol", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output path (default stdout)")

    g = sub.add_parser("generate", help="CSV grid of u (or Phi components)")
    common(g)
    g.add_argument("--grid", help="x=a:b:n,y=a:b:n")
    g.add_argument("--fix", help="values of the other axes, e.g. t=2")
    v = sub.add_parser("verify", help="run residual suites, JSON lines out")
    common(v)
    v.add_argument("--suite", choices=sorted(SUITES))
    b = sub.add_parser("bell", help="print a Bell polynomial")
    b.add_argument("kind", choices=("Y", "YY", "binary", "P"))
    b.add_argument("orders", help="e.g. 3x, '3x,Dy', 0")
    b.add_argument("--label", action="store_true", help="prefix with the bracket label")
    k = sub.add_parser("backlund", help="check a Baecklund step or search from a seed")
    common(k)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "bell":
            return cmd_bell(args.kind, args.orders, args.label, sys.stdout)
        cfg = make_config(args)
        if args.command == "verify" and getattr(args, "suite", None):
            cfg.extra = {**cfg.extra, "suite": args.suite}
        out = open(cfg.out, "w", encoding="utf-8", newline="") if cfg.out else sys.stdout
        try:
            handler = {"generate": cmd_generate, "verify": cmd_verify,
                       "backlund": cmd_backlund}[args.command]
            return handler(cfg, out)
        finally:
            if cfg.out:
                out.close()
    except (DescriptorError, UsageError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BLMPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
