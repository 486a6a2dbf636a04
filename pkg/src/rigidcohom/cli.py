"""Batch front end: TOML task files in, deterministic JSON reports out.

Subcommands:
  run <task.toml> [--strict] [--backend rational|padic|both] [--out FILE]
  examples
  verify

Reports are deterministic: fixed orders, fixed lift choices, sorted
keys; the wall clock lives in a separate top-level "timing" section so
everything else is byte-identical across runs.  Budget overrides:
RIGIDCOHOM_MAX_PAIRS and RIGIDCOHOM_MAX_DEGREE.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

from .completions import (SubmoduleSpan, TruncationParams,
                          completion_noninjectivity_witness,
                          spectral_radius_estimate)
from .cyclic import HPReport
from .derham import ResiduePresentation, rigid_de_rham, infinitesimal_betti
from .homalg import holim_bookkeeping
from .polyalg import BudgetError, ParseError, PolyRing, algebra_over
from .scalars import INF, PrecisionError, ScalarContext
from .tubes import tube_identity_check
from . import verify as verify_mod

SCHEMA = "rigidcohom-report/1"
KINDS = ("rigid", "hp", "invariants", "infinitesimal", "tube-identity",
         "spectral-radius")


class TaskError(ValueError):
    pass


def _is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


class TaskSpec:
    """Validated task file contents."""

    def __init__(self, data, name="task"):
        self.name = name
        self.kind = data.get("kind")
        if self.kind not in KINDS:
            raise TaskError(f"unknown task kind {self.kind!r}")
        self.description = data.get("description", "")
        self.p = int(data.get("p", 5))
        if not _is_prime(self.p):
            raise TaskError(f"p = {self.p} is not prime")
        self.prec = int(data.get("precision", 12))
        self.d_list = [int(x) for x in data.get("degree_caps", [8, 12, 16])]
        if any(b <= a for a, b in zip(self.d_list, self.d_list[1:])) or not self.d_list:
            raise TaskError("degree_caps must be a nonempty strictly increasing list")
        self.m_max = int(data.get("m_max", 3))
        self.window = int(data.get("window", 3))
        self.backend = data.get("backend", "both")
        if self.backend not in ("rational", "padic", "both"):
            raise TaskError(f"unknown backend {self.backend!r}")
        self.lift_order = data.get("lift_order", "grevlex")
        budgets = data.get("budgets", {})
        self.max_pairs = int(os.environ.get(
            "RIGIDCOHOM_MAX_PAIRS", budgets.get("max_pairs", 10_000)))
        self.max_degree = int(os.environ.get(
            "RIGIDCOHOM_MAX_DEGREE", budgets.get("max_degree", 24)))
        algebra = data.get("algebra", {})
        self.variables = list(algebra.get("variables", []))
        self.relations = list(algebra.get("relations", []))
        self.j_generators = list(data.get("j_generators", []))
        self.order = int(data.get("order", 6))
        self.m_list = [int(x) for x in data.get("m_list", [2, 3])]
        self.spans = data.get("spans", [["x"]])
        self.depth = int(data.get("depth", 24))
        self.checks = list(data.get("checks", []))
        self._validate_polynomials()

    def _validate_polynomials(self):
        ring = PolyRing(tuple(self.variables),
                        ScalarContext(self.p, "rational", self.prec))
        for text in self.relations:
            ring.parse(text)

    def params(self):
        return TruncationParams(p=self.p, prec=self.prec,
                                degree_cap=max(self.d_list),
                                level_cap=self.m_max,
                                stab_window=self.window,
                                max_pairs=self.max_pairs,
                                max_degree=self.max_degree)

    def presentation(self):
        return ResiduePresentation(self.p, self.variables, self.relations,
                                   prec=self.prec)

    def echo(self):
        out = {
            "name": self.name, "kind": self.kind, "p": self.p,
            "precision": self.prec, "degree_caps": self.d_list,
            "m_max": self.m_max, "window": self.window,
            "backend": self.backend, "lift_order": self.lift_order,
            "algebra": {"variables": self.variables, "relations": self.relations},
        }
        if self.kind == "infinitesimal":
            out["j_generators"] = self.j_generators
            out["order"] = self.order
        if self.kind == "tube-identity":
            out["j_generators"] = self.j_generators
            out["m_list"] = self.m_list
        if self.kind == "spectral-radius":
            out["spans"] = self.spans
            out["depth"] = self.depth
        if self.kind == "invariants":
            out["checks"] = self.checks or sorted(verify_mod.CHECKS)
        return out


def load_task(path):
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    name = os.path.splitext(os.path.basename(path))[0]
    return TaskSpec(data, name=name)


def _exp_str(e):
    if e is INF:
        return "+inf"
    f = Fraction(e)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def _padic_agreement(builder, spec):
    from .homalg import rank_kernel_image
    ctx = ScalarContext(spec.p, "padic", spec.prec)
    table = {}
    all_ok = True
    for cap in spec.d_list:
        for m in range(1, spec.m_max + 1):
            total, windows = builder.holim_with_windows(m, cap)
            entry = {"certified": True, "agree": True}
            try:
                pad = total.map_scalars(ctx)
                dims_p = pad.homology_dims_window(windows)
                dims_q = total.homology_dims_window(windows)
                entry["agree"] = dims_p == dims_q
                pivots = []
                for n in pad.degrees():
                    if pad.dim(n) and pad.dim(n - 1):
                        res = rank_kernel_image(pad.boundary(n),
                                                want_kernel=False)
                        pivots.extend(res.pivot_vals)
                entry["min_pivot_valuation"] = min(pivots) if pivots else None
                entry["max_pivot_valuation"] = max(pivots) if pivots else None
            except PrecisionError as err:
                entry = {"certified": False, "agree": None, "error": str(err)}
            table[f"D={cap},m={m}"] = entry
            if entry["certified"] and not entry["agree"]:
                all_ok = False
    return {"cells": table, "all_certified_agree": all_ok}


def _run_rigid(spec):
    params = spec.params()
    presentation = spec.presentation()
    betti, builder = rigid_de_rham(presentation, params, d_list=spec.d_list,
                                   lift_order=spec.lift_order)
    hp = HPReport(betti)
    results = {"betti": betti.to_json_dict(), "hp": hp.to_json_dict()}
    checks = {}
    top_cap = max(spec.d_list)
    pro = builder.pro_complex(spec.m_max, top_cap)
    book = holim_bookkeeping(pro, [-l for l in builder.report_degrees()])
    checks["holim_bookkeeping"] = {
        str(-n): {"holim": e["holim"], "lim": e["lim"],
                  "lim1_next": e["lim1_next"], "ok": e["ok"]}
        for n, e in sorted(book.items())}
    checks["holim_bookkeeping_ok"] = all(e["ok"] for e in book.values())
    checks["d_squared_zero"] = all(
        builder.level_complex(m, top_cap).complex.check_dd_zero()
        for m in range(1, spec.m_max + 1))
    checks["transitions_chain_maps"] = all(
        builder.transition_map(m, top_cap).is_chain_map()
        for m in range(1, spec.m_max))
    if spec.backend in ("padic", "both"):
        results["backend_agreement"] = _padic_agreement(builder, spec)
        checks["backend_agreement_ok"] = results["backend_agreement"]["all_certified_agree"]
    ok = all(v for k, v in checks.items() if k.endswith("_ok") or isinstance(v, bool))
    unresolved = betti.unresolved_degrees()
    return results, checks, ok, unresolved


def _run_invariants(spec):
    names = spec.checks or None
    overrides = {"noninjective-completion": {"m_max": 6, "n_max": 12}}
    records = verify_mod.run_checks(names, p=spec.p, **overrides)
    ok = all(r["ok"] for r in records)
    return {"invariants": records}, {}, ok, []


def _run_infinitesimal(spec):
    params = spec.params()
    dims = infinitesimal_betti(spec.p, spec.variables, spec.j_generators,
                               spec.order, params)
    results = {"infinitesimal": {
        "order": spec.order,
        "dims": {str(k): v for k, v in sorted(dims.items())},
    }}
    return results, {}, True, []


def _run_tube_identity(spec):
    params = spec.params()
    ring = PolyRing(tuple(spec.variables),
                    ScalarContext(spec.p, "rational", spec.prec))
    gens = [ring.parse(t) for t in spec.j_generators] + [ring.const(spec.p)]
    reports = {}
    ok = True
    for m in spec.m_list:
        rep = tube_identity_check(gens, m, params)
        reports[f"m={m}"] = rep
        ok = ok and rep["ok"]
    return {"tube_identity": reports}, {}, ok, []


def _run_spectral(spec):
    params = TruncationParams(p=spec.p, prec=spec.prec,
                              degree_cap=max(spec.d_list),
                              depth=spec.depth, level_cap=spec.m_max,
                              stab_window=spec.window)
    A = algebra_over(spec.p, spec.variables or ["x"])
    entries = []
    ok = True
    for texts in spec.spans:
        span = SubmoduleSpan([A.ring.parse(t) for t in texts])
        base = spectral_radius_estimate(span, A, params).exponent
        laws = {}
        for j in (0, 1, 2):
            for c in (1, 2, 3):
                scaled = SubmoduleSpan(span.scaled_powers(j, c))
                got = spectral_radius_estimate(scaled, A, params).exponent
                want = INF if base is INF else j + c * base
                laws[f"j={j},c={c}"] = {"exponent": _exp_str(got),
                                        "law_ok": got == want}
                ok = ok and got == want
        entries.append({"span": list(texts), "exponent": _exp_str(base),
                        "depth": params.depth, "laws": laws})
    return {"spectral_radius": entries}, {}, ok, []


RUNNERS = {
    "rigid": _run_rigid,
    "hp": _run_rigid,
    "invariants": _run_invariants,
    "infinitesimal": _run_infinitesimal,
    "tube-identity": _run_tube_identity,
    "spectral-radius": _run_spectral,
}


def run_task(spec, strict=False):
    """Execute a task; returns (report dict, exit code)."""
    t0 = time.monotonic()
    try:
        results, checks, ok, unresolved = RUNNERS[spec.kind](spec)
        status = "ok" if ok else "invariant-failure"
        code = 0 if ok else 1
        if strict and unresolved:
            status = "unresolved-degrees"
            code = 1
    except BudgetError as err:
        results = {"error": {"type": "budget", "stage": err.stage,
                             "message": str(err)}}
        checks, status, code, unresolved = {}, "budget-exceeded", 3, []
    report = {
        "schema": SCHEMA,
        "task": spec.echo(),
        "status": status,
        "results": results,
        "checks": checks,
        "unresolved": [str(d) for d in unresolved],
        "timing": {"wallclock_ms": int((time.monotonic() - t0) * 1000)},
    }
    return report, code


def report_to_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def tasks_dir():
    return os.path.join(os.path.dirname(__file__), "tasks")


def list_examples():
    out = []
    for fn in sorted(os.listdir(tasks_dir())):
        if not fn.endswith(".toml"):
            continue
        path = os.path.join(tasks_dir(), fn)
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        out.append({"name": os.path.splitext(fn)[0],
                    "kind": data.get("kind", "?"),
                    "description": data.get("description", "")})
    return out


def example_path(name):
    return os.path.join(tasks_dir(), f"{name}.toml")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="rigidcohom",
        description="desk-scale rigid cohomology through tube algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a task file")
    p_run.add_argument("task", help="path to a .toml task (or a bundled name)")
    p_run.add_argument("--strict", action="store_true",
                       help="nonzero exit when any degree is unresolved")
    p_run.add_argument("--backend", choices=["rational", "padic", "both"])
    p_run.add_argument("--out", help="write the JSON report here")

    sub.add_parser("examples", help="list bundled tasks")
    sub.add_parser("verify", help="run the full invariant suite")

    args = parser.parse_args(argv)

    if args.command == "examples":
        for item in list_examples():
            print(f"{item['name']:<26} {item['kind']:<15} {item['description']}")
        return 0

    if args.command == "verify":
        records = verify_mod.run_checks()
        for r in records:
            print(f"{'PASS' if r['ok'] else 'FAIL'}  {r['name']}: {r['detail']}")
        return 0 if all(r["ok"] for r in records) else 1

    path = args.task
    if not os.path.exists(path):
        bundled = example_path(args.task)
        if os.path.exists(bundled):
            path = bundled
    try:
        spec = load_task(path)
        if args.backend:
            spec.backend = args.backend
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 2
    except (TaskError, OSError, tomllib.TOMLDecodeError) as err:
        print(f"task error: {err}", file=sys.stderr)
        return 2

    report, code = run_task(spec, strict=args.strict)
    payload = report_to_json(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
