"""Command-line interface: build lattices, enumerate, search, analyze, verify.

Exit codes: 0 success, 2 argument/parse error, 3 invariant violation,
4 search budget exceeded.  Output is deterministic: JSON keys are sorted,
list orders are fixed by the owning modules, and every float is rounded to
12 significant digits before emission.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from .linalg import LinalgError, RationalMatrix
from .lattices import (
    CATALOG_NAMES,
    Lattice,
    LatticeError,
    LinearCode,
    catalog,
    construction_a,
    construction_b,
    is_even,
    is_unimodular,
)
from .shortvec import EnumerationError, enumerate_short_vectors, kissing_number, minimum
from .autgrp import (
    AutGroupError,
    OrthogonalGate,
    SearchBudget,
    SearchBudgetExceeded,
    automorphism_group,
    group_order_check,
    integral_action,
)
from .entangle import EntangleError, MultipartiteState, TangleReport, analyze_state, reshape, state_from_row
from . import fixtures

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVARIANT = 3
EXIT_BUDGET = 4

log = logging.getLogger("latgate")


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(args, payload: dict, csv_rows=None) -> None:
    if args.format == "json":
        text = json.dumps(_round_floats(payload), sort_keys=True, indent=2) + "\n"
    elif args.format == "csv":
        if csv_rows is None:
            raise SystemExit("csv output is not defined for this command")
        text = "\n".join(",".join(str(c) for c in row) for row in csv_rows) + "\n"
    else:
        text = _as_text(payload) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _as_text(payload, indent: str = "") -> str:
    lines = []
    for key in sorted(payload) if isinstance(payload, dict) else []:
        val = payload[key]
        if isinstance(val, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_as_text(val, indent + "  "))
        elif isinstance(val, list):
            lines.append(f"{indent}{key}: " + json.dumps(_round_floats(val)))
        else:
            lines.append(f"{indent}{key}: {val}")
    return "\n".join(lines)


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _resolve_lattice(args) -> Lattice:
    if getattr(args, "basis_file", None):
        return Lattice.from_json(_load_json(args.basis_file))
    if getattr(args, "code_file", None):
        code = LinearCode.from_json(_load_json(args.code_file))
        if args.construction == "b":
            return construction_b(code)
        return construction_a(code)
    name = getattr(args, "lattice", None)
    if not name:
        raise LatticeError("no lattice given: use --lattice, --basis-file or --code-file")
    return catalog(name, getattr(args, "n", None))


def _frac(text: str) -> Fraction:
    return Fraction(text)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_info(args) -> int:
    lat = _resolve_lattice(args)
    mn = minimum(lat, args.threads)
    payload = {
        "name": lat.name,
        "dimension": lat.dimension,
        "determinant": str(lat.determinant()),
        "even": is_even(lat),
        "unimodular": is_unimodular(lat),
        "min": str(mn),
        "kissing": kissing_number(lat, args.threads),
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_enum(args) -> int:
    lat = _resolve_lattice(args)
    sv = enumerate_short_vectors(lat, _frac(args.bound), args.threads)
    payload = {
        "bound": str(sv.bound),
        "count": sv.count,
        "by_norm": {str(q): c for q, c in sv.counts_by_norm().items()},
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_aut(args) -> int:
    lat = _resolve_lattice(args)
    budget = SearchBudget(max_nodes=args.budget_nodes, max_seconds=args.budget_secs)
    try:
        result = automorphism_group(lat, budget)
    except SearchBudgetExceeded as exc:
        payload = {
            "order_unverified": True,
            "error": str(exc),
            "partial_generators": len(exc.partial_generators),
        }
        _emit(args, payload)
        return EXIT_BUDGET
    payload = {
        "order": str(result.order),
        "orbit_sizes": list(result.stabilizer_chain_orbit_sizes),
        "generators": len(result.generators),
    }
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(result.to_json(lat), fh, sort_keys=True, indent=2)
        payload["emitted"] = args.emit
    _emit(args, payload)
    return EXIT_OK


_MEASURE_FIELDS = {
    "tangle3": ("tau3", "factor"),
    "tangle2": ("tau_ab", "tau_ac", "tau_bc"),
    "schmidt": ("schmidt_ranks",),
    "ppt": ("ppt_spectra",),
}


def _report_payload(rep: TangleReport, measures) -> dict:
    wanted = set()
    for m in measures:
        wanted.update(_MEASURE_FIELDS[m])
    out = {"row": rep.row}
    for field in ("tau3", "tau_ab", "tau_ac", "tau_bc"):
        out[field] = getattr(rep, field) if field in wanted else None
    out["schmidt"] = rep.schmidt_ranks if "schmidt_ranks" in wanted else None
    if "ppt_spectra" in wanted and rep.ppt_spectra is not None:
        out["ppt"] = {
            label: {"eigenvalues": list(ev), "entangled": flag}
            for label, (ev, flag) in rep.ppt_spectra.items()
        }
    else:
        out["ppt"] = None
    if "factor" in wanted and rep.factor is not None:
        out["factor"] = list(rep.factor)
    return out


def _csv_from_reports(reports: list[dict]) -> list[list]:
    header = ["row", "tau3", "tau_ab", "tau_ac", "tau_bc", "schmidt", "ppt_entangled"]
    rows = [header]
    for rep in reports:
        schmidt = rep.get("schmidt")
        ppt = rep.get("ppt")
        rows.append([
            rep["row"],
            *(("" if rep.get(f) is None else f"{rep[f]:.12g}") for f in ("tau3", "tau_ab", "tau_ac", "tau_bc")),
            "" if not schmidt else ";".join(f"{k}={v}" for k, v in sorted(schmidt.items())),
            "" if not ppt else ";".join(f"{k}={int(v['entangled'])}" for k, v in sorted(ppt.items())),
        ])
    return rows


def cmd_analyze(args) -> int:
    measures = [m.strip() for m in args.measures.split(",")] if args.measures else list(_MEASURE_FIELDS)
    for m in measures:
        if m not in _MEASURE_FIELDS:
            raise EntangleError(f"unknown measure {m!r} (known: {', '.join(_MEASURE_FIELDS)})")
    shape = tuple(int(x) for x in args.shape.split(",")) if args.shape else None
    states: list[MultipartiteState] = []
    if args.fixture:
        if args.fixture in fixtures.STATE_FIXTURES:
            state = fixtures.fixture_state(args.fixture)
            if shape and tuple(shape) != state.shape.dims:
                state = reshape(state, shape)
            states = [state]
        elif args.fixture == "e8b-g1-rows":
            mat = fixtures.e8_hamming_g1_rows()
            states = [MultipartiteState(mat.row(r), shape or (2, 2, 2)) for r in range(mat.rows)]
        elif args.fixture in fixtures.GATE_FIXTURES:
            gates, _ = fixtures.gate_fixture(args.fixture)
            if shape is None:
                raise EntangleError("--shape is required for gate fixtures")
            gate = gates[args.gate_index]
            states = [state_from_row(gate, r, shape) for r in range(gate.dimension)]
        else:
            raise EntangleError(f"unknown fixture {args.fixture!r}")
    elif args.gates_file:
        if shape is None:
            raise EntangleError("--shape is required with --gates-file")
        obj = _load_json(args.gates_file)
        mats = obj.get("generators_natural")
        if not mats:
            raise EntangleError("gates file has no generators_natural")
        gate = OrthogonalGate(RationalMatrix.from_json(mats[args.gate_index]))
        states = [state_from_row(gate, r, shape) for r in range(gate.dimension)]
    else:
        raise EntangleError("nothing to analyze: use --fixture or --gates-file")
    reports = [_report_payload(analyze_state(st, row=i, tol=args.tol), measures) for i, st in enumerate(states)]
    payload = {
        "source": args.fixture or args.gates_file,
        "shape": list(states[0].shape.dims),
        "rows": reports,
    }
    _emit(args, payload, csv_rows=_csv_from_reports([_round_floats(r) for r in reports]))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.fixture:
        gates, lat = fixtures.gate_fixture(args.fixture)
        if args.lattice or args.basis_file or args.code_file:
            lat = _resolve_lattice(args)
        reports = []
        gens = []
        ok = True
        for i, gate in enumerate(gates):
            gens.append(integral_action(lat, gate))
            reports.append({"index": i, "automorphism": True, "detail": "ok"})
    else:
        lat = _resolve_lattice(args)
        obj = _load_json(args.gates_file)
        reports = []
        gens = []
        ok = True
        for i, item in enumerate(obj.get("generators_natural") or []):
            verdict, detail, gen = _check_natural(lat, item)
            reports.append({"index": i, "automorphism": verdict, "detail": detail})
            ok &= verdict
            if gen is not None:
                gens.append(gen)
        if not obj.get("generators_natural"):
            for i, item in enumerate(obj.get("generators_integral") or []):
                verdict, detail, gen = _check_integral(lat, item)
                reports.append({"index": i, "automorphism": verdict, "detail": detail})
                ok &= verdict
                if gen is not None:
                    gens.append(gen)
        if not reports:
            raise AutGroupError("no generators found in input")
        if not ok:
            _emit(args, {"generators": reports, "order_check": False, "claimed_order": args.claimed_order})
            return EXIT_INVARIANT
    claimed = int(args.claimed_order)
    passed = group_order_check(lat, gens, claimed, method=args.method, threads=args.threads)
    _emit(args, {
        "generators": reports,
        "claimed_order": str(claimed),
        "order_check": bool(passed),
        "method": args.method,
    })
    return EXIT_OK if passed else EXIT_INVARIANT


def _check_natural(lat, item):
    from .linalg import RationalMatrix

    mat = RationalMatrix.from_json(item)
    for i in range(mat.rows):
        if sum(x * x for x in mat.row(i)) != 1:
            return False, "row norms", None
    if not (mat @ mat.transpose()).is_identity():
        return False, "orthogonality", None
    u = lat.basis @ mat @ lat.basis.inverse()
    if not u.is_integral():
        return False, "integrality of M B M^-1", None
    ui = u.to_int_matrix()
    ur = ui.to_rational()
    if (ur @ lat.gram @ ur.transpose()) != lat.gram:
        return False, "Gram not preserved", None
    if abs(ui.determinant()) != 1:
        return False, "determinant", None
    return True, "ok", integral_action(lat, OrthogonalGate(mat))


def _check_integral(lat, item):
    from .linalg import IntMatrix
    from .autgrp import IntegralAutomorphism

    ui = IntMatrix.from_json(item)
    ur = ui.to_rational()
    if (ur @ lat.gram @ ur.transpose()) != lat.gram:
        return False, "Gram not preserved", None
    if abs(ui.determinant()) != 1:
        return False, "unimodularity", None
    return True, "ok", IntegralAutomorphism(lat, ui)


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _add_lattice_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lattice", choices=CATALOG_NAMES, help="catalog lattice name")
    p.add_argument("--n", type=int, help="dimension for --lattice zn")
    p.add_argument("--basis-file", help="lattice JSON file")
    p.add_argument("--code-file", help="linear code JSON file")
    p.add_argument("--construction", choices=("a", "b"), default="a")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="write the report to a file instead of stdout")
    p.add_argument("--threads", type=int, default=None,
                   help="worker count for enumeration (default: available cores)")
    p.add_argument("--tol", type=float, default=1e-10)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latgate",
                                 description="exact lattice gates and their entanglement")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="dimension, determinant, parity, minimum, kissing number")
    _add_lattice_args(p)
    _add_common(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("enum", help="count short vectors up to a norm bound")
    _add_lattice_args(p)
    _add_common(p)
    p.add_argument("--bound", required=True, help="normalized norm bound, e.g. 4 or 9/2")
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("aut", help="automorphism group generators and exact order")
    _add_lattice_args(p)
    _add_common(p)
    p.add_argument("--emit", help="write generators JSON to this path")
    p.add_argument("--budget-nodes", type=int, default=50_000_000)
    p.add_argument("--budget-secs", type=float, default=3600.0)
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("analyze", help="per-row entanglement reports")
    _add_common(p)
    p.add_argument("--fixture", help="builtin fixture name (states eq6..eq15, gates eq3/d4/e8a/e8b)")
    p.add_argument("--gates-file", help="generators JSON to analyze")
    p.add_argument("--gate-index", type=int, default=0)
    p.add_argument("--shape", help="factor dimensions, e.g. 2,2,2 or 3,2,2")
    p.add_argument("--measures", help="comma list from: tangle2,tangle3,schmidt,ppt")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="check generators and a claimed group order")
    _add_lattice_args(p)
    _add_common(p)
    p.add_argument("--gates-file", help="generators JSON to verify")
    p.add_argument("--fixture", help="builtin gate fixture to verify")
    p.add_argument("--claimed-order", required=True)
    p.add_argument("--method", choices=("deterministic", "orbit-target"), default="deterministic")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("LATGATE_LOG", "WARNING").upper())
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except SearchBudgetExceeded as exc:
        log.error("budget exceeded: %s", exc)
        return EXIT_BUDGET
    except (LinalgError, LatticeError, EnumerationError, AutGroupError, EntangleError, KeyError) as exc:
        log.error("%s", exc)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVARIANT
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
