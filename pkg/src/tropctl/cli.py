"""Command line front end: parse inputs, dispatch computations, emit reports.

Reports are deterministic: machine mode serializes one JSON object (or a JSON
array for batch runs) with sorted keys, so identical inputs produce
byte-identical output.  Exit codes: 0 success, 2 input validation error,
3 computation precondition failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import glob as globmod
import hashlib
import json
import os
import random
import sys

from .curves import contract_image, degree, expected_dim, is_immersive, parse_curve
from .errors import TropctlError, ValidationError
from .laurent import parse_laurent_doc
from .linalg import parse_rational, rational_str
from .obstruction import (
    abundancy_map,
    classify_report,
    dual_obstruction_chain,
    parameter_dimension,
    reduced_abundancy_map,
)
from .residues import (
    LocalModel,
    a_system,
    degeneration_compare,
    genus1_loop_criterion,
    model_from_doc,
    vertex_phylo,
    xi_map,
)

SCHEMA = "tropctl-report/1"
EX_USAGE = 64
DIM_KEYS = (
    "dimH",
    "d",
    "d0",
    "paramDim",
    "expectedDim",
    "guaranteedDimH",
    "spanDim",
    "genus",
    "e",
    "ambientDim",
    "rank",
    "targetDim",
    "reducedRank",
    "reducedTargetDim",
)


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="tropctl", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("text", "json"),
        default="text",
        help="report format (json is byte-stable across runs)",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    def curve_cmd(name, help_text, many=False):
        p = command(name, help_text)
        if many:
            p.add_argument("files", nargs="+", help="curve files (or glob patterns with --glob)")
            p.add_argument("--glob", action="store_true", help="expand the arguments as glob patterns")
        else:
            p.add_argument("file", help="curve file")
        return p

    curve_cmd("validate", "check a curve file against the data model", many=True)
    curve_cmd("info", "genus, degree, ends, and expected dimension", many=True)

    p = curve_cmd("obstruction", "dual obstruction space dimension and basis")
    p.add_argument("--method", choices=("chain", "xi"), default="chain")
    p.add_argument("--config", help="marked-coordinate file for higher-valent vertices")

    curve_cmd("classify", "superabundancy verdict under both definitions")
    curve_cmd("abundancy", "abundancy map rank and surjectivity, full and reduced")

    p = curve_cmd("phylo", "per-vertex resolution trees from Laurent order data")
    p.add_argument("--laurent", required=True, help="Laurent series file")

    p = command("local-model", "residue system of a standalone local vertex model")
    p.add_argument("--model", required=True, help="local model file")

    curve_cmd("genus1-check", "loop-direction span criterion for genus-1 curves")

    p = curve_cmd("compare", "degenerate vs resolved obstruction dimensions")
    p.add_argument("--laurent", required=True, help="Laurent series file")
    p.add_argument("--t0", default=None, help="evaluation point, a rational in (0,1)")

    p = command("selftest", "seeded randomized invariant battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=25)
    return parser


# -- input plumbing ----------------------------------------------------------


def _max_dim() -> int:
    raw = os.environ.get("TROPCTL_MAX_DIM", "16")
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError("bad-env", f"TROPCTL_MAX_DIM must be an integer, got {raw!r}")
    if cap < 1:
        raise ValidationError("bad-env", "TROPCTL_MAX_DIM must be positive")
    return cap


def _read_doc(path: str):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as err:
        raise ValidationError("unreadable-input", f"cannot read {path}: {err.strerror}", path=path)
    digest = hashlib.sha256(data).hexdigest()
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as err:
        raise ValidationError("bad-json", f"{path} is not valid JSON: {err}", path=path)
    return doc, {"path": path, "sha256": digest}


def _load_curve(path: str):
    doc, stamp = _read_doc(path)
    return parse_curve(doc, max_dim=_max_dim()), stamp


def _expand_files(args) -> list:
    if not getattr(args, "glob", False):
        return list(args.files)
    out = []
    for pattern in args.files:
        matches = sorted(globmod.glob(pattern, recursive=True))
        out.extend(matches)
    if not out:
        raise ValidationError("no-input", "glob patterns matched no files")
    return out


def _parse_config(path: str):
    doc, stamp = _read_doc(path)
    if not isinstance(doc, dict) or not isinstance(doc.get("vertices"), dict):
        raise ValidationError("bad-config", "config file must be {\"vertices\": {...}}", path=path)
    coords = {}
    for vid, entry in doc["vertices"].items():
        if not isinstance(entry, dict) or not isinstance(entry.get("coords"), list):
            raise ValidationError("bad-config", f"vertex {vid}: expected a coords list", vertex=vid)
        coords[vid] = tuple(parse_rational(c) for c in entry["coords"])
    return coords, stamp


# -- report helpers ----------------------------------------------------------


def _flag_key(flag) -> list:
    return [flag.vertex, flag.edge, flag.slot]


def _covector(vec) -> list:
    return [rational_str(x) for x in vec]


def _basis_payload(flag_order, basis) -> list:
    out = []
    for assignment in basis:
        out.append([_covector(assignment[f]) for f in flag_order])
    return out


def _report(command, stamps, fields, warnings=None) -> dict:
    rep = {
        "schema": SCHEMA,
        "command": command,
        "inputs": stamps,
        "warnings": sorted(warnings or []),
    }
    rep.update(fields)
    return rep


def _error_report(command, stamps, err: TropctlError) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "inputs": stamps,
        "error": err.payload(),
    }


# -- command handlers --------------------------------------------------------


def _curve_summary(curve) -> dict:
    g = curve.graph
    return {
        "genus": g.genus(),
        "e": len(g.unbounded_edge_ids()),
        "ambientDim": curve.n,
        "vertices": len(g.vertex_ids),
        "edges": len(g.edge_ids),
        "boundedEdges": len(g.bounded_edge_ids()),
        "immersive": is_immersive(curve),
        "trivalent": g.is_trivalent(),
    }


def _cmd_validate(args):
    reports = []
    code = 0
    for path in _expand_files(args):
        try:
            curve, stamp = _load_curve(path)
        except TropctlError as err:
            reports.append(_error_report("validate", [{"path": path}], err))
            code = code or err.exit_code
            continue
        fields = {"valid": True}
        fields.update(_curve_summary(curve))
        reports.append(_report("validate", [stamp], fields))
    return reports, code


def _cmd_info(args):
    reports = []
    code = 0
    for path in _expand_files(args):
        try:
            curve, stamp = _load_curve(path)
        except TropctlError as err:
            reports.append(_error_report("info", [{"path": path}], err))
            code = code or err.exit_code
            continue
        fields = _curve_summary(curve)
        fields["expectedDim"] = expected_dim(curve)
        fields["degree"] = [
            {"vector": list(v), "multiplicity": m} for v, m in degree(curve)
        ]
        reports.append(_report("info", [stamp], fields))
    return reports, code


def _cmd_obstruction(args):
    curve, stamp = _load_curve(args.file)
    stamps = [stamp]
    warnings = []
    if args.method == "chain":
        res = dual_obstruction_chain(curve)
        fields = {
            "method": "chain",
            "dimH": res["dim"],
            "paramDim": parameter_dimension(curve),
        }
    else:
        coords = {}
        if args.config:
            coords, cfg_stamp = _parse_config(args.config)
            stamps.append(cfg_stamp)
        image = contract_image(curve)
        res = xi_map(image.curve, coords)
        fields = {"method": "xi", "dimH": res["dim"]}
        if image.curve.graph.is_trivalent():
            fields["paramDim"] = expected_dim(image.curve) + res["dim"]
        else:
            warnings.append(
                "paramDim omitted: the dimension formula is stated for 3-valent types"
            )
    fields["flags"] = [_flag_key(f) for f in res["flag_order"]]
    fields["basis"] = _basis_payload(res["flag_order"], res["basis"])
    fields["superabundant"] = res["dim"] > 0
    return [_report("obstruction", stamps, fields, warnings)], 0


def _cmd_classify(args):
    curve, stamp = _load_curve(args.file)
    rep = classify_report(curve)
    warnings = []
    fields = {
        "dimH": rep["dim_obstruction_dual"],
        "expectedDim": rep["expected_dim"],
        "paramDim": rep["parameter_dim"],
        "superabundantDef1": rep["superabundant_def1"],
        "abundancyRank": rep["abundancy_rank"],
        "abundancyTargetDim": rep["abundancy_target_dim"],
        "superabundantDef2": rep["superabundant_def2"],
    }
    if rep["superabundant_def2"] is None:
        fields["agree"] = None
        warnings.append(f"abundancy map unavailable: {rep['abundancy_note']}")
    else:
        fields["agree"] = rep["superabundant_def1"] == rep["superabundant_def2"]
    fields["verdict"] = "superabundant" if rep["superabundant_def1"] else "non-superabundant"
    return [_report("classify", [stamp], fields, warnings)], 0


def _cmd_abundancy(args):
    curve, stamp = _load_curve(args.file)
    image = contract_image(curve)
    c = image.curve
    n = c.n
    g = c.graph.genus()
    matrix, rank, surjective = abundancy_map(c)
    red_matrix, red_rank, cut_edges = reduced_abundancy_map(c)
    red_target = (n - 1) * g
    fields = {
        "genus": g,
        "rank": rank,
        "targetDim": n * g,
        "surjective": surjective,
        "reducedRank": red_rank,
        "reducedTargetDim": red_target,
        "reducedSurjective": red_rank == red_target,
        "cutEdges": list(cut_edges),
        "agree": surjective == (red_rank == red_target),
        "verdict": "abundant" if surjective else "superabundant",
    }
    return [_report("abundancy", [stamp], fields)], 0


def _serialize_phylo(tree):
    from .laurent import PhyloLeaf

    if isinstance(tree, PhyloLeaf):
        return {"leaf": tree.label}
    return {
        "depth": tree.depth,
        "children": [_serialize_phylo(tree.first), _serialize_phylo(tree.second)],
    }


def _cluster_payload(tree) -> list:
    from .laurent import clusters

    fam = clusters(tree)
    return sorted(sorted(c) for c in fam)


def _cmd_phylo(args):
    curve, stamp = _load_curve(args.file)
    doc, laurent_stamp = _read_doc(args.laurent)
    series_map = parse_laurent_doc(doc)
    image = contract_image(curve)
    ct = image.curve.combinatorial_type()
    warnings = []
    for vid in sorted(v for v in ct.graph.vertex_ids if ct.graph.valence(v) > 3):
        if vid not in series_map:
            warnings.append(f"higher-valent vertex {vid} has no Laurent data")
    vertices = {}
    for vid in sorted(series_map):
        if vid not in ct.graph.vertex_ids:
            raise ValidationError("unknown-vertex", f"Laurent data names unknown vertex {vid}", vertex=vid)
        model = LocalModel.from_star(ct, vid)
        tree = vertex_phylo(model, series_map[vid])
        vertices[vid] = {
            "leaves": [rec.label for rec in model.finite],
            "tree": _serialize_phylo(tree),
            "clusters": _cluster_payload(tree),
        }
    fields = {"vertices": vertices}
    return [_report("phylo", [stamp, laurent_stamp], fields, warnings)], 0


def _cmd_local_model(args):
    doc, stamp = _read_doc(args.model)
    model = model_from_doc(doc)
    res = a_system(model)
    fields = {
        "dimH": res["dim"],
        "r": model.r,
        "ambientDim": model.n,
        "boundedCount": sum(1 for rec in model.slots if rec.bounded),
        "infinitySlot": model.infinity.label,
        "coords": [rational_str(c) for c in model.coords],
        "variables": list(res["variables"]),
        "basis": [
            [_covector(assignment[label]) for label in res["variables"]]
            for assignment in res["basis"]
        ],
    }
    return [_report("local-model", [stamp], fields)], 0


def _cmd_genus1_check(args):
    curve, stamp = _load_curve(args.file)
    res = genus1_loop_criterion(curve)
    fields = {
        "spans": res["smoothable"],
        "guaranteedDimH": res["dim_h"],
        "spanDim": res["span_dim"],
        "ambientDim": curve.n,
        "loopVertices": list(res["loop_vertices"]),
        "annihilatorBasis": [list(v) for v in res["h_basis"]],
        "verdict": "smoothable" if res["smoothable"] else "undetermined",
    }
    return [_report("genus1-check", [stamp], fields)], 0


def _cmd_compare(args):
    curve, stamp = _load_curve(args.file)
    doc, laurent_stamp = _read_doc(args.laurent)
    series_map = parse_laurent_doc(doc)
    t0 = None
    if args.t0 is not None:
        t0 = parse_rational(args.t0)
    res = degeneration_compare(curve, series_map, t0=t0)
    fields = {
        "d": res["d"],
        "d0": res["d0"],
        "semicontinuous": res["semicontinuous"],
        "stabilized": res["stabilized"],
        "tUsed": rational_str(res["t_used"]),
        "dimsSeen": list(res["dims_seen"]),
        "clusters": {
            vid: [list(c) for c in fam] for vid, fam in res["clusters"].items()
        },
        "verdict": "semicontinuous" if res["semicontinuous"] else "violation",
    }
    return [_report("compare", [stamp, laurent_stamp], fields)], 0


def _cmd_selftest(args):
    from . import randgen
    from .obstruction import compatible_numbering_space

    rng = random.Random(args.seed)
    cases = max(1, args.cases)
    failures = []
    checks = {"numbering": 0, "methods": 0, "abundancy": 0, "localModel": 0}

    for i in range(cases):
        genus = rng.randint(0, 3)
        graph = randgen.random_trivalent_graph(rng, genus)
        checks["numbering"] += 1
        if compatible_numbering_space(graph)["dim"] != genus:
            failures.append(f"numbering case {i}: dim != genus {genus}")

    for i in range(cases):
        curve = randgen.random_immersive_curve(rng, 3)
        chain = dual_obstruction_chain(curve)
        xi = xi_map(curve)
        checks["methods"] += 1
        if chain["dim"] != xi["dim"]:
            failures.append(f"methods case {i}: chain dim {chain['dim']} != xi dim {xi['dim']}")
        n = curve.n
        g = curve.graph.genus()
        _m, red_rank, _cut = reduced_abundancy_map(curve)
        checks["abundancy"] += 1
        if chain["dim"] != (n - 1) * g - red_rank:
            failures.append(f"abundancy case {i}: identity violated")

    from .randgen import random_marked_coords
    from .residues import standard_local_model

    for i in range(cases):
        r = rng.randint(1, 3)
        n = r + 1 + rng.randint(0, 2)
        s = rng.randint(2, r + 2)
        bounded = [True] * s + [False] * (r + 2 - s)
        rng.shuffle(bounded)
        coords = random_marked_coords(rng, r + 1)
        model = standard_local_model(r, n, coords, bounded=bounded)
        expected = r * (s - 2) + (n - r - 1) * (s - 1)
        checks["localModel"] += 1
        if a_system(model)["dim"] != expected:
            failures.append(f"local model case {i}: dimension != {expected}")

    fields = {
        "seed": args.seed,
        "cases": cases,
        "checks": checks,
        "failures": failures,
        "passed": not failures,
        "verdict": "pass" if not failures else "fail",
    }
    return [_report("selftest", [], fields)], 0 if not failures else 1


_HANDLERS = {
    "validate": _cmd_validate,
    "info": _cmd_info,
    "obstruction": _cmd_obstruction,
    "classify": _cmd_classify,
    "abundancy": _cmd_abundancy,
    "phylo": _cmd_phylo,
    "local-model": _cmd_local_model,
    "genus1-check": _cmd_genus1_check,
    "compare": _cmd_compare,
    "selftest": _cmd_selftest,
}


# -- rendering ---------------------------------------------------------------


def _print_json(reports):
    payload = reports[0] if len(reports) == 1 else reports
    print(json.dumps(payload, indent=2, sort_keys=True))


def _format_scalar(value):
    if isinstance(value, bool):
        return "yes" if value else "no"
    if value is None:
        return "-"
    return str(value)


def _print_text_report(rep):
    if "error" in rep:
        payload = rep["error"]
        ctx = payload.get("context") or {}
        extra = "".join(f" {k}={v}" for k, v in sorted(ctx.items()))
        print(f"error[{payload['error_type']}]: {payload['message']}{extra}")
        return
    keys = [k for k in rep if k not in ("schema", "command", "inputs", "warnings")]
    ordered = [k for k in DIM_KEYS if k in keys]
    ordered += sorted(k for k in keys if k not in ordered)
    print(f"== {rep['command']}", " ".join(s.get("path", "") for s in rep["inputs"]))
    deferred = []
    for key in ordered:
        value = rep[key]
        if key in ("basis", "flags", "variables", "annihilatorBasis"):
            deferred.append(key)
            continue
        if isinstance(value, (dict, list)):
            print(f"{key}: {json.dumps(value, sort_keys=True)}")
        else:
            print(f"{key}: {_format_scalar(value)}")
    if "basis" in deferred and rep.get("basis"):
        labels = None
        if "flags" in rep:
            labels = ["/".join(str(p) for p in f) for f in rep["flags"]]
        elif "variables" in rep:
            labels = [str(v) for v in rep["variables"]]
        print("basis:")
        for bi, vecs in enumerate(rep["basis"], start=1):
            print(f"  vector {bi}:")
            for label, cov in zip(labels, vecs):
                print(f"    {label}: ({', '.join(cov)})")
    elif "basis" in deferred:
        print("basis: (empty)")
    if "annihilatorBasis" in deferred:
        print(f"annihilatorBasis: {json.dumps(rep['annihilatorBasis'])}")
    for w in rep.get("warnings", ()):
        print(f"warning: {w}")


def _print_text(reports):
    for i, rep in enumerate(reports):
        if i:
            print()
        _print_text_report(rep)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[args.command]
    try:
        reports, code = handler(args)
    except TropctlError as err:
        stamps = []
        for attr in ("file", "model", "laurent"):
            path = getattr(args, attr, None)
            if path:
                stamps.append({"path": path})
        rep = _error_report(args.command, stamps, err)
        if args.format == "json":
            _print_json([rep])
        else:
            _print_text([rep])
        return err.exit_code
    if args.format == "json":
        _print_json(reports)
    else:
        _print_text(reports)
    return code


if __name__ == "__main__":
    sys.exit(main())
