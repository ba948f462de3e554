"""Command-line interface: problem ingestion, dispatch, report emission.

Problem files are JSON documents with rationals written as integers or
strings like "3/4"; floats are rejected.  Every command emits a
deterministic report (JSON by default, or a text rendering) and exits with
0 on success, 2 on a parse error, 3 on a validation failure and 4 on an
internal-consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Sequence

from . import matroid, pspaces, reports
from .arrangement import vertex_set
from .errors import (
    InputError,
    InternalConsistencyError,
    ValidationError,
    ZonotopalError,
)
from .groundset import (
    Configuration,
    build_configuration,
    required_y_size,
)
from .lagrange import evaluation_matrix, lagrange_family, verify_lagrange
from .leastmap import (
    annihilation_check,
    coherence_check,
    d_space,
    duality_gram,
    ideal_generators,
)
from .linalg import scalar
from .matroid import (
    Assignment,
    count_external_bases,
    external_bases,
    split_tree,
    validate_assignment,
    verify_split_tree,
)
from .polynomials import format_poly

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_INTERNAL = 4


@dataclass
class ProblemFile:
    """Parsed problem document."""

    n: int
    x_columns: list[list]
    assignment_pairs: list[tuple[tuple[int, ...], int]]
    y_columns: list[list] | None
    offsets: list | None
    seed: int
    x_order: list[int] | None


def _expect(condition: bool, path: str, message: str):
    if not condition:
        raise InputError(f"{path}: {message}")


def _parse_rational(value, path: str):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"{path}: expected an integer or 'p/q' string, got {value!r}")
    try:
        return scalar(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _parse_column(value, path: str, n: int):
    _expect(isinstance(value, list), path, "expected a list of rationals")
    _expect(len(value) == n, path, f"expected {n} entries, got {len(value)}")
    return [_parse_rational(v, f"{path}[{i}]") for i, v in enumerate(value)]


def parse_problem(text: str, source: str = "<input>") -> ProblemFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{source}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    _expect(isinstance(doc, dict), source, "top level must be an object")
    known = {"n", "X", "assignment", "Y", "lambda", "seed", "order"}
    for key in doc:
        _expect(key in known, f"{source}.{key}", "unknown field")
    _expect("n" in doc, source, "missing field 'n'")
    n = doc["n"]
    _expect(isinstance(n, int) and not isinstance(n, bool) and n >= 1, "n", "must be a positive integer")
    _expect("X" in doc, source, "missing field 'X'")
    _expect(isinstance(doc["X"], list), "X", "expected a list of columns")
    x_columns = [_parse_column(col, f"X[{i}]", n) for i, col in enumerate(doc["X"])]
    _expect("assignment" in doc, source, "missing field 'assignment'")
    _expect(isinstance(doc["assignment"], list), "assignment", "expected a list")
    pairs = []
    for i, entry in enumerate(doc["assignment"]):
        path = f"assignment[{i}]"
        _expect(isinstance(entry, dict), path, "expected an object")
        _expect(set(entry) == {"subset", "value"}, path, "expected keys 'subset' and 'value'")
        subset = entry["subset"]
        _expect(
            isinstance(subset, list)
            and all(isinstance(j, int) and not isinstance(j, bool) for j in subset),
            f"{path}.subset",
            "expected a list of column indices",
        )
        value = entry["value"]
        _expect(
            isinstance(value, int) and not isinstance(value, bool) and value >= 0,
            f"{path}.value",
            "expected a natural number",
        )
        pairs.append((tuple(subset), value))
    y_columns = None
    if "Y" in doc:
        _expect(isinstance(doc["Y"], list), "Y", "expected a list of columns")
        y_columns = [_parse_column(col, f"Y[{i}]", n) for i, col in enumerate(doc["Y"])]
    offsets = None
    if "lambda" in doc:
        _expect(y_columns is not None, "lambda", "explicit offsets require an explicit Y")
        _expect(isinstance(doc["lambda"], list), "lambda", "expected a list of rationals")
        offsets = [
            _parse_rational(v, f"lambda[{i}]") for i, v in enumerate(doc["lambda"])
        ]
    seed = doc.get("seed", 0)
    _expect(isinstance(seed, int) and not isinstance(seed, bool), "seed", "expected an integer")
    x_order = None
    if "order" in doc:
        order = doc["order"]
        _expect(
            isinstance(order, list) and sorted(order) == list(range(len(x_columns))),
            "order",
            "expected a permutation of the column indices",
        )
        x_order = list(order)
    return ProblemFile(n, x_columns, pairs, y_columns, offsets, seed, x_order)


class _Timer:
    def __init__(self):
        self.stages: dict[str, float] = {}
        self._last = time.perf_counter()

    def mark(self, stage: str):
        now = time.perf_counter()
        self.stages[stage] = round(now - self._last, 6)
        self._last = now


@dataclass
class Pipeline:
    """Shared state assembled once per command."""

    problem: ProblemFile
    assignment: Assignment
    config: Configuration
    timer: _Timer
    degree_cap: int | None = None


def build_pipeline(
    problem: ProblemFile, seed: int | None, degree_cap: int | None = None
) -> Pipeline:
    timer = _Timer()
    assignment = validate_assignment(problem.x_columns, problem.assignment_pairs)
    timer.mark("validate_assignment")
    config = build_configuration(
        problem.n,
        problem.x_columns,
        assignment=assignment,
        y_columns=problem.y_columns,
        offsets=problem.offsets,
        seed=problem.seed if seed is None else seed,
        x_order=problem.x_order,
    )
    timer.mark("build_configuration")
    return Pipeline(problem, assignment, config, timer, degree_cap)


def _section_problem(pipe: Pipeline) -> dict:
    cfg = pipe.config
    return {
        "n": cfg.dim,
        "x_columns": [reports.fmt_vector(v) for v in cfg.x_vectors],
        "x_order": list(cfg.x_order),
        "seed": cfg.seed,
    }


def _section_configuration(pipe: Pipeline) -> dict:
    cfg = pipe.config
    return {
        "y_columns": [reports.fmt_vector(v) for v in cfg.y_vectors],
        "offsets": reports.fmt_vector(cfg.offsets),
        "y_generated": pipe.problem.y_columns is None,
        "offsets_generated": pipe.problem.offsets is None,
    }


def _section_validation(pipe: Pipeline) -> dict:
    a = pipe.assignment
    return {
        "assignment": {
            "well_formed": True,
            "solid": a.solid,
            "solid_witness": _witness(a.solid_witness),
            "incremental": a.incremental,
            "incremental_witness": _witness(a.incremental_witness),
        },
        "general_position": "pass",
        "offset_genericity": "pass",
        "required_y_size": required_y_size(
            pipe.config.x_vectors, pipe.config.dim, a
        ),
    }


def _witness(value):
    if value is None:
        return None
    return [list(v) if isinstance(v, tuple) else v for v in value]


def _section_matroid(pipe: Pipeline):
    cfg, a = pipe.config, pipe.assignment
    independents = matroid.independent_sets(cfg.x_vectors)
    x_bases = matroid.bases(cfg.x_vectors, cfg.dim)
    family = external_bases(cfg, a)
    count = count_external_bases(cfg.x_vectors, cfg.dim, a)
    if count != len(family.bases):
        raise InternalConsistencyError(
            f"closed-form count {count} != enumerated {len(family.bases)}"
        )
    section = {
        "independent_count": len(independents),
        "independent_sets": reports.fmt_subsets(independents),
        "x_basis_count": len(x_bases),
        "x_bases": reports.fmt_subsets(x_bases),
        "external_count_formula": count,
        "external_count_enumerated": len(family.bases),
        "extension_groups": [
            {
                "independent": reports.fmt_subset(ind),
                "prefix_length": matroid.y_prefix_length(ind, a, cfg.dim),
                "extensions": reports.fmt_subsets(members),
            }
            for ind, members in family.groups
        ],
    }
    pipe.timer.mark("matroid")
    return section, family


def _section_pspace(pipe: Pipeline, family) -> dict:
    cfg, a = pipe.config, pipe.assignment
    space = pspaces.p_space(cfg.x_vectors, cfg.dim, a)
    central = pspaces.central_basis(cfg.x_vectors, cfg.dim)
    section = {
        "dim": space.dim,
        "hilbert_direct": reports.fmt_table(space.hilbert),
        "central_dim": central.dim,
        "central_hilbert": reports.fmt_table(
            pspaces.central_hilbert(cfg.x_vectors, cfg.dim)
        ),
        "hilbert_formula": None,
        "formula_matches": None,
        "homogeneous_basis": None,
        "inhomogeneous_basis": None,
        "lagrange_basis": None,
        "notes": [],
    }
    if a.solid and a.incremental:
        formula = pspaces.hilbert_by_formula(cfg, a)
        section["hilbert_formula"] = reports.fmt_table(formula)
        section["formula_matches"] = formula == space.hilbert
        if not section["formula_matches"]:
            raise InternalConsistencyError(
                "Hilbert formula disagrees with the direct table"
            )
    else:
        section["notes"].append("hilbert formula needs a solid incremental assignment")
    if a.solid:
        checker = pspaces.PSpaceChecker(cfg.x_vectors, cfg.dim, a, cap=pipe.degree_cap)
        hom = pspaces.homogeneous_basis(cfg, a, family, checker)
        section["homogeneous_basis"] = [format_poly(p) for p in hom]
        if space.dim == len(family.bases):
            section["homogeneous_is_basis"] = True
        else:
            section["homogeneous_is_basis"] = False
            section["notes"].append(
                "greedy products span a proper subspace: dim exceeds the family size"
            )
        if a.incremental:
            inhom = pspaces.inhomogeneous_basis(cfg, a, family, checker)
            section["inhomogeneous_basis"] = [format_poly(p) for p in inhom]
        else:
            section["notes"].append(
                "inhomogeneous basis needs a solid incremental assignment"
            )
        data = lagrange_family(pipe.config, a, family)
        section["lagrange_basis"] = [format_poly(d.poly) for d in data]
    else:
        section["notes"].append("explicit bases need a solid assignment")
    pipe.timer.mark("pspace")
    return section


def _section_dspace(pipe: Pipeline, family, transversal_cap: int | None):
    cfg, a = pipe.config, pipe.assignment
    vertices = vertex_set(cfg, family.bases)
    space = d_space(cfg, a, family)
    generators = ideal_generators(cfg, family, transversal_cap)
    witness = annihilation_check(space, generators)
    if witness is not None:
        raise InternalConsistencyError(
            f"annihilation failed for generator {sorted(witness[0])}"
        )
    coherence = coherence_check(cfg, a, family, generators)
    section = {
        "vertices": [
            {
                "basis": reports.fmt_subset(v.basis),
                "point": reports.fmt_vector(v.point),
            }
            for v in vertices
        ],
        "dim": space.dim,
        "hilbert": reports.fmt_table(space.hilbert),
        "generator_count": len(generators.index_sets),
        "generators": reports.fmt_subsets(generators.index_sets),
        "annihilation": "pass",
        "coherence": {
            "count": coherence.count,
            "enumerated": coherence.enumerated,
            "vertex_count": coherence.vertex_count,
            "least_dim": coherence.least_dim,
            "kernel_dim": coherence.kernel_dim,
            "solid": coherence.solid,
            "coherent": coherence.coherent,
            "status": "pass" if coherence.certified else "no-certificate",
        },
    }
    pipe.timer.mark("dspace")
    return section, vertices, space


def _section_duality(pipe: Pipeline, family, dsp) -> dict:
    cfg, a = pipe.config, pipe.assignment
    space = pspaces.p_space(cfg.x_vectors, cfg.dim, a)
    if space.dim != dsp.dim:
        return {
            "status": "not-applicable",
            "reason": f"dimension mismatch: {space.dim} versus {dsp.dim}",
            "gram_nonsingular": None,
        }
    gram, nonsingular = duality_gram(space.basis, dsp.basis)
    if a.solid and a.incremental and not nonsingular:
        raise InternalConsistencyError("duality pairing degenerated unexpectedly")
    return {"status": "pass" if nonsingular else "fail", "gram_nonsingular": nonsingular}


def _section_lagrange(pipe: Pipeline, family, vertices) -> dict:
    cfg, a = pipe.config, pipe.assignment
    if not a.solid:
        return {"status": "not-applicable", "reason": "assignment is not solid"}
    data = lagrange_family(cfg, a, family, vertices)
    witness = verify_lagrange(cfg, a, data, vertices)
    if witness is not None:
        raise InternalConsistencyError(f"Lagrange verification failed: {witness}")
    lookup = {v.basis: v for v in vertices}
    section = {
        "status": "pass",
        "evaluation_matrix": reports.fmt_matrix(evaluation_matrix(data, lookup)),
    }
    pipe.timer.mark("lagrange")
    return section


def _section_split_tree(pipe: Pipeline, family) -> dict:
    if not pipe.assignment.solid:
        return {"status": "not-applicable", "reason": "assignment is not solid"}
    tree = split_tree(pipe.config, pipe.assignment, family)
    witness = verify_split_tree(tree, family)
    if witness is not None:
        raise InternalConsistencyError(f"split tree verification failed: {witness}")
    section = {
        "status": "pass",
        "leaf_count": tree.leaf_count,
        "depth": tree.depth,
    }
    pipe.timer.mark("split_tree")
    return section


def _certificates(report: dict) -> list[dict]:
    summary = []

    def add(name: str, status: str, detail=None):
        entry = {"name": name, "status": status}
        if detail is not None:
            entry["detail"] = detail
        summary.append(entry)

    validation = report.get("validation")
    if validation:
        add("general-position", "pass")
        add("offset-genericity", "pass")
    mat = report.get("matroid")
    if mat:
        add(
            "count-matches-enumeration",
            "pass"
            if mat["external_count_formula"] == mat["external_count_enumerated"]
            else "fail",
        )
    psec = report.get("pspace")
    if psec:
        if psec["formula_matches"] is None:
            add("hilbert-formula", "not-applicable")
        else:
            add("hilbert-formula", "pass" if psec["formula_matches"] else "fail")
    dsec = report.get("dspace")
    if dsec:
        add("annihilation", "pass")
        coherent = dsec["coherence"]["status"] == "pass"
        add("coherence", "pass" if coherent else "not-applicable", dsec["coherence"])
    for key in ("duality", "lagrange", "split_tree"):
        sec = report.get(key)
        if sec:
            add(key.replace("_", "-"), sec["status"], sec.get("reason"))
    return summary


def run_command(
    command: str,
    problem: ProblemFile,
    seed: int | None = None,
    degree_cap: int | None = None,
    transversal_cap: int | None = None,
) -> dict:
    pipe = build_pipeline(problem, seed, degree_cap)
    report: dict = {
        "command": command,
        "problem": _section_problem(pipe),
        "configuration": _section_configuration(pipe),
        "validation": _section_validation(pipe),
    }
    if command == "validate":
        report["certificates"] = _certificates(report)
        report["timings"] = pipe.timer.stages
        return report
    matroid_section, family = _section_matroid(pipe)
    report["matroid"] = matroid_section
    if command in ("pspace", "certify"):
        report["pspace"] = _section_pspace(pipe, family)
    if command in ("dspace", "certify"):
        dspace_section, vertices, dsp = _section_dspace(pipe, family, transversal_cap)
        report["dspace"] = dspace_section
    if command == "certify":
        report["duality"] = _section_duality(pipe, family, dsp)
        report["lagrange"] = _section_lagrange(pipe, family, vertices)
        report["split_tree"] = _section_split_tree(pipe, family)
    report["certificates"] = _certificates(report)
    report["timings"] = pipe.timer.stages
    return report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zonotopal",
        description="Exact external zonotopal computations on a JSON problem file.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("validate", "check the assignment, general position and genericity"),
        ("enumerate", "list independent sets, bases and the selected family"),
        ("pspace", "dimensions, Hilbert tables and explicit bases"),
        ("dspace", "vertices, least space, ideal generators and coherence"),
        ("certify", "run everything including duality and Lagrange checks"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("problem", help="problem file path, or - for stdin")
        cmd.add_argument("--seed", type=int, default=None, help="override the file seed")
        cmd.add_argument(
            "--degree-cap",
            type=int,
            default=None,
            help="override the membership degree cap",
        )
        cmd.add_argument(
            "--transversal-cap",
            type=int,
            default=None,
            help="largest hitting-set size to enumerate",
        )
        cmd.add_argument("--report", default=None, help="write the report to this path")
        cmd.add_argument(
            "--format", choices=("json", "text"), default="json", help="output format"
        )
        cmd.add_argument(
            "--timings", action="store_true", help="include stage timings in the report"
        )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.problem == "-":
            text = sys.stdin.read()
            source = "<stdin>"
        else:
            try:
                with open(args.problem, "r", encoding="utf-8") as handle:
                    text = handle.read()
            except OSError as exc:
                raise InputError(f"{args.problem}: {exc.strerror}") from None
            source = args.problem
        problem = parse_problem(text, source)
        report = run_command(
            args.command,
            problem,
            seed=args.seed,
            degree_cap=args.degree_cap,
            transversal_cap=args.transversal_cap,
        )
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InternalConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ZonotopalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    if args.format == "json":
        rendered = reports.render_json(report, timings=args.timings)
    else:
        rendered = reports.render_text(report, timings=args.timings)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            handle.write(rendered)
    else:
        sys.stdout.write(rendered)
    failed = [c for c in report.get("certificates", []) if c["status"] == "fail"]
    return EXIT_OK if not failed else 1


if __name__ == "__main__":
    raise SystemExit(main())
