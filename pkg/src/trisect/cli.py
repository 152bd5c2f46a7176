"""Command-line front end and the diagram file format.

Diagram files are JSON with an explicit version and exactly one payload:

    {"version": 1, "name": "cp2",
     "curves": {"genus": 1, "alpha": [[1, 0]], "beta": [[0, 1]], "gamma": [[1, 1]]}}

where each curve class is a list of 2g integers in the symplectic basis
order e_1..e_g, f_1..f_g, or

    {"version": 1, "name": "s2xs2",
     "matrices": {"genus": 2, "k": [0, 0, 0],
                  "alpha_beta": [[0, -1], [1, 0]],
                  "gamma_beta": [[0, -1], [-1, 0]],
                  "alpha_gamma": [[0, 1], [-1, 0]]}}

("beta_gamma" is accepted as an input alias for the negated transpose of
"gamma_beta").  Exit codes: 0 success, 1 invalid diagram, 2 usage error.
Human and machine output are rendered from the same report value; pass
--json for the machine form.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from importlib import resources

from .corpus import EXAMPLE_NAMES, random_diagram
from .diagram import (
    InvalidDiagramError,
    MatrixDiagram,
    TrisectionDiagram,
    as_matrix_diagram,
    intersection_matrix,
    linking_number,
    validate,
)
from .form import form_by_definition, form_fast, form_general, form_invariants, h2_basis
from .homology import h2_kernel_formula, h2_symmetric, h3_direct, homology_profile
from .linalg import AbelianGroup, eye, mat_eq, zvec
from .moves import (
    MoveState,
    apply_all,
    congruence_reduce,
    format_move_log,
    normalize_pair,
    parse_move_log,
    reduce_gamma_beta,
)

SCHEMA = "trisect/v1"


class DiagramFileError(Exception):
    """Malformed diagram file: bad JSON, bad schema, or bad dimensions."""


@dataclass(frozen=True)
class DiagramFile:
    version: int
    name: str | None
    diagram: TrisectionDiagram | MatrixDiagram


def _int_entries(rows, what):
    for row in rows:
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int):
                raise DiagramFileError(f"{what}: entries must be integers, got {x!r}")


def parse_diagram_dict(data: dict) -> DiagramFile:
    if not isinstance(data, dict):
        raise DiagramFileError("top level must be a JSON object")
    if data.get("version") != 1:
        raise DiagramFileError(f"unsupported file version {data.get('version')!r}")
    name = data.get("name")
    kinds = [k for k in ("curves", "matrices") if k in data]
    if len(kinds) != 1:
        raise DiagramFileError("exactly one of 'curves' or 'matrices' must be present")
    payload = data[kinds[0]]
    if not isinstance(payload, dict) or not isinstance(payload.get("genus"), int):
        raise DiagramFileError("payload needs an integer 'genus'")
    g = payload["genus"]
    if g < 0:
        raise DiagramFileError("genus must be nonnegative")

    if kinds[0] == "curves":
        systems = {}
        for label in ("alpha", "beta", "gamma"):
            rows = payload.get(label)
            if not isinstance(rows, list) or len(rows) != g:
                raise DiagramFileError(f"'{label}' must list {g} curve classes")
            if any(not isinstance(r, list) or len(r) != 2 * g for r in rows):
                raise DiagramFileError(f"'{label}' classes must have length {2 * g}")
            _int_entries(rows, label)
            systems[label] = rows
        d = TrisectionDiagram.from_classes(g, systems["alpha"], systems["beta"],
                                           systems["gamma"], name=name)
        _check_isotropy_at_parse(d)
        return DiagramFile(1, name, d)

    kv = payload.get("k")
    if not isinstance(kv, list) or len(kv) != 3 or any(not isinstance(k, int) for k in kv):
        raise DiagramFileError("'k' must be a list of three integers")
    mats = {}
    for key in ("alpha_beta", "gamma_beta", "alpha_gamma"):
        rows = payload.get(key)
        if key == "gamma_beta" and rows is None and "beta_gamma" in payload:
            alias = payload["beta_gamma"]
            if not isinstance(alias, list):
                raise DiagramFileError("'beta_gamma' must be a matrix")
            _int_entries(alias, "beta_gamma")
            rows = [[-alias[j][i] for j in range(len(alias))] for i in range(len(alias))]
        if not isinstance(rows, list) or len(rows) != g or any(
            not isinstance(r, list) or len(r) != g for r in rows
        ):
            raise DiagramFileError(f"'{key}' must be a {g} x {g} matrix")
        _int_entries(rows, key)
        mats[key] = rows
    from .linalg import zmat, zeros

    build = lambda rows: zmat(rows) if g else zeros(0, 0)
    md = MatrixDiagram(
        genus=g,
        kvector=tuple(kv),
        q_ab=build(mats["alpha_beta"]),
        q_gb=build(mats["gamma_beta"]),
        q_ag=build(mats["alpha_gamma"]),
        name=name,
    )
    return DiagramFile(1, name, md)


def _check_isotropy_at_parse(d: TrisectionDiagram):
    j = d.surface.pairing
    for label in ("alpha", "beta", "gamma"):
        cls = d.system(label).classes
        q = cls.T @ j @ cls
        for a in range(d.genus):
            for b in range(d.genus):
                if q[a, b] != 0:
                    raise InvalidDiagramError(
                        f"system {label} is not isotropic: "
                        f"<{label}_{a + 1}, {label}_{b + 1}> = {q[a, b]}"
                    )


def parse(path: str) -> DiagramFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DiagramFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DiagramFileError(f"{path} is not valid JSON: {exc}") from exc
    return parse_diagram_dict(data)


def serialize(df: DiagramFile) -> dict:
    d = df.diagram
    out: dict = {"version": 1}
    if df.name is not None:
        out["name"] = df.name
    if isinstance(d, TrisectionDiagram):
        g = d.genus
        out["curves"] = {
            "genus": g,
            **{
                label: [[int(x) for x in d.system(label).classes[:, j]] for j in range(g)]
                for label in ("alpha", "beta", "gamma")
            },
        }
    else:
        out["matrices"] = {
            "genus": d.genus,
            "k": list(d.kvector),
            "alpha_beta": [[int(x) for x in row] for row in d.q_ab.tolist()],
            "gamma_beta": [[int(x) for x in row] for row in d.q_gb.tolist()],
            "alpha_gamma": [[int(x) for x in row] for row in d.q_ag.tolist()],
        }
    return out


# ---------------------------------------------------------------- reporting


@dataclass
class Report:
    command: str
    data: dict
    elapsed: float

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "command": self.command,
                "elapsed_seconds": self.elapsed, **self.data}

    def to_human(self) -> str:
        lines = _HUMAN_RENDERERS[self.command](self.data)
        lines.append(f"[{self.elapsed:.3f}s]")
        return "\n".join(lines)


def _group_str(gj: dict) -> str:
    return str(AbelianGroup(gj["free"], tuple(gj["torsion"])))


def _matrix_lines(rows, indent="  "):
    if not rows:
        return [indent + "(empty matrix)"]
    widths = [max(len(str(rows[i][j])) for i in range(len(rows))) for j in range(len(rows[0]))]
    return [
        indent + "[" + "  ".join(str(v).rjust(w) for v, w in zip(row, widths)) + "]"
        for row in rows
    ]


def _render_validate(data):
    lines = [f"diagram: {data.get('name') or '(unnamed)'}  genus {data['genus']}"]
    for s in data.get("systems", []):
        lines.append(
            f"  {s['label']}: rank {'ok' if s['rank_ok'] else 'FAIL'},"
            f" isotropic {'ok' if s['isotropic'] else 'FAIL'},"
            f" primitive {'ok' if s['primitive'] else 'FAIL'}"
        )
    for p in data.get("pairs", []):
        k = p["k"] if p["k"] is not None else "-"
        lines.append(f"  pair {p['pair'][0]}/{p['pair'][1]}: free {'ok' if p['free'] else 'FAIL'}, k = {k}")
    if data["ok"]:
        lines.append(f"valid (necessary conditions); k-vector {tuple(data['kvector'])}")
    else:
        lines.append("INVALID:")
        lines.extend(f"  - {msg}" for msg in data["problems"])
    lines.append(f"note: {data['note']}")
    return lines


def _render_homology(data):
    lines = [f"homology of {data.get('name') or '(unnamed)'}"]
    for i, gj in enumerate(data["groups"]):
        lines.append(f"  H_{i} = {_group_str(gj)}")
    lines.append(f"  euler characteristic = {data['euler_characteristic']}")
    lines.append(f"  betti numbers = {tuple(data['bettis'])}")
    return lines


def _render_form(data):
    lines = [f"intersection form on H_2 (rank {len(data['matrix'])})"]
    lines.extend(_matrix_lines(data["matrix"]))
    lines.append(f"  methods: {', '.join(data['methods'])}; agreement: {data['agree']}")
    inv = data["invariants"]
    lines.append(
        f"  rank {inv['rank']}, signature {inv['signature']},"
        f" {inv['parity']}, determinant {inv['determinant']}"
    )
    return lines


def _render_h2(data):
    lines = [f"H_2 = {_group_str(data['complex'])} (from the chain complex)"]
    if data.get("symmetric") is not None:
        lines.append(f"  symmetric description: {_group_str(data['symmetric'])}")
    else:
        lines.append("  symmetric description: n/a (needs curve classes)")
    lines.append(f"  kernel formula: {_group_str(data['kernel_formula'])}")
    lines.append(f"  agreement: {data['agree']}")
    return lines


def _render_h3(data):
    return [
        f"H_3 = {_group_str(data['complex'])} (from the chain complex)",
        f"  triple intersection: {_group_str(data['direct'])}",
        f"  agreement: {data['agree']}",
    ]


def _render_linking(data):
    return [f"lk(J, K) = {data['linking_number']} (pair {data['pair']})"]


def _render_reduce(data):
    lines = [f"reduction of {data.get('name') or '(unnamed)'}: {len(data['moves'])} moves"]
    for key in ("alpha_beta", "gamma_beta", "alpha_gamma"):
        lines.append(f"  final {key}:")
        lines.extend(_matrix_lines(data[key], indent="    "))
    for stage in data["stages"]:
        lines.append(f"  stage {stage['stage']}: {stage['status']}")
    cong = data.get("congruence")
    if cong is not None:
        lines.append(f"  congruence verified: {cong['verified']}")
        lines.append(f"  diagonal part: {cong['diagonal']}")
        if cong["residual"]:
            lines.append("  residual block:")
            lines.extend(_matrix_lines(cong["residual"], indent="    "))
        if cong["trailing_zeros"]:
            lines.append(f"  trailing zero block of size {cong['trailing_zeros']}")
        for note in cong["notes"]:
            lines.append(f"  note: {note}")
    if data.get("log_path"):
        lines.append(f"  move log written to {data['log_path']}")
    return lines


def _render_replay(data):
    lines = [f"replayed {data['move_count']} moves"]
    for key in ("alpha_beta", "gamma_beta", "alpha_gamma"):
        lines.append(f"  final {key}:")
        lines.extend(_matrix_lines(data[key], indent="    "))
    return lines


def _render_example(data):
    return [json.dumps(data["file"], indent=2)]


_HUMAN_RENDERERS = {
    "validate": _render_validate,
    "homology": _render_homology,
    "form": _render_form,
    "h2": _render_h2,
    "h3": _render_h3,
    "linking": _render_linking,
    "reduce": _render_reduce,
    "replay": _render_replay,
    "example": _render_example,
}


# ---------------------------------------------------------------- commands


def _load_valid(path: str) -> tuple[DiagramFile, MatrixDiagram]:
    df = parse(path)
    report = validate(df.diagram)
    if not report.ok:
        raise InvalidDiagramError("; ".join(report.problems))
    return df, as_matrix_diagram(df.diagram)


def _cmd_validate(args) -> tuple[Report, int]:
    df = parse(args.file)
    report = validate(df.diagram)
    data = {"name": df.name, **report.to_json()}
    return Report("validate", data, 0.0), 0 if report.ok else 1


def _cmd_homology(args) -> tuple[Report, int]:
    df, md = _load_valid(args.file)
    profile = homology_profile(md)
    return Report("homology", {"name": df.name, **profile.to_json()}, 0.0), 0


def _cmd_form(args) -> tuple[Report, int]:
    df, md = _load_valid(args.file)
    basis = h2_basis(md)
    forms = {"definition": form_by_definition(md, basis)}
    if md.kvector[0] == 0:
        forms["fast"] = form_fast(md, basis)
    g, k1 = md.genus, md.kvector[0]
    trunc = eye(g)
    for i in range(g - k1, g):
        trunc[i, i] = 0
    if mat_eq(md.q_ab, trunc):
        forms["general"] = form_general(md, basis)
    reference = forms["definition"].matrix
    agree = all(mat_eq(f.matrix, reference) for f in forms.values())
    if not agree:
        raise RuntimeError("intersection form methods disagree; this is a bug")
    data = {
        "name": df.name,
        "matrix": [[int(x) for x in row] for row in reference.tolist()],
        "basis": [[int(x) for x in row] for row in basis.representatives.tolist()],
        "methods": sorted(forms),
        "agree": agree,
        "invariants": form_invariants(forms["definition"]).to_json(),
    }
    return Report("form", data, 0.0), 0


def _cmd_h2(args) -> tuple[Report, int]:
    df, md = _load_valid(args.file)
    from_complex = homology_profile(md).groups[2]
    kernel_route = h2_kernel_formula(md)
    symmetric = h2_symmetric(df.diagram) if isinstance(df.diagram, TrisectionDiagram) else None
    agree = from_complex == kernel_route and (symmetric is None or symmetric == from_complex)
    data = {
        "name": df.name,
        "complex": from_complex.to_json(),
        "kernel_formula": kernel_route.to_json(),
        "symmetric": symmetric.to_json() if symmetric is not None else None,
        "agree": agree,
    }
    return Report("h2", data, 0.0), 0


def _cmd_h3(args) -> tuple[Report, int]:
    df, md = _load_valid(args.file)
    from_complex = homology_profile(md).groups[3]
    direct = h3_direct(df.diagram)
    data = {
        "name": df.name,
        "complex": from_complex.to_json(),
        "direct": direct.to_json(),
        "agree": from_complex == direct,
    }
    return Report("h3", data, 0.0), 0


_PAIRS = {"ab": ("alpha", "beta"), "ag": ("alpha", "gamma"), "bg": ("beta", "gamma")}


def _cmd_linking(args) -> tuple[Report, int]:
    df = parse(args.file)
    if not isinstance(df.diagram, TrisectionDiagram):
        raise DiagramFileError("linking needs a curves payload, not a matrices payload")
    try:
        jv = [int(x) for x in args.j.split(",")]
        kv = [int(x) for x in args.k.split(",")]
    except ValueError as exc:
        raise DiagramFileError(f"class vectors must be comma-separated integers: {exc}")
    pa, pb = _PAIRS[args.pair]
    value = linking_number(jv, kv, df.diagram.system(pa), df.diagram.system(pb))
    data = {"name": df.name, "pair": f"{pa}/{pb}", "j": jv, "k": kv, "linking_number": value}
    return Report("linking", data, 0.0), 0


def _cmd_reduce(args) -> tuple[Report, int]:
    df, md = _load_valid(args.file)
    state = MoveState.from_diagram(md)
    stages = []
    state, m1 = normalize_pair(state)
    stages.append({"stage": "normalize_pair", "status": f"q_ab normalized, {len(m1)} moves"})
    state, m2 = reduce_gamma_beta(state)
    gb_identity = mat_eq(state.q_gb, eye(md.genus))
    stages.append({
        "stage": "reduce_gamma_beta",
        "status": ("q_gb = identity" if gb_identity else "best-effort Hermite form (k3 > 0)")
        + f", {len(m2)} moves",
    })
    moves = m1 + m2
    cong_data = None
    if gb_identity and mat_eq(state.q_ab, eye(md.genus)):
        state, m3, creport = congruence_reduce(state)
        moves += m3
        stages.append({"stage": "congruence_reduce", "status": f"{len(m3)} moves"})
        cong_data = creport.to_json()
    else:
        stages.append({
            "stage": "congruence_reduce",
            "status": "skipped: needs q_ab = q_gb = identity (k1 = k3 = 0)",
        })
    log_text = format_move_log(moves)
    log_path = None
    if args.log:
        with open(args.log, "w", encoding="utf-8") as fh:
            fh.write(log_text)
        log_path = args.log
    data = {
        "name": df.name,
        "alpha_beta": [[int(x) for x in row] for row in state.q_ab.tolist()],
        "gamma_beta": [[int(x) for x in row] for row in state.q_gb.tolist()],
        "alpha_gamma": [[int(x) for x in row] for row in state.q_ag.tolist()],
        "moves": log_text.splitlines(),
        "stages": stages,
        "congruence": cong_data,
        "log_path": log_path,
    }
    return Report("reduce", data, 0.0), 0


def _cmd_replay(args) -> tuple[Report, int]:
    df, md = _load_valid(args.file)
    try:
        with open(args.log, "r", encoding="utf-8") as fh:
            moves = parse_move_log(fh.read())
    except OSError as exc:
        raise DiagramFileError(f"cannot read move log: {exc}")
    except ValueError as exc:
        raise DiagramFileError(str(exc))
    state = apply_all(MoveState.from_diagram(md), moves)
    data = {
        "name": df.name,
        "move_count": len(moves),
        "alpha_beta": [[int(x) for x in row] for row in state.q_ab.tolist()],
        "gamma_beta": [[int(x) for x in row] for row in state.q_gb.tolist()],
        "alpha_gamma": [[int(x) for x in row] for row in state.q_ag.tolist()],
    }
    return Report("replay", data, 0.0), 0


def load_example(name: str) -> dict:
    if name not in EXAMPLE_NAMES:
        raise DiagramFileError(
            f"unknown example {name!r}; choose from {', '.join(EXAMPLE_NAMES)} or 'random'"
        )
    text = resources.files("trisect.data").joinpath(f"{name}.json").read_text("utf-8")
    return json.loads(text)


def _cmd_example(args) -> tuple[Report, int]:
    if args.name == "random":
        d = random_diagram(args.seed, genus=args.genus)
        payload = serialize(DiagramFile(1, f"random-{args.seed}", d))
    else:
        payload = load_example(args.name)
    return Report("example", {"file": payload}, 0.0), 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="trisect",
        description="exact homology and intersection-form calculator for trisection diagrams",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_, with_file=True):
        p = sub.add_parser(name, help=help_)
        if with_file:
            p.add_argument("file", help="diagram JSON file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    add("validate", "check the homological validity conditions")
    add("homology", "H_0..H_4 and the Euler characteristic")
    add("form", "intersection form by every applicable method")
    add("h2", "closed-form descriptions of H_2")
    add("h3", "closed-form description of H_3")
    p = add("linking", "linking number of two surface classes in a Heegaard pair")
    p.add_argument("--pair", choices=sorted(_PAIRS), default="ab",
                   help="which two systems split the 3-manifold")
    p.add_argument("--j", required=True, help="first class, comma-separated 2g integers")
    p.add_argument("--k", required=True, help="second class, comma-separated 2g integers")
    p = add("reduce", "normalize q_ab, reduce q_gb, congruence-reduce q_ag")
    p.add_argument("--log", help="write the move log to this file")
    p = add("replay", "apply a move log to a diagram")
    p.add_argument("--log", required=True, help="move log file to apply")
    p = add("example", "print a bundled or random diagram file", with_file=False)
    p.add_argument("name", help=f"one of {', '.join(EXAMPLE_NAMES)}, or 'random'")
    p.add_argument("--seed", type=int, default=0, help="seed for 'random'")
    p.add_argument("--genus", type=int, default=None, help="genus for 'random'")
    return ap


_HANDLERS = {
    "validate": _cmd_validate,
    "homology": _cmd_homology,
    "form": _cmd_form,
    "h2": _cmd_h2,
    "h3": _cmd_h3,
    "linking": _cmd_linking,
    "reduce": _cmd_reduce,
    "replay": _cmd_replay,
    "example": _cmd_example,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report, code = _HANDLERS[args.command](args)
    except InvalidDiagramError as exc:
        print(f"invalid diagram: {exc}", file=sys.stderr)
        return 1
    except DiagramFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.elapsed = time.perf_counter() - start
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    elif args.command == "example":
        print(json.dumps(report.data["file"], indent=2))
    else:
        print(report.to_human())
    return code


if __name__ == "__main__":
    sys.exit(main())
