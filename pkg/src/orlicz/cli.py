"""Config-driven scenario runner.

``orlicz run scenario.json --out DIR`` assembles space + phi + family from
the config, runs the requested diagnostics, and writes one CSV per
diagnostic plus a plain-text report. Exit status: 0 when every diagnostic
met its expectation, 2 when any failed, 1 on configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import compactness, convergence
from .config import SCHEMA_VERSION, parse_family, parse_fn, parse_phi, parse_space
from .conjugate import conjugate_table
from .errors import OrliczError, ConfigurationError
from .generators import list_generators
from .modular import luxemburg_norm, rho
from .phi import check_properties, uniformly_more_rapid
from .space import exceedance_sets, shrinking_sets


def _fmt(value) -> str:
    """Full-precision, shortest round-trip cell formatting."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def _csv_text(header, rows) -> str:
    import io

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(cell) for cell in row])
    return buffer.getvalue()


class DiagnosticResult:
    def __init__(self, kind, passed, header, rows, lines=None, extra_files=None):
        self.kind = kind
        self.passed = passed
        self.header = header
        self.rows = rows
        self.lines = lines or []
        self.extra_files = extra_files or {}  # filename -> text


def _expect_range(values, expect) -> bool:
    lo = expect.get("lo", -math.inf)
    hi = expect.get("hi", math.inf)
    return all(lo <= v <= hi for v in values)


def _expect_values(values, expect) -> bool:
    targets = expect["values"]
    rtol = expect.get("rtol", 1e-9)
    if len(targets) != len(values):
        return False
    return all(
        abs(v - t) <= rtol * max(1.0, abs(t)) for v, t in zip(values, targets)
    )


def _profile_result(kind, profile, expect) -> DiagnosticResult:
    expected = expect if isinstance(expect, str) else "consistent"
    passed = profile.consistent == (expected == "consistent")
    rows = [(p, v, profile.verdict) for p, v in zip(profile.parameters, profile.values)]
    return DiagnosticResult(
        kind,
        passed,
        ["parameter", "sup_value", "verdict"],
        rows,
        [f"verdict: {profile.verdict} (tol={profile.tol!r}, expected {expected})"],
    )


def _diag_norm(ctx, params):
    expect = params.get("expect")
    rows = []
    values = []
    for i, member in enumerate(ctx.family):
        result = luxemburg_norm(ctx.gp, ctx.space, member, tol=params.get("tol", 1e-10))
        modular = rho(ctx.gp, ctx.space, member)
        rows.append((i, result.value, modular, result.iterations, result.residual))
        values.append(result.value)
    passed = _expect_values(values, expect) if expect else True
    return DiagnosticResult(
        "norm", passed, ["member", "norm", "rho", "iterations", "residual"], rows,
        [f"norms: {[repr(v) for v in values]}"],
    )


def _diag_modular(ctx, params):
    expect = params.get("expect")
    rows = []
    values = []
    for i, member in enumerate(ctx.family):
        value = rho(ctx.gp, ctx.space, member)
        rows.append((i, value))
        values.append(value)
    if expect and "values" in expect:
        passed = _expect_values(values, expect)
    elif expect:
        passed = _expect_range(values, expect)
    else:
        passed = True
    return DiagnosticResult("modular", passed, ["member", "rho"], rows)


def _diag_phi_probe(ctx, params):
    points = params.get("points")
    if not points:
        raise ConfigurationError("phi_probe: needs a nonempty 'points' list of [x, t] pairs")
    rows = []
    values = []
    for x, t in points:
        value = float(np.asarray(ctx.gp.value(float(x), float(t))))
        rows.append((x, t, value))
        values.append(value)
    expect = params.get("expect")
    passed = _expect_values(values, expect) if expect else True
    return DiagnosticResult("phi_probe", passed, ["x", "t", "phi"], rows)


def _diag_properties(ctx, params):
    report = check_properties(
        ctx.gp,
        ctx.space,
        t_grid_small=params.get("t_grid_small"),
        t_grid_large=params.get("t_grid_large"),
        tol=params.get("tol", ctx.default_tol),
    )
    fields = {
        "delta2_constant": report.delta2_description,
        "nabla2_constant": report.nabla2_constant,
        "delta2_skipped_count": report.delta2_skipped_count,
        "constrained_ok": report.constrained_ok,
        "sup_phi_at_small_t": report.sup_phi_at_small_t,
        "inf_phi_at_large_t": report.inf_phi_at_large_t,
        "n_function_small_ok": report.n_function_small_ok,
        "n_function_large_ok": report.n_function_large_ok,
        "ratio_at_small_t": report.ratio_at_small_t,
        "ratio_at_large_t": report.ratio_at_large_t,
    }
    rows = [(k, _fmt(v)) for k, v in fields.items()]
    expect = params.get("expect")
    if expect:
        passed = True
        for key, wanted in expect.items():
            if key not in fields:
                raise ConfigurationError(f"properties.expect: unknown field {key!r}")
            got = fields[key]
            if isinstance(wanted, bool):
                passed = passed and (bool(got) == wanted)
            elif isinstance(wanted, (int, float)):
                passed = passed and abs(float(got) - wanted) <= 1e-9 * max(1.0, abs(wanted))
            else:
                passed = passed and (str(got) == str(wanted))
    else:
        passed = (
            report.constrained_ok
            and report.n_function_ok
            and math.isfinite(report.delta2_constant)
        )
    return DiagnosticResult("properties", passed, ["field", "value"], rows, report.summary().splitlines())


def _diag_ando(ctx, params):
    profile = compactness.ando_profile(
        ctx.gp,
        ctx.space,
        ctx.family,
        lambda_grid=params.get("lambda_grid"),
        tol=params.get("tol", ctx.default_tol),
    )
    return _profile_result("ando", profile, params.get("expect"))


def _diag_equi(ctx, params):
    if ctx.g is None:
        raise ConfigurationError("equi diagnostic needs a scenario-level 'g' function")
    chain = shrinking_sets(ctx.space, int(params.get("chain_depth", 6)))
    profile = compactness.equi_integrability_profile(
        ctx.space, ctx.family, ctx.g, chain, tol=params.get("tol", ctx.default_tol)
    )
    return _profile_result("equi", profile, params.get("expect"))


def _diag_tail(ctx, params):
    if ctx.g is None:
        raise ConfigurationError("tail diagnostic needs a scenario-level 'g' function")
    profile = compactness.tail_profile(
        ctx.space, ctx.family, ctx.g, tol=params.get("tol", ctx.default_tol)
    )
    return _profile_result("tail", profile, params.get("expect"))


def _diag_exceedance(ctx, params):
    table = exceedance_sets(ctx.space, ctx.family, params.get("n_max"))
    rows = [(n, mu) for n, mu in table]
    expect = params.get("expect")
    passed = _expect_range([mu for _, mu in table], expect) if expect else True
    return DiagnosticResult("exceedance", passed, ["n", "mu_Bn"], rows)


def _diag_lemma_bound(ctx, params):
    rows = compactness.lemma_bound_check(ctx.gp, ctx.space, ctx.family, params.get("n_max"))
    expect = params.get("expect")
    passed = _expect_range([r.mu_exceedance for r in rows], expect) if expect else True
    return DiagnosticResult(
        "lemma_bound",
        passed,
        ["n", "mu_Bn", "bound"],
        [(r.n, r.mu_exceedance, r.bound) for r in rows],
        ["exceedance bound held at every n"],
    )


def _diag_dominating_psi(ctx, params):
    spec = compactness.construct_dominating_psi(
        ctx.gp, ctx.space, ctx.family, depth=int(params.get("depth", 10))
    )
    certify = compactness.bounded_in_psi(spec.psi, ctx.space, ctx.family)
    rows = [
        (n, lam, b)
        for n, (lam, b) in enumerate(zip(spec.lambdas, spec.bounds), start=1)
    ]
    fragment = json.dumps(spec.psi_config(), indent=2, sort_keys=True) + "\n"
    return DiagnosticResult(
        "dominating_psi",
        certify.in_unit_ball,
        ["n", "lambda_n", "certified_bound"],
        rows,
        [
            f"max psi-modular over family: {certify.max_modular!r}",
            f"in unit ball: {certify.in_unit_ball}",
        ],
        extra_files={"dominating_psi_config.json": fragment},
    )


def _diag_umr(ctx, params):
    if ctx.psi is None:
        raise ConfigurationError("umr diagnostic needs a scenario-level 'psi' function")
    eps_list = params.get("eps_list")
    if not eps_list:
        raise ConfigurationError("umr diagnostic needs a nonempty 'eps_list'")
    result = uniformly_more_rapid(
        ctx.psi, ctx.gp, ctx.space, eps_list, delta_grid=params.get("delta_grid")
    )
    rows = [
        (eps, "none found" if delta is None else delta) for eps, delta in result.items()
    ]
    expected = params.get("expect", "found")
    found_all = all(delta is not None for delta in result.values())
    none_found = all(delta is None for delta in result.values())
    passed = found_all if expected == "found" else none_found
    return DiagnosticResult("umr", passed, ["eps", "delta"], rows)


def _diag_cesaro(ctx, params):
    table = convergence.cesaro_profile(ctx.gp, ctx.space, ctx.family)
    rows = [(n, value, table.disjoint) for n, value in table.rows]
    expect = params.get("expect")
    if expect and "final_below" in expect:
        passed = table.rows[-1][1] < float(expect["final_below"])
    else:
        passed = True
    return DiagnosticResult("cesaro", passed, ["n", "modular", "disjoint_flag"], rows)


def _diag_weak_convergence(ctx, params):
    f = (
        parse_fn(params["f"], ctx.space, "weak_convergence.f")
        if "f" in params
        else np.zeros(ctx.space.n_atoms)
    )
    report = convergence.weak_convergence_report(
        ctx.gp,
        ctx.space,
        ctx.family,
        f,
        lambda_grid=params.get("lambda_grid"),
        g=ctx.g,
        psi=ctx.psi if params.get("use_psi") else None,
        tol=params.get("tol", ctx.default_tol),
        flavor=params.get("flavor", "full"),
    )
    rows = []
    for row in report.set_integrals:
        rows.append((f"set_integral:{row.set_index}", row.set_index, row.last, "pass" if row.passed else "fail"))
    if report.criterion_profile is not None:
        for p, v, verdict in report.criterion_profile.rows():
            rows.append(("ando", p, v, verdict))
    expected = params.get("expect", "pass")
    passed = report.passed == (expected == "pass")
    return DiagnosticResult(
        "weak_convergence",
        passed,
        ["table", "parameter", "value", "verdict"],
        rows,
        report.summary().splitlines(),
    )


def _diag_coordinatewise(ctx, params):
    y = (
        parse_fn(params["y"], ctx.space, "coordinatewise.y")
        if "y" in params
        else np.zeros(ctx.space.n_atoms)
    )
    rows = convergence.coordinatewise_check(
        ctx.space, ctx.family, y, tol=params.get("tol", ctx.default_tol)
    )
    expected = params.get("expect", "pass")
    all_passed = all(r.passed for r in rows)
    passed = all_passed == (expected == "pass")
    return DiagnosticResult(
        "coordinatewise",
        passed,
        ["coordinate", "last_deviation", "passed"],
        [(r.coordinate, r.last_deviation, r.passed) for r in rows],
    )


def _diag_conjugate(ctx, params):
    x = float(params.get("x", ctx.space.labels[0]))
    u_grid = params.get("u_grid")
    if u_grid is None:
        u_grid = np.linspace(0.0, float(params.get("u_max", 10.0)), int(params.get("points", 101)))
    table = conjugate_table(ctx.gp, x, u_grid, method=params.get("method", "auto"))
    rows = [
        (u, v, a, int(flag))
        for u, v, a, flag in zip(table.u, table.values, table.argmax_t, table.truncated)
    ]
    return DiagnosticResult(
        "conjugate", True, ["u", "phi_star", "argmax_t", "truncated_flag"], rows,
        [f"method: {table.method}"],
    )


_DIAGNOSTICS = {
    "norm": _diag_norm,
    "modular": _diag_modular,
    "phi_probe": _diag_phi_probe,
    "properties": _diag_properties,
    "ando": _diag_ando,
    "equi": _diag_equi,
    "tail": _diag_tail,
    "exceedance": _diag_exceedance,
    "lemma_bound": _diag_lemma_bound,
    "dominating_psi": _diag_dominating_psi,
    "umr": _diag_umr,
    "cesaro": _diag_cesaro,
    "weak_convergence": _diag_weak_convergence,
    "coordinatewise": _diag_coordinatewise,
    "conjugate": _diag_conjugate,
}


class _Context:
    def __init__(self, space, gp, psi, family, g, default_tol):
        self.space = space
        self.gp = gp
        self.psi = psi
        self.family = family
        self.g = g
        self.default_tol = default_tol


def run_scenario(config_path: str, out_dir: str | None = None, tol: float | None = None,
                 seed: int | None = None) -> int:
    """Execute one scenario config; returns the process exit status."""
    try:
        with open(config_path) as handle:
            try:
                cfg = json.load(handle)
            except json.JSONDecodeError as exc:
                print(f"config error: {config_path}: line {exc.lineno}: {exc.msg}", file=sys.stderr)
                return 1
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        if cfg.get("schema") != SCHEMA_VERSION:
            raise ConfigurationError(
                f"schema: expected version {SCHEMA_VERSION}, got {cfg.get('schema')!r}"
            )
        name = cfg.get("name", os.path.splitext(os.path.basename(config_path))[0])
        space = parse_space(cfg.get("space", {}))
        gp = parse_phi(cfg.get("phi", {}), space)
        psi = parse_phi(cfg["psi"], space, "psi") if "psi" in cfg else None
        base_dir = os.path.dirname(os.path.abspath(config_path))
        family = parse_family(cfg.get("family", {}), space, gp, base_dir=base_dir,
                              seed_override=seed)
        g = parse_fn(cfg["g"], space, "g") if "g" in cfg else None
        diagnostics = cfg.get("diagnostics", [])
        if not diagnostics:
            raise ConfigurationError("diagnostics: at least one diagnostic is required")

        default_tol = tol if tol is not None else 1e-3
        ctx = _Context(space, gp, psi, family, g, default_tol)

        results = []
        for i, diag in enumerate(diagnostics):
            kind = diag.get("kind")
            if kind not in _DIAGNOSTICS:
                raise ConfigurationError(f"diagnostics[{i}]: unknown kind {kind!r}")
            results.append((i, _DIAGNOSTICS[kind](ctx, diag)))
    except OrliczError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    out = out_dir or cfg.get("out") or f"{name}_out"
    os.makedirs(out, exist_ok=True)

    report_lines = [
        f"scenario: {name}",
        f"space: {json.dumps(space.to_config(), sort_keys=True)}",
        f"family: {len(family)} members, max modular "
        f"{max(rho(gp, space, m) for m in family)!r}",
        "",
    ]
    all_passed = True
    for i, result in results:
        filename = f"{i:02d}_{result.kind}.csv"
        _write_atomic(os.path.join(out, filename), _csv_text(result.header, result.rows))
        for extra_name, text in result.extra_files.items():
            _write_atomic(os.path.join(out, f"{i:02d}_{extra_name}"), text)
        status = "PASS" if result.passed else "FAIL"
        all_passed = all_passed and result.passed
        report_lines.append(f"{status} {result.kind}")
        report_lines.extend(f"    {line}" for line in result.lines)
    report_lines.append("")
    report_lines.append("overall: " + ("PASS" if all_passed else "FAIL"))
    _write_atomic(os.path.join(out, "report.txt"), "\n".join(report_lines) + "\n")

    print("\n".join(report_lines))
    return 0 if all_passed else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="orlicz",
        description="Modular-space diagnostics: norms, conjugates, compactness profiles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario config")
    run.add_argument("config", help="path to a scenario JSON file")
    run.add_argument("--out", help="output directory (default: <name>_out)")
    run.add_argument("--tol", type=float, help="default tolerance for diagnostics")
    run.add_argument("--seed", type=int, help="override the family generator seed")

    sub.add_parser("list-generators", help="list the named family generators")

    args = parser.parse_args(argv)
    if args.command == "list-generators":
        print(list_generators())
        return 0
    return run_scenario(args.config, out_dir=args.out, tol=args.tol, seed=args.seed)


if __name__ == "__main__":
    sys.exit(main())
