"""Batch front-end: parse a JSON config, run a named pipeline, emit reports.

Subcommands
-----------
schedule   emit a power schedule table for one of the three schedule rules
build      build a generator and emit its summary (term count, tail bound,
           exponent range)
verify     run a full verification pipeline (kind l2n | localized | l2r);
           writes table.csv and report.json into --out
gabor      the l2r pipeline driven by a Gabor window spec
scenario   run a named verification scenario

Exit codes: 0 when every check passed, 1 when some bound failed, 2 on a
config or precondition error (the offending field is named).

CSV columns
-----------
schedule:  k, alpha_k, gap, rule
l2n:       k, alpha_k, gap, measured, residual_bound, budget_eps_2k, pass
localized: k, alpha_k, gap, measured, bound_shift_part, bound_leak_part,
           residual_bound, budget_eps_2k, pass
l2r/gabor: branch, k, alpha_k, gap, measured, residual_bound,
           budget_eps_2k, pass

``measured`` is a squared norm except for the localized kind, where it is
a norm and the budget applies to its square.  All floating-point cells
carry 17 significant digits; identical configs produce byte-identical
outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .errors import PreconditionError, SuborbitError
from .finite_support import (
    PowerSchedule,
    Sqrt2Config,
    build_generator,
    schedule_finite_support,
    schedule_sqrt2,
    support_profile,
    verify_finite_support,
)
from .localized import (
    build_generator_localized,
    exponential_profile_family,
    schedule_localized,
    verify_localized,
)
from .frames import empirical_frame_bounds
from .reporting import VerificationTable, dump_json, format_cell, write_report
from .scenarios import scenario_suborbit_independence, scenario_two_orbit_example
from .two_operator import GaborSpec, verify_two_operator
from .vectors import (
    CoordinateVector,
    FrameFamily,
    SampledFunction,
    canonical_basis_family,
)


class _Cfg:
    """Thin config accessor that names the offending field on errors."""

    def __init__(self, data: dict, prefix: str = ""):
        if not isinstance(data, dict):
            raise PreconditionError(prefix or "config", "expected a JSON object")
        self.data = data
        self.prefix = prefix

    def _name(self, key: str) -> str:
        return f"{self.prefix}.{key}" if self.prefix else key

    def require(self, key: str):
        if key not in self.data:
            raise PreconditionError(self._name(key), "missing required field")
        return self.data[key]

    def get(self, key: str, default=None):
        return self.data.get(key, default)

    def number(self, key: str, default=None, required: bool = False) -> float | None:
        if key not in self.data:
            if required:
                raise PreconditionError(self._name(key), "missing required field")
            return default
        value = self.data[key]
        if key == "lambda" and value == "sqrt2":
            return math.sqrt(2.0)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise PreconditionError(self._name(key), f"expected a number, got {value!r}")
        return float(value)

    def sub(self, key: str, required: bool = False) -> "_Cfg | None":
        if key not in self.data:
            if required:
                raise PreconditionError(self._name(key), "missing required field")
            return None
        return _Cfg(self.data[key], self._name(key))


def _load_config(path: str) -> _Cfg:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PreconditionError("config", f"cannot read {path}: {exc}")
    try:
        return _Cfg(json.loads(text))
    except json.JSONDecodeError as exc:
        raise PreconditionError("config", f"malformed JSON in {path}: {exc}")


def _family_from_config(cfg: _Cfg) -> FrameFamily:
    kind = cfg.require("type")
    if kind == "onb":
        size = int(cfg.number("size", required=True))
        return canonical_basis_family(size)
    if kind == "exponential":
        return exponential_profile_family(
            beta=cfg.number("beta", required=True),
            size=int(cfg.number("size", required=True)),
            C=cfg.number("C", 1.0),
            trunc_tol=cfg.number("trunc_tol", 1e-14),
        )
    if kind == "explicit":
        elements = cfg.require("elements")
        vecs = tuple(CoordinateVector.from_json(e) for e in elements)
        return FrameFamily(vecs, cfg.number("A"), cfg.number("B"))
    if kind == "explicit_functions":
        elements = cfg.require("elements")
        funcs = tuple(SampledFunction.from_json(e) for e in elements)
        return FrameFamily(funcs, cfg.number("A"), cfg.number("B"))
    raise PreconditionError("family.type", f"unknown family type {kind!r}")


def _schedule_from_config(cfg: _Cfg, m: list[int], lam: float, upper: float,
                          eps: float, count: int) -> PowerSchedule:
    rule = cfg.require("rule")
    if rule == "finite-support":
        return schedule_finite_support(m, lam, upper, eps, count)
    if rule == "sqrt2":
        sq = Sqrt2Config(N=int(cfg.number("N", required=True)),
                         j=int(cfg.number("j", required=True)))
        return schedule_sqrt2(m, sq, bool(cfg.get("restricted", False)), count)
    raise PreconditionError("schedule.rule", f"unknown rule {rule!r}")


def _resolve_eps(cfg: _Cfg, family: FrameFamily, count: int) -> float:
    eps = cfg.number("epsilon")
    if eps is not None:
        return eps
    rel = cfg.number("epsilon_rel")
    if rel is None:
        raise PreconditionError("epsilon", "missing required field (or epsilon_rel)")
    section = FrameFamily(family.elements[:count])
    a_emp, _ = empirical_frame_bounds(section)
    return rel * a_emp


def _gabor_spec_from_config(cfg: _Cfg) -> GaborSpec:
    window = SampledFunction.from_json(cfg.require("window"))
    return GaborSpec(
        window=window,
        a=cfg.number("a", required=True),
        b=cfg.number("b", required=True),
        m_range=int(cfg.number("m_range", required=True)),
        n_range=int(cfg.number("n_range", required=True)),
        support_length=cfg.number("C"),
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_schedule(args) -> int:
    count = args.K
    m = [int(x) for x in args.m.split(",")] if args.m else []
    if count is None:
        if not m:
            raise PreconditionError("K", "give --K or --m to fix the table length")
        count = len(m)
    if args.rule == "finite-support":
        for name, val in (("lambda", args.lam), ("B", args.B), ("eps", args.eps)):
            if val is None:
                raise PreconditionError(name, "missing required flag")
        sched = schedule_finite_support(m, args.lam, args.B, args.eps, count + 1)
        rule = "finite-support"
    elif args.rule == "sqrt2":
        if args.N is None or args.j is None:
            raise PreconditionError("N", "the sqrt2 rule needs --N and --j")
        sched = schedule_sqrt2(m, Sqrt2Config(args.N, args.j), args.restricted, count + 1)
        rule = "sqrt2-restricted" if args.restricted else "sqrt2"
    else:
        for name, val in (("lambda", args.lam), ("B", args.B), ("eps", args.eps),
                          ("C", args.C), ("beta", args.beta)):
            if val is None:
                raise PreconditionError(name, "missing required flag")
        sched = schedule_localized(args.C, args.beta, args.lam, args.B, args.eps, count + 1)
        rule = "localized"
    table = VerificationTable(("k", "alpha_k", "gap", "rule"))
    for k in range(1, count + 1):
        table.add_row(k=k, alpha_k=sched.alpha(k), gap=sched.gap(k), rule=rule)
    sys.stdout.write(table.to_csv())
    if args.out:
        write_report(args.out, table, {"rule": rule, "alphas": [format_cell(a) for a in sched.alphas]})
    return 0


def _generator_summary(gen, sched: PowerSchedule) -> dict:
    lo, hi = gen.exponent_range()
    return {
        "n_terms": gen.n_terms,
        "tail_bound": gen.tail_bound,
        "lambda_exponent_min": format_cell(lo),
        "lambda_exponent_max": format_cell(hi),
        "skipped_terms": list(gen.skipped),
        "alphas": [format_cell(a) for a in sched.alphas],
    }


def _cmd_build(args) -> int:
    cfg = _load_config(args.config)
    kind = cfg.get("kind", "l2n")
    lam = cfg.number("lambda", required=True)
    family = _family_from_config(cfg.sub("family", required=True))
    count = int(cfg.number("K", len(family)))
    eps = _resolve_eps(cfg, family, count)
    upper = cfg.number("B")
    if upper is None:
        upper = family.declared_upper or empirical_frame_bounds(family)[1]
    n_terms = cfg.number("n_terms")
    n_terms = int(n_terms) if n_terms is not None else None
    size = len(family)
    need = max(count, n_terms or size) + 1
    if kind == "l2n":
        sched_cfg = cfg.sub("schedule")
        m = support_profile(family)
        if sched_cfg is None:
            sched = schedule_finite_support(m, lam, upper, eps, need)
        else:
            sched = _schedule_from_config(sched_cfg, m, lam, upper, eps, need)
        gen = build_generator(family, sched, lam, n_terms=n_terms, upper=upper)
    elif kind == "localized":
        c_const = cfg.number("C", required=True)
        beta = cfg.number("beta", required=True)
        sched = schedule_localized(c_const, beta, lam, upper, eps, need)
        gen = build_generator_localized(family, sched, lam, n_terms=n_terms, upper=upper)
    else:
        raise PreconditionError("kind", f"build supports l2n and localized, got {kind!r}")
    summary = {"kind": kind, **_generator_summary(gen, sched)}
    sys.stdout.write(dump_json(summary))
    if args.out:
        write_report(args.out, None, summary)
    return 0


def _run_verify(kind: str, cfg: _Cfg):
    lam = cfg.number("lambda", required=True)
    if kind == "l2n":
        family = _family_from_config(cfg.sub("family", required=True))
        count = int(cfg.number("K", len(family)))
        eps = _resolve_eps(cfg, family, count)
        upper = cfg.number("B")
        n_terms = cfg.number("n_terms")
        sched = None
        sched_cfg = cfg.sub("schedule")
        if sched_cfg is not None:
            m = support_profile(family)
            used_upper = upper or family.declared_upper or empirical_frame_bounds(family)[1]
            size = len(family)
            need = max(count, int(n_terms) if n_terms else size) + 1
            sched = _schedule_from_config(sched_cfg, m, lam, used_upper, eps, need)
        return verify_finite_support(
            family, lam, eps, upper=upper, count=count,
            n_terms=int(n_terms) if n_terms is not None else None, sched=sched,
        )
    if kind == "localized":
        family = _family_from_config(cfg.sub("family", required=True))
        count = int(cfg.number("K", len(family)))
        eps = _resolve_eps(cfg, family, count)
        fam_cfg = cfg.sub("family")
        trunc_tol = cfg.number("trunc_tol")
        if trunc_tol is None and fam_cfg.get("type") == "exponential":
            trunc_tol = fam_cfg.number("trunc_tol", 1e-14)
        n_terms = cfg.number("n_terms")
        return verify_localized(
            family, lam,
            C=cfg.number("C", required=True),
            beta=cfg.number("beta", required=True),
            eps=eps,
            upper=cfg.number("B"),
            count=count,
            n_terms=int(n_terms) if n_terms is not None else None,
            trunc_tol=trunc_tol,
        )
    if kind == "l2r":
        gabor_cfg = cfg.sub("gabor")
        if gabor_cfg is not None:
            source = _gabor_spec_from_config(gabor_cfg)
        else:
            source = _family_from_config(cfg.sub("family", required=True))
        count = cfg.number("K")
        n_terms = cfg.number("n_terms")
        n_big = cfg.number("N")
        j = cfg.number("j")
        return verify_two_operator(
            source, lam,
            eps=cfg.number("epsilon", required=True),
            upper=cfg.number("B"),
            count=int(count) if count is not None else None,
            n_terms=int(n_terms) if n_terms is not None else None,
            N=int(n_big) if n_big is not None else None,
            j=int(j) if j is not None else None,
        )
    raise PreconditionError("kind", f"unknown pipeline kind {kind!r}")


def _emit_outcome(outcome, out_dir) -> int:
    for key in ("section_size", "section_size_per_branch"):
        if key in outcome.section:
            sys.stdout.write(f"section: {outcome.section[key]}\n")
    for row in outcome.table.rows:
        cells = " ".join(f"{c}={format_cell(row[c])}" for c in outcome.table.columns)
        sys.stdout.write(cells + "\n")
    sys.stdout.write(f"all_bounds_hold={format_cell(outcome.report.all_bounds_hold)}\n")
    sys.stdout.write(f"result={'pass' if outcome.all_passed else 'fail'}\n")
    if out_dir:
        write_report(out_dir, outcome.table, outcome.report.to_json())
    return 0 if outcome.all_passed else 1


def _cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    declared = cfg.get("kind")
    if declared is not None and declared != args.kind:
        raise PreconditionError("kind", f"config says {declared!r} but --kind is {args.kind!r}")
    outcome = _run_verify(args.kind, cfg)
    return _emit_outcome(outcome, args.out)


def _cmd_gabor(args) -> int:
    cfg = _load_config(args.config)
    gabor_cfg = cfg.sub("gabor", required=True)
    source = _gabor_spec_from_config(gabor_cfg)
    count = cfg.number("K")
    n_terms = cfg.number("n_terms")
    n_big = cfg.number("N")
    j = cfg.number("j")
    outcome = verify_two_operator(
        source,
        cfg.number("lambda", required=True),
        eps=cfg.number("epsilon", required=True),
        upper=cfg.number("B"),
        count=int(count) if count is not None else None,
        n_terms=int(n_terms) if n_terms is not None else None,
        N=int(n_big) if n_big is not None else None,
        j=int(j) if j is not None else None,
    )
    return _emit_outcome(outcome, args.out)


def _cmd_scenario(args) -> int:
    cfg = _load_config(args.config)
    name = cfg.require("scenario")
    if name == "two_orbit":
        report = scenario_two_orbit_example(
            dim=int(cfg.number("D", required=True)),
            seed=int(cfg.number("seed", 0)),
            trials=int(cfg.number("trials", 100)),
        )
    elif name == "suborbit_independence":
        build_cfg = cfg.sub("construction", required=True)
        kind = build_cfg.get("kind", "l2n")
        outcome = _run_verify(kind, build_cfg)
        report = scenario_suborbit_independence(
            outcome.suborbit,
            threshold=cfg.number("threshold", 1e-10),
            label=kind,
        )
    else:
        raise PreconditionError("scenario", f"unknown scenario {name!r}")
    sys.stdout.write(dump_json(report))
    if args.out:
        write_report(args.out, None, report)
    return 0 if all(c["pass"] for c in report["checks"]) else 1


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="suborbit", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("schedule", help="emit a power schedule table")
    sp.add_argument("--rule", required=True,
                    choices=("finite-support", "sqrt2", "localized"))
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--B", type=float)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--m", help="comma-separated support sizes m(1),m(2),...")
    sp.add_argument("--K", type=int)
    sp.add_argument("--N", type=int)
    sp.add_argument("--j", type=int)
    sp.add_argument("--restricted", action="store_true")
    sp.add_argument("--C", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_schedule)

    bp = sub.add_parser("build", help="build a generator and print its summary")
    bp.add_argument("--config", required=True)
    bp.add_argument("--out")
    bp.set_defaults(func=_cmd_build)

    vp = sub.add_parser("verify", help="run a verification pipeline")
    vp.add_argument("--kind", required=True, choices=("l2n", "localized", "l2r"))
    vp.add_argument("--config", required=True)
    vp.add_argument("--out")
    vp.set_defaults(func=_cmd_verify)

    gp = sub.add_parser("gabor", help="run the Gabor pipeline")
    gp.add_argument("--config", required=True)
    gp.add_argument("--out")
    gp.set_defaults(func=_cmd_gabor)

    cp = sub.add_parser("scenario", help="run a named scenario")
    cp.add_argument("--config", required=True)
    cp.add_argument("--out")
    cp.set_defaults(func=_cmd_scenario)
    return p


def run(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SuborbitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
