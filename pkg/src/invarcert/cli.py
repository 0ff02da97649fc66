"""Batch front-end: certify / simulate / epsilon / feasibility.

Exit codes: 0 success (certified, or analysis passed), 2 infeasible /
failed analysis, 1 configuration or runtime error.  Reports are JSON with
sorted keys and no timestamps, so identical configs and seeds reproduce
byte-identical output.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import closed_loop, feasibility, geometry, scenario
from .certificate import build_certificate, epsilon_even_split, epsilon_table
from .config import ConfigError, ProblemConfig, load_config
from .errors import InvarcertError
from .system_family import spectral_radius_estimate

SCHEMA_VERSION = 1


class MissingPolicy(InvarcertError):
    pass


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_report(payload: dict, out_dir, name: str) -> None:
    text = _dump(payload)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, name), "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _system_summary(config: ProblemConfig) -> dict:
    family = config.family
    A, _ = family.instantiate(family.nominal_delta)
    return {
        "kind": type(family).__name__,
        "n": family.n,
        "m": family.m,
        "ell": family.ell,
        "nominal_spectral_radius": spectral_radius_estimate(A),
    }


def _policy_payload(policy: scenario.AffinePolicy) -> dict:
    return {
        "gains": policy.gains.tolist(),
        "offsets": policy.offsets.tolist(),
        "fingerprint": policy.fingerprint,
        "scenario_fingerprint": policy.scenario_fingerprint,
    }


def _witness_payload(w: feasibility.MinorWitness) -> dict:
    return {
        "vertex": w.vertex,
        "sample": w.sample,
        "input_rows": list(w.input_rows),
        "image_rows": list(w.image_rows),
        "point": w.point.tolist(),
    }


def run_certify(
    config: ProblemConfig,
    *,
    analyze: bool = False,
    estimate: int | None = None,
    beta: float | None = None,
) -> tuple[int, dict]:
    """certify pipeline: policy -> support subsample -> certificate.

    Returns (exit_code, report).
    """
    beta = config.beta if beta is None else beta
    family, S, U = config.family, config.state_set, config.input_set
    scen = config.scenarios
    report = {
        "schema": SCHEMA_VERSION,
        "command": "certify",
        "beta": beta,
        "system": _system_summary(config),
        "scenarios": {
            "K": scen.K,
            "ell": scen.ell,
            "seed": scen.seed,
            "fingerprint": scen.fingerprint,
        },
    }

    try:
        policy = scenario.solve_affine_policy(family, S, U, scen)
    except scenario.Infeasible as exc:
        report["status"] = "infeasible"
        report["first_violation"] = {
            "sample": exc.sample,
            "vertex": exc.vertex,
            "row": exc.row,
        }
        if analyze:
            check = feasibility.multisample_necessary(family, S, U, scen)
            report["feasibility_analysis"] = {
                "passed": check.passed,
                "first_failure": (
                    None
                    if check.first_failure is None
                    else {
                        "vertex": check.first_failure[0],
                        "sample": check.first_failure[1],
                    }
                ),
            }
        return 2, report

    support = scenario.greedy_support_subsample(family, S, U, scen)
    cert = build_certificate(scen.K, len(support), beta, policy, scen)
    report["status"] = "certified"
    report["policy"] = _policy_payload(policy)
    report["support"] = {"indices": support, "s_K": len(support)}
    report["certificate"] = cert.to_dict()

    if estimate is not None:
        est = closed_loop.estimate_violation(
            family,
            S,
            U,
            policy,
            scen.distribution,
            M=estimate,
            seed=int(config.options.get("estimate_seed", 0)),
        )
        report["violation_estimate"] = {
            "M": est.sample_count,
            "seed": est.seed,
            "v_hat": est.v_hat,
            "std_error": est.std_error,
            "failure_count": len(est.failures),
        }
    if analyze:
        check = feasibility.multisample_necessary(family, S, U, scen)
        report["feasibility_analysis"] = {
            "passed": check.passed,
            "first_failure": None,
        }
    return 0, report


def _load_policy(path) -> scenario.AffinePolicy:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise MissingPolicy(f"cannot read policy file: {exc}") from exc
    if "policy" in payload:
        payload = payload["policy"]
    if "gains" not in payload or "offsets" not in payload:
        raise MissingPolicy("policy file needs 'gains' and 'offsets'")
    return scenario.AffinePolicy(
        gains=np.asarray(payload["gains"], dtype=float),
        offsets=np.asarray(payload["offsets"], dtype=float),
        scenario_fingerprint=payload.get("scenario_fingerprint"),
    )


def _initial_states(spec: str, S: geometry.Polytope, seed: int) -> np.ndarray:
    if spec == "vertices":
        return np.array(S.vertices, dtype=float)
    if spec.startswith("random:"):
        count = int(spec.split(":", 1)[1])
        rng = np.random.default_rng(seed)
        # random interior points as convex recombinations of the vertices
        weights = rng.dirichlet(np.ones(S.vertex_count), size=count)
        shrink = rng.uniform(0.0, 1.0, size=(count, 1))
        return (weights @ S.vertices) * shrink
    raise ConfigError(f"unknown --init spec '{spec}' (use vertices or random:N)")


def run_simulate(
    config: ProblemConfig,
    policy: scenario.AffinePolicy,
    *,
    sample=None,
    init: str = "vertices",
    horizon: int = closed_loop.DEFAULT_HORIZON,
    seed: int = 0,
    out_dir=None,
) -> tuple[int, dict]:
    """simulate pipeline: trajectories + gauge summary for one parameter."""
    family, S = config.family, config.state_set
    delta = family.nominal_delta if sample is None else np.asarray(sample, dtype=float)
    starts = _initial_states(init, S, seed)
    summary = []
    for idx, x0 in enumerate(starts):
        traj = closed_loop.simulate_closed_loop(
            family, delta, S, policy, x0, T=horizon
        )
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
            closed_loop.write_trajectory_csv(
                os.path.join(out_dir, f"trajectory_{idx:04d}.csv"), traj
            )
        summary.append(
            {
                "trajectory": idx,
                "max_gauge": traj.max_gauge,
                "first_exit": traj.first_exit,
            }
        )
    report = {
        "schema": SCHEMA_VERSION,
        "command": "simulate",
        "delta": [float(v) for v in delta],
        "horizon": horizon,
        "init": init,
        "seed": seed,
        "trajectories": summary,
        "max_gauge_overall": max(row["max_gauge"] for row in summary),
    }
    return 0, report


def run_feasibility(
    config: ProblemConfig, *, sample: int | None = None, witnesses: bool = False
) -> tuple[int, dict]:
    family, S, U = config.family, config.state_set, config.input_set
    report = {"schema": SCHEMA_VERSION, "command": "feasibility"}
    if sample is not None:
        result = feasibility.single_sample_iff(
            family, S, U, config.scenarios.samples[sample], sample_index=sample
        )
        report["sample"] = sample
        report["feasible"] = result.feasible
        report["failed_vertex"] = result.failed_vertex
        if witnesses and result.feasible:
            report["feasibility_analysis"] = {
                "witnesses": [_witness_payload(w) for w in result.witnesses]
            }
        return (0 if result.feasible else 2), report
    result = feasibility.multisample_necessary(family, S, U, config.scenarios)
    report["passed"] = result.passed
    report["first_failure"] = (
        None
        if result.first_failure is None
        else {"vertex": result.first_failure[0], "sample": result.first_failure[1]}
    )
    return (0 if result.passed else 2), report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invarcert",
        description=(
            "Probabilistic controlled-invariance certification for sampled "
            "uncertain linear systems."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cert = sub.add_parser("certify", help="synthesize a policy and certify it")
    cert.add_argument("--config", required=True, help="problem config (JSON)")
    cert.add_argument(
        "--analyze",
        action="store_true",
        help="run the minor-enumeration feasibility analysis as well",
    )
    cert.add_argument(
        "--estimate",
        type=int,
        metavar="M",
        help="Monte Carlo violation estimate with M fresh samples",
    )
    cert.add_argument("--beta", type=float, help="override the config confidence level")
    cert.add_argument("--out", help="directory for report.json")

    sim = sub.add_parser("simulate", help="closed-loop vertex-law simulation")
    sim.add_argument("--config", required=True)
    sim.add_argument("--policy", required=True, help="policy JSON (or certify report)")
    group = sim.add_mutually_exclusive_group()
    group.add_argument("--sample", help="comma-separated parameter vector")
    group.add_argument(
        "--nominal", action="store_true", help="simulate at the nominal parameter"
    )
    sim.add_argument(
        "--init",
        default="vertices",
        help="initial states: 'vertices' or 'random:N' (default vertices)",
    )
    sim.add_argument("--horizon", type=int, default=closed_loop.DEFAULT_HORIZON)
    sim.add_argument("--seed", type=int, default=0, help="seed for random:N inits")
    sim.add_argument("--out", help="directory for trajectory CSVs + summary")

    eps = sub.add_parser("epsilon", help="evaluate the violation-level function")
    eps.add_argument("--K", type=int, required=True)
    eps.add_argument("--beta", type=float, required=True)
    group = eps.add_mutually_exclusive_group(required=True)
    group.add_argument("--h", type=int, help="support subsample size")
    group.add_argument(
        "--table", action="store_true", help="dump the whole h -> epsilon curve as CSV"
    )

    feas = sub.add_parser("feasibility", help="minor-enumeration feasibility check")
    feas.add_argument("--config", required=True)
    feas.add_argument("--sample", type=int, help="check a single sample index")
    feas.add_argument(
        "--witnesses", action="store_true", help="include minor witnesses in the report"
    )
    feas.add_argument("--out", help="directory for report.json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "certify":
            config = load_config(args.config)
            code, report = run_certify(
                config,
                analyze=args.analyze,
                estimate=args.estimate,
                beta=args.beta,
            )
            _write_report(report, args.out, "report.json")
            return code
        if args.command == "simulate":
            config = load_config(args.config)
            policy = _load_policy(args.policy)
            sample = None
            if args.sample:
                sample = [float(tok) for tok in args.sample.split(",")]
            code, report = run_simulate(
                config,
                policy,
                sample=sample,
                init=args.init,
                horizon=args.horizon,
                seed=args.seed,
                out_dir=args.out,
            )
            _write_report(report, args.out, "summary.json")
            return code
        if args.command == "epsilon":
            if args.table:
                sys.stdout.write("h,epsilon\n")
                for h, eps in enumerate(epsilon_table(args.K, args.beta)):
                    sys.stdout.write(f"{h},{eps!r}\n")
            else:
                eps = epsilon_even_split(args.h, args.K, args.beta)
                _write_report(
                    {
                        "K": args.K,
                        "beta": args.beta,
                        "h": args.h,
                        "epsilon": eps,
                        "invariance_probability": 1.0 - eps,
                    },
                    None,
                    "epsilon.json",
                )
            return 0
        if args.command == "feasibility":
            config = load_config(args.config)
            code, report = run_feasibility(
                config, sample=args.sample, witnesses=args.witnesses
            )
            _write_report(report, args.out, "report.json")
            return code
        parser.error(f"unknown command {args.command}")  # pragma: no cover
    except (InvarcertError, OSError, json.JSONDecodeError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
