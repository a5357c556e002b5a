"""The preproj command line: JSON on standard output, diagnostics on standard error."""

import argparse
import asyncio
import enum
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from affine_structure import SummandClass, decompose, pri_split, tube_partition
from exact_linalg import FieldSpec, IncompatibleFields, InvalidFieldSpec
from harness_cli.config import Config, InvalidSetting
from harness_cli.generators import GenSpec, Infeasible, Mode, RetriesExhausted, gen_nearly, random_weights
from harness_cli.serialization import (
    MalformedInstance,
    instance_from_json,
    instance_hash,
    instance_to_json,
    is_instance_json,
    load_json,
    parse_dims,
    quiver_from_arg,
    rep_from_json,
    weights_from_arg,
)
from quiver_core import DisconnectedQuiver, UnknownQuiver, VertexMismatch, affine_classify, weights_dot
from rep_core import BudgetExhausted, NotSimple, RelationClass, classify_relation, simplicity
from theorem_engine import (
    ExtensionRequired,
    PreconditionFailed,
    TheoremAssertionFailed,
    find_submodule_ext_split,
    nontrivial_submodule,
)

log = logging.getLogger("preproj.harness_cli")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))

THEOREM_MODES = [Mode.SOLVE_NEARLY, Mode.CONJUGATED_SUM, Mode.ELL_LIFT]


class ExitCode(enum.IntEnum):
    OK = 0
    NEGATIVE = 1
    USAGE = 2
    BUDGET = 3


@dataclass(frozen=True)
class TrialReport:
    index: int
    instance_hash: str | None
    classification: str | None
    provenance: str | None
    witness_dims: dict | None
    verified: bool
    elapsed_steps: int
    error: str | None = None

    def to_json(self) -> dict:
        out = {
            "trial": self.index,
            "instance_hash": self.instance_hash,
            "classification": self.classification,
            "provenance": self.provenance,
            "witness_dims": self.witness_dims,
            "verified": self.verified,
            "elapsed_steps": self.elapsed_steps,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def emit(obj) -> None:
    print(json.dumps(obj, ensure_ascii=False, sort_keys=True))


async def run_trials(trial_fn: Callable[[int, int], TrialReport], trials: int, seed: int, timeout: float) -> list:
    """Run trial_fn(index, seed + index) in worker threads; each trial gets `timeout` seconds.

    Threads cannot be interrupted: a timed-out trial is reported at once and its thread runs on until the search's
    own budget ends it. The pool is shut down without waiting, and trials still queued are cancelled.
    """
    loop = asyncio.get_running_loop()
    pool = ThreadPoolExecutor(thread_name_prefix="preproj-trial")

    async def one(i: int) -> TrialReport:
        try:
            return await asyncio.wait_for(loop.run_in_executor(pool, trial_fn, i, seed + i), timeout=timeout)
        except asyncio.TimeoutError:
            log.error(f"trial {i} timed out after {timeout}s")
            return TrialReport(i, None, None, None, None, False, 0, "timeout")

    try:
        reports = await asyncio.gather(*(one(i) for i in range(trials)))
    finally:
        pool.shutdown(wait=False, cancel_futures=True)
    return sorted(reports, key=lambda r: r.index)


# handlers


def _field(args) -> FieldSpec:
    return FieldSpec.parse(args.field)


def _instance(args):
    if not args.input:
        raise MalformedInstance("--input is required")
    return instance_from_json(load_json(args.input))


def _weights_and_vertex(args, inst):
    Q, F = inst.pair.base_quiver, inst.pair.field
    lam = weights_from_arg(args.lambda_, Q, F) if args.lambda_ else inst.lam
    if lam is None:
        lam = {u: F.zero() for u in Q.vertices}
    vertex = args.vertex or inst.vertex or Q.vertices[0]
    return lam, str(vertex)


def cmd_quiver_info(args, config: Config) -> int:
    Q = quiver_from_arg(args.quiver)
    emit({"quiver": Q.to_json(), **affine_classify(Q).to_json()})
    return ExitCode.OK


def cmd_rep_check(args, config: Config) -> int:
    inst = _instance(args)
    lam, vertex = _weights_and_vertex(args, inst)
    report = classify_relation(inst.pair, lam, vertex)
    emit(
        {
            "classification": report.classification.value,
            "ranks": report.defect.ranks,
            "weight_pairing": inst.pair.field.encode(report.weight_pairing),
            "vertex": vertex,
        }
    )
    return ExitCode.NEGATIVE if report.classification is RelationClass.NEITHER else ExitCode.OK


def cmd_rep_decompose(args, config: Config) -> int:
    obj = load_json(args.input)
    X = instance_from_json(obj).pair.X if is_instance_json(obj) else rep_from_json(obj)
    D = decompose(X, seed=config.get("seed"), budget=config.budget())
    out = {}
    try:
        aff = affine_classify(X.quiver)
    except DisconnectedQuiver:
        aff = None
    if aff is not None and aff.is_affine:
        D = pri_split(X.quiver, aff, D)
        regular = D.indices(SummandClass.REGULAR)
        partition = tube_partition([D.summands[k] for k in regular])
        out["tubes"] = [[regular[i] for i in group] for group in partition.groups]
    out.update(D.to_json())
    emit(out)
    return ExitCode.OK


def cmd_rep_submodule(args, config: Config) -> int:
    inst = _instance(args)
    R = inst.pair
    lam, vertex = _weights_and_vertex(args, inst)
    aff = affine_classify(R.base_quiver)
    seed, budget = config.get("seed"), config.budget()
    if aff.is_affine and weights_dot({u: R.field.scalar(lam[u]) for u in lam}, aff.delta) != 0:
        witness = find_submodule_ext_split(R, lam, aff, seed)
    else:
        witness = nontrivial_submodule(R, lam, vertex, budget, seed)
    verified = witness.verify()
    emit({"instance_hash": instance_hash(instance_to_json(R, lam, vertex)), "verified": verified, **witness.to_json()})
    return ExitCode.OK if verified else ExitCode.NEGATIVE


def cmd_rep_simplicity(args, config: Config) -> int:
    inst = _instance(args)
    result = simplicity(inst.pair.rep, config.budget(), config.get("seed"), args.method)
    if isinstance(result, NotSimple):
        emit({"simple": False, "witness_dims": result.witness.dims})
    else:
        cert = result.certificate
        certificate = {"method": cert.method, "spun": cert.spun, "factor_degree": cert.factor_degree}
        emit({"simple": True, "certificate": certificate})
    return ExitCode.OK


def _gen_spec(args, config: Config, seed: int, mode: Mode) -> GenSpec:
    Q = quiver_from_arg(args.quiver)
    F = _field(args)
    lam = weights_from_arg(args.lambda_, Q, F) if args.lambda_ else None
    retries = config.get("retries")
    if args.dims:
        dims = parse_dims(args.dims, Q)
        vertex = args.vertex or Q.vertices[0]
        if lam is None:
            lam = {u: F.zero() for u in Q.vertices}
            if F.scalar(dims[str(vertex)]) != 0:
                lam = random_weights(Q, F, dims, str(vertex), np.random.default_rng(seed))
        return GenSpec(Q, vertex, lam, dims, F, seed, mode, retries)
    return GenSpec.multiple_of_delta(Q, F, args.m, seed=seed, mode=mode, vertex=args.vertex, lam=lam, retries=retries)


def cmd_gen_nearly(args, config: Config) -> int:
    seed = config.get("seed")
    spec = _gen_spec(args, config, seed, Mode(args.mode or Mode.SOLVE_NEARLY.value))
    R = gen_nearly(spec)
    instance = instance_to_json(R, spec.weights, spec.vertex)
    report = classify_relation(R, spec.weights, spec.vertex)
    emit(
        {
            "spec": spec.to_json(),
            "instance": instance,
            "instance_hash": instance_hash(instance),
            "classification": report.classification.value,
        }
    )
    return ExitCode.OK


def _theorem_trial(args, config: Config) -> Callable[[int, int], TrialReport]:
    budget = config.budget()

    def trial(index: int, seed: int) -> TrialReport:
        mode = Mode(args.mode) if args.mode else THEOREM_MODES[index % len(THEOREM_MODES)]
        try:
            spec = _gen_spec(args, config, seed, mode)
            R = gen_nearly(spec)
        except (Infeasible, RetriesExhausted) as e:
            return TrialReport(index, None, None, None, None, False, 0, f"{type(e).__name__}: {e}")
        digest = instance_hash(instance_to_json(R, spec.weights, spec.vertex))
        classification = classify_relation(R, spec.weights, spec.vertex).classification.value
        try:
            witness = nontrivial_submodule(R, spec.weights, spec.vertex, budget, seed)
        except (BudgetExhausted, ExtensionRequired, PreconditionFailed, TheoremAssertionFailed) as e:
            log.error(f"trial {index}: {e}")
            return TrialReport(index, digest, classification, None, None, False, 0, f"{type(e).__name__}: {e}")
        steps = 1 + len(witness.trail)
        log.debug(f"trial {index}: {witness.provenance.value} {steps=}")
        return TrialReport(
            index, digest, classification, witness.provenance.value, witness.dims, witness.verify(), steps
        )

    return trial


def cmd_theorem_verify(args, config: Config) -> int:
    trials, seed = config.get("trials"), config.get("seed")
    reports = asyncio.run(run_trials(_theorem_trial(args, config), trials, seed, config.get("timeout")))
    verified = sum(r.verified for r in reports)
    emit({"trials": [r.to_json() for r in reports], "verified": verified, "total": len(reports)})
    if any(r.error and r.error.startswith(BudgetExhausted.__name__) for r in reports):
        return ExitCode.BUDGET
    return ExitCode.OK if verified == len(reports) else ExitCode.NEGATIVE


def cmd_selftest(args, config: Config) -> int:
    from harness_cli import selftest

    results = selftest.run(config.get("seed"))
    emit({"checks": results, "passed": sum(r["passed"] for r in results), "total": len(results)})
    return ExitCode.OK if all(r["passed"] for r in results) else ExitCode.NEGATIVE


# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", default="kronecker", help="named quiver (jordan, cycle:n, ...) or a JSON file")
    common.add_argument("--vertex", default=None)
    common.add_argument("--lambda", dest="lambda_", default=None, help='JSON object or list, or "i=val,..."')
    common.add_argument("--m", type=int, default=2, help="multiple of delta")
    common.add_argument("--dims", default=None, help='JSON object or list, or "i=d,..."')
    common.add_argument("--field", default="gf:5", help='"q", "gf:p" or "gf:p^k"')
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--budget", type=int, default=None, help="random elements tried by the simplicity search")
    common.add_argument("--retries", type=int, default=None)
    common.add_argument("--timeout", type=float, default=None, help="seconds per trial")
    common.add_argument("--mode", choices=[m.value for m in Mode], default=None)
    common.add_argument("--method", choices=["auto", "randomized", "exhaustive"], default="auto")
    common.add_argument("--input", default=None, help="instance JSON file")

    parser = argparse.ArgumentParser(prog="preproj", description="Deformed preprojective algebra tooling.")
    groups = parser.add_subparsers(dest="group", required=True)

    def command(group, name: str, handler, help_text: str):
        sub = group.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    quiver = groups.add_parser("quiver").add_subparsers(dest="command", required=True)
    command(quiver, "info", cmd_quiver_info, "affine type, delta and extending vertices")

    rep = groups.add_parser("rep").add_subparsers(dest="command", required=True)
    command(rep, "check", cmd_rep_check, "classify an instance as module, nearly or neither")
    command(rep, "decompose", cmd_rep_decompose, "indecomposable summands and tubes")
    command(rep, "submodule", cmd_rep_submodule, "a verified proper submodule")
    command(rep, "simplicity", cmd_rep_simplicity, "certified simplicity verdict")

    gen = groups.add_parser("gen").add_subparsers(dest="command", required=True)
    command(gen, "nearly", cmd_gen_nearly, "generate a nearly representation")

    theorem = groups.add_parser("theorem").add_subparsers(dest="command", required=True)
    command(theorem, "verify", cmd_theorem_verify, "generate instances and find verified submodules")

    sub = groups.add_parser("selftest", parents=[common], help="run the embedded invariant suite")
    sub.set_defaults(handler=cmd_selftest)
    return parser


def main(argv: list | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else ExitCode.USAGE

    config = Config.get_conf()
    try:
        config.override(
            seed=args.seed,
            trials=args.trials,
            random_elements=args.budget,
            retries=args.retries,
            timeout=args.timeout,
        )
        return int(args.handler(args, config))
    except (PreconditionFailed, Infeasible) as e:
        emit({"error": type(e).__name__, "detail": str(e)})
        return ExitCode.NEGATIVE
    except ExtensionRequired as e:
        poly = [e.field.encode(c) for c in e.minimal_polynomial]
        emit({"error": type(e).__name__, "detail": str(e), "minimal_polynomial": poly})
        return ExitCode.NEGATIVE
    except (BudgetExhausted, RetriesExhausted) as e:
        emit({"error": type(e).__name__, "detail": str(e)})
        return ExitCode.BUDGET
    except (
        MalformedInstance,
        InvalidFieldSpec,
        IncompatibleFields,
        InvalidSetting,
        UnknownQuiver,
        VertexMismatch,
        DisconnectedQuiver,
        OSError,
        json.JSONDecodeError,
    ) as e:
        print(f"preproj: {e}", file=sys.stderr)
        return ExitCode.USAGE


if __name__ == "__main__":
    sys.exit(main())
