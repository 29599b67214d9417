"""Command-line front end.

Subcommands: ``measure`` (score a state file), ``le`` (run the localizable
entanglement ascent), ``protocol`` (evaluate a protocol file), ``reproduce``
(the locked-state comparison table), ``properties`` (seeded invariant
suites), ``emit`` (write catalog states to the JSON format).

Exit codes: 0 ok, 1 property violation, 2 parse error, 3 dimension error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .catalog import build_locked_state, canonical_state
from .localize import LEConfig, average_root_entanglement, optimize_le
from .measures import (
    DimensionError,
    Instrument,
    concurrence_measure,
    entropy_measure,
    f_factor,
    gconcurrence_measure,
    gconcurrence_pure,
    wootters_concurrence,
)
from .jamiolkowski import from_state
from .protocols import evaluate_protocol, monotonicity_gap, locked_state_protocol
from .roof import gconcurrence_mixed
from .sampling import (
    random_density,
    random_instrument,
    random_povm,
    random_pure,
    spawn_rngs,
)
from .serialize import ParseError, load_protocol, load_state, save_state
from .states import DensityOperator, DimSpec, PureState, conditional_state

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_DIMENSION = 3

MEASURES = {
    "entropy": entropy_measure,
    "wootters": concurrence_measure,
    "gconc": gconcurrence_measure,
}


def _default_seed() -> int:
    return int(os.environ.get("ENTLOC_SEED", "0"))


def _emit_report(args, command: str, results: dict, config: dict, t0: float) -> None:
    report = {
        "command": command,
        "config": config,
        "seed": config.get("seed"),
        "version": __version__,
        "results": results,
    }
    out = json.dumps(report, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    print(out)
    print(f"# wall time {time.perf_counter() - t0:.2f}s", file=sys.stderr)


def _as_density(state) -> DensityOperator:
    return state.to_density() if isinstance(state, PureState) else state


def cmd_measure(args) -> int:
    t0 = time.perf_counter()
    state = load_state(args.state)
    measure = MEASURES[args.measure]()
    provenance = "closed form"
    converged = True
    if isinstance(state, PureState):
        value = measure.pure(state)
    else:
        if args.measure == "gconc" and state.dims.total_dim != 4 and state.rank() > 1:
            value, ens = gconcurrence_mixed(state)
            provenance = "convex-roof optimizer (upper bound)"
            converged = ens.converged
        else:
            value = measure.density(state)
    results = {"value": value, "method": provenance, "converged": converged,
               "bound": "exact" if provenance == "closed form" else "upper"}
    _emit_report(args, "measure", results,
                 {"measure": args.measure, "state": args.state, "seed": None}, t0)
    return EXIT_OK


def cmd_le(args) -> int:
    t0 = time.perf_counter()
    state = load_state(args.state)
    rho = _as_density(state)
    measure = MEASURES[args.measure]()
    config = LEConfig(restarts=args.restarts, seed=args.seed, tol=args.tol,
                      max_iters=args.max_iters)
    result = optimize_le(rho, measure, config)
    _emit_report(args, "le", result.to_dict(args.measure),
                 {"measure": args.measure, "state": args.state, "seed": args.seed,
                  "restarts": args.restarts, "tol": args.tol}, t0)
    return EXIT_OK


def cmd_protocol(args) -> int:
    t0 = time.perf_counter()
    state = load_state(args.state)
    tree = load_protocol(args.protocol)
    measure = MEASURES[args.measure]()
    result = evaluate_protocol(_as_density(state), tree, measure)
    _emit_report(args, "protocol", result.to_dict(args.measure),
                 {"measure": args.measure, "state": args.state,
                  "protocol": args.protocol, "seed": None}, t0)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    """Locked-state comparison: collaboration value vs localizable value."""
    t0 = time.perf_counter()
    psi = build_locked_state()
    rho = psi.to_density()

    eoc = evaluate_protocol(rho, locked_state_protocol(), entropy_measure())
    eoc_g = evaluate_protocol(rho, locked_state_protocol(), gconcurrence_measure())
    le = optimize_le(rho, entropy_measure(),
                     LEConfig(restarts=args.restarts, seed=args.seed))
    le_g = optimize_le(rho, gconcurrence_measure(),
                       LEConfig(restarts=max(4, args.restarts // 4), seed=args.seed))

    rows = [
        ("EoC(entropy)", eoc.average, "exact (two-round protocol)"),
        ("LE(entropy)", le.value, "lower bound (ascent)"),
        ("EoC(G)", eoc_g.average, "exact (two-round protocol)"),
        ("LE(G)", le_g.value, "lower bound (ascent)"),
    ]
    results = {
        "table": [{"quantity": q, "value": v, "kind": k} for q, v, k in rows],
        "gap_entropy": eoc.average - le.value,
        "leaf_probabilities": [p for p, _, _ in eoc.leaves],
    }
    if args.format == "csv":
        print("quantity,value,kind")
        for q, v, k in rows:
            print(f"{q},{v:.6f},{k}")
    for q, v, _ in rows:
        print(f"{q} = {v:.6f}", file=sys.stderr)
    _emit_report(args, "reproduce", results,
                 {"seed": args.seed, "restarts": args.restarts}, t0)
    return EXIT_OK


# ---------------------------------------------------------------------------
# property suites


def _suite_jamio(trials: int, seed: int) -> list[str]:
    failures = []
    for i, rng in enumerate(spawn_rngs(seed, trials)):
        dims = DimSpec.make(("A", 2, "A"), ("B", 2, "B"), ("C", 2, "Z"))
        rho = random_density(dims, rng, rank=int(rng.integers(1, 5)))
        jam = from_state(rho)
        back = jam.reconstruct()
        if np.max(np.abs(back.matrix - rho.matrix)) > 1e-12:
            failures.append(f"trial {i}: round-trip error")
            continue
        q = random_povm(2, 2, rng)[0]
        p, sigma = conditional_state(rho, q)
        p2, sigma2 = jam.branch(q)
        if abs(p - p2) > 1e-10 or np.max(np.abs(sigma.matrix - sigma2.matrix)) > 1e-10:
            failures.append(f"trial {i}: transpose-convention mismatch")
    return failures


def _suite_gconc(trials: int, seed: int) -> list[str]:
    failures = []
    for i, rng in enumerate(spawn_rngs(seed, trials)):
        d = int(rng.integers(2, 5))
        psi = random_pure(d, rng)
        c = float(rng.uniform(0.1, 2.0))
        g = gconcurrence_pure(psi)
        scaled = PureState(c * psi.amplitudes, psi.dims, normalized=False)
        if abs(gconcurrence_pure(scaled) - c * c * g) > 1e-12:
            failures.append(f"trial {i}: homogeneity")
            continue
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        mapped = PureState(np.kron(a, b) @ psi.amplitudes, psi.dims, normalized=False)
        expected = abs(np.linalg.det(a)) ** (2 / d) * abs(np.linalg.det(b)) ** (2 / d) * g
        if abs(gconcurrence_pure(mapped) - expected) > 1e-10 * max(1.0, expected):
            failures.append(f"trial {i}: determinant multiplicativity")
    return failures


def _suite_convexity(trials: int, seed: int) -> list[str]:
    failures = []
    measure = concurrence_measure()
    for i, rng in enumerate(spawn_rngs(seed, trials)):
        dims = DimSpec.make(("A", 2, "A"), ("B", 2, "B"), ("C", 2, "Z"))
        parts = [random_density(dims, rng, rank=int(rng.integers(1, 3))) for _ in range(3)]
        t = rng.dirichlet(np.ones(3))
        mix = DensityOperator(sum(w * p.matrix for w, p in zip(t, parts)), dims)
        from .localize import ProductPOVM

        povm = ProductPOVM.single_party("C", random_povm(2, 3, rng))
        lhs = average_root_entanglement(mix, povm, measure).value
        rhs = sum(
            w * average_root_entanglement(p, povm, measure).value
            for w, p in zip(t, parts)
        )
        if lhs > rhs + 1e-9:
            failures.append(f"trial {i}: convexity violated by {lhs - rhs:.2e}")
    return failures


def _suite_monotonicity(trials: int, seed: int) -> list[str]:
    failures = []
    measure = gconcurrence_measure()
    dims = DimSpec.make(("A", 2, "A"), ("B", 2, "B"), ("C", 2, "Z"))
    for i, rng in enumerate(spawn_rngs(seed, trials)):
        inst = Instrument("A", tuple(
            tuple(ms) for ms in random_instrument(2, int(rng.integers(2, 4)), 1, rng)
        ))
        fsum = sum(inst.f_factors())
        if fsum > 1 + 1e-10:
            failures.append(f"trial {i}: f-factor sum {fsum:.12f} > 1")
            continue
        psi = random_pure(dims, rng)
        gap = monotonicity_gap(psi.to_density(), inst, measure,
                               config=LEConfig(restarts=6, max_iters=200,
                                               seed=int(rng.integers(2**31))))
        if gap > 2e-3:
            failures.append(f"trial {i}: monotonicity gap {gap:.2e} > 2e-3")
    return failures


SUITES = {
    "jamio": _suite_jamio,
    "gconc": _suite_gconc,
    "convexity": _suite_convexity,
    "monotonicity": _suite_monotonicity,
}


def cmd_properties(args) -> int:
    t0 = time.perf_counter()
    failures = SUITES[args.suite](args.trials, args.seed)
    results = {
        "suite": args.suite,
        "trials": args.trials,
        "failures": failures,
        "passed": args.trials - len(failures),
    }
    _emit_report(args, "properties", results,
                 {"suite": args.suite, "trials": args.trials, "seed": args.seed}, t0)
    if failures:
        print(f"FAIL: {len(failures)} violation(s), reproducer seed {args.seed}",
              file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_emit(args) -> int:
    params = {}
    if args.p is not None:
        params["p"] = args.p
    if args.n is not None:
        params["n"] = args.n
    state = canonical_state(args.name, **params)
    save_state(state, args.out)
    print(f"wrote {args.name} to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entloc",
        description="localizable entanglement and collaboration-protocol numerics",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="score a state file with a root measure")
    p.add_argument("state")
    p.add_argument("--measure", choices=sorted(MEASURES), default="entropy")
    p.add_argument("--out")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("le", help="run the localizable-entanglement ascent")
    p.add_argument("state")
    p.add_argument("--measure", choices=sorted(MEASURES), default="entropy")
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--max-iters", type=int, default=300)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out")
    p.set_defaults(func=cmd_le)

    p = sub.add_parser("protocol", help="evaluate a protocol file on a state")
    p.add_argument("state")
    p.add_argument("protocol")
    p.add_argument("--measure", choices=sorted(MEASURES), default="entropy")
    p.add_argument("--out")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("reproduce", help="locked-state comparison table")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("properties", help="run a seeded invariant suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out")
    p.set_defaults(func=cmd_properties)

    p = sub.add_parser("emit", help="write a catalog state to a JSON file")
    p.add_argument("name",
                   choices=("bell", "phi_plus_4", "ghz", "w", "werner", "locked"))
    p.add_argument("--p", type=float, help="Werner mixing parameter")
    p.add_argument("--n", type=int, help="qubit count for ghz/w")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_emit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION


if __name__ == "__main__":
    sys.exit(main())
