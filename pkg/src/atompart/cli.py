"""Command-line interface.

Exit codes: 0 success, 1 failed check, 2 invalid input or model, 3 resource cap.
"""
import argparse
import csv
import json
import os
import sys
import time

from . import io
from .asymptotics import run_experiment
from .checks import run_selfcheck
from .eppf import log_stirling_sigma, stirling_sigma
from .errors import InvalidArgument, InvalidModel, InvalidState, ResourceLimit
from .induced import METHODS, induced_probability
from .partitions import Partition, validate_sizes
from .sampling import sample_paths

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


def _sizes(text):
    try:
        return validate_sizes(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise InvalidArgument(f"bad --sizes {text!r}: {exc}")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _emit(obj, path=None):
    out, close = _open_out(path)
    out.write(io.dumps(obj) + "\n")
    if close:
        out.close()


def _base_measure(args):
    if args.base_measure:
        return io.load_base_measure(args.base_measure)
    from .basemeasure import BaseMeasure

    return BaseMeasure.diffuse()


def cmd_eppf(args):
    model = io.load_model(args.model)
    sizes = _sizes(args.sizes)
    _emit({"schema": io.SCHEMA, "sizes": list(sizes), "q": model.eppf(sizes)}, args.output)
    return EXIT_OK


def _target(args):
    if args.partition:
        try:
            return Partition.from_json(args.partition)
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"bad --partition: {exc}")
    if args.sizes:
        return Partition.from_sizes(_sizes(args.sizes))
    raise InvalidArgument("give --sizes or --partition")


def cmd_induced(args):
    model = io.load_model(args.model)
    H = _base_measure(args)
    target = _target(args)
    t0 = time.perf_counter()
    res = induced_probability(model, H, target, args.method)
    elapsed = time.perf_counter() - t0
    out = {"schema": io.SCHEMA, "partition": target.to_list(),
           "sizes": [len(b) for b in target.blocks], "probability": res.value,
           "error_bound": res.error_bound, "method": res.method, "wall_time": elapsed}
    if args.method != "general":
        try:
            ref = induced_probability(model, H, target, "general").value
            out["abs_diff_vs_general"] = abs(res.value - ref)
        except ResourceLimit:
            out["abs_diff_vs_general"] = None
    _emit(out, args.output)
    return EXIT_OK


def cmd_sample(args):
    model = io.load_model(args.model)
    H = _base_measure(args)
    if args.n < 1 or args.paths < 0:
        raise InvalidArgument("--n must be positive and --paths non-negative")
    if args.n > 10 ** 6:
        raise ResourceLimit("--n is capped at 10^6 for label output")
    out, close = _open_out(args.output)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["path", "partition", "blocks", "N_n", "Lambda_n", "labels"])
    for i, d in enumerate(sample_paths(model, H, args.n, args.paths, args.seed)):
        p = d.induced
        labels = " ".join(str(x) for x in d.labels) if args.labels else ""
        w.writerow([i, p.to_json(), len(p), d.diffuse_tables, d.distinct_atoms, labels])
    if close:
        out.close()
    return EXIT_OK


def cmd_asymptotics(args):
    cfg = io.load_experiment(args.config, threads=args.threads)
    if args.replicates is not None:
        cfg.replicates = args.replicates
    if args.checkpoints:
        cfg.checkpoints = io.parse_checkpoints(args.checkpoints)
    if args.seed is not None:
        cfg.seed = args.seed
    report = run_experiment(cfg)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            report.write_csv(fh)
    summary = report.summary()
    summary["schema"] = io.SCHEMA
    _emit(summary, args.summary)
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_stirling(args):
    ks = [args.k] if args.k is not None else list(range(0, args.n + 1))
    rows = [{"sigma": args.sigma, "n": args.n, "k": k, "value": stirling_sigma(args.sigma, args.n, k),
             "log_value": log_stirling_sigma(args.sigma, args.n, k)} for k in ks]
    _emit({"schema": io.SCHEMA, "rows": rows}, args.output)
    return EXIT_OK


def cmd_selfcheck(args):
    model = io.load_model(args.model, check=False) if args.model else None
    t0 = time.perf_counter()
    results = run_selfcheck(model)
    out, close = _open_out(args.output)
    for r in results:
        out.write(r.line() + "\n")
    failed = [r.name for r in results if not r.passed]
    out.write(f"{'FAILED: ' + ', '.join(failed) if failed else 'all checks passed'} "
              f"in {time.perf_counter() - t0:.1f}s\n")
    if close:
        out.close()
    return EXIT_CHECK if failed else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="atompart", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, base=True):
        sp.add_argument("--model", required=True, help="model JSON file")
        if base:
            sp.add_argument("--base-measure", help="base-measure JSON file (default: diffuse)")
        sp.add_argument("--output", help="output path (default: stdout)")

    sp = sub.add_parser("eppf", help="evaluate the latent EPPF")
    common(sp, base=False)
    sp.add_argument("--sizes", required=True, help="block sizes, e.g. 2,1")
    sp.set_defaults(func=cmd_eppf)

    sp = sub.add_parser("induced", help="exact probability of an induced partition")
    common(sp)
    sp.add_argument("--sizes")
    sp.add_argument("--partition", help="JSON, e.g. [[1,3],[2]]")
    sp.add_argument("--method", choices=METHODS, default="general")
    sp.set_defaults(func=cmd_induced)

    sp = sub.add_parser("sample", help="simulate observation sequences")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--paths", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--labels", action="store_true", help="include the label sequence of each path")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("asymptotics", help="run a large-n cluster-count experiment")
    sp.add_argument("--config", required=True, help="experiment JSON")
    sp.add_argument("--replicates", type=int)
    sp.add_argument("--checkpoints", help="comma-separated n values")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    sp.add_argument("--output", help="per-checkpoint CSV path")
    sp.add_argument("--summary", help="summary JSON path (default: stdout)")
    sp.set_defaults(func=cmd_asymptotics)

    sp = sub.add_parser("stirling", help="generalized Stirling numbers")
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_stirling)

    sp = sub.add_parser("selfcheck", help="run the built-in invariant suites")
    sp.add_argument("--model", help="also check this model (e.g. a Gibbs V-table)")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InvalidArgument, InvalidModel, InvalidState) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
