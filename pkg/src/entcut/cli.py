"""Command-line front end.

Subcommands: gen, entropy, scan, range, verify, capacity. Reports go
to stdout as JSON; scan tables go to files as CSV with a JSON sidecar.
Exit codes: 0 success, 1 property-suite failure, 2 input/validation
error. All randomness flows from explicit --seed flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, entropy as entropy_mod, tasks
from .errors import EntcutError
from .lattice import make_geometry, parse_cut

_CAPACITY_NOTE = (
    "pooling depth is qualitative here: scale-covariant feature maps need "
    "about log2(image width) pooling stages; the channel counts cover the "
    "convolution layers between them"
)


def _emit(doc):
    print(json.dumps(doc, indent=2, sort_keys=True))


def _load_task(path) -> tasks.TaskSpec:
    return tasks.load_task(path)


def cmd_gen(args) -> int:
    if args.task == "loops":
        if args.k is None:
            raise EntcutError("gen --task loops requires --k")
        task = tasks.gen_closed_loops(args.k, periodic=args.periodic)
    elif args.task == "parity":
        if args.lx is None or args.ly is None:
            raise EntcutError("gen --task parity requires --lx and --ly")
        geom = make_geometry(args.lx, args.ly, args.periodic)
        task = tasks.gen_parity(geom, even=not args.odd)
    elif args.task == "random":
        if args.lx is None or args.ly is None or args.count is None:
            raise EntcutError("gen --task random requires --lx, --ly, and --count")
        geom = make_geometry(args.lx, args.ly, args.periodic)
        task = tasks.gen_random_set(geom, args.count, args.seed)
    else:
        raise EntcutError(f"unknown task type {args.task!r}")
    tasks.save_task(task, args.out)
    _emit({"task": task.name, "images": len(task.label1), "out": str(args.out)})
    return 0


def cmd_entropy(args) -> int:
    task = _load_task(args.task)
    part = parse_cut(task.geom, args.cut)
    report = entropy_mod.entanglement_entropy(
        task.indicator(),
        part,
        path=args.path,
        dense_cap=args.dense_cap,
        gram_cap=args.gram_cap,
        cut_label=args.cut,
    )
    _emit(report.to_dict("nats" if args.nats else "bits"))
    return 0


def cmd_scan(args) -> int:
    task = _load_task(args.task)
    result = analysis.scan_cuts(
        task,
        args.cuts,
        count=args.count,
        seed=args.seed,
        workers=args.workers,
        dense_cap=args.dense_cap,
        gram_cap=args.gram_cap,
    )
    out = Path(args.out)
    out.write_text(analysis.scan_csv_text(result))
    sidecar = analysis.scan_sidecar(result)
    out.with_suffix(".fit.json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
    )
    _emit(sidecar)
    return 0


def cmd_range(args) -> int:
    task = _load_task(args.task)
    part = parse_cut(task.geom, args.cut)
    estimate = analysis.estimate_range(task, part, args.max_r)
    report = entropy_mod.entanglement_entropy(task.indicator(), part, cut_label=args.cut)
    doc = analysis.range_report(estimate, part, report.entropy_bits)
    doc["task"] = task.name
    doc["cut"] = args.cut
    _emit(doc)
    return 0


def _verify_checks(task: tasks.TaskSpec, seed: int, samples: int, dense_cap: int, gram_cap: int):
    f = task.indicator()
    cuts = []
    if task.geom.lx > 1:
        cuts += analysis.cut_family(task, "vertical")
    if task.geom.ly > 1:
        cuts += analysis.cut_family(task, "horizontal")
    if samples > 0:
        cuts += analysis.cut_family(task, "seeded-random", count=samples, seed=seed)
    checks = []

    def record(name, cut_id, passed, detail):
        checks.append({"check": name, "cut": cut_id, "pass": bool(passed), "detail": detail})

    for cut_id, part in cuts:
        report = entropy_mod.entanglement_entropy(
            f, part, path="sparse", gram_cap=gram_cap, cut_label=cut_id
        )
        sym = entropy_mod.check_property1(f, part, gram_cap=gram_cap, path="sparse")
        record("symmetry_sa_sb", cut_id, sym.passed, f"|dS|={sym.delta_bits:.3e} bits")
        total = report.spectrum.total()
        record("spectrum_trace", cut_id, abs(total - 1.0) <= 1e-9, f"sum={total:.12f}")
        record(
            "rank_bound",
            cut_id,
            report.entropy_bits <= report.bound_rank_bits + 1e-9,
            f"S={report.entropy_bits:.6f} <= log2(rank)={report.bound_rank_bits:.6f}",
        )
        record(
            "volume_bound",
            cut_id,
            report.entropy_bits <= report.bound_volume_bits + 1e-9,
            f"S={report.entropy_bits:.6f} <= min(n_a,n_b)={report.bound_volume_bits:.0f}",
        )
        if part.n_a <= dense_cap:
            dense = entropy_mod.schmidt_spectrum_dense(f, part, dense_cap=dense_cap)
            s_dense = entropy_mod.von_neumann_entropy(dense, "bits")
            agree = abs(s_dense - report.entropy_bits) <= 1e-9 and dense.rank == report.rank
            record(
                "dense_sparse_agreement",
                cut_id,
                agree,
                f"|dS|={abs(s_dense - report.entropy_bits):.3e} bits, "
                f"ranks {dense.rank}/{report.rank}",
            )
            rho = entropy_mod.reduced_density_matrix(f, part, dense_cap=dense_cap).entries
            trace = float(np.trace(rho))
            min_eig = float(np.linalg.eigvalsh(rho).min())
            asym = float(np.abs(rho - rho.T).max())
            record(
                "density_matrix",
                cut_id,
                abs(trace - 1.0) <= 1e-12 and min_eig >= -1e-10 and asym <= 1e-12,
                f"tr={trace:.14f}, min_eig={min_eig:.3e}, asym={asym:.3e}",
            )
        a1 = analysis.check_assumption1(task, part)
        checks.append(
            {
                "check": "assumption1_info",
                "cut": cut_id,
                "pass": True,
                "detail": "holds" if a1.passed else f"fails (informational): {a1.counterexample}",
            }
        )
    return checks


def cmd_verify(args) -> int:
    task = _load_task(args.task)
    checks = _verify_checks(task, args.seed, args.samples, args.dense_cap, args.gram_cap)
    failures = sum(1 for c in checks if not c["pass"])
    _emit({"task": task.name, "checks": checks, "failures": failures})
    return 1 if failures else 0


def cmd_capacity(args) -> int:
    results = []
    for text in args.nc.split(","):
        n_c = int(text)
        req = analysis.cnn_channel_requirement(args.r, n_c)
        results.append(
            {
                "n_c": req.n_c,
                "channels": req.channels,
                "channels_depth1": req.channels_depth1,
                "consistent": req.consistent,
            }
        )
    _emit({"r_bits": args.r, "results": results, "note": _CAPACITY_NOTE})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entcut",
        description="Bipartite entanglement entropy of binary-image classification targets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a task file")
    p.add_argument("--task", required=True, choices=["loops", "parity", "random"])
    p.add_argument("--k", type=int, help="vertex grid size for the loops task")
    p.add_argument("--periodic", action="store_true")
    p.add_argument("--lx", type=int)
    p.add_argument("--ly", type=int)
    p.add_argument("--count", type=int, help="number of images for the random task")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--odd", action="store_true", help="odd parity instead of even")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("entropy", help="entropy of one cut")
    p.add_argument("--task", required=True)
    p.add_argument("--cut", required=True, help="cols<K, rows<K, or mask:<hex>")
    p.add_argument("--nats", action="store_true", help="report in nats instead of bits")
    p.add_argument("--path", default="auto", choices=["auto", "dense", "sparse"])
    p.add_argument("--dense-cap", type=int, default=entropy_mod.DEFAULT_DENSE_CAP)
    p.add_argument("--gram-cap", type=int, default=entropy_mod.DEFAULT_GRAM_CAP)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("scan", help="entropy across a cut family, CSV output")
    p.add_argument("--task", required=True)
    p.add_argument("--cuts", default="vertical", choices=["vertical", "horizontal", "seeded-random"])
    p.add_argument("--count", type=int, help="number of cuts (random family)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dense-cap", type=int, default=entropy_mod.DEFAULT_DENSE_CAP)
    p.add_argument("--gram-cap", type=int, default=entropy_mod.DEFAULT_GRAM_CAP)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("range", help="estimate the entanglement range of a cut")
    p.add_argument("--task", required=True)
    p.add_argument("--cut", required=True)
    p.add_argument("--max-r", type=int, default=3)
    p.set_defaults(func=cmd_range)

    p = sub.add_parser("verify", help="run the property suite on a task")
    p.add_argument("--task", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=5, help="random cuts to sample")
    p.add_argument("--dense-cap", type=int, default=entropy_mod.DEFAULT_DENSE_CAP)
    p.add_argument("--gram-cap", type=int, default=entropy_mod.DEFAULT_GRAM_CAP)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("capacity", help="channel counts for a given entanglement range")
    p.add_argument("--r", type=float, required=True, help="entanglement range in bits")
    p.add_argument("--nc", default="1", help="comma-separated convolution layer counts")
    p.set_defaults(func=cmd_capacity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EntcutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
