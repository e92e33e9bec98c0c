"""Command-line front end.

Modes:
  sssp   maintain approximate single-source distances through an update
         stream, answering interleaved ``Q u v`` probes from the source row
  apsp   maintain approximate all-pairs distances, answering ``Q u v`` probes
  check  replay the stream under the exact oracle and emit a validation report
  bench  replay without oracle checks and report work counters and wall time

Graph files: header ``n m W`` then one ``u v w`` line per edge.
Update files: lines ``D u v`` (delete), ``I u v w`` (weight increase),
``Q u v`` (query probe).  Reports are line-oriented ``key=value``.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .apsp import ApspState
from .graph import QueryProbe, load_graph, parse_update_stream
from .harness import RunConfig, Schedule, run_with_oracle
from .layered import FullRangeSssp


def _load_schedule(graph_path, updates_path):
    with open(graph_path) as fh:
        graph = load_graph(fh)
    items = ()
    if updates_path:
        with open(updates_path) as fh:
            items = tuple(parse_update_stream(fh))
    edges = tuple(graph.edges())
    return Schedule(
        n=graph.node_count(),
        w_max=graph.max_weight,
        edges=edges,
        items=items,
        seed=0,
        model="file",
    )


def _fmt(value):
    return "inf" if value == float("inf") else str(value)


def _stream_run(schedule, args, out):
    """Replay updates, printing one answer line per query probe."""
    graph = schedule.build_graph()
    eps = Fraction(args.epsilon)
    if args.mode == "sssp":
        structure = FullRangeSssp(
            graph, args.source, eps, p=args.p, q=args.q, c=args.c, seed=args.seed
        )
    else:
        structure = ApspState(graph, args.k, eps, args.seed, c=args.c)
    for item in schedule.items:
        if isinstance(item, QueryProbe):
            if args.mode == "sssp":
                if item.u != args.source:
                    out.write("Q %d %d unsupported-source\n" % (item.u, item.v))
                    continue
                answer = structure.estimate(item.v)
            else:
                answer = structure.query(item.u, item.v)
            out.write("Q %d %d %s\n" % (item.u, item.v, _fmt(answer)))
        elif args.mode == "sssp":
            structure.apply_event(item)
        else:
            structure.process_update(item)
    if args.mode == "sssp":
        for v in sorted(graph.node_ids()):
            out.write("est %d %s\n" % (v, _fmt(structure.estimate(v))))


def _report_run(schedule, args, out):
    config = RunConfig(
        mode="apsp" if args.mode == "apsp" else "sssp",
        source=args.source,
        eps=Fraction(args.epsilon),
        k=args.k,
        p=args.p,
        q=args.q,
        c=args.c,
        seed=args.seed,
        oracle_check=(args.mode == "check") or args.oracle_check,
        oracle_stride=args.oracle_stride,
        measure_time=(args.mode == "bench"),
    )
    report = run_with_oracle(schedule, config)
    if args.report:
        report.write_to(args.report)
    out.write(report.render())
    return int(report.get("underestimate_violations")) or int(
        report.get("invariant_failures")
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="decrsp",
        description="decremental approximate shortest paths under edge "
        "deletions and weight increases",
    )
    parser.add_argument("mode", choices=("sssp", "apsp", "bench", "check"))
    parser.add_argument("--graph", required=True, help="graph file (n m W header)")
    parser.add_argument("--updates", help="update stream file (D/I/Q lines)")
    parser.add_argument("--epsilon", default="1/2", help="approximation slack")
    parser.add_argument("--source", type=int, default=0)
    parser.add_argument("--k", type=int, default=2, help="priority levels for apsp")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--p", type=int, default=None, help="priority levels override")
    parser.add_argument("--q", type=int, default=None, help="layer count override")
    parser.add_argument("--c", type=float, default=2.0, help="sampling density")
    parser.add_argument("--oracle-check", action="store_true")
    parser.add_argument("--oracle-stride", type=int, default=1)
    parser.add_argument("--report", help="write the key=value report here")
    return parser


def main(argv=None, out=None):
    args = build_parser().parse_args(argv)
    out = out if out is not None else sys.stdout
    schedule = _load_schedule(args.graph, args.updates)
    if args.mode in ("check", "bench"):
        return _report_run(schedule, args, out)
    if args.oracle_check:
        status = _report_run(schedule, args, out)
        if status:
            return status
    _stream_run(schedule, args, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
