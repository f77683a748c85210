"""Command-line harness: spectra, verdicts on the second eigenspace, random search.

Exit codes: 0 when everything checked passes, 1 on a violation or failed
fact, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Sequence

from .exactla import fraction_to_str, min_specht_eigenvalue, sym_eig
from .graphcore import (
    GraphError,
    GraphParseError,
    WeightedGraph,
    eigcomp_check,
    format_graph,
    is_connected,
    laplacian,
    read_graph,
    schur_reduce_with_map,
)
from .octopus import (
    OctopusError,
    full_kernel_check,
    kernel_intersection_with_induced,
    octopus,
    octopus_kernel_on_specht,
    octopus_psd_check,
    omega_plus,
)
from .permgroup import enumerate_group, format_cycles
from .processes import ProcessError, exclusion_generator, full_operator_matrix, permutation_module_generator
from .specht import Partition, as_partition, partitions, specht_module

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_MARGIN = 1e-6
DEFAULT_TOL = 1e-7
MIN_N, MAX_N = 3, 7


class UsageError(Exception):
    pass


# -------------------------------------------------------------- verdicts


def is_uniform_four_cycle(g: WeightedGraph) -> bool:
    """Four equal positive weights on a 4-cycle: the two non-edges are disjoint pairs."""
    if g.n != 4 or len(g.edges()) != 4:
        return False
    if len(set(g.weights.values())) != 1:
        return False
    missing = [(i, j) for i in range(1, 5) for j in range(i + 1, 5) if (i, j) not in g.weights]
    return len(missing) == 2 and not set(missing[0]) & set(missing[1])


def verify_main(g: WeightedGraph, tol: float = DEFAULT_TOL, margin: float = DEFAULT_MARGIN, timing: bool = False) -> dict[str, Any]:
    """Compare the smallest eigenvalue on every Specht module with the one on S^(n-1,1).

    Weights are normalized to total n before comparing, so ``margin`` is an
    absolute gap on a fixed scale.
    """
    n = g.n
    if not MIN_N <= n <= MAX_N:
        raise UsageError(f"verify-main needs {MIN_N} <= n <= {MAX_N}, got n={n}")
    if not is_connected(g):
        raise UsageError("graph is disconnected")
    start = time.perf_counter()
    normalized = g.scaled(Fraction(n) / g.total_weight())
    op = normalized.interchange_operator()
    standard = Partition((n - 1, 1))
    table = []
    values: dict[Partition, tuple[float, int]] = {}
    for mu in partitions(n):
        res = min_specht_eigenvalue(op, mu, tol)
        values[mu] = (res.value, res.multiplicity)
        table.append({"mu": str(mu), "dim": specht_module(mu).dim, "lambda_min": res.value, "multiplicity": res.multiplicity})
    ref = values[standard][0]
    exception = is_uniform_four_cycle(g)
    offenders = []
    for mu, (val, mult) in values.items():
        if mu in (Partition((n,)), standard):
            continue
        gap = val - ref
        row = next(r for r in table if r["mu"] == str(mu))
        row["gap"] = gap
        if gap > margin:
            continue
        if exception and mu == Partition((2, 2)) and abs(gap) <= margin and mult == 1:
            continue
        offenders.append({"mu": str(mu), "gap": gap})
    if offenders:
        verdict = "violation"
    elif exception:
        verdict = "four-cycle-exception"
    else:
        verdict = "standard-rep-unique"
    report: dict[str, Any] = {
        "graph": g.to_json(),
        "normalization": fraction_to_str(Fraction(n) / g.total_weight()),
        "table": table,
        "reference": {"mu": str(standard), "lambda_min": ref, "multiplicity": values[standard][1]},
        "verdict": verdict,
        "offenders": offenders,
        "tolerances": {"cluster_rtol": tol, "margin": margin},
    }
    if timing:
        report["timing_seconds"] = time.perf_counter() - start
    return report


# ---------------------------------------------------------------- search


@dataclass(frozen=True)
class SearchConfig:
    n_min: int = 4
    n_max: int = 5
    count: int = 100
    seed: int = 42
    weights: str = "rational"
    denominator: int = 16
    edge_probability: float = 0.5
    plant_four_cycle: bool = False
    tol: float = DEFAULT_TOL
    margin: float = DEFAULT_MARGIN


def random_connected_graph(rng: random.Random, n: int, cfg: SearchConfig) -> WeightedGraph:
    """Resample edge sets until connected; weights k/D with k in 1..D, or all 1."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    while True:
        w = {}
        for p in pairs:
            if rng.random() < cfg.edge_probability:
                w[p] = Fraction(1) if cfg.weights == "uniform-simple" else Fraction(rng.randint(1, cfg.denominator), cfg.denominator)
        if w:
            g = WeightedGraph(n, w)
            if is_connected(g):
                return g


def _search_one(args: tuple[SearchConfig, int, int]) -> dict[str, Any]:
    cfg, n, index = args
    rng = random.Random(f"{cfg.seed}:{n}:{index}")
    g = random_connected_graph(rng, n, cfg)
    rep = verify_main(g, cfg.tol, cfg.margin)
    return {"n": n, "index": index, "verdict": rep["verdict"], "graph": format_graph(g), "offenders": rep["offenders"]}


def run_search(cfg: SearchConfig, jobs: int = 1) -> dict[str, Any]:
    tasks = [(cfg, n, i) for n in range(cfg.n_min, cfg.n_max + 1) for i in range(cfg.count)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_search_one, tasks, chunksize=8))
    else:
        results = [_search_one(t) for t in tasks]
    if cfg.plant_four_cycle:
        g = WeightedGraph(4, {(1, 2): 1, (2, 3): 1, (3, 4): 1, (1, 4): 1})
        rep = verify_main(g, cfg.tol, cfg.margin)
        results.append({"n": 4, "index": "planted", "verdict": rep["verdict"], "graph": format_graph(g), "offenders": rep["offenders"]})
    tally: dict[str, int] = {}
    for r in results:
        tally[r["verdict"]] = tally.get(r["verdict"], 0) + 1
    return {
        "config": asdict(cfg),
        "graphs": len(results),
        "tally": dict(sorted(tally.items())),
        "violations": [r for r in results if r["verdict"] == "violation"],
        "exceptions": [r for r in results if r["verdict"] == "four-cycle-exception"],
    }


# ------------------------------------------------------------- spectrum


def _clusters_json(spec) -> list[dict[str, Any]]:
    return [{"value": v, "multiplicity": m} for v, m in spec.cluster_values()]


def spectrum_report(g: WeightedGraph, process: str, tol: float) -> dict[str, Any]:
    kind, _, arg = process.partition(":")
    if kind == "walk":
        m, legend = laplacian(g), [str(i) for i in range(1, g.n + 1)]
    elif kind == "exclusion":
        if not arg:
            raise UsageError("exclusion needs a particle count, e.g. exclusion:2")
        gen = exclusion_generator(g, int(arg))
        m, legend = gen.matrix, ["{" + ",".join(map(str, s)) + "}" for s in gen.index]
    elif kind == "colored":
        if not arg:
            raise UsageError("colored needs a partition, e.g. colored:2,1,1")
        gen = permutation_module_generator(g, arg)
        m, legend = gen.matrix, ["|".join(",".join(map(str, r)) for r in x.rows) for x in gen.index]
    elif kind == "interchange":
        m = full_operator_matrix(g.interchange_operator())
        legend = [format_cycles(p) for p in enumerate_group(g.n)]
    else:
        raise UsageError(f"unknown process {process!r}")
    spec = sym_eig(m, tol)
    return {
        "process": process,
        "dimension": m.rows,
        "index_legend": legend,
        "eigenvalues": [float(x) for x in spec.eigenvalues],
        "clusters": _clusters_json(spec),
    }


# ------------------------------------------------------------ reduce / octopus


def reduce_report(g: WeightedGraph, v: int, tol: float) -> dict[str, Any]:
    red = schur_reduce_with_map(g, v)
    out: dict[str, Any] = {
        "removed": v,
        "index_map": {str(k): val for k, val in red.index_map.items()},
        "reduced": red.graph.to_json(),
        "reduced_text": format_graph(red.graph),
    }
    if is_connected(g):
        out["second_eigenvalues"] = eigcomp_check(g, v, tol).to_json()
    return out


def _vec_json(vs) -> list[list[str]]:
    return [[fraction_to_str(x) for x in v] for v in vs]


def octopus_report(g: WeightedGraph, v: int, mu: str | None, full_kernel: bool, tol: float) -> dict[str, Any]:
    op = octopus(g, v, scaled=True)
    out: dict[str, Any] = {
        "vertex": v,
        "omega_plus": list(omega_plus(g, v)),
        "scaled_terms": [[i, j, fraction_to_str(w)] for (i, j), w in sorted(op.terms.items())],
        "constant": fraction_to_str(op.constant),
    }
    if mu is not None:
        part = as_partition(mu)
        module = specht_module(part)
        out["mu"] = str(part)
        out["basis"] = [str(t) for t in module.basis]
        out["matrix"] = module.operator_matrix(op).to_json()
        out["kernel"] = _vec_json(octopus_kernel_on_specht(g, v, part))
        n = g.n
        if part in (Partition((n - 2, 2)), Partition((n - 2, 1, 1))):
            out["induced_kernel"] = _vec_json(kernel_intersection_with_induced(g, v, part))
    if full_kernel:
        if g.n > 5:
            raise UsageError("--full-kernel is limited to n <= 5")
        rep = full_kernel_check(g, v)
        out["full_kernel"] = {
            "direct_dimension": rep.direct_dim,
            "characterized_dimension": rep.characterized_dim,
            "spans_equal": rep.equal,
        }
        out["psd"] = octopus_psd_check(g, v, tol)
    return out


# ------------------------------------------------------------------ main


def _emit(args, payload: dict[str, Any], lines: Sequence[str]) -> None:
    if args.json:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        if args.json == "-":
            sys.stdout.write(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
    if not args.quiet and args.json != "-":
        for line in lines:
            print(line)


def _cmd_spectrum(args) -> int:
    rep = spectrum_report(read_graph(args.graph), args.process, args.tol)
    lines = [f"{args.process}: dimension {rep['dimension']}"]
    lines += [f"  {c['value']:.10g}  x{c['multiplicity']}" for c in rep["clusters"]]
    _emit(args, rep, lines)
    return EXIT_OK


def _cmd_verify(args) -> int:
    rep = verify_main(read_graph(args.graph), args.tol, args.margin, timing=args.timing)
    lines = [f"{'mu':<14}{'dim':>5}{'lambda_min':>16}{'mult':>6}"]
    for r in rep["table"]:
        lines.append(f"{r['mu']:<14}{r['dim']:>5}{r['lambda_min']:>16.10f}{r['multiplicity']:>6}")
    lines.append(f"verdict: {rep['verdict']}")
    for o in rep["offenders"]:
        lines.append(f"  offending {o['mu']} gap {o['gap']:.3e}")
    _emit(args, rep, lines)
    return EXIT_FAIL if rep["verdict"] == "violation" else EXIT_OK


def _cmd_search(args) -> int:
    cfg = SearchConfig(
        n_min=args.n_min,
        n_max=args.n_max,
        count=args.count,
        seed=args.seed,
        weights=args.weights,
        denominator=args.denominator,
        edge_probability=args.edge_probability,
        plant_four_cycle=args.plant_four_cycle,
        tol=args.tol,
        margin=args.margin,
    )
    summary = run_search(cfg, args.jobs)
    if args.dump_dir and summary["violations"]:
        os.makedirs(args.dump_dir, exist_ok=True)
        for r in summary["violations"]:
            path = os.path.join(args.dump_dir, f"violation_n{r['n']}_{r['index']}.txt")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(r["graph"])
    lines = [f"graphs: {summary['graphs']}"] + [f"  {k}: {v}" for k, v in summary["tally"].items()]
    _emit(args, summary, lines)
    return EXIT_FAIL if summary["violations"] else EXIT_OK


def _cmd_reduce(args) -> int:
    rep = reduce_report(read_graph(args.graph), args.vertex, args.tol)
    _emit(args, rep, [rep["reduced_text"].rstrip("\n")])
    return EXIT_OK


def _cmd_octopus(args) -> int:
    rep = octopus_report(read_graph(args.graph), args.vertex, args.mu, args.full_kernel, args.tol)
    lines = [f"constant on Id: {rep['constant']}"]
    if "kernel" in rep:
        lines.append(f"kernel on S^{rep['mu']}: dimension {len(rep['kernel'])}")
        lines += ["  [" + ", ".join(v) + "]" for v in rep["kernel"]]
    if "induced_kernel" in rep:
        lines.append(f"kernel on the induced slice: dimension {len(rep['induced_kernel'])}")
    if "full_kernel" in rep:
        fk = rep["full_kernel"]
        lines.append(f"full kernel: direct {fk['direct_dimension']}, characterized {fk['characterized_dimension']}, equal {fk['spans_equal']}")
        lines.append(f"positive semidefinite: {rep['psd']}")
    _emit(args, rep, lines)
    ok = rep.get("full_kernel", {}).get("spans_equal", True) and rep.get("psd", True)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_facts(args) -> int:
    from .facts import run_facts

    only = [s for s in (args.only or "").split(",") if s] or None
    facts = run_facts(only, seed=args.seed, perturb=Fraction(args.perturb))
    if not facts:
        raise UsageError(f"no fact group matches {args.only!r}")
    lines = []
    for f in facts:
        mark = "PASS" if f.ok else "FAIL"
        extra = f"  ({f.detail})" if f.detail and not f.ok else ""
        lines.append(f"{mark}  {f.group:<20} {f.name}{extra}")
    passed = sum(f.ok for f in facts)
    lines.append(f"{passed}/{len(facts)} facts pass")
    payload = {"facts": [asdict(f) for f in facts], "passed": passed, "total": len(facts)}
    _emit(args, payload, lines)
    return EXIT_OK if passed == len(facts) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative tolerance for eigenvalue clustering")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--json", metavar="PATH", help="write a JSON report to PATH ('-' for stdout)")
    common.add_argument("--quiet", action="store_true", help="suppress the text summary")

    p = argparse.ArgumentParser(prog="interchange-gap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="spectrum of a process generator")
    s.add_argument("--graph", required=True)
    s.add_argument("--process", default="walk", help="walk | exclusion:k | colored:mu | interchange")
    s.set_defaults(func=_cmd_spectrum)

    s = sub.add_parser("verify-main", parents=[common], help="second-eigenspace verdict for one graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    s.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    s.set_defaults(func=_cmd_verify)

    s = sub.add_parser("search", parents=[common], help="seeded random search over connected graphs")
    s.add_argument("--n-min", type=int, default=4)
    s.add_argument("--n-max", type=int, default=5)
    s.add_argument("--count", type=int, default=100, help="graphs per vertex count")
    s.add_argument("--weights", choices=["rational", "uniform-simple"], default="rational")
    s.add_argument("--denominator", type=int, default=16)
    s.add_argument("--edge-probability", type=float, default=0.5)
    s.add_argument("--plant-four-cycle", action="store_true")
    s.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--dump-dir", help="directory for graph files of violations")
    s.set_defaults(func=_cmd_search)

    s = sub.add_parser("reduce", parents=[common], help="Kron reduction at a vertex")
    s.add_argument("--graph", required=True)
    s.add_argument("--vertex", type=int, required=True)
    s.set_defaults(func=_cmd_reduce)

    s = sub.add_parser("octopus", parents=[common], help="octopus operator, kernels and checks")
    s.add_argument("--graph", required=True)
    s.add_argument("--vertex", type=int, required=True)
    s.add_argument("--mu", help="partition, e.g. 2,2")
    s.add_argument("--full-kernel", action="store_true")
    s.set_defaults(func=_cmd_octopus)

    s = sub.add_parser("paper-facts", parents=[common], help="fixed suite of exact checks")
    s.add_argument("--only", help="comma-separated group names (substring match)")
    s.add_argument("--perturb", default="0", help="rational added to one 4-cycle weight")
    s.set_defaults(func=_cmd_facts)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.tol <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except GraphParseError as exc:
        print(f"error: {args.graph}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, GraphError, OctopusError, ProcessError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
