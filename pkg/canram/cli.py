"""Command-line entry point: ``canram <command> ...``.

Exit codes: 0 success, 1 negative decision, 2 usage or input error, 3 guard exceeded.
"""
import argparse
import contextlib
import logging
import os
import sys
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from dotenv import load_dotenv

from . import reports
from .base_solver import AvoidanceInstance
from .config import Guards, SolverConfig, default_workers
from .density import is_balanced, max_k_density, threshold_scale
from .dto import AbundanceMode, LocalDenseMode, Outcome, fraction_str
from .encoding import build_encoding, check_abundance, container_degree_check, degree_profile, write_hyperedges
from .errors import CanramError, GuardExceededError
from .experiments import curve_to_dict, load_experiment_config, threshold_sweep, write_curve_csv
from .graph_io import load_graph, load_lists, parse_colouring_file, parse_ordering
from .hypergraph import Colouring, KGraph, Ordering
from .local_density import check_resilience, is_locally_dense, resilience_bound
from .patterns import classify_pattern
from .ramsey_service import (
    canonical_ramsey_number,
    decide_canarrow_lists,
    decide_canarrow_unrestricted,
    find_avoiding_colouring,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


class _ListHandler(logging.Handler):
    # Collects formatted records in memory for --include-logs
    def __init__(self) -> None:
        super().__init__(level=logging.INFO)
        self.records: List[str] = []
        self.setFormatter(logging.Formatter(LOG_FORMAT))

    def emit(self, record: logging.LogRecord) -> None:
        try:
            self.records.append(self.format(record))
        except Exception:
            pass


def configure_logging(level: str = "WARNING") -> logging.Handler:
    """Route the ``canram`` logger tree to stderr at ``level``; returns the installed handler."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level.upper())
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root = logging.getLogger("canram")
    root.handlers = [handler]
    root.setLevel(level.upper())
    root.propagate = False
    return handler


@contextlib.contextmanager
def _logging_scope(level: str, capture: bool) -> Iterator[Optional[_ListHandler]]:
    root = logging.getLogger("canram")
    saved = (list(root.handlers), root.level, root.propagate)
    configure_logging(level)
    capturer = None
    if capture:
        capturer = _ListHandler()
        root.addHandler(capturer)
        root.setLevel(min(root.level, logging.INFO))
    try:
        yield capturer
    finally:
        root.handlers, root.level, root.propagate = saved[0], saved[1], saved[2]


# --------- Parser ---------

def _common() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print a JSON report")
    common.add_argument("--guard-nodes", type=int, default=None, help="Search node limit")
    common.add_argument("--guard-copies", type=int, default=None, help="Copy enumeration limit")
    common.add_argument("--workers", type=int, default=None, help="Worker processes (default CANRAM_WORKERS or 1)")
    common.add_argument("--include-logs", action="store_true", help="Attach captured logs to the JSON report")
    common.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--solver", default="backtrack", help="Solver name or dotted class path")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="canram", description="Canonical Ramsey properties of (hyper)graphs")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    common = [_common()]

    p = sub.add_parser("density", parents=common, help="Maximal k-density m_k(H)")
    p.add_argument("graph")
    p.add_argument("--n", type=int, default=None, help="Also report the threshold scale n^{-1/m_k}")

    p = sub.add_parser("classify", parents=common, help="Canonical patterns of a coloured copy of H")
    p.add_argument("pattern")
    p.add_argument("colouring", help="Colouring file, or colours in H's edge order such as 1,1,2")
    p.add_argument("--sigma", default=None, help="Ordering of V(H), e.g. 2,0,1")

    p = sub.add_parser("encode", parents=common, help="Canonical copy hypergraph and its degree profile")
    p.add_argument("pattern")
    p.add_argument("host")
    p.add_argument("lists", help="List file, or a colour list such as 1,2 on every edge")
    p.add_argument("--sigma", default=None)
    p.add_argument("--out", default=None, help="Write the hyperedge list here")
    p.add_argument("--d0", type=float, default=None, help="Run the container degree check with this D0")
    p.add_argument("--q", type=float, default=None, help="q for the degree check (default n^{-1/m_k(H)})")
    p.add_argument("--gamma", type=float, default=None, help="Run the abundance check with this gamma")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--abundance-mode", choices=[m.value for m in AbundanceMode], default="exhaustive")
    p.add_argument("--seed", type=int, default=None, help="Needed for sampled abundance")

    p = sub.add_parser("localdense", parents=common, help="(rho, d)-denseness of a 2-graph")
    p.add_argument("graph")
    p.add_argument("--rho", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--exact", action="store_true", help="Check every subset (default: random subsets)")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--gamma", default=None, help="Also report the resilience bound for this deletion fraction")
    p.add_argument("--resilience-trials", type=int, default=0, help="Random deletion trials (needs --gamma)")

    p = sub.add_parser("avoid", parents=common, help="Find a list colouring without canonical copies")
    p.add_argument("host")
    p.add_argument("pattern")
    p.add_argument("lists")
    p.add_argument("--sigma", default=None)
    p.add_argument("--no-propagate", action="store_true")

    p = sub.add_parser("canarrow", parents=common, help="Decide the canonical-Ramsey property")
    p.add_argument("host")
    p.add_argument("pattern")
    p.add_argument("--lists", default=None, help="Restrict colourings to these lists")
    p.add_argument("--sigma", default=None, help="Check only this ordering")

    p = sub.add_parser("crnumber", parents=common, help="Smallest n with K_n arrowing H canonically")
    p.add_argument("pattern")
    p.add_argument("--max", dest="n_max", type=int, required=True)

    p = sub.add_parser("threshold", parents=common, help="Monte Carlo threshold curve")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--timings", action="store_true", help="Fill the seconds column")
    return parser


# --------- Commands ---------

Result = Tuple[int, str, Dict[str, Any]]


def _guards(args) -> Guards:
    return Guards.from_env().with_overrides(nodes=args.guard_nodes, copies=args.guard_copies)


def _workers(args) -> int:
    return args.workers if args.workers is not None else default_workers()


def _sigma(text: Optional[str], H: KGraph) -> Ordering:
    return parse_ordering(text) if text else Ordering.natural(H.v)


def _require_seed(args, why: str) -> int:
    if args.seed is None:
        raise UsageError(f"--seed is required {why}")
    return args.seed


def _cmd_density(args) -> Result:
    H = load_graph(args.graph)
    guards = _guards(args)
    density = max_k_density(H, guards)
    result = density.to_dict()
    result["balanced"] = is_balanced(H, guards=guards)
    result["strictly_balanced"] = is_balanced(H, strict=True, guards=guards)
    if args.n is not None:
        result["threshold_scale"] = threshold_scale(H, args.n, guards).value
    return reports.EXIT_OK, fraction_str(density.value), result


def _parse_colouring_arg(spec: str, H: KGraph) -> Colouring:
    if os.path.exists(spec):
        return parse_colouring_file(spec)
    try:
        colours = [int(c) for c in spec.split(",")]
    except ValueError:
        raise UsageError(f"colouring must be a file or comma-separated colours, got {spec!r}") from None
    if len(colours) != H.e:
        raise UsageError(f"pattern has {H.e} edges, got {len(colours)} colours")
    return Colouring(dict(zip(H.edges, colours)))


def _cmd_classify(args) -> Result:
    H = load_graph(args.pattern)
    chi = _parse_colouring_arg(args.colouring, H)
    witness = classify_pattern(H, _sigma(args.sigma, H), chi)
    code = reports.EXIT_OK if witness.canonical else reports.EXIT_NEGATIVE
    return code, "canonical" if witness.canonical else "not-canonical", witness.to_dict()


def _cmd_encode(args) -> Result:
    H = load_graph(args.pattern)
    Gamma = load_graph(args.host)
    lists = load_lists(args.lists, Gamma)
    guards = _guards(args)
    encoding = build_encoding(H, _sigma(args.sigma, H), Gamma, lists, guards, _workers(args))
    if args.out:
        write_hyperedges(encoding, args.out)
    profile = degree_profile(encoding, H, guards)
    result: Dict[str, Any] = {
        "vertices": encoding.vertex_count,
        "hyperedges": encoding.edge_count,
        "uniformity": encoding.uniformity,
        "profile": profile.to_dict(),
        "degree_bound_satisfied": profile.all_satisfied,
    }
    if args.d0 is not None:
        result["container_degree"] = container_degree_check(profile, encoding, args.d0, args.q).to_dict()
    if args.gamma is not None:
        if args.epsilon is None:
            raise UsageError("--gamma needs --epsilon")
        mode = AbundanceMode(args.abundance_mode)
        seed = _require_seed(args, "for sampled abundance") if mode is AbundanceMode.SAMPLED else 0
        result["abundance"] = check_abundance(encoding, args.gamma, args.epsilon, mode, seed=seed,
                                              guards=guards).to_dict()
    if args.out:
        result["hyperedge_file"] = str(args.out)
    return reports.EXIT_OK, "encoded", result


def _cmd_localdense(args) -> Result:
    G = load_graph(args.graph)
    guards = _guards(args)
    mode = LocalDenseMode.EXACT if args.exact else LocalDenseMode.SAMPLED
    seed = 0 if args.exact else _require_seed(args, "for sampled mode (or pass --exact)")
    report = is_locally_dense(G, args.rho, args.d, mode, args.samples, seed, _workers(args), guards)
    result = report.to_dict()
    if args.gamma is not None:
        if args.resilience_trials > 0:
            check = check_resilience(G, args.rho, args.d, args.gamma, args.resilience_trials,
                                     _require_seed(args, "for resilience trials"), guards)
            result["resilience"] = check.to_dict()
        else:
            result["resilience"] = resilience_bound(args.d, args.gamma, args.rho).to_dict()
    if report.dense:
        return reports.EXIT_OK, "dense" if report.conclusive else "no-violation-found", result
    return reports.EXIT_NEGATIVE, "not-dense", result


def _solver_config(args, propagate: bool = True) -> SolverConfig:
    return SolverConfig(name=args.solver, propagate=propagate, workers=_workers(args), guards=_guards(args))


def _cmd_avoid(args) -> Result:
    G = load_graph(args.host)
    H = load_graph(args.pattern)
    instance = AvoidanceInstance(G, H, _sigma(args.sigma, H), load_lists(args.lists, G))
    result = find_avoiding_colouring(instance, _solver_config(args, not args.no_propagate))
    code = {
        Outcome.FOUND: reports.EXIT_OK,
        Outcome.NONE_EXISTS: reports.EXIT_NEGATIVE,
        Outcome.GUARD_EXCEEDED: reports.EXIT_GUARD,
    }[result.outcome]
    return code, result.outcome.value, result.to_dict()


def _cmd_canarrow(args) -> Result:
    G = load_graph(args.host)
    H = load_graph(args.pattern)
    sigma = parse_ordering(args.sigma) if args.sigma else None
    if args.lists is not None:
        report = decide_canarrow_lists(G, H, load_lists(args.lists, G), _solver_config(args), sigma=sigma)
    else:
        report = decide_canarrow_unrestricted(G, H, _guards(args), sigma=sigma)
    result = report.to_dict()
    result["mode"] = "lists" if args.lists is not None else "unrestricted"
    return (reports.EXIT_OK if report.holds else reports.EXIT_NEGATIVE), str(report.holds).lower(), result


def _cmd_crnumber(args) -> Result:
    H = load_graph(args.pattern)
    report = canonical_ramsey_number(H, args.n_max, _guards(args))
    if report.known:
        return reports.EXIT_OK, str(report.value), report.to_dict()
    if report.guard is not None:
        return reports.EXIT_GUARD, "unknown", report.to_dict()
    return reports.EXIT_NEGATIVE, "unknown", report.to_dict()


def _cmd_threshold(args) -> Result:
    cfg = load_experiment_config(args.config)
    update: Dict[str, Any] = {"seed": args.seed}
    if args.workers is not None:
        update["workers"] = args.workers
    if args.solver != "backtrack":
        update["solver"] = args.solver
    cfg = cfg.model_copy(update=update)
    curve = threshold_sweep(cfg, _guards(args))
    write_curve_csv(curve, args.out, include_timings=args.timings)
    result = curve_to_dict(curve)
    result["csv"] = str(args.out)
    return reports.EXIT_OK, "curve-unreliable" if curve.unreliable else "curve-written", result


COMMANDS = {
    "density": _cmd_density,
    "classify": _cmd_classify,
    "encode": _cmd_encode,
    "localdense": _cmd_localdense,
    "avoid": _cmd_avoid,
    "canarrow": _cmd_canarrow,
    "crnumber": _cmd_crnumber,
    "threshold": _cmd_threshold,
}


def _error(e: Exception) -> Dict[str, Any]:
    details = getattr(e, "details", None)
    if isinstance(e, GuardExceededError):
        details = e.to_dict()
    return {"type": type(e).__name__, "message": str(e), "details": details or {}}


def run_command(argv: Sequence[str]) -> int:
    """Parse, dispatch, print the report to stdout and return the exit code."""
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return reports.EXIT_USAGE
    except SystemExit as e:
        # --help
        return reports.EXIT_OK if e.code in (0, None) else reports.EXIT_USAGE

    with _logging_scope(args.log_level, args.include_logs) as capturer:
        error = None
        try:
            code, outcome, result = COMMANDS[args.command](args)
        except GuardExceededError as e:
            logger.warning("[cli] guard exceeded command=%s %s", args.command, e)
            code, outcome, result, error = reports.EXIT_GUARD, Outcome.GUARD_EXCEEDED.value, {}, _error(e)
        except (CanramError, UsageError) as e:
            logger.error("[cli] input error command=%s %s", args.command, e)
            code, outcome, result, error = reports.EXIT_USAGE, "error", {}, _error(e)
        logs = capturer.records if capturer is not None else None

    report = reports.build_report(args.command, code, outcome, result, logs if args.json else None, error)
    if args.json:
        print(reports.dumps(report))
    else:
        print(reports.render_human(report))
        if error is not None:
            print(error["message"], file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    return run_command(sys.argv[1:] if argv is None else argv)
