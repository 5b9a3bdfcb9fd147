"""
Command line front end
count, search, sweep, verify and serve subcommands; exit codes 0 ok, 1 failed
check, 2 usage error, 3 search budget exceeded
"""

import argparse
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from app.core.config import settings
from app.core.errors import BudgetExceededError
from app.core.logging import setup_logging
from app.schemas.coloring import Coloring
from app.schemas.equation import Equation
from app.schemas.search import SearchMode, SearchRequest
from app.services.coloring_service import ColoringService
from app.services.counting_service import CountingService
from app.services.manifest_service import build_manifest, write_manifest
from app.services.search_service import run_search
from app.services.verification_service import (
    CONJECTURE_COLUMNS,
    COROLLARY_COLUMNS,
    FLOOR_COLUMNS,
    IDENTITY_COLUMNS,
    THEOREM_COLUMNS,
    Suite,
    VerificationService,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

COUNT_COLUMNS = [
    "schema", "equation", "n", "runs", "mono", "nonmono", "rainbow", "total",
    "d", "nu1", "nu2", "nu3",
]

VERIFY_EPILOG = "\n".join(
    [
        "CSV files (header row, schema column first):",
        "  theorems.csv          " + ",".join(THEOREM_COLUMNS),
        "  exhaustive_floor.csv  " + ",".join(FLOOR_COLUMNS),
        "  corollaries.csv       " + ",".join(COROLLARY_COLUMNS),
        "  identities.csv        " + ",".join(IDENTITY_COLUMNS),
        "  conjectures.csv       " + ",".join(CONJECTURE_COLUMNS),
    ]
)


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated integers, got '{text}'")


def _equation(text: str) -> Equation:
    try:
        return Equation.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schur-colorings",
        description="Count and search monochromatic and rainbow solutions on colored [1, n]",
    )
    parser.add_argument("--log-level", default=settings.LOG_LEVEL)
    sub = parser.add_subparsers(dest="command", required=True)

    count = sub.add_parser("count", help="Count solution classes of colorings")
    count.add_argument("--eq", type=_equation, default=Equation.schur())
    count.add_argument("--n", type=int, help="Expected length; checked against the coloring")
    count.add_argument("--coloring", required=True, help="Run-length text or @file (one per line)")
    count.add_argument("--r", type=int, choices=(2, 3))
    count.add_argument("--classes", action="store_true", help="Class counts only (default)")
    count.add_argument("--stats", action="store_true", help="Add mu, pair and region statistics")
    count.add_argument("--format", choices=("json", "csv"), default="json")

    search = sub.add_parser("search", help="Search for extremal colorings")
    _search_arguments(search)
    search.add_argument("--mode", type=SearchMode, choices=list(SearchMode), default=SearchMode.EXHAUSTIVE)
    search.add_argument("--r", type=int, choices=(2, 3), default=2)
    search.add_argument("--constraint", type=_int_list, help="Per-color counts, e.g. 8,12")
    search.add_argument("--restarts", type=int)
    search.add_argument("--pattern", help="Block pattern for sweep mode, e.g. RBR")
    search.add_argument("--granularity", type=int, default=1)

    sweep = sub.add_parser("sweep", help="Sweep block boundaries of a color pattern")
    _search_arguments(sweep)
    sweep.add_argument("--pattern", required=True)
    sweep.add_argument("--granularity", type=int, default=1)

    verify = sub.add_parser(
        "verify",
        help="Run a verification suite and write CSV tables",
        epilog=VERIFY_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    verify.add_argument("--suite", type=Suite, choices=list(Suite), required=True)
    verify.add_argument("--n-list", type=_int_list, required=True)
    verify.add_argument("--out", type=Path, default=Path("results"))
    verify.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    verify.add_argument("--samples", type=int, help="Random colorings per n (identities)")

    serve = sub.add_parser("serve", help="Serve the HTTP API")
    serve.add_argument("--host", default=settings.HOST)
    serve.add_argument("--port", type=int, default=settings.PORT)
    return parser


def _search_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--eq", default="schur")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--objective", default="min-mono")
    parser.add_argument("--budget", type=int, default=settings.SEARCH_BUDGET)
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--threads", type=int, default=settings.SEARCH_THREADS)
    parser.add_argument("--out", type=Path, help="Also write report.json and manifest.json here")


def _load_colorings(text: str, r: Optional[int]) -> List[Coloring]:
    if text.startswith("@"):
        lines = Path(text[1:]).read_text().splitlines()
        return [ColoringService.parse_runlength(line, r) for line in lines if line.strip()]
    return [ColoringService.parse_runlength(text, r)]


def _emit(payload: Any) -> None:
    print(json.dumps(payload, indent=2))


def cmd_count(args: argparse.Namespace, argv: Sequence[str]) -> int:
    colorings = _load_colorings(args.coloring, args.r)
    for coloring in colorings:
        if args.n is not None and coloring.n != args.n:
            raise ValueError(f"Coloring '{coloring.runs}' has length {coloring.n}, expected {args.n}")

    results = [CountingService.summarize(c, args.eq, stats=args.stats) for c in colorings]
    if args.format == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=COUNT_COLUMNS, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for result in results:
            row: Dict[str, Any] = {
                "schema": settings.SCHEMA_VERSION,
                "equation": result.equation,
                "n": result.coloring.n,
                "runs": result.coloring.runs,
                **result.counts.model_dump(),
            }
            if result.regions is not None:
                row.update(result.regions.model_dump(include={"d", "nu1", "nu2", "nu3"}))
            writer.writerow(row)
        sys.stdout.write(buffer.getvalue())
        return EXIT_OK

    manifest = build_manifest(argv, equation=args.eq.text, n=colorings[0].n, r=colorings[0].r)
    records = [result.model_dump(mode="json", exclude_none=True) for result in results]
    _emit({"results": records, "manifest": manifest.model_dump(mode="json")})
    return EXIT_OK


def cmd_search(args: argparse.Namespace, argv: Sequence[str]) -> int:
    start = time.perf_counter()
    if args.command == "sweep":
        mode, r, constraint, restarts = SearchMode.SWEEP, 2, None, None
    else:
        mode, r, constraint, restarts = args.mode, args.r, args.constraint, args.restarts
    request = SearchRequest(
        equation=args.eq,
        n=args.n,
        r=r,
        objective=args.objective,
        mode=mode,
        constraint=constraint,
        budget=args.budget,
        restarts=restarts,
        seed=args.seed,
        pattern=args.pattern,
        granularity=args.granularity,
    )
    report = run_search(request, threads=args.threads)
    manifest = build_manifest(
        argv,
        equation=report.equation,
        n=report.n,
        r=report.r,
        seed=args.seed,
        budget=args.budget,
        threads=args.threads,
        wall_seconds=time.perf_counter() - start,
    )
    payload = {"report": report.model_dump(mode="json"), "manifest": manifest.model_dump(mode="json")}
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "report.json").write_text(json.dumps(payload["report"], indent=2) + "\n")
        write_manifest(manifest, args.out)
    _emit(payload)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, argv: Sequence[str]) -> int:
    start = time.perf_counter()
    service = VerificationService(args.out, seed=args.seed)
    options: Dict[str, Any] = {}
    if args.suite == Suite.IDENTITIES and args.samples is not None:
        options["samples"] = args.samples
    result = service.run(args.suite, args.n_list, **options)

    manifest = build_manifest(argv, seed=args.seed, wall_seconds=time.perf_counter() - start)
    write_manifest(manifest, args.out)
    _emit({"suite": result.suite.value, "files": result.files, "failures": result.failures})
    if not result.passed:
        for failure in result.failures:
            logger.error(failure)
        return EXIT_FAILED
    return EXIT_OK


def cmd_serve(args: argparse.Namespace, argv: Sequence[str]) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port, log_level=args.log_level.lower())
    return EXIT_OK


COMMANDS = {
    "count": cmd_count,
    "search": cmd_search,
    "sweep": cmd_search,
    "verify": cmd_verify,
    "serve": cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        return COMMANDS[args.command](args, argv)
    except BudgetExceededError as e:
        logger.error(str(e))
        return EXIT_BUDGET
    except (ValueError, OSError) as e:
        logger.error(str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
