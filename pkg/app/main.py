import json
import sys
import time
from contextlib import nullcontext
from typing import Any, Iterator, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from app.algebra.parser import parse_polynomial, parse_relations
from app.commands import algebra, check, homology, koszul, star
from app.core.config import settings
from app.core.exceptions import UsageError, register_exception_handlers
from app.core.logging import logger, set_level
from app.core.routing import CommandApp, Option
from app.core.workers import worker_pool
from app.models.models import JobConfig, OutputFormat, Report, flag_for

app = CommandApp(
    prog="hochcurve",
    description="Exact Hochschild, Harrison and Hodge computations for plane curves and Q[z]/(z^k)",
    version=settings.version,
    options=(
        Option.of("--format", choices=[f.value for f in OutputFormat], help="table (default) or json"),
        Option.of("--seed", type=int, help="seed for randomized checks"),
        Option.of("--timing", action="store_true", help="include wall-clock timing in the report"),
        Option.of("--log-level", type=str.upper, choices=["DEBUG", "INFO", "WARNING", "ERROR"]),
    ),
)

# Register exception handlers
register_exception_handlers(app)

# Include routers
app.include_router(algebra.router, tags=["algebra"])
app.include_router(homology.router, tags=["bar-complex"])
app.include_router(koszul.router, tags=["koszul"])
app.include_router(star.router, tags=["deformations"])
app.include_router(check.router, tags=["validation"])


def parse_args(argv: Optional[Sequence[str]] = None) -> JobConfig:
    """argv -> validated JobConfig; every expression is parsed eagerly."""
    namespace = app.build_parser().parse_args(list(argv) if argv is not None else None)
    values = {k: v for k, v in vars(namespace).items() if v is not None}
    try:
        config = JobConfig(**values)
    except ValidationError as exc:
        error = exc.errors()[0]
        flag = flag_for(str(error["loc"][0])) if error["loc"] else "arguments"
        raise UsageError(f"{flag}: {error['msg']}", extra={"flag": flag}) from None
    _parse_expressions(config)
    logger.debug("parse_args | config=%s", config.model_dump(mode="json", exclude_none=True))
    return config


def _parse_expressions(config: JobConfig):
    variables = config.variables
    if config.relations:
        variables = parse_relations(config.relations, variables)[0].variables
    for text in ([config.q1] if config.q1 else []) + config.q:
        parse_polynomial(text, variables)


def run(config: JobConfig) -> Report:
    """Dispatch to the command handler and wrap its output in a Report."""
    route = app.route(config.command.value)
    set_level(config.log_level.value)
    logger.info("run | command=%s seed=%s", config.command.value, config.seed)
    started = time.perf_counter()
    with worker_pool() if settings.workers > 1 else nullcontext():
        outcome = route.handler(config)
    elapsed = (time.perf_counter() - started) * 1000
    return Report(
        tool=settings.project_name,
        version=settings.version,
        command=config.command,
        seed=config.seed,
        ok=outcome.get("ok", True),
        config=config.model_dump(mode="json", exclude_none=True, exclude={"timing", "log_level", "format"}),
        results=outcome["results"],
        degrees=outcome.get("degrees"),
        stable=outcome.get("stable"),
        timing_ms=round(elapsed, 3) if config.timing else None,
    )


def _flatten(prefix: str, value: Any) -> Iterator[Tuple[str, str]]:
    if isinstance(value, dict):
        if not value:
            yield prefix, "{}"
        for k, v in value.items():
            yield from _flatten(f"{prefix}.{k}" if prefix else str(k), v)
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        for i, v in enumerate(value):
            yield from _flatten(f"{prefix}[{i}]", v)
    elif isinstance(value, list):
        yield prefix, "{" + ", ".join(str(v) for v in value) + "}"
    else:
        yield prefix, "null" if value is None else str(value).lower() if isinstance(value, bool) else str(value)


def render(report: Report, fmt: OutputFormat = OutputFormat.TABLE) -> str:
    if fmt == OutputFormat.JSON:
        return json.dumps(report.model_dump(mode="json", exclude_none=True), indent=2, sort_keys=True, ensure_ascii=False)
    lines: List[str] = [f"{report.tool} {report.version} | {report.command.value} | seed={report.seed}"]
    width = 0
    pairs = list(_flatten("", report.results))
    if pairs:
        width = max(len(k) for k, _ in pairs)
    lines.extend(f"{k.ljust(width)}  {v}" for k, v in pairs)
    if report.degrees:
        lines.append("")
        lines.append(f"{'p':>4} {'hodge':>5} {'internal':>8} {'dim':>5}  stable")
        for row in report.degrees:
            hodge = "-" if row.hodge is None else row.hodge
            internal = "-" if row.internal is None else row.internal
            lines.append(f"{row.p:>4} {hodge:>5} {internal:>8} {row.dim:>5}  {'yes' if row.stable else 'no'}")
    if report.stable is not None:
        lines.append(f"stable: {'yes' if report.stable else 'indeterminate'}")
    if report.timing_ms is not None:
        lines.append(f"timing_ms: {report.timing_ms}")
    return "\n".join(lines)


def _command_of(argv: Optional[Sequence[str]]) -> str:
    args = list(argv) if argv is not None else sys.argv[1:]
    return next((a for a in args if a in app.routes), "hochcurve")


def main(argv: Optional[Sequence[str]] = None) -> int:
    command = _command_of(argv)
    try:
        config = parse_args(argv)
        report = run(config)
    except Exception as exc:
        return app.handle_exception(command, exc)
    print(render(report, config.format))
    return 0 if report.ok else 1
