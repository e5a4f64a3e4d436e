from typing import Any, Dict

from app.algebra.crosscheck import CHECKS, bless, compare_golden, load_golden, run_suite
from app.core.exceptions import UsageError
from app.core.logging import logger
from app.core.routing import CommandRouter, Option
from app.models.models import JobConfig

router = CommandRouter()


@router.command(
    "check",
    help="run the cross-route validation suite and compare golden values",
    options=(
        Option.of("--bless", action="store_true", help="rewrite the golden file from this run"),
        Option.of("--only", nargs="+", metavar="NAME", help="run only the named checks"),
    ),
)
def check(config: JobConfig) -> Dict[str, Any]:
    """Every check passes and every golden value matches."""
    known = {name for name, _ in CHECKS}
    unknown = sorted(set(config.only or ()) - known)
    if unknown:
        raise UsageError(f"unknown check(s) {unknown}; choose from {sorted(known)}")
    suite = run_suite(config.seed, config.only)
    if config.bless:
        bless(suite)
    checks = suite.checks + compare_golden(suite, load_golden())
    passed = all(c.passed for c in checks)
    logger.info("check | seed=%s passed=%s failed=%s", config.seed, passed, [c.name for c in checks if not c.passed])
    return {
        "results": {
            "passed": passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
        },
        "ok": passed,
    }
