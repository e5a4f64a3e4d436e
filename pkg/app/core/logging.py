import logging
import sys

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"

logger = logging.getLogger("hochcurve")
if not logger.handlers:
    # stdout carries reports, so diagnostics go to stderr
    handler = logging.StreamHandler(sys.stderr)
    formatter = logging.Formatter(LOG_FORMAT)
    handler.setFormatter(formatter)
    logger.addHandler(handler)
    logger.setLevel(logging.INFO)


def set_level(level: str) -> None:
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))


__all__ = ["logger", "set_level"]
