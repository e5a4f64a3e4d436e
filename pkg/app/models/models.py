from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveInt

from app.core.config import settings


class OutputFormat(str, Enum):
    TABLE = "table"
    JSON = "json"


class Command(str, Enum):
    IDEMPOTENTS = "idempotents"
    BAR_HOMOLOGY = "bar-homology"
    XN_COHOMOLOGY = "xn-cohomology"
    HKR_COHOMOLOGY = "hkr-cohomology"
    HKR_HOMOLOGY = "hkr-homology"
    TJURINA = "tjurina"
    STAR = "star"
    TRIVIAL = "trivial"
    MINIVERSAL = "miniversal"
    CHECK = "check"


class LogLevel(str, Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


# Job configuration
class JobConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: Command
    relations: List[str] = []
    variables: Optional[List[str]] = None
    weights: Optional[List[PositiveInt]] = None

    # cutoffs
    n: Optional[int] = Field(None, gt=0)
    p_max: int = Field(4, gt=0)
    max_degree: int = Field(10, gt=0)
    cutoff: int = Field(settings.default_cutoff, gt=0)
    k_max: int = Field(2, gt=0)
    order: int = Field(settings.default_hbar_order, gt=0)
    degree_bound: Optional[int] = Field(None, ge=0)
    table_degree: int = Field(2, ge=0)
    samples: int = Field(settings.random_samples, gt=0)

    # star products
    q1: Optional[str] = None
    q: List[str] = []
    eval_expr: Optional[str] = None

    # switches
    hodge: bool = False
    verify: bool = False
    skip_hodge: bool = False
    with_homology: bool = False
    bless: bool = False
    only: Optional[List[str]] = None

    format: OutputFormat = OutputFormat.TABLE
    seed: int = Field(settings.default_seed, ge=0)
    timing: bool = False
    log_level: LogLevel = LogLevel.INFO


# Flags whose name differs from the field name
FIELD_FLAGS: Dict[str, str] = {
    "eval_expr": "--eval",
    "skip_hodge": "--no-hodge",
}


def flag_for(field_name: str) -> str:
    return FIELD_FLAGS.get(field_name, "--" + field_name.replace("_", "-"))


# Report models
class DegreeRow(BaseModel):
    p: int
    hodge: Optional[int] = None
    internal: Optional[int] = None
    dim: int = Field(ge=0)
    stable: bool = True


class Report(BaseModel):
    tool: str
    version: str
    command: Command
    seed: int
    ok: bool = True
    config: Dict[str, Any]
    results: Dict[str, Any]
    degrees: Optional[List[DegreeRow]] = None
    stable: Optional[bool] = None
    timing_ms: Optional[float] = None
