import os
from pathlib import Path
from pydantic_settings import BaseSettings

PROJECT_ROOT = Path(__file__).resolve().parents[2]


class Settings(BaseSettings):
    # Resource caps
    max_groebner_terms: int = int(os.getenv("HOCHCURVE_MAX_GROEBNER_TERMS", "5000"))
    max_idempotent_degree: int = int(os.getenv("HOCHCURVE_MAX_IDEMPOTENT_DEGREE", "7"))
    max_slice_dim: int = int(os.getenv("HOCHCURVE_MAX_SLICE_DIM", "6000"))

    # Truncation defaults
    default_cutoff: int = 20
    stability_window: int = 3
    default_hbar_order: int = 3

    # Randomized checks
    default_seed: int = 20020630
    random_samples: int = 100

    # Slice fan-out; 1 keeps everything on the calling thread
    workers: int = 1

    corpus_dir: str = str(PROJECT_ROOT / "corpus" / "v1")

    project_name: str = "Hochschild Curve Toolkit"
    version: str = "1.0.0"

    class Config:
        env_prefix = "HOCHCURVE_"
        # Load the repository .env regardless of current working directory
        env_file = str(PROJECT_ROOT / ".env")


settings = Settings()
