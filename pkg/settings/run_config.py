"""
Run configuration for the command line.

Values come from, in order of precedence: explicit command-line options, the
environment (a .env file included), then the defaults below.
"""
import logging
import os
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator, model_validator

from TaxiBounds.errors import LongRunRefused

logger = logging.getLogger(__name__)

# Load environment variables from .env file
load_dotenv()

DEFAULT_CACHE_DIR = "./taxi_cache"

# Sizes above which a computation counts as a full-scale long run
LONG_RUN_LIMITS = {
    "walks": 44,  # c_n enumeration
    "bridges": 44,  # b_n enumeration
    "polygons": 36,  # polygon word search
    "alm": 36,  # n of A(m, n)
    "gj": 36,  # longest polygon used as a mistake
    "irreducible": 44,  # truncation order N
}


def long_run_banner(label: str, cost: str) -> None:
    """Logged once before any long run starts."""
    logger.warning("=" * 80)
    logger.warning(f"LONG RUN {label}: {cost}")
    logger.warning("=" * 80)


def env_config() -> Dict[str, Any]:
    """TAXI_* environment settings, read at call time."""
    return {
        "cache_dir": os.getenv("TAXI_CACHE_DIR", DEFAULT_CACHE_DIR),
        "jobs": int(os.getenv("TAXI_JOBS", 1)),
        "precision": int(os.getenv("TAXI_PRECISION", 5)),
    }


class RunConfig(BaseModel):
    jobs: int = 1  # worker processes
    precision: int = 5  # decimal places of reported bounds
    cache_dir: Path = Path(DEFAULT_CACHE_DIR)
    long_run: bool = False  # allow full-scale computations
    output: Literal["json", "csv", "text"] = "csv"
    seed: Optional[int] = None

    @field_validator("jobs")
    @classmethod
    def _positive_jobs(cls, jobs: int) -> int:
        if jobs < 1:
            raise ValueError("jobs must be at least 1")
        return jobs

    @field_validator("precision")
    @classmethod
    def _enough_places(cls, precision: int) -> int:
        if precision < 3:
            raise ValueError("precision must be at least 3 decimal places")
        return precision

    @classmethod
    def from_options(cls, **options: Any) -> "RunConfig":
        """Options left as None fall back to the environment, then to the defaults."""
        values = env_config()
        values.update({k: v for k, v in options.items() if v is not None})
        return cls(**values)

    def require_long_run(self, what: str, size: int) -> None:
        """
        Gate every command on LONG_RUN_LIMITS; an allowed long run logs the banner.

        Raises:
            LongRunRefused: if size is beyond the desk limit for what and long_run is off
        """
        limit = LONG_RUN_LIMITS[what]
        if size <= limit:
            return
        if not self.long_run:
            raise LongRunRefused(
                f"{what} at size {size} is a long run (desk limit {limit}); pass --long-run to start it"
            )
        long_run_banner(f"{what} at size {size}", f"beyond the desk limit {limit}")


class ContourParams(BaseModel):
    n: int = Field(ge=2)  # box radius
    m: int = Field(ge=1)  # inner radius
    exhaustive: bool = False
    samples: int = Field(default=1000, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def _inner_box_fits(self):
        if self.m >= self.n:
            raise ValueError(f"need n > m, got n={self.n}, m={self.m}")
        return self
