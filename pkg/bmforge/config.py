"""
Numerical Settings

All tunable constants of the pipeline live here. Values come from the
environment (prefix ``BMFORGE_``) or from a ``.env`` file at the project root.
"""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv
from pydantic_settings import BaseSettings

ENV_FILE = Path(__file__).resolve().parents[1] / ".env"


class Settings(BaseSettings):
    """Numerical defaults loaded from environment or .env file."""

    threads: int = 1
    log_level: str = "INFO"

    # weights
    r_max: float = 1e8
    r_min: float = 1e3
    epsilon_tail: float = 1e-3
    divergence_ceiling: float = 1e8
    uniform_points: int = 200
    grading_ratio: float = 1.05

    # hilbert
    hilbert_max_spacing: float = 0.1

    # transform grids
    grid_points: int = 2 ** 16
    extent: float = 1600.0
    leakage_ceiling: float = 1e-4
    projection_steps: int = 64
    taper_fraction: float = 0.25
    taper_order: int = 8

    # deflation
    zero_threshold: float = 1e-7
    n_max: int = 8

    # bessel
    rayleigh_y_min: float = 1e-3
    pq_max_dim: int = 15
    sonine_anchor: float = 1.0
    sonine_half_periods: int = 200
    sonine_averaging_levels: int = 4
    sonine_panel_nodes: int = 16

    # majorize
    j_max: int = 40
    samples_per_annulus: int = 512
    audit_samples: int = 10_000

    class Config:
        env_prefix = "BMFORGE_"
        env_file = ENV_FILE
        env_file_encoding = "utf-8"
        extra = "ignore"


load_dotenv(ENV_FILE)


@lru_cache()
def get_settings() -> Settings:
    """Return the process-wide settings instance."""
    return Settings()
