"""Configuration management for tree-hardy."""

import logging
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_prefix="TREE_HARDY_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Solver Configuration
    restarts: int = Field(
        default=32,
        ge=0,
        description="Seeded random starts per operator-norm estimate"
    )
    tol: float = Field(
        default=1e-10,
        gt=0,
        description="Stop a start once the ratio increases by less than this"
    )
    max_iter: int = Field(
        default=10_000,
        ge=1,
        description="Iteration cap per start"
    )
    include_certificate_starts: bool = Field(
        default=True,
        description="Start the ascent from every root-path certificate function"
    )
    brute_force_samples: int = Field(
        default=100_000,
        ge=1,
        description="Random directions sampled by the brute-force oracle"
    )
    brute_force_max_vertices: int = Field(
        default=8,
        ge=1,
        description="Largest tree the brute-force oracle accepts"
    )

    # Partition Configuration
    sigma: float = Field(
        default=0.1,
        gt=0,
        lt=1,
        description="Default sigma for sigma-sets and partitions"
    )
    domination_check_max_vertices: int = Field(
        default=40,
        ge=1,
        description="Run the numeric domination check only up to this size"
    )
    domination_slack: float = Field(
        default=1e-6,
        ge=0,
        description="Relative slack of the numeric domination check"
    )

    # Generator Configuration
    vertex_cap: int = Field(
        default=100_000,
        ge=1,
        description="Maximum vertex count of generated trees"
    )
    depth_cap: int = Field(
        default=64,
        ge=1,
        description="Maximum depth of generated regular trees"
    )

    # Experiment Configuration
    workers: int = Field(
        default=1,
        ge=1,
        description="Threads used to evaluate experiment instances"
    )

    # Logging Configuration
    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )

    # Server Configuration
    server_name: str = Field(
        default="Tree Hardy Server",
        description="Name of the MCP server"
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached application settings."""
    return Settings()


def setup_logging(level: str = "INFO") -> None:
    """Set up logging configuration."""
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
