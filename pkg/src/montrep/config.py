from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime settings, read from ``MONTREP_*`` environment variables or ``.env``."""

    model_config = SettingsConfigDict(env_prefix="MONTREP_", env_file=".env", extra="ignore")

    # end-to-end verification tolerance (MONTREP_TOL)
    tol: float = 1e-8
    # construction-level identities (closed forms, decompositions)
    identity_tol: float = 1e-10
    # |s -/+ 1| below this switches the bracket to its polynomial branch
    bracket_branch_tol: float = 1e-6
    # smallest |{k}_s| accepted as a divisor
    singular_tol: float = 1e-9

    samples: int = 3
    seed: int = 0
    max_sample_attempts: int = 5
    scan_grid: int = 10_000

    redis_url: str | None = None
    cache_ttl: int = 3600
    log_level: str = "INFO"


settings = Settings()
