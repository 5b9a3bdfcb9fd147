from pydantic_settings import BaseSettings, SettingsConfigDict

import os


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    # Application settings
    DEBUG: bool = os.getenv("DEBUG", "false").lower() in ("true", "1", "t")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    ARTIFACT_VERSION: str = os.getenv("ARTIFACT_VERSION", "1.0.0")
    SCHEMA_VERSION: int = int(os.getenv("SCHEMA_VERSION", "1"))

    # Server settings
    HOST: str = os.getenv("HOST", "0.0.0.0")
    PORT: int = int(os.getenv("PORT", "8000"))

    # Search settings
    SEARCH_BUDGET: int = int(os.getenv("SEARCH_BUDGET", str(2**30)))
    SEARCH_THREADS: int = int(os.getenv("SEARCH_THREADS", "1"))
    SEARCH_SPLIT_CELLS: int = int(os.getenv("SEARCH_SPLIT_CELLS", "3"))
    WITNESS_CAP: int = int(os.getenv("WITNESS_CAP", "16"))
    PROGRESS_INTERVAL: int = int(os.getenv("PROGRESS_INTERVAL", "1000000"))
    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", "20100"))
    LOCAL_SEARCH_RESTARTS: int = int(os.getenv("LOCAL_SEARCH_RESTARTS", "8"))

    # Verification settings
    IDENTITY_SAMPLES: int = int(os.getenv("IDENTITY_SAMPLES", "200"))
    VERIFY_EXHAUSTIVE_LIMIT: int = int(os.getenv("VERIFY_EXHAUSTIVE_LIMIT", str(2**16)))
    # Exhaustive floor rows cover n = 8 .. FLOOR_MAX_N for a = 1, 2
    FLOOR_MAX_N: int = int(os.getenv("FLOOR_MAX_N", "22"))

    # Frozen tolerance constants (multiples of n unless noted)
    PROP25_TOLERANCE: float = float(os.getenv("PROP25_TOLERANCE", "1.0"))
    PROP43_TOLERANCE: float = float(os.getenv("PROP43_TOLERANCE", "1.0"))
    D_BOUND_TOLERANCE: float = float(os.getenv("D_BOUND_TOLERANCE", "4.0"))
    EXHAUSTIVE_GAP_FACTOR: float = float(os.getenv("EXHAUSTIVE_GAP_FACTOR", "2.0"))
    # Relative error allowed on fitted leading coefficients
    THEOREM_FIT_TOLERANCE: float = float(os.getenv("THEOREM_FIT_TOLERANCE", "0.05"))
    CONJECTURE_FIT_TOLERANCE: float = float(
        os.getenv("CONJECTURE_FIT_TOLERANCE", "0.10")
    )

    def tolerances(self) -> dict[str, float]:
        """Frozen tolerance constants recorded in every run manifest"""
        return {
            "prop25": self.PROP25_TOLERANCE,
            "prop43": self.PROP43_TOLERANCE,
            "d_bound": self.D_BOUND_TOLERANCE,
            "exhaustive_gap": self.EXHAUSTIVE_GAP_FACTOR,
            "theorem_fit": self.THEOREM_FIT_TOLERANCE,
            "conjecture_fit": self.CONJECTURE_FIT_TOLERANCE,
        }


settings = Settings()
