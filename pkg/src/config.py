from pathlib import Path
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent
ENV_PATH = BASE_DIR.parent / ".env"

load_dotenv(ENV_PATH)


class Settings(BaseSettings):
    """
    Ambient settings only. Experiment parameters (step size, driven component,
    initial state, branch seed) always come from an ExperimentConfig file or
    CLI flags so that a config file fully determines a run.
    """

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    logging_level: str = "INFO"

    # Default location of simulate output when --out is not given
    output_dir: str = "results"

    # Process pool size for batch experiments (1 = run in-process)
    batch_workers: int = 1

    # Truncation order of the worked blowup-chain series
    series_order: int = 8


settings = Settings()
