"""
Configuration settings for nvsim
"""

import logging
import os
from typing import Any, Dict, Optional

from dotenv import load_dotenv

load_dotenv()  # allows NVSIM_* overrides in .env


class NvsimConfig:
    """Configuration class for simulation runtime settings"""

    # Base settings
    BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    CONFIG_DIR = os.path.join(BASE_DIR, "configs")
    OUTPUT_DIR = os.getenv("NVSIM_OUTPUT_DIR", os.path.join(BASE_DIR, "output"))

    # Worker pool
    DEFAULT_WORKERS = os.getenv("NVSIM_WORKERS")
    CHUNK_SIZE = int(os.getenv("NVSIM_CHUNK_SIZE", "64"))  # detunings per batched trajectory

    # Logging
    LOG_LEVEL = os.getenv("NVSIM_LOG_LEVEL", "INFO")
    LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

    # Celery
    BROKER_URL = os.getenv("NVSIM_BROKER_URL", "redis://localhost:6379/0")
    RESULT_BACKEND = os.getenv("NVSIM_RESULT_BACKEND", "redis://localhost:6379/1")

    # Output
    CSV_ENCODING = "utf-8"
    SUPPORTED_CONFIG_FORMATS = [".toml", ".json"]

    @classmethod
    def ensure_output_dir(cls, path: Optional[str] = None) -> str:
        """Ensure the output directory exists"""
        target = path or cls.OUTPUT_DIR
        os.makedirs(target, exist_ok=True)
        return target

    @classmethod
    def resolve_workers(cls, override: Optional[int] = None) -> int:
        """Worker count: explicit value, then NVSIM_WORKERS, then CPU count."""
        if override is not None and override > 0:
            return int(override)
        env_value = os.getenv("NVSIM_WORKERS", cls.DEFAULT_WORKERS or "")
        if env_value:
            try:
                workers = int(env_value)
                if workers > 0:
                    return workers
            except ValueError:
                logging.getLogger(__name__).warning(
                    "Ignoring non-integer NVSIM_WORKERS=%r", env_value
                )
        return max(1, os.cpu_count() or 1)

    @classmethod
    def configure_logging(cls, verbose: bool = False) -> None:
        """Set up root logging once for an entry point."""
        level = logging.DEBUG if verbose else getattr(logging, cls.LOG_LEVEL.upper(), logging.INFO)
        logging.basicConfig(level=level, format=cls.LOG_FORMAT)
        logging.getLogger().setLevel(level)

    @classmethod
    def celery_settings(cls) -> Dict[str, Any]:
        """Settings handed to the Celery application"""
        return {
            "broker_url": cls.BROKER_URL,
            "result_backend": cls.RESULT_BACKEND,
            "task_serializer": "json",
            "result_serializer": "json",
            "accept_content": ["json"],
            "worker_concurrency": 1,
        }
