"""Logging setup for the pattern-complexity toolkit."""

import logging
from pathlib import Path

# Third-party loggers that flood DEBUG output during rendering
QUIET_LOGGERS = ("matplotlib", "PIL")


def setup_logging(
    log_level: str = "INFO",
    log_file: str = None,
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
):
    """Console logging plus an optional log file."""
    try:
        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)

        handlers = [logging.StreamHandler()]
        if log_file:
            handlers.append(logging.FileHandler(log_file))

        logging.basicConfig(
            level=str(log_level).upper(),
            format=format,
            handlers=handlers,
            force=True,
        )
        for name in QUIET_LOGGERS:
            logging.getLogger(name).setLevel(logging.WARNING)

    except Exception as e:
        print(f"Error setting up logging -> {e}")
        logging.basicConfig(level=logging.INFO)


def get_logger(name):
    """Get a logger."""
    try:
        return logging.getLogger(name)

    except Exception as e:
        print(f"Error getting logger {name} -> {e}")
        return logging.getLogger()


def log_banner(logger: logging.Logger, title: str, width: int = 60):
    logger.info("=" * width)
    logger.info(title)
    logger.info("=" * width)
