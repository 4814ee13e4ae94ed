"""Logging configuration"""
import logging
import sys
from .settings import settings

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(name: str) -> logging.Logger:
    """Configure and return a logger instance"""
    logger = logging.getLogger(name)
    level = "DEBUG" if settings.debug else settings.log_level.upper()
    logger.setLevel(level)

    # Add handlers if not already added
    if logger.handlers:
        return logger

    formatter = logging.Formatter(LOG_FORMAT)

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # Optional run log next to the reports
    if settings.log_file:
        file_handler = logging.FileHandler(settings.log_file, encoding="utf-8")
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.propagate = False
    return logger


def set_log_level(level: str) -> None:
    """Change the level of every simulator logger (used by the CLI --log-level flag)"""
    settings.log_level = level.upper()
    for name, candidate in logging.Logger.manager.loggerDict.items():
        if name.startswith("src") and isinstance(candidate, logging.Logger):
            candidate.setLevel(settings.log_level)
            for handler in candidate.handlers:
                handler.setLevel(settings.log_level)
