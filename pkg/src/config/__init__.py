"""Configuration module"""
from .settings import Settings, settings
from .logger import setup_logger

__all__ = ["Settings", "settings", "setup_logger"]
