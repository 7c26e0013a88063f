"""
Utility functions for carpetres.
"""

from carpetres.utils.logger import get_logger, setup_logging, log
from carpetres.utils.cache import ResultCache
from carpetres.utils.numfmt import fmt17, write_csv

__all__ = ["get_logger", "setup_logging", "log", "ResultCache", "fmt17", "write_csv"]
