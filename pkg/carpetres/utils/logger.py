"""
Logging configuration for carpetres.

Provides consistent console logging through the Rich library.
"""

import logging
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.theme import Theme

CARPET_THEME = Theme({
    "info": "cyan",
    "warning": "yellow",
    "error": "red bold",
    "success": "green",
    "fail": "red",
})

# Shared console instance
console = Console(theme=CARPET_THEME)


def setup_logging(
    level: str = "INFO",
    log_file: Optional[str] = None,
    show_path: bool = False
) -> logging.Logger:
    """
    Set up logging for carpetres.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_file: Optional file path to write logs to
        show_path: Whether to show file paths in log output

    Returns:
        Configured package logger
    """
    log_level = getattr(logging, level.upper(), logging.INFO)

    handlers: list[logging.Handler] = []

    rich_handler = RichHandler(
        console=console,
        show_time=True,
        show_level=True,
        show_path=show_path,
        rich_tracebacks=True,
        markup=True,
    )
    rich_handler.setLevel(log_level)
    handlers.append(rich_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(log_level)
        file_handler.setFormatter(logging.Formatter(
            "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        ))
        handlers.append(file_handler)

    logging.basicConfig(level=log_level, handlers=handlers, force=True)

    logger = logging.getLogger("carpetres")
    logger.setLevel(log_level)
    return logger


def get_logger(name: str = "carpetres") -> logging.Logger:
    """
    Get a logger instance.

    Args:
        name: Logger name (will be prefixed with 'carpetres.')
    """
    if not name.startswith("carpetres"):
        name = f"carpetres.{name}"
    return logging.getLogger(name)


class CarpetLogger:
    """
    Logger with a few console helpers used by the CLI and the verify suites.
    """

    def __init__(self, name: str = "carpetres"):
        self.logger = get_logger(name)
        self.console = console

    def info(self, message: str):
        self.logger.info(message)

    def debug(self, message: str):
        self.logger.debug(message)

    def warning(self, message: str):
        self.logger.warning(message)

    def error(self, message: str, exc_info: bool = False):
        self.logger.error(message, exc_info=exc_info)

    def success(self, message: str):
        """Print a success line (green)."""
        self.console.print(f"[success]✓ {message}[/success]")

    def check(self, label: str, passed: bool, detail: str = ""):
        """Print one pass/fail line of a verification run."""
        mark = "[success]PASS[/success]" if passed else "[fail]FAIL[/fail]"
        suffix = f" [dim]{detail}[/dim]" if detail else ""
        self.console.print(f"  {mark} {label}{suffix}")

    def progress(self, current: int, total: int, message: str = ""):
        percent = (current / total) * 100 if total > 0 else 0
        bar_length = 20
        filled = int(bar_length * current / total) if total > 0 else 0
        bar = "█" * filled + "░" * (bar_length - filled)
        self.console.print(f"[cyan]{bar}[/cyan] {percent:.0f}% {message}")

    def section(self, title: str):
        """Print a section header."""
        self.console.print()
        self.console.rule(f"[bold cyan]{title}[/bold cyan]")
        self.console.print()

    def key_value(self, key: str, value: str):
        self.console.print(f"  [cyan]{key}:[/cyan] {value}")


# Default logger instance
log = CarpetLogger()
