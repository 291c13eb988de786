import logging
import sys
from pathlib import Path
from typing import Any, Optional

from .config_loader import config_loader

# names handed out by setup_logging, re-applied by reconfigure_all
_configured = set()


def setup_logging(name: str = None) -> logging.Logger:
    """
    Setup logging configuration from config file

    Args:
        name: Logger name. If None, returns root logger

    Returns:
        Configured logger instance
    """
    config = config_loader.get_section('logging')

    logger = logging.getLogger(name)
    logger.handlers.clear()

    log_level = getattr(logging, config.get('level', 'INFO').upper())
    logger.setLevel(log_level)

    formatter = logging.Formatter(
        config.get('format', '%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    )

    # stdout carries JSON/CSV results, so the console handler writes to stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_file = Path(config.get('file', './logs/pkl.log'))
    log_file.parent.mkdir(parents=True, exist_ok=True)

    file_handler = logging.FileHandler(
        log_file,
        mode='a',
        encoding='utf-8'
    )
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)
    logger.propagate = False
    _configured.add(name)

    return logger


def reconfigure_all():
    """Re-apply the logging section (after -c or -v) to every logger already created"""
    for name in sorted(_configured, key=str):
        setup_logging(name)


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance with the specified name

    Args:
        name: Logger name (usually __name__)

    Returns:
        Logger instance
    """
    return setup_logging(name)


class RunLogger:
    """Special logger for solver runs, certificate checks and CLI commands"""

    def __init__(self):
        self.logger = get_logger('run_logger')

    def log_solver_run(self, problem_name: str, report: Any = None, error: Optional[Exception] = None):
        """Log one SDP solve"""
        if error:
            self.logger.error(f"Solve '{problem_name}' failed: {error}")
            return
        self.logger.info(
            f"Solve '{problem_name}' [{report.backend}] status={report.status} "
            f"objective={report.objective} primal_res={report.primal_residual:.3e} "
            f"dual_res={report.dual_residual:.3e} time={report.wall_time:.2f}s"
        )

    def log_verification(self, kind: str, residual: float, tolerance: float):
        """Log a certificate verification"""
        if residual <= tolerance:
            self.logger.info(f"Certificate '{kind}' verified: residual={residual:.3e} (tol {tolerance:.1e})")
        else:
            self.logger.warning(f"Certificate '{kind}' rejected: residual={residual:.3e} (tol {tolerance:.1e})")

    def log_command(self, command: str, args: dict, error: Optional[Exception] = None):
        """Log CLI command execution"""
        if error:
            self.logger.error(f"Command '{command}' failed:\nArgs: {args}\nError: {error}")
        else:
            self.logger.info(f"Command '{command}' called:\nArgs: {args}")

    def log_pipeline_step(self, step: str, details: dict):
        self.logger.info(f"Pipeline step '{step}'")
        self.logger.debug(f"Details: {details}")


# Create global run logger instance
run_logger = RunLogger()
