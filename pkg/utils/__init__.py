from .config_loader import config_loader, ConfigLoader
from .logger import get_logger, setup_logging, reconfigure_all, run_logger

__all__ = ['config_loader', 'ConfigLoader', 'get_logger', 'setup_logging', 'reconfigure_all', 'run_logger']
