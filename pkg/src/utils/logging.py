# !/usr/bin/env python3

import logging

from src.utils.typing import LogLevel

PACKAGE_LOGGER = "src"


def set_logger(level: LogLevel, name: str = PACKAGE_LOGGER) -> logging.Logger:
    """set logger

    Note:
        - configures the package root logger, module loggers created with
            logging.getLogger(__name__) propagate to it.

    Args:
        level (LogLevel): logging level
        name (str, optional): logger name. Defaults to the package root.

    Returns:
        logging.Logger: logger
    """
    log_level = get_level(level)

    logger = logging.getLogger(name)
    logger.handlers.clear()

    stream_handler = logging.StreamHandler()

    formatter = logging.Formatter(
        "%(asctime)s [%(levelname)s]"
        "(%(filename)s | %(funcName)s | %(lineno)s): %(message)s"
    )

    stream_handler.setFormatter(formatter)

    logger.setLevel(logging.DEBUG)
    stream_handler.setLevel(log_level)

    logger.addHandler(stream_handler)

    return logger


def get_level(log_level: LogLevel) -> int:
    """get logger level

    Args:
        log_level (LogLevel): output log level on console

    Raises:
        ValueError: undefined level

    Returns:
        int: logger level
    """
    levels = {
        "debug": logging.DEBUG,
        "info": logging.INFO,
        "warning": logging.WARNING,
        "error": logging.ERROR,
    }
    if log_level not in levels:
        raise ValueError(f"log level must be one of {list(levels)}, got {log_level!r}")

    return levels[log_level]
