import logging
import sys

import colorlog

LOG_FORMAT = "%(log_color)s[%(levelname)-8s] %(name)s: %(message)s"


def get_logger(name: str | None = None) -> logging.Logger:
    """Return a colored logger writing to stderr, so stdout stays free for JSON and tables"""
    logger = colorlog.getLogger(name)
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(
        colorlog.ColoredFormatter(LOG_FORMAT, log_colors=colorlog.default_log_colors | {"DEBUG": "light_black"})
    )
    logger.handlers.clear()
    logger.addHandler(handler)
    logger.propagate = False
    return logger


def set_level(level: str | int) -> None:
    """Apply a level to every logger handed out by `get_logger` within the package"""
    logging.getLogger().setLevel(level)
    for name, logger in logging.Logger.manager.loggerDict.items():
        if name.startswith("circlepoc") and isinstance(logger, logging.Logger):
            logger.setLevel(level)
