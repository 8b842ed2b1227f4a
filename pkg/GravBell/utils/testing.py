from functools import wraps
from loguru import logger as log

__all__ = ["disable_logging_library"]


def disable_logging_library(name="GravBell"):
    """
    Decorator silencing the loguru records emitted by ``name`` while the wrapped call runs.

    Parameters
    ----------
    name : str
        Module prefix passed to `loguru.logger.disable`. Default is "GravBell".
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            log.disable(name)
            try:
                return func(*args, **kwargs)
            finally:
                log.enable(name)

        return wrapper

    return decorator
