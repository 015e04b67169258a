__all__ = [
    'logger',
]

from .logger import logger
