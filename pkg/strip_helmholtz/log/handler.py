"""
``logger`` 可选的 stdout handler。
"""
import logging
import sys

from tqdm.auto import tqdm

__all__ = [
    "TqdmLoggingHandler",
    "StdoutStreamHandler",
]


class TqdmLoggingHandler(logging.Handler):
    """
    用 ``tqdm.write`` 输出，日志不会打断网格计算时的进度条。
    """

    def emit(self, record):
        try:
            tqdm.write(self.format(record), file=sys.stdout)
        except RecursionError:
            raise
        except Exception:
            self.handleError(record)


class StdoutStreamHandler(logging.StreamHandler):
    """
    每次写入时取当前的 ``sys.stdout``，因此 pytest 的 ``capsys`` 等替换 stdout 的场合依然可用。
    """

    def __init__(self, level=logging.NOTSET):
        super().__init__(sys.stdout)
        self.setLevel(level)

    @property
    def stream(self):
        return sys.stdout

    @stream.setter
    def stream(self, value):
        pass

    def __repr__(self):
        return f"<{type(self).__name__} stdout({logging.getLevelName(self.level)})>"
