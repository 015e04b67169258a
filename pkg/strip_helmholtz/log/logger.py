r"""
:class:`StripLogger` 是 **strip_helmholtz** 中记录日志的模块，封装了 logging 模块的
Logger，使用方式与 :class:`logging.Logger` 相同，并新增了几个简单的 API。

使用方式::

    from strip_helmholtz.log import logger

    logger.info('your msg')
    # 将日志同时写入文件
    logger.add_file('/path/to/log', level='INFO')
    # 修改终端输出形式
    logger.set_stdout('naive', level='WARN')
    # 相同内容仅警告一次，例如级数截断警告
    logger.warning_once('your msg')

日志级别默认读取环境变量 ``STRIP_HELMHOLTZ_LOG_LEVEL``。
"""

import datetime
import logging
import os
import sys
import warnings
from pathlib import Path
from typing import Optional, Union

from rich.logging import RichHandler

from strip_helmholtz.log.handler import StdoutStreamHandler, TqdmLoggingHandler

__all__ = [
    'logger'
]

ROOT_NAME = 'strip_helmholtz'
LEVEL_ENV = 'STRIP_HELMHOLTZ_LOG_LEVEL'


class LoggerSingleton(type):
    _instances = {}

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            cls._instances[cls] = super(LoggerSingleton, cls).__call__(*args, **kwargs)
        return cls._instances[cls]


class StripLogger(logging.Logger, metaclass=LoggerSingleton):
    def __init__(self, name):
        super().__init__(name)
        self._warning_msgs = set()

    def add_file(self, path: Optional[Union[str, Path]] = None, level='AUTO',
                 remove_other_handlers: bool = False, mode: str = "w"):
        """
        将日志输出到 path 中。

        :param path: 若 path 带有后缀则视为文件；否则视为文件夹，并在其中以时间戳
            创建日志文件。
        :param level: 可选 ['INFO', 'WARNING', 'DEBUG', 'ERROR', 'AUTO']，其中
            AUTO 表示根据环境变量 ``STRIP_HELMHOLTZ_LOG_LEVEL`` 设置。
        :param remove_other_handlers: 是否移除其它 handler。
        :param mode: 可选 ['w', 'a']。
        """
        if level == 'AUTO':
            level = parse_level()
        return _add_file_handler(self, path, level, remove_other_handlers, mode)

    def set_stdout(self, stdout: str = 'rich', level: str = 'AUTO'):
        """
        设置 log 的终端输出形式。

        :param stdout: 可选 ['rich', 'naive', 'raw', 'tqdm', 'none']。
        :param level: 同 :meth:`add_file`。
        """
        if level == 'AUTO':
            level = parse_level()
        return _set_stdout_handler(self, stdout, level)

    def warning_once(self, msg, *args, **kwargs):
        """
        相同的 warning 内容只会输出一次。
        """
        if msg in self._warning_msgs:
            return
        self._warning_msgs.add(msg)
        if self.isEnabledFor(logging.WARNING):
            self._log(logging.WARNING, msg, args, **kwargs)

    def setLevel(self, level) -> None:
        """
        同时设置 logger 与其全部 handler 的级别。
        """
        if isinstance(level, str):
            level = level.upper()
        super().setLevel(level)
        for handler in self.handlers:
            handler.setLevel(level)


def _get_level(level):
    if not isinstance(level, int):
        level = {'info': logging.INFO, 'debug': logging.DEBUG,
                 'warn': logging.WARN, 'warning': logging.WARNING,
                 'error': logging.ERROR}[level.lower()]
    return level


def _add_file_handler(_logger: logging.Logger, path: Optional[Union[str, Path]] = None,
                      level: str = 'INFO', remove_other_handlers: bool = False,
                      mode: str = "w"):
    if path is None:
        path = Path.cwd()
    if isinstance(path, str):
        path = Path(path)
    if not isinstance(path, Path):
        raise TypeError("Parameter `path` can only be `str` or `pathlib.Path` type.")
    if not path.exists():
        _, tail = os.path.splitext(path)
        if tail == '':
            path.mkdir(parents=True, exist_ok=True)
        else:
            os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    if path.is_dir():
        path = path.joinpath(datetime.datetime.now().strftime('%Y-%m-%d-%H_%M_%S_%f') + '.log')
    if mode not in {"w", "a"}:
        raise ValueError("Parameter `mode` can only be one of these values: ('w', 'a').")

    for h in _logger.handlers:
        if isinstance(h, logging.FileHandler) and os.path.abspath(path) == h.baseFilename:
            return h
    if os.path.exists(path):
        warnings.warn(f'log already exists in {path}')

    file_handler = logging.FileHandler(path, mode=mode)
    file_handler.setLevel(_get_level(level))
    file_handler.setFormatter(logging.Formatter(
        fmt='%(asctime)s - %(module)s - [%(levelname)s] - %(message)s',
        datefmt='%Y/%m/%d %H:%M:%S'))
    _logger.addHandler(file_handler)
    _logger.info(f"Writing log to file:{os.path.abspath(path)}")

    if remove_other_handlers:
        for h in [h for h in _logger.handlers if not isinstance(h, logging.FileHandler)]:
            _logger.removeHandler(h)
    return file_handler


def _set_stdout_handler(_logger, stdout='rich', level='INFO'):
    level = _get_level(level)
    supported_stdout = ['none', 'raw', 'tqdm', 'naive', 'rich']
    if stdout not in supported_stdout:
        raise ValueError(f'stdout must in one of {supported_stdout}')
    _handlers = (StdoutStreamHandler, TqdmLoggingHandler, RichHandler)
    for h in list(_logger.handlers):
        if isinstance(h, _handlers) or type(h) is logging.StreamHandler:
            _logger.removeHandler(h)

    if stdout == 'raw':
        stream_handler = StdoutStreamHandler()
    elif stdout == 'rich':
        stream_handler = RichHandler(level=level, log_time_format="[%X]")
    elif stdout == 'naive':
        stream_handler = logging.StreamHandler(sys.stdout)
    elif stdout == 'tqdm':
        stream_handler = TqdmLoggingHandler(level)
    else:
        return None

    stream_handler.setLevel(level)
    stream_handler.setFormatter(logging.Formatter('%(message)s'))
    _logger.addHandler(stream_handler)
    return stream_handler


def _init_logger(path=None, stdout='rich', level='INFO'):
    level = _get_level(level)
    _logger = StripLogger(ROOT_NAME)
    _logger.propagate = False
    _set_stdout_handler(_logger, stdout, level)
    if path is not None:
        _add_file_handler(_logger, path, level)
    _logger.setLevel(level)
    return _logger


def parse_level():
    return os.environ.get(LEVEL_ENV, 'INFO').upper()


logger = _init_logger(path=None, stdout='rich', level=parse_level())
