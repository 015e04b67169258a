from abc import ABC, abstractmethod

import pandas as pd


class IODriver(ABC):
    """
    结果文件的读写接口。命令行通过 :meth:`from_protocol` 获取具体实现。
    """

    @staticmethod
    @abstractmethod
    def load(path: str):
        raise NotImplementedError

    @staticmethod
    @abstractmethod
    def save(obj: str, path: str, append: bool = False):
        raise NotImplementedError

    @staticmethod
    @abstractmethod
    def save_json(obj: dict, path: str):
        raise NotImplementedError

    @staticmethod
    @abstractmethod
    def save_frame(frame: pd.DataFrame, path: str):
        raise NotImplementedError

    @staticmethod
    @abstractmethod
    def exists(path: str) -> bool:
        raise NotImplementedError

    @staticmethod
    @abstractmethod
    def delete(path: str):
        raise NotImplementedError

    @staticmethod
    @abstractmethod
    def makedirs(path: str, exist_ok: bool = False):
        raise NotImplementedError

    @staticmethod
    def from_protocol(protocol):
        if protocol == "file":
            from .file import FileIODriver
            return FileIODriver
        raise ValueError(f"Only support file protocol, not `{protocol}`.")
