import json
import os
import shutil

import pandas as pd

from strip_helmholtz.driver.io.base import IODriver


class FileIODriver(IODriver):
    @staticmethod
    def load(path: str):
        assert os.path.exists(path), f"File {path} does not exist."
        with open(path, 'r') as f:
            return f.read()

    @staticmethod
    def save(obj: str, path: str, append: bool = False):
        folder = os.path.dirname(os.path.abspath(path))
        os.makedirs(folder, exist_ok=True)
        with open(path, 'a+' if append else 'w') as f:
            f.write(obj)

    @staticmethod
    def save_json(obj: dict, path: str):
        FileIODriver.save(json.dumps(obj, indent=2, sort_keys=True) + "\n", path)

    @staticmethod
    def save_frame(frame: pd.DataFrame, path: str):
        folder = os.path.dirname(os.path.abspath(path))
        os.makedirs(folder, exist_ok=True)
        # repr 精度保证同一平台上输出逐字节一致
        frame.to_csv(path, index=False, float_format="%.17g")

    @staticmethod
    def exists(path: str) -> bool:
        return os.path.exists(path)

    @staticmethod
    def delete(path: str):
        if os.path.isdir(path):
            shutil.rmtree(path)
        elif os.path.exists(path):
            os.remove(path)

    @staticmethod
    def makedirs(path: str, exist_ok: bool = False):
        os.makedirs(path, exist_ok=exist_ok)
