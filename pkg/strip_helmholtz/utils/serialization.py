"""
复数与 JSON 之间的转换。复数写成 ``[re, im]``。
"""

from typing import Any

import numpy as np

__all__ = [
    "to_jsonable",
    "complex_pair",
]


def complex_pair(value) -> list:
    value = complex(value)
    return [float(value.real), float(value.imag)]


def to_jsonable(obj: Any) -> Any:
    """递归地把 numpy 数组、复数与 Enum 转换为可写入 JSON 的对象。"""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_pair(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    if hasattr(obj, "value") and not isinstance(obj, (int, float, str)):
        return obj.value
    return obj
