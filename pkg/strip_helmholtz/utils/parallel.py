"""
线程池上的并行映射。线程数上限取 ``SolverOptions.threads``，未设置时读取环境变量
``STRIP_HELMHOLTZ_THREADS``。结果总是按输入顺序返回。
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence

from strip_helmholtz.errors import InvalidParameter
from strip_helmholtz.utils.progress import progress

__all__ = [
    "worker_count",
    "thread_map",
]


def worker_count(threads: Optional[int] = None) -> int:
    if threads is None:
        env = os.environ.get("STRIP_HELMHOLTZ_THREADS")
        if env is None:
            return min(8, os.cpu_count() or 1)
        try:
            threads = int(env)
        except ValueError:
            raise InvalidParameter("STRIP_HELMHOLTZ_THREADS", env, "must be an integer") from None
    if threads < 1:
        raise InvalidParameter("threads", threads, "must be at least 1")
    return threads


def thread_map(func: Callable, items: Sequence, threads: Optional[int] = None,
               desc: Optional[str] = None) -> List:
    """
    :param desc: 不为 ``None`` 时显示进度条。
    """
    workers = min(worker_count(threads), max(1, len(items)))
    bar = progress(items, desc=desc or "", disable=desc is None)
    if workers == 1:
        return [func(item) for item in bar]
    with ThreadPoolExecutor(max_workers=workers) as pool, bar.bar:
        futures = [pool.submit(func, item) for item in items]
        results = []
        for future in futures:
            results.append(future.result())
            bar.advance()
    return results
