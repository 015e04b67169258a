"""
网格计算使用的 ``rich`` 进度条。
"""

from operator import length_hint
from typing import Optional

from rich.progress import (BarColumn, Progress, ProgressColumn, Text, TextColumn, TimeElapsedColumn,
                           TimeRemainingColumn)

__all__ = [
    "progress",
]


class SpeedColumn(ProgressColumn):
    """
    显示 task 的速度。
    """

    def render(self, task):
        speed = task.speed
        if speed is None:
            return Text('-- pt./s', style='progress.data.speed')
        if speed > 0.1:
            return Text(str(round(speed, 2)) + ' pt./s', style='progress.data.speed')
        return Text(str(round(1 / speed, 2)) + ' s/pt.', style='progress.data.speed')


def _new_progress(disable: bool) -> Progress:
    return Progress(
        "[progress.description]{task.description}",
        "[progress.percentage]{task.percentage:>3.0f}%",
        BarColumn(),
        SpeedColumn(),
        TimeElapsedColumn(),
        "/",
        TimeRemainingColumn(),
        TextColumn("{task.fields[post_desc]}", justify="right"),
        transient=True,
        disable=disable,
    )


class progress:
    """
    对 ``rich`` 进度条的简单包装，用法与 ``tqdm`` 类似::

        bar = progress(points, desc="Interior field")
        for point in bar:
            # do something
            bar.set_postfix(done=1)

    :param sequence: 需要遍历的序列。
    :param desc: 进度条最左侧的描述语句。
    :param total: 遍历对象的总数，为 ``None`` 时自动计算。
    :param disable: 是否隐藏进度条。
    :param post_desc: 进度条最右侧的补充描述语句。
    """

    def __init__(self, sequence, desc: str = "Working on...", total: Optional[float] = None,
                 disable: bool = False, post_desc: str = ""):
        self.sequence = sequence
        self.total = float(length_hint(sequence)) if total is None else total
        self.bar = _new_progress(disable)
        self.task_id = self.bar.add_task(desc, total=self.total, post_desc=post_desc, visible=not disable)

    def __iter__(self):
        with self.bar:
            yield from self.bar.track(self.sequence, task_id=self.task_id, total=self.total)

    def advance(self, step: float = 1):
        self.bar.update(self.task_id, advance=step)

    def set_post_desc(self, post_desc: str):
        self.bar.update(self.task_id, post_desc=post_desc, advance=0)

    def set_postfix(self, **kwargs):
        """
        以 ``key1: value1, key2: value2`` 的格式设置最右侧的描述语句。
        """
        self.set_post_desc(", ".join([f"{k}: {v}" for k, v in kwargs.items()]))
