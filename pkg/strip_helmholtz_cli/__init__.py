from .run import RunRequest, run

__all__ = [
    "RunRequest",
    "run",
]
