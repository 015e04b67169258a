from .parallel import thread_map, worker_count
from .progress import progress
from .serialization import complex_pair, to_jsonable

__all__ = [
    "progress",
    "thread_map",
    "worker_count",
    "complex_pair",
    "to_jsonable",
]
