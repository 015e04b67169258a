from .io import IODriver, FileIODriver

__all__ = [
    "IODriver",
    "FileIODriver",
]
