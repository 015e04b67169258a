from .base import IODriver
from .file import FileIODriver
