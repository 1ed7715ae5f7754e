"""Python bindings for the snapinfo analytics core."""

from ._snapinfo import *  # noqa: F401,F403
from ._snapinfo import Error

__all__ = [name for name in dir() if not name.startswith("_")]
