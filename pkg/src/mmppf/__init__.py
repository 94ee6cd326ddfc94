"""Toolkit for multi-optional many-sorted past present future (MMPPF)
structures and the PL / PL* / CL description languages."""

from .errors import MmppfError

__version__ = "0.1.0"
__all__ = ["MmppfError", "__version__"]
