"""Exception types shared by every layer of the toolkit.

Each error carries a stable ``code`` string (``PARSE_ERROR``,
``DANGLING_REFERENCE``...) so callers and the CLI can branch on it
without matching message text.
"""

from __future__ import annotations


class MmppfError(Exception):
    """Base class. ``code`` is a machine-readable tag, ``detail`` free-form."""

    code = "ERROR"

    def __init__(self, code: str | None = None, message: str = "", **detail):
        if code is not None:
            self.code = code
        self.message = message
        self.detail = detail
        super().__init__(f"{self.code}: {message}" if message else self.code)


class StructureError(MmppfError):
    """Problems loading or querying an MMPPF structure document."""


class AxiomError(MmppfError):
    pass


class FormulaError(MmppfError):
    """Syntax errors, unknown symbols and ill-typed lambda terms."""


class MetaInfoError(MmppfError):
    pass


class CheckError(MmppfError):
    """Raised by the model checker for conditions that are not a plain false."""


class GrammarError(MmppfError):
    """Grammar file problems and translation failures of the RGTC engine."""
