"""Structured errors shared across the package.

ValidationError: the input document or data model is malformed (CLI exit 2).
PreconditionError: well-formed input that a computation cannot accept
(CLI exit 3).  Both carry a machine-readable kind plus context ids.
"""

from __future__ import annotations


class TropctlError(Exception):
    exit_code = 1

    def __init__(self, kind: str, message: str, **context):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.context = {k: v for k, v in sorted(context.items()) if v is not None}

    def payload(self) -> dict:
        out = {"error_type": self.kind, "message": self.message}
        if self.context:
            out["context"] = self.context
        return out


class ValidationError(TropctlError):
    exit_code = 2


class PreconditionError(TropctlError):
    exit_code = 3
