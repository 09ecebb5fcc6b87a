"""Error type shared across the package.

Every failure that callers may want to dispatch on carries a stable,
machine-readable ``code`` (e.g. ``SELF_LOOP``, ``UNKNOWN_NODE``). The HTTP
layer maps codes to status codes; the CLI maps them to exit status 2.
"""

from __future__ import annotations


class NetboostError(Exception):
    """Domain error with a stable code and a human-readable message."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"
