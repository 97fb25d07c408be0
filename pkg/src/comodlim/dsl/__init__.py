"""Session language: parsing, evaluation and JSON I/O."""

from .runtime import Transcript, run_session, run_text
from .syntax import ParseError, parse_session

__all__ = ["ParseError", "Transcript", "parse_session", "run_session", "run_text"]
