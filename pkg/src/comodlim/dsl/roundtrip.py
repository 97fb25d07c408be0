"""Round-trip checks for session files: emit, re-parse, emit again."""

from __future__ import annotations

import re

from .jsonio import render_bindings, snapshot
from .runtime import run_text
from .syntax import ParseError, parse_session

_EXPECT = re.compile(r"#\s*expect-error:\s*line\s+(\d+),\s*column\s+(\d+)")


def roundtrip_ok(text: str) -> tuple[bool, str]:
    """Run ``text``; re-render its bindings and check the rendering is a fixed point."""
    first = run_text(text)
    if first.exit_code:
        return False, f"session failed: {first.entries[-1].error}"
    rendered = render_bindings(first.bindings)
    second = run_text(rendered)
    if second.exit_code:
        return False, f"rendered session failed: {second.entries[-1].error}"
    if snapshot(second.bindings) != snapshot(first.bindings):
        return False, "bindings differ after re-parse"
    if render_bindings(second.bindings) != rendered:
        return False, "rendering is not idempotent"
    return True, ""


def expected_error_position(text: str) -> tuple[int, int] | None:
    m = _EXPECT.search(text)
    return (int(m.group(1)), int(m.group(2))) if m else None


def check_malformed(text: str) -> tuple[bool, str]:
    """The file must fail to parse at the position named in its expect-error comment."""
    want = expected_error_position(text)
    if want is None:
        return False, "no expect-error comment"
    try:
        parse_session(text)
    except ParseError as e:
        got = (e.span.line, e.span.column)
        return got == want, f"error at {got}, expected {want}"
    return False, "parsed without error"
