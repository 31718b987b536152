"""Glob dialect for FileSet includes/excludes.

``*`` matches within a path segment, ``**`` crosses segments, ``?`` matches a
single character, ``[...]`` character classes are supported. Patterns are
anchored at the archive root and matched against ``/``-separated full paths.
"""

from __future__ import annotations

import re

from .errors import GlobInvalid


def translate(pattern: str) -> re.Pattern[str]:
    """Compile one glob pattern to an anchored regex over full paths."""
    out = []
    i = 0
    n = len(pattern)
    while i < n:
        c = pattern[i]
        if c == "*":
            run = 1
            while i + run < n and pattern[i + run] == "*":
                run += 1
            i += run
            if run >= 2:
                if i < n and pattern[i] == "/":
                    i += 1
                    out.append("(?:.*/)?")
                else:
                    out.append(".*")
            else:
                out.append("[^/]*")
        elif c == "?":
            out.append("[^/]")
            i += 1
        elif c == "[":
            j = i + 1
            if j < n and pattern[j] in "!^":
                j += 1
            if j < n and pattern[j] == "]":  # leading ] is a literal member
                j += 1
            while j < n and pattern[j] != "]":
                j += 1
            if j >= n:
                raise GlobInvalid(pattern, "unterminated character class")
            body = pattern[i + 1 : j]
            if body.startswith("!"):
                body = "^" + body[1:]
            out.append("[" + body.replace("\\", "\\\\") + "]")
            i = j + 1
        else:
            out.append(re.escape(c))
            i += 1
    try:
        return re.compile("^" + "".join(out) + "$")
    except re.error as exc:  # pragma: no cover - classes above are sanitized
        raise GlobInvalid(pattern, str(exc)) from exc


class GlobSet:
    """Compiled includes/excludes pair."""

    def __init__(self, includes: list[str], excludes: list[str] | None = None) -> None:
        self.includes = [translate(p) for p in includes]
        self.excludes = [translate(p) for p in excludes or []]

    def matches(self, fullpath: str) -> bool:
        if not any(p.match(fullpath) for p in self.includes):
            return False
        return not any(p.match(fullpath) for p in self.excludes)
