"""Minimal JSON path evaluator.

Supported: root ``$``, dot child access, bracket child access (quoted names
or integer indexes), and the ``[*]`` wildcard over arrays. No filters and no
recursive descent; matches come back in document order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import JsonPathInvalid

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")


@dataclass(frozen=True)
class JsonPath:
    expr: str
    steps: tuple[tuple, ...]

    def find(self, doc: object) -> list:
        """All matched values, document order; missing paths match nothing."""
        frontier = [doc]
        for step in self.steps:
            kind = step[0]
            new: list = []
            for item in frontier:
                if kind == "child":
                    if isinstance(item, dict) and step[1] in item:
                        new.append(item[step[1]])
                elif kind == "index":
                    if isinstance(item, list) and -len(item) <= step[1] < len(item):
                        new.append(item[step[1]])
                else:  # wildcard
                    if isinstance(item, list):
                        new.extend(item)
            frontier = new
        return frontier


def parse(expr: str) -> JsonPath:
    """Compile a JSON path; raises JsonPathInvalid on anything off-grammar."""
    if not expr.startswith("$"):
        raise JsonPathInvalid(expr, "must start with $")
    steps: list[tuple] = []
    i = 1
    n = len(expr)
    while i < n:
        c = expr[i]
        if c == ".":
            if i + 1 < n and expr[i + 1] == ".":
                raise JsonPathInvalid(expr, "recursive descent is not supported")
            m = _IDENT.match(expr, i + 1)
            if not m:
                raise JsonPathInvalid(expr, f"expected a name after '.' at offset {i}")
            steps.append(("child", m.group(0)))
            i = m.end()
        elif c == "[":
            j = expr.find("]", i)
            if j < 0:
                raise JsonPathInvalid(expr, "unterminated '['")
            body = expr[i + 1 : j].strip()
            if body == "*":
                steps.append(("wild",))
            elif body.startswith(("'", '"')):
                if len(body) < 2 or body[-1] != body[0]:
                    raise JsonPathInvalid(expr, f"bad quoted name {body!r}")
                steps.append(("child", body[1:-1]))
            elif re.fullmatch(r"-?\d+", body):
                steps.append(("index", int(body)))
            else:
                raise JsonPathInvalid(expr, f"unsupported selector [{body}]")
            i = j + 1
        else:
            raise JsonPathInvalid(expr, f"unexpected character {c!r} at offset {i}")
    return JsonPath(expr=expr, steps=tuple(steps))
