from __future__ import annotations

import re
from collections.abc import Container
from itertools import count

_TRAILING_DIGITS = re.compile(r"\d+$")


def fresh(base: str, avoid: Container[str]) -> str:
    """First name of the form ``<stem><n>`` not in `avoid`.

    The stem is `base` without its trailing digits, so repeated renaming of
    ``x`` gives ``x0``, ``x1`` ... rather than ``x00``.
    """
    stem = _TRAILING_DIGITS.sub("", base) or "x"
    for i in count():
        name = f"{stem}{i}"
        if name not in avoid:
            return name
    raise AssertionError("unreachable")
