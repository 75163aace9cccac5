"""
INI-like section splitter shared by scenario and model files.

    # comment
    [section]
    content line
"""
import re
from dataclasses import dataclass
from typing import Dict, List, Tuple

from ..utils.errors import ParseError
from ..utils.logging_utils import print_status

_HEADER = re.compile(r"^\[([A-Za-z_]+)\]$")


@dataclass
class Line:
    number: int
    text: str
    column: int = 1

    def fail(self, message, offset=0):
        raise ParseError(message, self.number, self.column + offset)


def read_text(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
        print_status(f"Loaded {path}")
        return text
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e


def split_sections(text, allowed):
    """
    Group non-blank, comment-stripped lines by section.

    Returns:
        dict section -> list of Line, in file order
    """
    sections: Dict[str, List[Line]] = {}
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        column = len(body) - len(body.lstrip()) + 1
        header = _HEADER.match(stripped)
        if header:
            name = header.group(1)
            if name not in allowed:
                raise ParseError(f"unknown section [{name}]", number, column)
            if name in sections:
                raise ParseError(f"section [{name}] appears twice", number, column)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise ParseError("content before the first section header", number, column)
        sections[current].append(Line(number, stripped, column))
    return sections


def key_value(line, separators=":="):
    """Split 'key: value' (or 'key = value'); column points at the value on error."""
    for i, ch in enumerate(line.text):
        if ch in separators:
            key = line.text[:i].strip()
            value = line.text[i + 1:].strip()
            if not key:
                line.fail("missing key before separator")
            return key, value, i + 1
    line.fail(f"expected 'key{separators[0]} value'")


def parse_int(line, token, offset=0, minimum=None):
    try:
        value = int(token)
    except ValueError:
        line.fail(f"expected an integer, found {token!r}", offset)
    if minimum is not None and value < minimum:
        line.fail(f"expected an integer >= {minimum}, found {value}", offset)
    return value


def parse_range(line, token, offset=0) -> Tuple[int, int]:
    """'lo..hi' as an inclusive integer interval."""
    lo, sep, hi = token.partition("..")
    if not sep:
        line.fail(f"expected a range lo..hi, found {token!r}", offset)
    lo, hi = parse_int(line, lo, offset), parse_int(line, hi, offset)
    if lo > hi:
        line.fail(f"empty range {token}", offset)
    return lo, hi


def column_of(line, token, start=0):
    """0-based offset of `token` within the line text (0 when absent)."""
    pos = line.text.find(token, start)
    return max(pos, 0)
