"""Stream file format.

Optional header line ``# T=<int> U=<int>``, then one update per line:
``+<id>`` insertion, ``-<id>`` deletion, ``.`` blank. Ids are decimal and
must satisfy 0 <= id < U when a header is present.
"""

from __future__ import annotations

from .stream import BLANK, dele, element_of, ins, is_blank


class StreamFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_stream(text: str) -> tuple[list[int], int, int]:
    """Parse file contents; returns (stream, T, U).

    Without a header, T is the line count and U is one past the largest id.
    """
    lines = text.splitlines()
    start = 0
    T = None
    U = None
    if lines and lines[0].startswith("#"):
        start = 1
        fields = dict(
            part.split("=", 1) for part in lines[0].lstrip("#").split() if "=" in part
        )
        try:
            T = int(fields["T"])
            U = int(fields["U"])
        except (KeyError, ValueError):
            raise StreamFormatError(1, f"bad header {lines[0]!r}") from None
    stream: list[int] = []
    max_id = -1
    for lineno, raw in enumerate(lines[start:], start=start + 1):
        line = raw.strip()
        if not line:
            raise StreamFormatError(lineno, "empty line")
        if line == ".":
            stream.append(BLANK)
            continue
        if line[0] not in "+-" or not line[1:].isdigit():
            raise StreamFormatError(lineno, f"malformed update {line!r}")
        e = int(line[1:])
        if U is not None and not (0 <= e < U):
            raise StreamFormatError(lineno, f"id {e} outside universe [0, {U})")
        max_id = max(max_id, e)
        stream.append(ins(e) if line[0] == "+" else dele(e))
    if T is not None and len(stream) != T:
        raise StreamFormatError(len(lines), f"header says T={T} but found {len(stream)} updates")
    if T is None:
        T = len(stream)
    if U is None:
        U = max_id + 1 if max_id >= 0 else 1
    return stream, T, U


def format_stream(stream, universe: int) -> str:
    out = [f"# T={len(stream)} U={universe}"]
    for u in stream:
        if is_blank(u):
            out.append(".")
        else:
            out.append(("+" if u > 0 else "-") + str(element_of(u)))
    return "\n".join(out) + "\n"


def write_stream(path: str, stream, universe: int) -> None:
    with open(path, "w") as fh:
        fh.write(format_stream(stream, universe))


def read_stream(path: str) -> tuple[list[int], int, int]:
    with open(path) as fh:
        return parse_stream(fh.read())
