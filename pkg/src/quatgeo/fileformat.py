"""Text format for named quaternionic matrices.

::

    version: 1
    backend: exact
    A:
      [1, 0, 0]
      [0, 1, 1]
      [0, 0, 1]

``backend`` is optional (default exact).  Blank lines and ``#`` comments are
ignored.  Entries use the quaternion syntax of :func:`parse_quaternion`; with
the exact backend decimals are read as exact fractions.  Rendering is
canonical, so ``render(parse(text)) == text`` for canonical input.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .affine import AffineMap
from .errors import ParseError, ShapeError
from .qmatrix import QMatrix
from .quaternion import EXACT, FLOAT, format_quaternion, parse_quaternion

VERSION = 1
_NAME = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*:\s*$")
_KEY = re.compile(r"^(version|backend)\s*:\s*(\S+)\s*$")


@dataclass
class GeneratorFile:
    matrices: dict = field(default_factory=dict)  # name -> QMatrix, in file order
    backend: str = EXACT
    version: int = VERSION
    lines: dict = field(default_factory=dict)  # name -> line number of its header

    def names(self):
        return list(self.matrices)

    def affine_maps(self):
        """The matrices as affine maps; each must have last row (0, ..., 0, 1)."""
        out = {}
        for name, m in self.matrices.items():
            try:
                out[name] = AffineMap.from_matrix(m)
            except ShapeError as exc:
                raise ParseError(f"{name}: {exc}", self.lines.get(name)) from None
        return out


def _strip_comment(line):
    i = line.find("#")
    return line if i < 0 else line[:i]


def _parse_row(text, lineno, col0, backend):
    s = text.rstrip()
    stripped = s.lstrip()
    col = col0 + len(s) - len(stripped)
    if not stripped.startswith("[") or not stripped.endswith("]"):
        raise ParseError("matrix rows look like [a, b, c]", lineno, col + 1)
    inner = stripped[1:-1]
    entries = []
    pos = 0
    for piece in inner.split(","):
        lead = len(piece) - len(piece.lstrip())
        start = col + 2 + pos + lead
        entries.append(parse_quaternion(piece, backend, line=lineno, column=start))
        pos += len(piece) + 1
    return entries


def parse_generator_file(text, backend=None):
    """Parse the text format; ``backend`` overrides the file's directive."""
    gf = GeneratorFile()
    file_backend = None
    current = None
    rows = {}
    seen_version = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        indented = line[0] in " \t"
        if not indented:
            key = _KEY.match(line)
            if key:
                k, v = key.groups()
                if current is not None:
                    raise ParseError(f"'{k}' must come before the matrices", lineno, 1)
                if k == "version":
                    if v != str(VERSION):
                        raise ParseError(f"unsupported version {v!r}", lineno, line.index(v) + 1)
                    seen_version = True
                else:
                    if v not in (EXACT, FLOAT):
                        raise ParseError(f"backend must be exact or float, not {v!r}",
                                         lineno, line.index(v) + 1)
                    file_backend = v
                continue
            name = _NAME.match(line)
            if not name:
                raise ParseError(f"expected 'Name:' or a key, got {line.strip()!r}", lineno, 1)
            if not seen_version:
                raise ParseError("file must start with 'version: 1'", lineno, 1)
            current = name.group(1)
            if current in rows:
                raise ParseError(f"duplicate matrix name {current!r}", lineno, 1)
            rows[current] = []
            gf.lines[current] = lineno
            continue
        if current is None:
            raise ParseError("matrix row outside a matrix block", lineno, 1)
        chosen = backend or file_backend or EXACT
        rows[current].append((lineno, _parse_row(line, lineno, 0, chosen)))
    if not seen_version:
        raise ParseError("file must start with 'version: 1'", 1 if text.strip() else None, 1)
    gf.backend = backend or file_backend or EXACT
    for name, rs in rows.items():
        if not rs:
            raise ParseError(f"matrix {name!r} has no rows", gf.lines[name])
        width = len(rs[0][1])
        for lineno, r in rs:
            if len(r) != width:
                raise ParseError(f"matrix {name!r}: rows have different lengths", lineno)
        m = QMatrix([r for _, r in rs])
        if gf.backend == FLOAT:
            m = m.to_float()
        gf.matrices[name] = m
    return gf


def render_generator_file(gf):
    out = [f"version: {gf.version}", f"backend: {gf.backend}"]
    for name, m in gf.matrices.items():
        out.append(f"{name}:")
        for row in m.rows:
            out.append("  [" + ", ".join(format_quaternion(q) for q in row) + "]")
    return "\n".join(out) + "\n"


def generator_file_from_group(group):
    mats = {label: g.matrix for label, g in zip(group.labels, group.generators)}
    return GeneratorFile(mats, EXACT if all(m.exact for m in mats.values()) else FLOAT)


def read_generator_file(path, backend=None):
    with open(path, encoding="utf-8") as fh:
        return parse_generator_file(fh.read(), backend)


def parse_quaternion_list(text, backend=None):
    """One quaternion per line (blank lines and ``#`` comments ignored)."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if line.strip():
            col = len(line) - len(line.lstrip()) + 1
            out.append(parse_quaternion(line, backend, line=lineno, column=col))
    return out
