"""Named algebras, the text file format, and stable identity hashes.

Builtin names:

* ``complex`` / ``perplex`` / ``dual``  -- the three classical 2-D number
  systems (families III, IV, V with A = 0, B = 2)
* ``cd:<n>``                            -- Cayley-Dickson level n
* ``table2:<II..VI>:<a12,b12,a21,b21[,a22,b22]>``

File format (UTF-8, line oriented, ``#`` starts a comment line):

* ``dim <m>`` followed by ``alpha <i> <j> <k> <value>`` lines with 1-based
  indices; unlisted triples are zero and duplicates are an error
* ``table2 <II..VI> <a12> <b12> <a21> <b21> [<a22> <b22>]`` as the sole
  non-dim line (dim, if given, must be 2)
* ``cd <n>`` as the sole line (dimension implied 2**n)
"""

import hashlib
import os
from dataclasses import dataclass

from .algebra import (
    StructureConstants,
    Table2D,
    TableFamily,
    cayley_dickson,
    detect_family,
    make_algebra,
    table2d,
)
from .errors import AlgebraFormatError

import numpy as np


@dataclass(frozen=True, eq=False)
class AlgebraSource:
    """A resolved algebra plus the 2-D table view when one is known."""

    algebra: StructureConstants
    table: Table2D | None
    label: str


def _builtin_table(family: TableFamily, label: str) -> AlgebraSource:
    table = table2d(family, 0.0, 1.0, 0.0, 1.0)
    return AlgebraSource(table.to_structure_constants(), table, label)


def builtin_algebra(name: str) -> AlgebraSource:
    """Resolve a builtin algebra name (without the ``builtin:`` prefix)."""
    if name == "complex":
        return _builtin_table(TableFamily.MINUS_III, "builtin:complex")
    if name == "perplex":
        return _builtin_table(TableFamily.PLUS_IV, "builtin:perplex")
    if name == "dual":
        return _builtin_table(TableFamily.SOLVABLE_V, "builtin:dual")
    if name.startswith("cd:"):
        try:
            level = int(name[3:])
        except ValueError:
            raise AlgebraFormatError(f"bad doubling level in {name!r}")
        return AlgebraSource(cayley_dickson(level), None, f"builtin:cd:{level}")
    if name.startswith("table2:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise AlgebraFormatError(f"expected table2:<family>:<params>, got {name!r}")
        table = _parse_table2(parts[1], parts[2].split(","))
        return AlgebraSource(table.to_structure_constants(), table, f"builtin:{name}")
    raise AlgebraFormatError(f"unknown builtin algebra {name!r}")


def _parse_table2(family_token: str, params: list[str]) -> Table2D:
    try:
        family = TableFamily(family_token.upper())
    except ValueError:
        raise AlgebraFormatError(f"unknown table family {family_token!r}")
    if family is TableFamily.GENERAL_I:
        raise AlgebraFormatError("family I tables must be given as raw alpha entries")
    try:
        values = [float(p) for p in params]
    except ValueError:
        raise AlgebraFormatError(f"bad table cell value in {params!r}")
    if family is TableFamily.IDEMPOTENT_II:
        if len(values) != 6:
            raise AlgebraFormatError("family II takes 6 cell values a12,b12,a21,b21,a22,b22")
    elif len(values) not in (4, 6):
        raise AlgebraFormatError("fixed-cell families take 4 cell values a12,b12,a21,b21")
    values += [0.0] * (6 - len(values))
    return table2d(family, *values)


def parse_algebra_text(text: str) -> AlgebraSource:
    """Parse the line-oriented algebra file format."""
    rows: list[tuple[int, list[str]]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rows.append((line_no, stripped.split()))

    if not rows:
        raise AlgebraFormatError("empty algebra description")

    keywords = {tokens[0] for _, tokens in rows}
    if "cd" in keywords:
        if len(rows) != 1:
            raise AlgebraFormatError("a cd line must be the sole line", rows[0][0])
        line_no, tokens = rows[0]
        if len(tokens) != 2 or not tokens[1].isdigit():
            raise AlgebraFormatError("expected: cd <level>", line_no)
        return AlgebraSource(cayley_dickson(int(tokens[1])), None, f"cd:{tokens[1]}")

    dim = None
    table_row = None
    alpha_rows = []
    for line_no, tokens in rows:
        if tokens[0] == "dim":
            if dim is not None:
                raise AlgebraFormatError("duplicate dim line", line_no)
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise AlgebraFormatError("expected: dim <m>", line_no)
            dim = int(tokens[1])
        elif tokens[0] == "table2":
            if table_row is not None:
                raise AlgebraFormatError("duplicate table2 line", line_no)
            table_row = (line_no, tokens)
        elif tokens[0] == "alpha":
            alpha_rows.append((line_no, tokens))
        else:
            raise AlgebraFormatError(f"unknown directive {tokens[0]!r}", line_no)

    if table_row is not None:
        line_no, tokens = table_row
        if alpha_rows:
            raise AlgebraFormatError("table2 must be the sole non-dim line", line_no)
        if dim is not None and dim != 2:
            raise AlgebraFormatError("table2 implies dim 2", line_no)
        if len(tokens) not in (6, 8):
            raise AlgebraFormatError(
                "expected: table2 <family> <a12> <b12> <a21> <b21> [<a22> <b22>]", line_no
            )
        try:
            table = _parse_table2(tokens[1], tokens[2:])
        except AlgebraFormatError as exc:
            raise AlgebraFormatError(str(exc), line_no) from None
        return AlgebraSource(table.to_structure_constants(), table, f"table2:{tokens[1]}")

    if dim is None:
        raise AlgebraFormatError("missing dim line", rows[0][0])
    alpha = np.zeros((dim, dim, dim))
    seen: set[tuple[int, int, int]] = set()
    for line_no, tokens in alpha_rows:
        if len(tokens) != 5:
            raise AlgebraFormatError("expected: alpha <i> <j> <k> <value>", line_no)
        try:
            i, j, k = (int(t) for t in tokens[1:4])
            value = float(tokens[4])
        except ValueError:
            raise AlgebraFormatError("bad alpha entry", line_no)
        if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
            raise AlgebraFormatError(f"alpha index out of range 1..{dim}", line_no)
        if (i, j, k) in seen:
            raise AlgebraFormatError(f"duplicate alpha entry {i} {j} {k}", line_no)
        seen.add((i, j, k))
        alpha[i - 1, j - 1, k - 1] = value
    algebra = make_algebra(dim, alpha)
    return AlgebraSource(algebra, detect_family(algebra), f"dim:{dim}")


def load_algebra_file(path: str) -> AlgebraSource:
    with open(path, "r", encoding="utf-8") as handle:
        source = parse_algebra_text(handle.read())
    return AlgebraSource(source.algebra, source.table, f"file:{os.path.basename(path)}")


_BUILTIN_PREFIXES = ("complex", "perplex", "dual", "cd:", "table2:")


def resolve_source(spec: str) -> AlgebraSource:
    """Resolve a CLI algebra source: ``builtin:<name>`` or a file path.

    Bare builtin names are accepted as a convenience when no file of that
    name exists.
    """
    if spec.startswith("builtin:"):
        return builtin_algebra(spec[len("builtin:"):])
    if os.path.exists(spec):
        return load_algebra_file(spec)
    if spec == "complex" or spec == "perplex" or spec == "dual" or spec.startswith(("cd:", "table2:")):
        return builtin_algebra(spec)
    raise AlgebraFormatError(f"algebra source {spec!r} is neither a builtin nor a file")


def algebra_hash(algebra: StructureConstants) -> str:
    """Stable content hash of a multiplication table."""
    digest = hashlib.sha256()
    digest.update(f"dim={algebra.dim};".encode("ascii"))
    digest.update(np.ascontiguousarray(algebra.alpha).tobytes())
    return digest.hexdigest()
