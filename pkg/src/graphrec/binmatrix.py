"""Sparse binary matrices, parsing, and block decomposition.

Matrices are stored row-major as sorted tuples of column indices; only the
nonzero pattern matters.  Instances are immutable and safe to share across
threads.  Row/column labels are carried for I/O only; every computation works
on indices.
"""
from __future__ import annotations

import dataclasses
from typing import Iterable, Sequence

FORMATS = ("coordinate", "dense", "row-list")


class ParseError(ValueError):
    """Malformed matrix input.  `line` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclasses.dataclass(frozen=True)
class SparseBinaryMatrix:
    num_rows: int
    num_cols: int
    rows: tuple[tuple[int, ...], ...]
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.rows) != self.num_rows:
            raise ValueError("row count mismatch")
        for support in self.rows:
            if any(c < 0 or c >= self.num_cols for c in support):
                raise ValueError("column index out of range")
            if any(support[i] >= support[i + 1] for i in range(len(support) - 1)):
                raise ValueError("row support not strictly increasing")
        if len(self.row_labels) != self.num_rows or len(self.col_labels) != self.num_cols:
            raise ValueError("label count mismatch")
        if len(set(self.row_labels)) != self.num_rows:
            raise ValueError("duplicate row label")
        if len(set(self.col_labels)) != self.num_cols:
            raise ValueError("duplicate column label")

    @staticmethod
    def from_rows(
        rows: Sequence[Iterable[int]],
        num_cols: int,
        row_labels: Sequence[str] | None = None,
        col_labels: Sequence[str] | None = None,
    ) -> "SparseBinaryMatrix":
        tidy = tuple(tuple(sorted(set(r))) for r in rows)
        m = len(tidy)
        if row_labels is None:
            row_labels = tuple(f"r{i + 1}" for i in range(m))
        if col_labels is None:
            col_labels = tuple(f"c{j + 1}" for j in range(num_cols))
        return SparseBinaryMatrix(m, num_cols, tidy, tuple(row_labels), tuple(col_labels))

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def nonzeros(self) -> set[tuple[int, int]]:
        return {(i, j) for i, row in enumerate(self.rows) for j in row}

    def col_supports(self) -> tuple[tuple[int, ...], ...]:
        cols: list[list[int]] = [[] for _ in range(self.num_cols)]
        for i, row in enumerate(self.rows):
            for j in row:
                cols[j].append(i)
        return tuple(tuple(c) for c in cols)

    def submatrix_rows(self, indices: Sequence[int]) -> "SparseBinaryMatrix":
        return SparseBinaryMatrix(
            len(indices),
            self.num_cols,
            tuple(self.rows[i] for i in indices),
            tuple(self.row_labels[i] for i in indices),
            self.col_labels,
        )

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseBinaryMatrix":
        """Matrix with row i moved to position row_perm[i], likewise columns."""
        inv_r = [0] * self.num_rows
        for i, p in enumerate(row_perm):
            inv_r[p] = i
        new_rows = []
        new_rl = []
        for i in inv_r:
            new_rows.append(tuple(sorted(col_perm[j] for j in self.rows[i])))
            new_rl.append(self.row_labels[i])
        inv_c = [0] * self.num_cols
        for j, p in enumerate(col_perm):
            inv_c[p] = j
        new_cl = tuple(self.col_labels[j] for j in inv_c)
        return SparseBinaryMatrix(self.num_rows, self.num_cols, tuple(new_rows), tuple(new_rl), new_cl)

    def transpose(self) -> "SparseBinaryMatrix":
        return SparseBinaryMatrix(
            self.num_cols, self.num_rows, self.col_supports(), self.col_labels, self.row_labels
        )

    def to_text(self, fmt: str = "coordinate") -> str:
        if fmt == "coordinate":
            lines = [f"{self.num_rows} {self.num_cols} {self.nnz}"]
            for i, row in enumerate(self.rows):
                for j in row:
                    lines.append(f"{i + 1} {j + 1}")
            return "\n".join(lines) + "\n"
        if fmt == "dense":
            lines = []
            for row in self.rows:
                s = set(row)
                lines.append(" ".join("1" if j in s else "0" for j in range(self.num_cols)))
            return "\n".join(lines) + ("\n" if lines else "")
        if fmt == "row-list":
            lines = [f"{self.num_rows} {self.num_cols}"]
            for row in self.rows:
                lines.append(" ".join(str(j + 1) for j in row))
            return "\n".join(lines) + "\n"
        raise ValueError(f"unknown format {fmt!r}")


@dataclasses.dataclass(frozen=True)
class Block:
    """Connected component of the bipartite row-column incidence graph."""

    row_indices: tuple[int, ...]
    col_indices: tuple[int, ...]


@dataclasses.dataclass(frozen=True)
class RowVector:
    """A candidate new row: its column support plus declared brand-new columns."""

    support: tuple[int, ...]
    new_cols: frozenset[int] = frozenset()

    def __post_init__(self):
        if any(self.support[i] >= self.support[i + 1] for i in range(len(self.support) - 1)):
            raise ValueError("support not strictly increasing")
        if not self.new_cols <= set(self.support):
            raise ValueError("new_cols must be a subset of the support")


def _tokens(text: str):
    for ln, raw in enumerate(text.split("\n"), start=1):
        stripped = raw.strip()
        if stripped.startswith("%") or stripped.startswith("#"):
            continue
        yield ln, stripped


def parse_matrix(text: str, fmt: str = "coordinate") -> SparseBinaryMatrix:
    """Parse matrix text in one of FORMATS; entry order is irrelevant."""
    if fmt == "coordinate":
        return _parse_coordinate(text)
    if fmt == "dense":
        return _parse_dense(text)
    if fmt == "row-list":
        return _parse_rowlist(text)
    raise ValueError(f"unknown format {fmt!r}")


def _ints(ln: int, line: str, expect: int) -> list[int]:
    parts = line.split()
    if len(parts) != expect:
        raise ParseError(ln, f"expected {expect} integers, got {len(parts)}")
    out = []
    for p in parts:
        try:
            out.append(int(p))
        except ValueError:
            raise ParseError(ln, f"not an integer: {p!r}") from None
    return out


def _parse_coordinate(text: str) -> SparseBinaryMatrix:
    it = (t for t in _tokens(text) if t[1])
    try:
        ln, header = next(it)
    except StopIteration:
        raise ParseError(1, "missing header") from None
    m, n, nnz = _ints(ln, header, 3)
    if m < 0 or n < 0 or nnz < 0:
        raise ParseError(ln, "negative header value")
    rows: list[set[int]] = [set() for _ in range(m)]
    count = 0
    for ln, line in it:
        i, j = _ints(ln, line, 2)
        if not (1 <= i <= m and 1 <= j <= n):
            raise ParseError(ln, f"entry ({i}, {j}) out of range for {m}x{n}")
        if (j - 1) in rows[i - 1]:
            raise ParseError(ln, f"duplicate entry ({i}, {j})")
        rows[i - 1].add(j - 1)
        count += 1
    if count != nnz:
        raise ParseError(ln if count else 1, f"header promised {nnz} entries, found {count}")
    return SparseBinaryMatrix.from_rows([sorted(r) for r in rows], n)


def _parse_dense(text: str) -> SparseBinaryMatrix:
    rows = []
    width = None
    for ln, line in _tokens(text):
        if not line:
            continue
        vals = line.split()
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise ParseError(ln, f"ragged row: expected {width} entries, got {len(vals)}")
        support = []
        for j, v in enumerate(vals):
            if v == "1":
                support.append(j)
            elif v != "0":
                raise ParseError(ln, f"entry must be 0 or 1, got {v!r}")
        rows.append(support)
    return SparseBinaryMatrix.from_rows(rows, width or 0)


def _parse_rowlist(text: str) -> SparseBinaryMatrix:
    lines = text.split("\n")
    header_ln = None
    for ln, line in _tokens(text):
        if line:
            header_ln = ln
            break
    if header_ln is None:
        raise ParseError(1, "missing header")
    m, n = _ints(header_ln, lines[header_ln - 1].strip(), 2)
    if m < 0 or n < 0:
        raise ParseError(header_ln, "negative header value")
    rows = []
    for k in range(m):
        ln = header_ln + 1 + k
        raw = lines[ln - 1].strip() if ln <= len(lines) else ""
        support = []
        prev = 0
        for p in raw.split():
            try:
                j = int(p)
            except ValueError:
                raise ParseError(ln, f"not an integer: {p!r}") from None
            if not (1 <= j <= n):
                raise ParseError(ln, f"column {j} out of range for {n} columns")
            if j <= prev:
                raise ParseError(ln, f"columns must be strictly increasing, got {j} after {prev}")
            prev = j
            support.append(j - 1)
        rows.append(support)
    return SparseBinaryMatrix.from_rows(rows, n)


def connected_blocks(m: SparseBinaryMatrix) -> list[Block]:
    """Connected components of the bipartite incidence graph [[0, M], [M^T, 0]].

    Only rows/columns with at least one 1 participate; all-zero rows and
    columns are degenerate singletons, see `zero_rows` / `zero_cols`.
    """
    parent = list(range(m.num_rows + m.num_cols))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, row in enumerate(m.rows):
        for j in row:
            a, b = find(i), find(m.num_rows + j)
            if a != b:
                parent[a] = b
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for i, row in enumerate(m.rows):
        if row:
            groups.setdefault(find(i), ([], []))[0].append(i)
    cols = m.col_supports()
    for j, support in enumerate(cols):
        if support:
            groups.setdefault(find(m.num_rows + j), ([], []))[1].append(j)
    blocks = [Block(tuple(r), tuple(c)) for r, c in groups.values()]
    blocks.sort(key=lambda b: (b.row_indices + b.col_indices)[0])
    return blocks


def zero_rows(m: SparseBinaryMatrix) -> tuple[int, ...]:
    return tuple(i for i, row in enumerate(m.rows) if not row)


def zero_cols(m: SparseBinaryMatrix) -> tuple[int, ...]:
    return tuple(j for j, support in enumerate(m.col_supports()) if not support)


def partition_row(
    b: RowVector, blocks: Sequence[Block]
) -> tuple[dict[int, tuple[int, ...]], tuple[int, ...]]:
    """Split a new row over existing blocks.

    Returns (per-block sub-supports keyed by block position, fresh columns).
    Fresh columns are support entries present in no block: declared-new
    columns and previously all-zero columns.
    """
    col_to_block: dict[int, int] = {}
    for k, blk in enumerate(blocks):
        for j in blk.col_indices:
            col_to_block[j] = k
    per_block: dict[int, list[int]] = {}
    fresh = []
    for j in b.support:
        k = col_to_block.get(j)
        if k is None:
            fresh.append(j)
        else:
            per_block.setdefault(k, []).append(j)
    return {k: tuple(v) for k, v in per_block.items()}, tuple(fresh)
