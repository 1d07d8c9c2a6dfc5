import pytest

from graphrec import (
    Block,
    ParseError,
    RowVector,
    SparseBinaryMatrix,
    connected_blocks,
    parse_matrix,
    partition_row,
    zero_cols,
    zero_rows,
)
from helpers import fig1_matrix, fig4_matrix


def test_parse_empty_coordinate():
    m = parse_matrix("0 0 0")
    assert (m.num_rows, m.num_cols, m.nnz) == (0, 0, 0)


def test_parse_fig1_coordinate():
    m = parse_matrix(fig1_matrix().to_text("coordinate"))
    assert (m.num_rows, m.num_cols) == (5, 5)
    assert m.nnz == 13
    assert m.rows == fig1_matrix().rows
    assert m.rows[0] == (1, 2, 3)  # row a = {g, h, i}


def test_parse_fig4_coordinate():
    m = parse_matrix(fig4_matrix().to_text("coordinate"))
    assert (m.num_rows, m.num_cols) == (6, 9)
    assert m.nnz == 22
    assert m.rows[4] == (0, 1, 2, 6, 7, 8)  # row e = {g, h, i, m, n, o}


@pytest.mark.parametrize("fmt", ["coordinate", "dense", "row-list"])
def test_roundtrip_formats(fmt):
    for m in (fig1_matrix(), fig4_matrix(), SparseBinaryMatrix.from_rows([[], [0]], 2)):
        back = parse_matrix(m.to_text(fmt), fmt)
        assert back.rows == m.rows
        assert (back.num_rows, back.num_cols) == (m.num_rows, m.num_cols)


def test_entry_order_irrelevant():
    a = parse_matrix("2 2 2\n1 1\n2 2")
    b = parse_matrix("2 2 2\n2 2\n1 1")
    assert a.rows == b.rows


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_matrix("1 1\n")  # malformed header
    assert err.value.line == 1
    with pytest.raises(ParseError) as err:
        parse_matrix("2 2 1\n3 1")  # out of range
    assert err.value.line == 2
    with pytest.raises(ParseError) as err:
        parse_matrix("2 2 2\n1 1\n1 1")  # duplicate
    assert err.value.line == 3
    with pytest.raises(ParseError):
        parse_matrix("1 2\n2 1", "row-list")  # decreasing columns
    with pytest.raises(ParseError):
        parse_matrix("0 1\n1 0 1", "dense")  # ragged
    with pytest.raises(ParseError):
        parse_matrix("0 2\n1 0", "dense")  # non-binary entry


def test_blocks_fig1_connected():
    blocks = connected_blocks(fig1_matrix())
    assert len(blocks) == 1
    assert blocks[0].row_indices == (0, 1, 2, 3, 4)
    assert blocks[0].col_indices == (0, 1, 2, 3, 4)


def test_blocks_diagonal_stack():
    f = fig1_matrix()
    rows = list(f.rows) + [tuple(j + 5 for j in r) for r in f.rows]
    m = SparseBinaryMatrix.from_rows(rows, 10)
    blocks = connected_blocks(m)
    assert len(blocks) == 2
    assert blocks[0].row_indices == (0, 1, 2, 3, 4)
    assert blocks[1].col_indices == tuple(range(5, 10))


def test_blocks_identity():
    m = SparseBinaryMatrix.from_rows([[0], [1], [2]], 3)
    blocks = connected_blocks(m)
    assert len(blocks) == 3
    assert all(len(b.row_indices) == 1 and len(b.col_indices) == 1 for b in blocks)


def test_blocks_partition_nonzero():
    m = SparseBinaryMatrix.from_rows([[0, 1], [], [1], [3]], 5)
    blocks = connected_blocks(m)
    seen_rows = [r for b in blocks for r in b.row_indices]
    seen_cols = [c for b in blocks for c in b.col_indices]
    assert sorted(seen_rows) == [0, 2, 3]
    assert sorted(seen_cols) == [0, 1, 3]
    assert zero_rows(m) == (1,)
    assert zero_cols(m) == (2, 4)


def test_partition_row_single_block():
    blocks = connected_blocks(fig1_matrix())
    sub, fresh = partition_row(RowVector((0, 4)), blocks)  # {f, j}
    assert sub == {0: (0, 4)}
    assert fresh == ()


def test_partition_row_fresh_column():
    m = SparseBinaryMatrix.from_rows([[0]], 3)
    blocks = connected_blocks(m)
    sub, fresh = partition_row(RowVector((0, 2), frozenset({2})), blocks)
    assert sub == {0: (0,)}
    assert fresh == (2,)


def test_partition_row_zero_row():
    blocks = connected_blocks(fig1_matrix())
    sub, fresh = partition_row(RowVector(()), blocks)
    assert sub == {} and fresh == ()


def test_permuted_and_transpose():
    m = fig1_matrix()
    p = m.permuted([4, 3, 2, 1, 0], [0, 1, 2, 3, 4])
    assert p.rows[4] == m.rows[0]
    assert p.row_labels[4] == "a"
    t = m.transpose()
    assert t.num_rows == 5 and t.rows[1] == (0, 1)  # column g hits rows a, b
