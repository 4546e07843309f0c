import pytest

from treeshift.core import (
    Block,
    Signature,
    TwoBlock,
    basic_set_from_mask,
    basic_set_mask,
    complement_forbidden_set,
    essentialize,
    format_basic_set,
    full_basic_set,
    make_basic_set,
    parse_basic_set,
    relabel,
    swap_children,
)
from treeshift.errors import ParseError, ValidationError

from known_sets import CASE_SIX, DOMINANT_UNIT, SIG22


@pytest.mark.parametrize("d,k", [(0, 2), (2, 0), (-1, 1)])
def test_signature_rejects_nonpositive(d, k):
    with pytest.raises(ValidationError):
        Signature(d, k)


def test_two_blocks_are_lexicographic():
    blocks = [b.as_tuple() for b in Signature(2, 2).all_two_blocks()]
    assert len(blocks) == 8
    assert blocks == sorted(blocks)
    assert blocks[0] == (1, 1, 1) and blocks[-1] == (2, 2, 2)
    assert len(Signature(3, 2).all_two_blocks()) == 16
    assert len(Signature(2, 3).all_two_blocks()) == 27


def test_block_size():
    sig = Signature(2, 2)
    assert [sig.block_size(h) for h in (1, 2, 3, 4)] == [1, 3, 7, 15]
    assert Signature(1, 2).block_size(5) == 5


def test_make_basic_set_sorts_and_dedups():
    b = make_basic_set(SIG22, [(2, 2, 2), (1, 1, 1), (2, 2, 2), TwoBlock(1, (2, 2))])
    assert [t.as_tuple() for t in b] == [(1, 1, 1), (1, 2, 2), (2, 2, 2)]
    assert (1, 2, 2) in b and (2, 1, 1) not in b
    assert b.rooted_at(1) == ((1, 1), (2, 2))


@pytest.mark.parametrize("bad", [(3, 1, 1), (1, 1), (1, 1, 1, 1), (0, 1, 1)])
def test_make_basic_set_rejects_bad_blocks(bad):
    with pytest.raises(ValidationError):
        make_basic_set(SIG22, [bad])


def test_forbidden_set_is_complement():
    forbidden = complement_forbidden_set(DOMINANT_UNIT)
    assert len(forbidden) == 5
    assert not forbidden & set(DOMINANT_UNIT.blocks)


def test_essentialize_removes_dead_symbols_iteratively():
    # 2 has no block; then 1's only block mentions 2
    e, removed = essentialize(make_basic_set(SIG22, [(1, 1, 2)]))
    assert e.is_empty()
    assert removed == [2, 1]


def test_essentialize_keeps_live_sets():
    e, removed = essentialize(CASE_SIX)
    assert e == CASE_SIX and removed == []
    e, removed = essentialize(make_basic_set(SIG22, [(1, 1, 1), (1, 1, 2)]))
    assert removed == [2]
    assert [t.as_tuple() for t in e] == [(1, 1, 1)]


def test_relabel_and_swap_children():
    swapped = relabel(DOMINANT_UNIT, {1: 2, 2: 1})
    assert swapped.tuples() == {(2, 2, 2), (2, 1, 1), (1, 1, 1)}
    assert relabel(DOMINANT_UNIT, [2, 1]) == swapped
    flipped = swap_children(CASE_SIX, [1, 0])
    assert flipped.tuples() == {(1, 2, 1), (1, 1, 2), (2, 2, 2)}
    with pytest.raises(ValidationError):
        relabel(DOMINANT_UNIT, {1: 1, 2: 1})
    with pytest.raises(ValidationError):
        swap_children(CASE_SIX, [0, 0])


def test_text_format_round_trip():
    text = format_basic_set(CASE_SIX, ["case six"])
    assert text.startswith("# case six\nsignature: d=2 k=2\n")
    assert parse_basic_set(text) == CASE_SIX


def test_parse_accepts_comments_and_blank_lines():
    text = "# header\n\nsignature: d=2 k=2   # binary\nblock: 1 -> 1 1\n  block: 2->2 2\n"
    assert parse_basic_set(text).tuples() == {(1, 1, 1), (2, 2, 2)}


@pytest.mark.parametrize(
    "text,line",
    [
        ("signature: d=2 k=2\nblock: 1 -> 1 x\n", 2),
        ("signature: d=2 k=2\nblock: 1 -> 1\n", 2),
        ("signature: d=2 k=2\nblock: 3 -> 1 1\n", 2),
        ("block: 1 -> 1 1\n", 1),
        ("signature: d=2\n", 1),
        ("signature: d=2 k=2\n\nbogus line\n", 3),
        ("signature: d=2 k=2\nsignature: d=2 k=2\n", 2),
        ("signature: d=2 k=2\nblock: 1 1 1\n", 2),
    ],
)
def test_parse_errors_report_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_basic_set(text)
    assert info.value.lineno == line
    assert str(info.value).startswith(f"line {line}:")


def test_parse_requires_signature():
    with pytest.raises(ParseError):
        parse_basic_set("# nothing\n")


def test_mask_round_trip_all_binary_sets():
    for mask in range(256):
        b = basic_set_from_mask(SIG22, mask)
        assert basic_set_mask(b) == mask
    assert basic_set_from_mask(SIG22, 255) == full_basic_set(SIG22)
    with pytest.raises(ValidationError):
        basic_set_from_mask(SIG22, 256)


def test_block_admissibility_and_text():
    blk = Block(SIG22, 3, (1, 2, 2, 2, 2, 2, 2))
    assert blk.is_admissible(DOMINANT_UNIT)
    assert blk.children_of(0) == (2, 2)
    assert list(blk.leaves()) == [3, 4, 5, 6]
    assert Block.from_text(SIG22, blk.to_text()) == blk
    assert not Block(SIG22, 2, (2, 1, 1)).is_admissible(DOMINANT_UNIT)
    with pytest.raises(ValidationError):
        Block(SIG22, 2, (1, 1))
    with pytest.raises(ParseError):
        Block.from_text(SIG22, "labels=1 1 1")
