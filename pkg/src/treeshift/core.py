"""
Alphabets, tree signatures, 2-blocks and basic sets.

Symbols are the integers ``1..k`` and child positions are ``0..d-1``.  A
2-block is a root symbol together with the ordered tuple of its ``d``
children; a basic set is a set of allowed 2-blocks, and it generates the
Markov tree-shift of all labelings whose every (node, children) pattern is
allowed.

Finite blocks of height ``n`` are stored as flat label tuples in
breadth-first level order, so node ``j`` has children ``d*j + 1 .. d*j + d``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, ValidationError

__all__ = [
    "Signature",
    "TwoBlock",
    "BasicSet",
    "Block",
    "make_basic_set",
    "full_basic_set",
    "complement_forbidden_set",
    "essentialize",
    "relabel",
    "swap_children",
    "parse_basic_set",
    "format_basic_set",
    "basic_set_from_mask",
    "basic_set_mask",
]


@dataclass(frozen=True, order=True)
class Signature:
    """Number of children per node ``d`` and alphabet size ``k``."""

    d: int
    k: int

    def __post_init__(self):
        if not isinstance(self.d, int) or not isinstance(self.k, int):
            raise ValidationError("signature entries must be integers")
        if self.d < 1 or self.k < 1:
            raise ValidationError(f"need d >= 1 and k >= 1, got d={self.d} k={self.k}")

    @property
    def symbols(self) -> range:
        return range(1, self.k + 1)

    def block_size(self, height: int) -> int:
        """Number of nodes of a block of the given height."""
        if self.d == 1:
            return height
        return (self.d**height - 1) // (self.d - 1)

    def all_two_blocks(self) -> list[TwoBlock]:
        """Every 2-block, in lexicographic order of ``(root, c0, ..., c_{d-1})``."""
        return [
            TwoBlock(t[0], t[1:])
            for t in itertools.product(self.symbols, repeat=self.d + 1)
        ]

    def child_tuples(self) -> list[tuple[int, ...]]:
        """``A^d`` in lexicographic order (the index set of indicator vectors)."""
        return list(itertools.product(self.symbols, repeat=self.d))


@dataclass(frozen=True, order=True)
class TwoBlock:
    root: int
    children: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def as_tuple(self) -> tuple[int, ...]:
        return (self.root,) + self.children

    def check(self, signature: Signature) -> None:
        if len(self.children) != signature.d:
            raise ValidationError(
                f"2-block {self.as_tuple()} has {len(self.children)} children, expected d={signature.d}"
            )
        for s in self.as_tuple():
            if not isinstance(s, int) or not 1 <= s <= signature.k:
                raise ValidationError(
                    f"symbol {s!r} in 2-block {self.as_tuple()} out of range 1..{signature.k}"
                )

    def __str__(self):
        return f"{self.root} -> {' '.join(map(str, self.children))}"


def _as_two_block(item) -> TwoBlock:
    if isinstance(item, TwoBlock):
        return item
    t = tuple(item)
    if not t:
        raise ValidationError("empty 2-block")
    return TwoBlock(t[0], t[1:])


@dataclass(frozen=True)
class BasicSet:
    """A duplicate-free, canonically (lexicographically) ordered set of 2-blocks.

    Build through :func:`make_basic_set`; the constructor assumes its input is
    already validated and sorted.
    """

    signature: Signature
    blocks: tuple[TwoBlock, ...]

    @property
    def d(self) -> int:
        return self.signature.d

    @property
    def k(self) -> int:
        return self.signature.k

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __contains__(self, item) -> bool:
        return _as_two_block(item) in self._block_set

    @property
    def _block_set(self) -> frozenset:
        # cached lazily; dataclass is frozen so go through object.__setattr__
        try:
            return self.__dict__["_bs"]
        except KeyError:
            bs = frozenset(self.blocks)
            object.__setattr__(self, "_bs", bs)
            return bs

    def rooted_at(self, symbol: int) -> tuple[tuple[int, ...], ...]:
        """Children tuples of the blocks whose root is ``symbol``."""
        return tuple(b.children for b in self.blocks if b.root == symbol)

    def tuples(self) -> set[tuple[int, ...]]:
        return {b.as_tuple() for b in self.blocks}

    def issuperset(self, items: Iterable) -> bool:
        return all(i in self for i in items)

    def is_empty(self) -> bool:
        return not self.blocks


def make_basic_set(signature: Signature, blocks: Iterable) -> BasicSet:
    """Validate, deduplicate and sort ``blocks``.

    Items may be :class:`TwoBlock` instances or flat tuples ``(root, c0, ..., c_{d-1})``.
    """
    if not isinstance(signature, Signature):
        signature = Signature(*signature)
    seen = set()
    for item in blocks:
        b = _as_two_block(item)
        b.check(signature)
        seen.add(b)
    return BasicSet(signature, tuple(sorted(seen)))


def full_basic_set(signature: Signature) -> BasicSet:
    """All ``k^(d+1)`` 2-blocks: the basic set of the full tree-shift."""
    return BasicSet(signature, tuple(signature.all_two_blocks()))


def complement_forbidden_set(b: BasicSet) -> set[TwoBlock]:
    return set(b.signature.all_two_blocks()) - set(b.blocks)


def essentialize(b: BasicSet) -> tuple[BasicSet, list[int]]:
    """Strip symbols that cannot label a node of any infinite tree.

    Repeatedly removes each symbol with no block rooted at it, together with
    every block mentioning a removed symbol. Returns the reduced set and the
    removed symbols in removal order (ascending within one round).
    On the result every locally admissible block extends to an infinite tree.
    """
    blocks = list(b.blocks)
    removed: list[int] = []
    dead: set[int] = set()
    while True:
        roots = {blk.root for blk in blocks}
        newly = [s for s in b.signature.symbols if s not in dead and s not in roots]
        if not newly:
            break
        removed.extend(newly)
        dead.update(newly)
        blocks = [blk for blk in blocks if not dead.intersection(blk.as_tuple())]
    return BasicSet(b.signature, tuple(blocks)), removed


def _check_bijection(perm: Mapping[int, int], domain: Sequence[int], what: str) -> None:
    if set(perm) != set(domain) or set(perm.values()) != set(domain):
        raise ValidationError(f"{what} must be a bijection of {list(domain)}")


def relabel(b: BasicSet, permutation) -> BasicSet:
    """Apply a symbol bijection blockwise.

    ``permutation`` is a mapping ``old -> new`` or a sequence whose entry
    ``i - 1`` is the image of symbol ``i``.
    """
    if not isinstance(permutation, Mapping):
        permutation = {i + 1: s for i, s in enumerate(permutation)}
    _check_bijection(permutation, list(b.signature.symbols), "symbol permutation")
    return make_basic_set(
        b.signature,
        (tuple(permutation[s] for s in blk.as_tuple()) for blk in b.blocks),
    )


def swap_children(b: BasicSet, order: Sequence[int]) -> BasicSet:
    """Reorder child positions: the new child ``j`` is the old child ``order[j]``."""
    order = tuple(order)
    if sorted(order) != list(range(b.d)):
        raise ValidationError(f"child order must be a permutation of 0..{b.d - 1}")
    return make_basic_set(
        b.signature,
        ((blk.root,) + tuple(blk.children[j] for j in order) for blk in b.blocks),
    )


@dataclass(frozen=True)
class Block:
    """A labeling of the complete ``d``-ary tree of the given height."""

    signature: Signature
    height: int
    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.height < 1:
            raise ValidationError("block height must be >= 1")
        expected = self.signature.block_size(self.height)
        if len(self.labels) != expected:
            raise ValidationError(
                f"height-{self.height} block needs {expected} labels, got {len(self.labels)}"
            )
        for s in self.labels:
            if not 1 <= s <= self.signature.k:
                raise ValidationError(f"label {s} out of range 1..{self.signature.k}")

    @property
    def root(self) -> int:
        return self.labels[0]

    def internal_nodes(self) -> range:
        return range(self.signature.block_size(self.height - 1)) if self.height > 1 else range(0)

    def leaves(self) -> range:
        return range(self.signature.block_size(self.height - 1), len(self.labels))

    def children_of(self, node: int) -> tuple[int, ...]:
        d = self.signature.d
        return self.labels[d * node + 1 : d * node + d + 1]

    def is_admissible(self, b: BasicSet) -> bool:
        return all(
            TwoBlock(self.labels[j], self.children_of(j)) in b for j in self.internal_nodes()
        )

    def to_text(self) -> str:
        return f"height={self.height}; labels={' '.join(map(str, self.labels))}"

    @classmethod
    def from_text(cls, signature: Signature, text: str) -> Block:
        try:
            head, tail = (part.strip() for part in text.split(";", 1))
            key, _, value = head.partition("=")
            if key.strip() != "height":
                raise ValueError
            height = int(value)
            key, _, value = tail.partition("=")
            if key.strip() != "labels":
                raise ValueError
            labels = tuple(int(s) for s in value.split())
        except ValueError:
            raise ParseError(f"malformed block {text!r}") from None
        return cls(signature, height, labels)


# --- text format ------------------------------------------------------------


def parse_basic_set(text: str) -> BasicSet:
    """Parse the line-oriented basic-set format.

    ::

        # comments allowed anywhere
        signature: d=2 k=2
        block: 1 -> 1 1
        block: 1 -> 2 2
    """
    signature = None
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'signature:' or 'block:', got {line!r}", lineno)
        key = key.strip()
        if key == "signature":
            if signature is not None:
                raise ParseError("duplicate signature line", lineno)
            fields = {}
            for tok in rest.split():
                name, eq, val = tok.partition("=")
                if not eq or name not in ("d", "k") or name in fields:
                    raise ParseError(f"bad signature field {tok!r}", lineno)
                try:
                    fields[name] = int(val)
                except ValueError:
                    raise ParseError(f"bad integer in {tok!r}", lineno) from None
            if set(fields) != {"d", "k"}:
                raise ParseError("signature needs both d=<int> and k=<int>", lineno)
            try:
                signature = Signature(fields["d"], fields["k"])
            except ValidationError as exc:
                raise ParseError(str(exc), lineno) from None
        elif key == "block":
            if signature is None:
                raise ParseError("block before signature line", lineno)
            root, arrow, kids = rest.partition("->")
            if not arrow:
                raise ParseError("block needs '<root> -> <children>'", lineno)
            try:
                item = (int(root),) + tuple(int(s) for s in kids.split())
                blk = _as_two_block(item)
                blk.check(signature)
            except ValueError as exc:
                msg = str(exc) if isinstance(exc, ValidationError) else f"bad integer in {line!r}"
                raise ParseError(msg, lineno) from None
            blocks.append(blk)
        else:
            raise ParseError(f"unknown key {key!r}", lineno)
    if signature is None:
        raise ParseError("missing signature line")
    return make_basic_set(signature, blocks)


def format_basic_set(b: BasicSet, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"signature: d={b.d} k={b.k}")
    lines.extend(f"block: {blk}" for blk in b.blocks)
    return "\n".join(lines) + "\n"


def basic_set_from_mask(signature: Signature, mask: int) -> BasicSet:
    """Bit ``j`` of ``mask`` selects the ``j``-th 2-block in lexicographic order."""
    allb = signature.all_two_blocks()
    if not 0 <= mask < 1 << len(allb):
        raise ValidationError(f"mask out of range for {len(allb)} 2-blocks")
    return BasicSet(signature, tuple(b for j, b in enumerate(allb) if mask >> j & 1))


def basic_set_mask(b: BasicSet) -> int:
    present = set(b.blocks)
    return sum(1 << j for j, blk in enumerate(b.signature.all_two_blocks()) if blk in present)
