# core/partitions.py
"""
Ordered (coloured) non-crossing partitions and their combinatorics.

A block's position in OrderedPartition.blocks is its colour. Block indices in
the public API are 0-based; ground-set elements are 1-based, as in {1..n}.

ONC_n(m) is the set of ordered non-crossing partitions whose colouring is
monotone from depth m on: whenever P_j is outer to P_i and d(P_j) >= m, the
colour of P_j is smaller than the colour of P_i. Level 1 gives the monotone
partitions, level INFINITY all ordered non-crossing partitions.
"""

import bisect
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_partitions

from .errors import CrossingPartitionError, InvalidPartitionError, ProfileError
from .hierarchy import INFINITY, Depth, lower_level, reaches
from .intervals import SupportProfile

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]


@dataclass(frozen=True)
class OrderedPartition:
    """Ordered tuple of disjoint sorted blocks covering {1..n}; position = colour."""
    n: int
    blocks: Tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(tuple(block) for block in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if self.n < 0:
            raise InvalidPartitionError(f"ground set size must be non-negative, got {self.n}")
        seen = []
        for block in blocks:
            if not block:
                raise InvalidPartitionError("blocks must be non-empty")
            if list(block) != sorted(set(block)):
                raise InvalidPartitionError(f"block {block} is not strictly increasing")
            seen.extend(block)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise InvalidPartitionError(f"blocks {blocks} do not partition {{1..{self.n}}}")

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]]) -> "OrderedPartition":
        """Build from blocks given in colour order; n is inferred, blocks are sorted."""
        sorted_blocks = tuple(tuple(sorted(block)) for block in blocks)
        n = sum(len(block) for block in sorted_blocks)
        return cls(n, sorted_blocks)

    @property
    def size(self) -> int:
        """Number of blocks p = b(P)."""
        return len(self.blocks)

    def block_of(self, element: int) -> int:
        for index, block in enumerate(self.blocks):
            if element in block:
                return index
        raise InvalidPartitionError(f"element {element} is not in {{1..{self.n}}}")

    def is_pair(self) -> bool:
        return all(len(block) == 2 for block in self.blocks)

    def canonical(self) -> "OrderedPartition":
        """The underlying unordered partition, blocks sorted by least element."""
        return OrderedPartition(self.n, tuple(sorted(self.blocks)))

    def reorder(self, order: Sequence[int]) -> "OrderedPartition":
        """Colour the blocks so that block order[r] gets colour r."""
        return OrderedPartition(self.n, tuple(self.blocks[index] for index in order))

    def canonical_indices(self) -> Tuple[int, ...]:
        """The tuple (i_1..i_n) with i_s = r + 1 when s lies in the r-th block."""
        indices = [0] * self.n
        for colour, block in enumerate(self.blocks, start=1):
            for element in block:
                indices[element - 1] = colour
        return tuple(indices)

    def to_dict(self) -> dict:
        return {"n": self.n, "blocks": [list(block) for block in self.blocks]}

    @classmethod
    def from_dict(cls, data: dict) -> "OrderedPartition":
        try:
            return cls(int(data["n"]), tuple(tuple(int(x) for x in block) for block in data["blocks"]))
        except (KeyError, TypeError) as e:
            raise InvalidPartitionError(f"malformed partition record {data!r}: {e}") from None

    def __str__(self) -> str:
        return "(" + ",".join("{" + ",".join(map(str, block)) + "}" for block in self.blocks) + ")"


@dataclass(frozen=True)
class PartitionClass:
    """Classification of an ordered partition."""
    noncrossing: bool
    pair: bool
    depth_vector: Optional[Tuple[int, ...]]
    outer_relation: FrozenSet[Tuple[int, int]]


# --- structure -------------------------------------------------------------

def _one_gap(outer: Block, other: Block) -> bool:
    """True iff all of `other` sits in a single gap of `outer` (outside its span counts as one gap)."""
    last = len(outer)
    labels = set()
    for element in other:
        gap = bisect.bisect_left(outer, element)
        labels.add(0 if gap in (0, last) else gap)
        if len(labels) > 1:
            return False
    return True


def blocks_cross(first: Block, second: Block) -> bool:
    return not (_one_gap(first, second) or _one_gap(second, first))


def is_noncrossing(P: OrderedPartition) -> bool:
    """True iff no two blocks interleave as s < r < s' < r'."""
    blocks = P.blocks
    for a, b in itertools.combinations(range(len(blocks)), 2):
        if blocks_cross(blocks[a], blocks[b]):
            return False
    return True


def is_outer(P: OrderedPartition, j: int, i: int) -> bool:
    """P_j < P_i: block i lies strictly inside a gap of block j."""
    if i == j:
        return False
    outer, inner = P.blocks[j], P.blocks[i]
    return outer[0] < inner[0] and inner[-1] < outer[-1] and _one_gap(outer, inner)


def outer_relation(P: OrderedPartition) -> FrozenSet[Tuple[int, int]]:
    """All pairs (j, i) with P_j outer to P_i."""
    p = P.size
    return frozenset((j, i) for j in range(p) for i in range(p) if is_outer(P, j, i))


def _require_noncrossing(P: OrderedPartition):
    if not is_noncrossing(P):
        raise CrossingPartitionError(f"{P} is crossing; depth is undefined")


def depth(P: OrderedPartition, i: int) -> int:
    """One plus the number of blocks outer to block i."""
    _require_noncrossing(P)
    return 1 + sum(1 for j in range(P.size) if is_outer(P, j, i))


def depths(P: OrderedPartition) -> Tuple[int, ...]:
    _require_noncrossing(P)
    relation = outer_relation(P)
    return tuple(1 + sum(1 for (_, inner) in relation if inner == i) for i in range(P.size))


def classify(P: OrderedPartition) -> PartitionClass:
    noncrossing = is_noncrossing(P)
    return PartitionClass(
        noncrossing=noncrossing,
        pair=P.is_pair(),
        depth_vector=depths(P) if noncrossing else None,
        outer_relation=outer_relation(P),
    )


def _constraints(P: OrderedPartition, m: Depth) -> List[Tuple[int, int]]:
    """Pairs (j, i) whose colours must satisfy j before i at level m."""
    if m is INFINITY:
        return []
    block_depths = depths(P)
    return [(j, i) for (j, i) in outer_relation(P) if reaches(block_depths[j], m)]


def in_onc_m(P: OrderedPartition, m: Depth) -> bool:
    """Membership in ONC_n(m)."""
    if not is_noncrossing(P):
        return False
    return all(j < i for (j, i) in _constraints(P, m))


# --- enumeration -----------------------------------------------------------

@lru_cache(maxsize=None)
def _nc_shapes(lo: int, hi: int, pairs_only: bool) -> Tuple[Tuple[Block, ...], ...]:
    """Unordered NC partitions of {lo..hi} by the block-of-lo decomposition."""
    if lo > hi:
        return ((),)
    if pairs_only and (hi - lo + 1) % 2:
        return ()
    shapes = []
    rest = range(lo + 1, hi + 1)
    sizes = (1,) if pairs_only else range(0, hi - lo + 1)
    for extra in sizes:
        for chosen in itertools.combinations(rest, extra):
            block = (lo,) + chosen
            gaps = [_nc_shapes(a + 1, b - 1, pairs_only) for a, b in zip(block, block[1:])]
            gaps.append(_nc_shapes(block[-1] + 1, hi, pairs_only))
            if any(not options for options in gaps):
                continue
            for combo in itertools.product(*gaps):
                blocks = [block]
                for part in combo:
                    blocks.extend(part)
                shapes.append(tuple(sorted(blocks)))
    return tuple(shapes)


def enumerate_nc(n: int, pairs_only: bool = False) -> Iterator[OrderedPartition]:
    """Unordered non-crossing (pair) partitions of {1..n}, each in canonical form."""
    if n < 0:
        raise InvalidPartitionError(f"n must be non-negative, got {n}")
    for blocks in _nc_shapes(1, n, pairs_only):
        yield OrderedPartition(n, blocks)


def admissible_colourings(shape: OrderedPartition, m: Depth) -> Iterator[Tuple[int, ...]]:
    """
    Colour assignments (colour of block 0, colour of block 1, ...) of a canonical
    non-crossing shape that land in ONC(m), in lexicographic order.
    """
    p = shape.size
    before: List[List[int]] = [[] for _ in range(p)]
    below = [0] * p
    for j, i in _constraints(shape, m):
        before[i].append(j)
        below[j] += 1

    colours = [-1] * p
    used = [False] * p

    def extend(index: int):
        if index == p:
            yield tuple(colours)
            return
        floor = max((colours[j] for j in before[index]), default=-1)
        for colour in range(floor + 1, p):
            if used[colour]:
                continue
            free_above = sum(1 for c in range(colour + 1, p) if not used[c])
            if free_above < below[index]:
                break
            used[colour] = True
            colours[index] = colour
            yield from extend(index + 1)
            used[colour] = False
        colours[index] = -1

    yield from extend(0)


def colour_shape(shape: OrderedPartition, colouring: Sequence[int]) -> OrderedPartition:
    """Order the blocks of `shape` by the given colours."""
    order = sorted(range(shape.size), key=lambda b: colouring[b])
    return shape.reorder(order)


def enumerate_onc(n: int, m: Depth, pairs_only: bool = False) -> Iterator[OrderedPartition]:
    """
    Yield each member of ONC_n(m) (pairs only: ONC^2_n(m)) exactly once.

    Order: shapes as produced by the block-of-1 decomposition, and for each
    shape its admissible colourings in lexicographic order.
    """
    if n < 1:
        raise InvalidPartitionError(f"n must be positive, got {n}")
    if pairs_only and n % 2:
        return
    for shape in enumerate_nc(n, pairs_only):
        for colouring in admissible_colourings(shape, m):
            yield colour_shape(shape, colouring)


def onc_census(n: int, m: Depth) -> Dict[int, int]:
    """Block count q -> |ONC_n(q, m)| by direct enumeration."""
    census = Counter(P.size for P in enumerate_onc(n, m))
    logger.debug("onc census n=%s m=%s: %s", n, m, dict(census))
    return dict(sorted(census.items()))


def enumerate_ordered_partitions(n: int, min_block: int = 1) -> Iterator[OrderedPartition]:
    """All ordered partitions of {1..n} (crossing included) with blocks of size >= min_block."""
    if n == 0:
        yield OrderedPartition(0, ())
        return
    for unordered in multiset_partitions(list(range(1, n + 1))):
        if any(len(block) < min_block for block in unordered):
            continue
        blocks = [tuple(block) for block in unordered]
        for order in itertools.permutations(blocks):
            yield OrderedPartition(n, order)


# --- counting --------------------------------------------------------------

def double_factorial(k: int) -> int:
    """(2k - 1)!!"""
    return math.prod(range(1, 2 * k, 2))


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


@lru_cache(maxsize=None)
def count_onc_pairs(k: int, m: Depth) -> int:
    """
    |ONC^2_{2k}(m)| by pairing element 1 with element 2j.

    The j - 1 pairs inside that block live one level lower, the k - j pairs
    after it at the same level; the block of 1 and its inner pairs take j of
    the k colours. For m >= 2 the block's own colour is free among them, at
    level 1 it must be the least.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    if k == 0:
        return 1
    if m is INFINITY:
        return math.factorial(k) * catalan(k)
    inner = lower_level(m)
    return sum(
        (1 if m == 1 else j) * math.comb(k, j) * count_onc_pairs(j - 1, inner) * count_onc_pairs(k - j, m)
        for j in range(1, k + 1)
    )


@lru_cache(maxsize=None)
def _block_egf(n: int, q: int, m: Depth) -> Fraction:
    """|ONC_n(q, m)| / q!"""
    if n == 0:
        return Fraction(1 if q == 0 else 0)
    if q <= 0 or q > n:
        return Fraction(0)
    inner = lower_level(m)
    total = Fraction(0)
    for span in range(0, n):
        for inner_colours in range(0, q):
            gaps = _gap_sequence(span, inner_colours, inner)
            if not gaps:
                continue
            tail = _block_egf(n - 1 - span, q - 1 - inner_colours, m)
            if not tail:
                continue
            # at level 1 the block of element 1 takes the least colour of its nest
            weight = Fraction(1, inner_colours + 1) if m == 1 else 1
            total += weight * gaps * tail
    return total


@lru_cache(maxsize=None)
def _gap_sequence(span: int, colours: int, level: Depth) -> Fraction:
    """Weighted count of the gaps inside the block of 1, covering `span` positions after element 1."""
    if span == 0:
        return Fraction(1 if colours == 0 else 0)
    total = Fraction(0)
    for step in range(1, span + 1):
        for used in range(0, colours + 1):
            head = _block_egf(step - 1, used, level)
            if head:
                total += head * _gap_sequence(span - step, colours - used, level)
    return total


def count_onc_blocks(n: int, q: int, m: Depth) -> int:
    """
    |ONC_n(q, m)|: ordered non-crossing partitions of {1..n} with q blocks of any size.

    Decomposes by the block of element 1 and distributes colours with the
    multinomial weight q!/(q_1!...q_r!); at level 1 the block of 1 must carry
    the least colour among itself and the blocks inside it.
    """
    if n < 0 or q < 0:
        raise ValueError("n and q must be non-negative")
    value = _block_egf(n, q, m) * math.factorial(q)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral partition count {value} for n={n}, q={q}, m={m}")
    return int(value)


def associate_tuple(indices: Sequence[int]) -> OrderedPartition:
    """Blocks P_j = {s : i_s = k_j} for the sorted distinct values k_1 < ... < k_r."""
    if not indices:
        raise InvalidPartitionError("index tuple must be non-empty")
    values = sorted(set(indices))
    blocks = tuple(
        tuple(s for s, index in enumerate(indices, start=1) if index == value) for value in values
    )
    return OrderedPartition(len(indices), blocks)


# --- compatibility with support profiles ----------------------------------

def _block_supports(P: OrderedPartition, profile: SupportProfile):
    """Support of each block, or None where a block mixes supports."""
    supports = []
    for block in P.blocks:
        carried = {profile.at(element) for element in block}
        supports.append(carried.pop() if len(carried) == 1 else None)
    return supports


def compatible(P: OrderedPartition, profile: SupportProfile, respect_support_order: bool = True) -> bool:
    """
    (i) positions of one block carry equal functions; (ii) a block of smaller
    colour never carries a function that comes after one of larger colour.
    """
    if len(profile) != P.n:
        raise ProfileError(f"profile length {len(profile)} does not match n={P.n}")
    supports = _block_supports(P, profile)
    if any(f is None for f in supports):
        return False
    if not respect_support_order:
        return True
    return all(
        supports[k].precedes_or_equals(supports[l])
        for k, l in itertools.combinations(range(len(supports)), 2)
    )


def check_pair_profile(pi: OrderedPartition, profile: SupportProfile):
    """Validate that pi is a non-crossing pair partition consistent with the profile."""
    if not pi.is_pair():
        raise InvalidPartitionError(f"{pi} is not a pair partition")
    _require_noncrossing(pi)
    if len(profile) != pi.n:
        raise ProfileError(f"profile length {len(profile)} does not match n={pi.n}")
    for a, b in pi.blocks:
        if profile.at(a) != profile.at(b):
            raise ProfileError(f"paired positions {a} and {b} carry different supports")


def inn_count(pi: OrderedPartition, profile: SupportProfile, i: int, m: Depth = 1) -> int:
    """
    Number of blocks inner to pi_i sharing its support. At level m, blocks of
    depth below m count zero inner blocks.
    """
    check_pair_profile(pi, profile)
    if m is INFINITY or depth(pi, i) < m:
        return 0
    support = profile.at(pi.blocks[i][0])
    return sum(
        1 for j in range(pi.size)
        if is_outer(pi, i, j) and profile.at(pi.blocks[j][0]) == support
    )


def inner_block_weight(pi: OrderedPartition, profile: SupportProfile, m: Depth = 1) -> Fraction:
    """Product over blocks of 1 / (Inn + 1)."""
    weight = Fraction(1)
    for i in range(pi.size):
        weight /= inn_count(pi, profile, i, m) + 1
    return weight


def coloring_count(
    pi: OrderedPartition,
    profile: SupportProfile,
    m: Depth = 1,
    respect_support_order: bool = True,
) -> int:
    """
    Number of admissible colourings P of pi in ONC^2(m) with P compatible with
    the profile. With respect_support_order=False only condition (i) is applied.
    """
    check_pair_profile(pi, profile)
    shape = pi.canonical()
    return sum(
        1 for colouring in admissible_colourings(shape, m)
        if compatible(colour_shape(shape, colouring), profile, respect_support_order)
    )
