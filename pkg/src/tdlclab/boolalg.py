"""Exact arithmetic in the cylinder algebra of a tree boundary.

Two tree shapes are supported.

* ``rooted(d)``: the rooted d-ary tree.  A vertex is an arbitrary word
  over the digits 0..d-1; every vertex has d children.
* ``regular(q)``: the q-regular tree with a proper edge colouring by
  0..q-1, based at a vertex v0.  A vertex is a colour word with no two
  consecutive letters equal (the geodesic from v0 reads off the edge
  colours, and a proper colouring never repeats a colour across adjacent
  edges).  v0 has q children, every deeper vertex has q-1.

A clopen subset of the boundary is a finite union of cylinders and is
stored canonically: a finite antichain of addresses in which every
complete sibling family has been merged into its parent.  The full
boundary is the distinguished TOP value (all length-1 addresses merged
once more); it is not itself an address.  The empty set is the empty
cover.  All arithmetic is exact; measures are Fractions, never floats.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import PrecisionError

Address = tuple[int, ...]

ROOT: Address = ()


@dataclass(frozen=True)
class TreeShape:
    """Shape descriptor: kind 'rooted' or 'regular' plus the degree."""

    kind: str
    degree: int

    def __post_init__(self) -> None:
        if self.kind not in ("rooted", "regular"):
            raise ValueError(f"unknown tree kind {self.kind!r}")
        if self.degree < 2:
            raise ValueError("degree must be at least 2")
        if self.kind == "regular" and self.degree < 3:
            # q = 2 leaves every vertex with a single child and no branching;
            # nothing in scope needs it and several constructions assume q >= 3.
            raise ValueError("regular shape needs degree >= 3")

    # -- address structure ------------------------------------------------

    def colours(self) -> range:
        return range(self.degree)

    def child_letters(self, addr: Address) -> tuple[int, ...]:
        """Letters that may follow ``addr``."""
        if self.kind == "rooted" or addr == ROOT:
            return tuple(range(self.degree))
        last = addr[-1]
        return tuple(c for c in range(self.degree) if c != last)

    def children(self, addr: Address) -> tuple[Address, ...]:
        return tuple(addr + (c,) for c in self.child_letters(addr))

    def is_legal(self, addr: Address) -> bool:
        if any(not (0 <= a < self.degree) for a in addr):
            return False
        if self.kind == "regular":
            return all(a != b for a, b in zip(addr, addr[1:]))
        return True

    def require_legal(self, addr: Address) -> None:
        if not self.is_legal(addr):
            raise ValueError(f"illegal address {addr!r} for {self}")

    def sphere_size(self, n: int) -> int:
        if n == 0:
            return 1
        if self.kind == "rooted":
            return self.degree**n
        return self.degree * (self.degree - 1) ** (n - 1)

    def ball_size(self, n: int) -> int:
        return sum(self.sphere_size(k) for k in range(n + 1))

    def sphere(self, n: int) -> Iterator[Address]:
        """All addresses of length exactly n, in lexicographic order."""
        if n == 0:
            yield ROOT
            return
        for prefix in self.sphere(n - 1):
            for c in self.child_letters(prefix):
                yield prefix + (c,)

    def ball(self, n: int) -> Iterator[Address]:
        for k in range(n + 1):
            yield from self.sphere(k)

    def address_weight(self, addr: Address) -> Fraction:
        """Uniform-measure weight of the cylinder at ``addr``."""
        k = len(addr)
        if k == 0:
            return Fraction(1)
        if self.kind == "rooted":
            return Fraction(1, self.degree**k)
        return Fraction(1, self.degree * (self.degree - 1) ** (k - 1))


def rooted(degree: int) -> TreeShape:
    return TreeShape("rooted", degree)


def regular(degree: int) -> TreeShape:
    return TreeShape("regular", degree)


# -- canonical covers -----------------------------------------------------


def _merge_full_families(shape: TreeShape, addrs: set[Address]) -> frozenset[Address]:
    """Merge complete sibling families upward until nothing merges."""
    work = set(addrs)
    while True:
        by_parent: dict[Address, set[int]] = {}
        for a in work:
            if a == ROOT:
                return frozenset({ROOT})
            by_parent.setdefault(a[:-1], set()).add(a[-1])
        merged = False
        for parent, letters in by_parent.items():
            if letters == set(shape.child_letters(parent)):
                for c in letters:
                    work.discard(parent + (c,))
                work.add(parent)
                merged = True
        if not merged:
            return frozenset(work)


def _drop_shadowed(addrs: Iterable[Address]) -> set[Address]:
    """Remove addresses lying below another listed address."""
    kept = set(addrs)
    for a in sorted(kept, key=len):
        for k in range(len(a)):
            if a[:k] in kept:
                kept.discard(a)
                break
    return kept


@dataclass(frozen=True)
class CylinderClopen:
    """Canonical clopen subset of the boundary of ``shape``.

    ``cover`` is a canonical antichain; TOP is stored as the singleton
    cover {()} and rendered as the distinguished value.
    """

    shape: TreeShape
    cover: frozenset[Address]

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(shape: TreeShape) -> "CylinderClopen":
        return CylinderClopen(shape, frozenset())

    @staticmethod
    def top(shape: TreeShape) -> "CylinderClopen":
        return CylinderClopen(shape, frozenset({ROOT}))

    @staticmethod
    def cylinder(shape: TreeShape, addr: Address) -> "CylinderClopen":
        shape.require_legal(addr)
        if addr == ROOT:
            return CylinderClopen.top(shape)
        return CylinderClopen(shape, frozenset({addr}))

    @staticmethod
    def from_addresses(shape: TreeShape, addrs: Iterable[Address]) -> "CylinderClopen":
        material = set()
        for a in addrs:
            shape.require_legal(tuple(a))
            material.add(tuple(a))
        if not material:
            return CylinderClopen.zero(shape)
        material = _drop_shadowed(material)
        return CylinderClopen(shape, _merge_full_families(shape, material))

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.cover

    def is_top(self) -> bool:
        return ROOT in self.cover

    @property
    def depth(self) -> int:
        return max((len(a) for a in self.cover), default=0)

    # -- refinement ---------------------------------------------------------

    def refine(self, n: int) -> frozenset[Address]:
        """The cover rewritten as depth-n addresses exactly.

        Raises PrecisionError when n is smaller than the cover depth:
        a deep cylinder has no exact shallow description.
        """
        if n < self.depth:
            raise PrecisionError(
                f"cannot refine depth-{self.depth} cover at depth {n}"
            )
        out: set[Address] = set()
        for a in self.cover:
            out.update(_descendants(self.shape, a, n))
        return frozenset(out)

    # -- Boolean operations --------------------------------------------------

    def _common_depth(self, other: "CylinderClopen") -> int:
        return max(self.depth, other.depth, 1)

    def meet(self, other: "CylinderClopen") -> "CylinderClopen":
        self._check_shape(other)
        if self.is_zero() or other.is_zero():
            return CylinderClopen.zero(self.shape)
        n = self._common_depth(other)
        return CylinderClopen.from_addresses(
            self.shape, self.refine(n) & other.refine(n)
        )

    def join(self, other: "CylinderClopen") -> "CylinderClopen":
        self._check_shape(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        n = self._common_depth(other)
        return CylinderClopen.from_addresses(
            self.shape, self.refine(n) | other.refine(n)
        )

    def complement(self) -> "CylinderClopen":
        if self.is_zero():
            return CylinderClopen.top(self.shape)
        if self.is_top():
            return CylinderClopen.zero(self.shape)
        n = self.depth
        everything = set(self.shape.sphere(n))
        return CylinderClopen.from_addresses(
            self.shape, everything - self.refine(n)
        )

    def minus(self, other: "CylinderClopen") -> "CylinderClopen":
        return self.meet(other.complement())

    def leq(self, other: "CylinderClopen") -> bool:
        self._check_shape(other)
        if self.is_zero():
            return True
        if other.is_top():
            return True
        if other.is_zero():
            return False
        n = self._common_depth(other)
        return self.refine(n) <= other.refine(n)

    def lt(self, other: "CylinderClopen") -> bool:
        return self.leq(other) and self != other

    def meets(self, other: "CylinderClopen") -> bool:
        return not self.meet(other).is_zero()

    def _check_shape(self, other: "CylinderClopen") -> None:
        if self.shape != other.shape:
            raise ValueError("mixed tree shapes in one operation")

    # -- measure --------------------------------------------------------------

    def measure(self) -> Fraction:
        return sum(
            (self.shape.address_weight(a) for a in self.cover), Fraction(0)
        )

    # -- rendering --------------------------------------------------------------

    def __str__(self) -> str:
        return format_clopen(self)

    def sorted_cover(self) -> list[Address]:
        return sorted(self.cover)


def _descendants(shape: TreeShape, addr: Address, n: int) -> Iterator[Address]:
    if len(addr) == n:
        yield addr
        return
    for c in shape.child_letters(addr):
        yield from _descendants(shape, addr + (c,), n)


# -- depth partitions -----------------------------------------------------


@dataclass(frozen=True)
class DepthPartition:
    """A finite list of pairwise disjoint nonzero clopens joining to TOP."""

    shape: TreeShape
    parts: tuple[CylinderClopen, ...]

    def __post_init__(self) -> None:
        total = CylinderClopen.zero(self.shape)
        for i, p in enumerate(self.parts):
            if p.shape != self.shape:
                raise ValueError("partition part over a different shape")
            if p.is_zero():
                raise ValueError("partition contains the zero clopen")
            if total.meets(p):
                raise ValueError(f"partition parts overlap at index {i}")
            total = total.join(p)
        if not total.is_top():
            raise ValueError("partition does not cover the boundary")

    @staticmethod
    def at_depth(shape: TreeShape, n: int) -> "DepthPartition":
        parts = tuple(
            CylinderClopen.cylinder(shape, a) for a in shape.sphere(max(n, 1))
        )
        return DepthPartition(shape, parts)


def measure_weights(shape: TreeShape, n: int) -> dict[Address, Fraction]:
    """Exact uniform weights of the depth-n cylinders; they sum to 1."""
    if n < 1:
        raise ValueError("weights are defined for depth >= 1")
    return {a: shape.address_weight(a) for a in shape.sphere(n)}


# -- textual form -----------------------------------------------------------
#
# {} is zero, TOP is the full boundary, otherwise {01,02} style covers with
# addresses as digit strings (dot-separated above degree 10).


def format_address(shape: TreeShape, addr: Address) -> str:
    if shape.degree <= 10:
        return "".join(str(c) for c in addr)
    return ".".join(str(c) for c in addr)


def parse_address(shape: TreeShape, text: str) -> Address:
    text = text.strip()
    if not text:
        raise ValueError("empty address token")
    if "." in text:
        addr = tuple(int(part) for part in text.split("."))
    else:
        addr = tuple(int(ch) for ch in text)
    shape.require_legal(addr)
    return addr


def format_clopen(clopen: CylinderClopen) -> str:
    if clopen.is_top():
        return "TOP"
    if clopen.is_zero():
        return "{}"
    inner = ",".join(
        format_address(clopen.shape, a) for a in clopen.sorted_cover()
    )
    return "{" + inner + "}"


def parse_clopen(shape: TreeShape, text: str) -> CylinderClopen:
    text = text.strip()
    if text == "TOP":
        return CylinderClopen.top(shape)
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"clopen text must be TOP or brace-delimited: {text!r}")
    body = text[1:-1].strip()
    if not body:
        return CylinderClopen.zero(shape)
    addrs = [parse_address(shape, tok) for tok in body.split(",")]
    return CylinderClopen.from_addresses(shape, addrs)


@lru_cache(maxsize=None)
def _sphere_list(shape: TreeShape, n: int) -> tuple[Address, ...]:
    return tuple(shape.sphere(n))


def sphere_list(shape: TreeShape, n: int) -> tuple[Address, ...]:
    """Cached lexicographically ordered depth-n sphere."""
    return _sphere_list(shape, n)
