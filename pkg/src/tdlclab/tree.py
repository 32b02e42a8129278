"""Tree isometries carried at finite precision.

Vertices are the legal addresses of a TreeShape.  On rooted shapes these
are digit strings and isometries fix the root, so tables are
level-preserving.  On regular shapes addresses are reduced colour words:
the vertex set is the free product of degree many involutions, stepping
along colour c from word w is free reduction of w plus c, and isometries
may move the base vertex.

Two element carriers live here.  IsometrySpec is an exact recipe, a word
translation composed with a finitely supported portrait, applicable to
addresses of any depth.  BallIsometry is a lookup table on a ball about
the base vertex; composition and inversion shrink the reliable radius and
anything past it raises PrecisionExhausted.

Portrait semantics differ by shape kind.  Rooted portraits are classic:
each decorated vertex permutes its own children independently.  Regular
portraits are inherited: a decoration recolours every letter below its
site until a deeper decoration overrides it, so a single site at the base
vertex is a global recolouring.  A decoration at site v must agree with
the inherited permutation on the colour of the edge from v back toward
the base vertex, otherwise the letter map would break adjacency there;
with undecorated ancestors this says the decoration fixes that colour.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .boolalg import (
    ROOT,
    Address,
    CylinderClopen,
    TreeShape,
    format_address,
    sphere_list,
)
from .errors import NotTransitiveAtRadius, PrecisionExhausted
from .permgrp import FiniteGroup, Perm, prime_factors


def free_reduce(word) -> tuple[int, ...]:
    out: list[int] = []
    for c in word:
        if out and out[-1] == c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def step(shape: TreeShape, addr: Address, colour: int) -> Address:
    """Neighbour of addr in direction colour (regular shapes only)."""
    if addr and addr[-1] == colour:
        return addr[:-1]
    return addr + (colour,)


def _adjacent(u: Address, v: Address) -> bool:
    if len(u) == len(v) + 1:
        return u[:-1] == v
    if len(v) == len(u) + 1:
        return v[:-1] == u
    return False


# -- portraits ---------------------------------------------------------------


@dataclass(frozen=True)
class Portrait:
    """Finitely supported decoration of vertices by colour permutations."""

    shape: TreeShape
    sites: tuple[tuple[Address, Perm], ...]

    def __post_init__(self) -> None:
        seen = set()
        for addr, perm in self.sites:
            self.shape.require_legal(addr)
            if perm.degree != self.shape.degree:
                raise ValueError("decoration degree does not match the shape")
            if addr in seen:
                raise ValueError(f"duplicate site {addr!r}")
            seen.add(addr)
        object.__setattr__(
            self,
            "sites",
            tuple(sorted(self.sites, key=lambda sp: (len(sp[0]), sp[0]))),
        )
        if self.shape.kind == "regular":
            site_map = dict(self.sites)
            for addr, perm in self.sites:
                if addr == ROOT:
                    continue
                inherited = self._active(site_map, addr[:-1])
                back = addr[-1]
                want = inherited(back) if inherited is not None else back
                if perm(back) != want:
                    raise ValueError(
                        f"site {addr!r} disagrees with its surroundings on "
                        f"the return colour {back}"
                    )

    @staticmethod
    def _active(site_map: dict, prefix: Address):
        for k in range(len(prefix), -1, -1):
            if prefix[:k] in site_map:
                return site_map[prefix[:k]]
        return None

    @classmethod
    def single(cls, shape: TreeShape, addr: Address, perm: Perm) -> "Portrait":
        return cls(shape, ((tuple(addr), perm),))

    @classmethod
    def identity(cls, shape: TreeShape) -> "Portrait":
        return cls(shape, ())

    @cached_property
    def site_map(self) -> dict:
        return dict(self.sites)

    @property
    def depth(self) -> int:
        return max((len(a) for a, _ in self.sites), default=0)

    def apply(self, addr: Address) -> Address:
        self.shape.require_legal(tuple(addr))
        smap = self.site_map
        if self.shape.kind == "rooted":
            out = []
            for j, x in enumerate(addr):
                perm = smap.get(tuple(addr[:j]))
                out.append(perm(x) if perm is not None else x)
            return tuple(out)
        active = smap.get(ROOT)
        out = []
        prefix: Address = ROOT
        for x in addr:
            out.append(active(x) if active is not None else x)
            prefix = prefix + (x,)
            if prefix in smap:
                active = smap[prefix]
        return tuple(out)

    def apply_inverse(self, addr: Address) -> Address:
        """Solve apply(y) == addr letter by letter.

        The permutation acting on letter j depends only on the already
        recovered domain prefix, so the preimage unrolls front to back.
        """
        self.shape.require_legal(tuple(addr))
        smap = self.site_map
        out: list[int] = []
        if self.shape.kind == "rooted":
            for z in addr:
                perm = smap.get(tuple(out))
                out.append(perm.inverse()(z) if perm is not None else z)
            return tuple(out)
        active = smap.get(ROOT)
        prefix: Address = ROOT
        for z in addr:
            y = active.inverse()(z) if active is not None else z
            out.append(y)
            prefix = prefix + (y,)
            if prefix in smap:
                active = smap[prefix]
        return tuple(out)

    def ball(self, r: int) -> "BallIsometry":
        table = {a: self.apply(a) for a in self.shape.ball(r)}
        return BallIsometry(self.shape, r, table, check=False)


# -- ball tables ---------------------------------------------------------------


class BallIsometry:
    """Isometry of the vertex tree known on the radius ``precision`` ball."""

    __slots__ = ("shape", "precision", "table")

    def __init__(
        self,
        shape: TreeShape,
        precision: int,
        table: dict,
        check: bool = True,
    ) -> None:
        if precision < 0:
            raise PrecisionExhausted("negative precision")
        self.shape = shape
        self.precision = precision
        self.table = dict(table)
        if check:
            self._validate()

    def _validate(self) -> None:
        shape = self.shape
        want = set(shape.ball(self.precision))
        if set(self.table) != want:
            raise ValueError("table domain is not the stated ball")
        images = set()
        for a, b in self.table.items():
            shape.require_legal(b)
            if b in images:
                raise ValueError("table is not injective")
            images.add(b)
        if shape.kind == "rooted" and self.table[ROOT] != ROOT:
            raise ValueError("rooted isometries must fix the root")
        for b in self.table:
            if b == ROOT:
                continue
            if not _adjacent(self.table[b[:-1]], self.table[b]):
                raise ValueError(f"images of edge at {b!r} are not adjacent")

    @classmethod
    def identity(cls, shape: TreeShape, r: int) -> "BallIsometry":
        return cls(shape, r, {a: a for a in shape.ball(r)}, check=False)

    @property
    def displacement(self) -> int:
        return len(self.table[ROOT])

    def apply(self, addr: Address) -> Address:
        addr = tuple(addr)
        if len(addr) > self.precision:
            raise PrecisionExhausted(
                f"address depth {len(addr)} exceeds precision {self.precision}"
            )
        return self.table[addr]

    def __mul__(self, other: "BallIsometry") -> "BallIsometry":
        """Composition, self after other."""
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        r = min(other.precision, self.precision - other.displacement)
        if r < 0:
            raise PrecisionExhausted("composition leaves no reliable ball")
        table = {
            a: self.table[b]
            for a, b in other.table.items()
            if len(a) <= r
        }
        return BallIsometry(self.shape, r, table, check=False)

    def inverse(self) -> "BallIsometry":
        r = self.precision - self.displacement
        if r < 0:
            raise PrecisionExhausted("inverse leaves no reliable ball")
        table = {b: a for a, b in self.table.items() if len(b) <= r}
        if len(table) != self.shape.ball_size(r):
            raise AssertionError("image does not cover the inverse ball")
        return BallIsometry(self.shape, r, table, check=False)

    def truncate(self, r: int) -> "BallIsometry":
        if r > self.precision:
            raise PrecisionExhausted(
                f"cannot extend precision {self.precision} to {r}"
            )
        table = {a: b for a, b in self.table.items() if len(a) <= r}
        return BallIsometry(self.shape, r, table, check=False)

    def local_action(self, v: Address) -> Perm:
        """Colour permutation induced at vertex v."""
        v = tuple(v)
        if len(v) + 1 > self.precision:
            raise PrecisionExhausted(f"no room around {v!r}")
        iv = self.table[v]
        images = {}
        if self.shape.kind == "rooted":
            for c in self.shape.colours():
                images[c] = self.table[v + (c,)][-1]
        else:
            for c in self.shape.colours():
                inb = self.table[step(self.shape, v, c)]
                if len(inb) == len(iv) + 1:
                    images[c] = inb[-1]
                else:
                    images[c] = iv[-1]
        return Perm(tuple(images[c] for c in self.shape.colours()))

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.table.items())

    def is_identity_on(self, r: int) -> bool:
        if r > self.precision:
            raise PrecisionExhausted(
                f"ball {r} not covered at precision {self.precision}"
            )
        return all(a == b for a, b in self.table.items() if len(a) <= r)

    def agrees_with(self, other: "BallIsometry", r: int) -> bool:
        if r > min(self.precision, other.precision):
            raise PrecisionExhausted(f"ball {r} not covered by both tables")
        return all(
            self.table[a] == other.table[a]
            for a in self.shape.ball(r)
        )

    def __repr__(self) -> str:
        return (
            f"BallIsometry({self.shape.kind}{self.shape.degree}, "
            f"precision={self.precision}, moves {self.table[ROOT]!r})"
        )


# -- exact recipes -------------------------------------------------------------


@dataclass(frozen=True)
class IsometrySpec:
    """Word translation after a portrait, exact at every depth.

    On regular shapes ``word`` is a freely reduced colour word acting by
    left multiplication on vertices; the portrait acts first.  Rooted
    shapes admit no translations, so there the word must be empty.
    """

    shape: TreeShape
    word: tuple[int, ...] = ()
    sites: tuple[tuple[Address, Perm], ...] = ()
    portrait: Portrait = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        word = tuple(self.word)
        object.__setattr__(self, "word", word)
        if word:
            if self.shape.kind == "rooted":
                raise ValueError("rooted shapes admit no translations")
            for c in word:
                if not 0 <= c < self.shape.degree:
                    raise ValueError(f"colour {c} out of range")
            if free_reduce(word) != word:
                raise ValueError("word is not freely reduced")
        object.__setattr__(
            self, "portrait", Portrait(self.shape, tuple(self.sites))
        )

    @property
    def displacement(self) -> int:
        return len(self.word)

    def apply(self, addr: Address) -> Address:
        moved = self.portrait.apply(addr)
        if not self.word:
            return moved
        return free_reduce(self.word + moved)

    def apply_inverse(self, addr: Address) -> Address:
        shifted = tuple(addr)
        if self.word:
            shifted = free_reduce(tuple(reversed(self.word)) + shifted)
        return self.portrait.apply_inverse(shifted)

    def realize(self, r: int) -> BallIsometry:
        table = {a: self.apply(a) for a in self.shape.ball(r)}
        return BallIsometry(self.shape, r, table, check=True)


def hyperbolic_isometry(shape: TreeShape, axis) -> IsometrySpec:
    """Translation along the axis spelled by a colour word.

    For a cyclically reduced word of length two or more this is plain
    left multiplication, with translation length the word length.  A
    single colour c yields the unit translation along the alternating
    axis through c: left multiplication by c composed with the global
    recolouring swapping c with the smallest other colour.  Words that
    are merely freely reduced but not cyclically reduced are rejected;
    shift the starting vertex instead of smuggling the conjugator in.
    """
    if shape.kind != "regular":
        raise ValueError("translations need a regular shape")
    axis = tuple(axis)
    if not axis:
        raise ValueError("empty axis word")
    for c in axis:
        if not 0 <= c < shape.degree:
            raise ValueError(f"colour {c} out of range")
    if free_reduce(axis) != axis:
        raise ValueError("axis word is not freely reduced")
    if len(axis) == 1:
        c = axis[0]
        partner = min(d for d in shape.colours() if d != c)
        images = list(range(shape.degree))
        images[c], images[partner] = partner, c
        swap = Perm(tuple(images))
        return IsometrySpec(shape, word=axis, sites=((ROOT, swap),))
    if axis[0] == axis[-1]:
        raise ValueError("axis word is not cyclically reduced")
    return IsometrySpec(shape, word=axis)


def colour_word_isometry(shape: TreeShape, word) -> IsometrySpec:
    """Left multiplication by a colour word; every local action is trivial."""
    if shape.kind != "regular":
        raise ValueError("translations need a regular shape")
    return IsometrySpec(shape, word=free_reduce(word))


@dataclass(frozen=True)
class SpecWord:
    """Formal product of spec powers, applied rightmost factor first.

    Conjugates and commutators of recipes stay exactly evaluable at any
    depth this way, with no precision loss: a ball table of the product
    is built by applying each factor pointwise.
    """

    shape: TreeShape
    factors: tuple[tuple[IsometrySpec, int], ...]

    @classmethod
    def of(cls, *specs: IsometrySpec) -> "SpecWord":
        if not specs:
            raise ValueError("empty product has no shape")
        shape = specs[0].shape
        return cls(shape, tuple((s, 1) for s in specs))

    @classmethod
    def conjugate(cls, g: IsometrySpec, u: IsometrySpec, k: int) -> "SpecWord":
        """The product g^k u g^-k."""
        return cls(g.shape, ((g, k), (u, 1), (g, -k)))

    @classmethod
    def commutator(cls, a: IsometrySpec, b: IsometrySpec) -> "SpecWord":
        return cls(a.shape, ((a, 1), (b, 1), (a, -1), (b, -1)))

    def inverse(self) -> "SpecWord":
        return SpecWord(
            self.shape,
            tuple((s, -e) for s, e in reversed(self.factors)),
        )

    def then_power(self, g: IsometrySpec, k: int) -> "SpecWord":
        return SpecWord(self.shape, self.factors + ((g, k),))

    def apply(self, addr: Address) -> Address:
        for spec, exp in reversed(self.factors):
            if exp >= 0:
                for _ in range(exp):
                    addr = spec.apply(addr)
            else:
                for _ in range(-exp):
                    addr = spec.apply_inverse(addr)
        return addr

    def apply_inverse(self, addr: Address) -> Address:
        return self.inverse().apply(addr)

    @property
    def displacement(self) -> int:
        return len(self.apply(ROOT))

    def realize(self, r: int) -> BallIsometry:
        table = {a: self.apply(a) for a in self.shape.ball(r)}
        return BallIsometry(self.shape, r, table, check=True)

    def is_identity_on(self, r: int) -> bool:
        return all(self.apply(a) == a for a in self.shape.ball(r))


def spec_image_clopen(mover, clopen: CylinderClopen) -> CylinderClopen:
    """Forward image of a clopen under an exact recipe.

    Same refinement rule as image_clopen, but evaluated through exact
    applications instead of a truncated table, so depth never runs out.
    """
    if clopen.is_zero():
        return clopen
    disp = len(mover.apply(ROOT))
    depth = max(clopen.depth, disp + 1)
    images = [mover.apply(atom) for atom in clopen.refine(depth)]
    return CylinderClopen.from_addresses(clopen.shape, images)


# -- boundary images -----------------------------------------------------------


def image_clopen(iso: BallIsometry, clopen: CylinderClopen) -> CylinderClopen:
    """Forward image of a cylinder clopen set under the isometry.

    Atoms are refined until their images lie strictly beyond the segment
    from the base vertex to its image; past that point the image of the
    cylinder at b is exactly the cylinder at the image of b.
    """
    if iso.shape != clopen.shape:
        raise ValueError("shape mismatch")
    if clopen.is_zero():
        return clopen
    depth = max(clopen.depth, iso.displacement + 1)
    if depth > iso.precision:
        raise PrecisionExhausted(
            f"need depth {depth} atoms, have precision {iso.precision}"
        )
    base_path = iso.table[ROOT]
    images = []
    for atom in clopen.refine(depth):
        img = iso.table[atom]
        if len(img) <= len(base_path) and base_path[: len(img)] == img:
            raise AssertionError("image atom landed on the displacement path")
        images.append(img)
    return CylinderClopen.from_addresses(iso.shape, images)


def preimage_clopen(iso: BallIsometry, clopen: CylinderClopen) -> CylinderClopen:
    return image_clopen(iso.inverse(), clopen)


# -- the universal group at finite depth ----------------------------------------


def in_universal_group(iso: BallIsometry, local: FiniteGroup) -> bool:
    """All realized local actions lie in the given colour group."""
    if local.degree != iso.shape.degree:
        raise ValueError("local group degree does not match the shape")
    return all(
        iso.local_action(v) in local
        for v in iso.shape.ball(iso.precision - 1)
    )


def _return_stabiliser(local: FiniteGroup, colour: int) -> FiniteGroup:
    return local.point_stabilizer(colour)


def level_group(shape: TreeShape, local: FiniteGroup, n: int) -> FiniteGroup:
    """Depth-n truncation as a permutation group on the n-sphere.

    Rooted: the full iterated wreath product of the local group.  Regular:
    the truncation of the base-vertex stabiliser, generated by a global
    recolouring for each local generator plus, at every deeper vertex,
    single-site decorations running over the stabiliser of the return
    colour.
    """
    if local.degree != shape.degree:
        raise ValueError("local group degree does not match the shape")
    if n < 1:
        raise ValueError("need depth at least 1")
    points = sphere_list(shape, n)
    index = {a: i for i, a in enumerate(points)}

    def as_perm(portrait: Portrait) -> Perm:
        return Perm(tuple(index[portrait.apply(a)] for a in points))

    gens = []
    for g in local.pruned_gens:
        gens.append(as_perm(Portrait.single(shape, ROOT, g)))
    for k in range(1, n):
        for v in shape.sphere(k):
            pool = (
                local if shape.kind == "rooted"
                else _return_stabiliser(local, v[-1])
            )
            for g in pool.pruned_gens:
                gens.append(as_perm(Portrait.single(shape, v, g)))
    return FiniteGroup(len(points), gens)


def level_order(shape: TreeShape, local: FiniteGroup, n: int) -> int:
    """Order of the depth-n truncation, by counting free choices per site."""
    if n < 1:
        raise ValueError("need depth at least 1")
    if shape.kind == "rooted":
        return local.order ** shape.ball_size(n - 1)
    total = local.order
    q = shape.degree
    for k in range(1, n):
        per_colour = 1
        for c in shape.colours():
            per_colour *= _return_stabiliser(local, c).order
        # every colour occurs as a return colour of (q-1)**(k-1) vertices
        total *= per_colour ** ((q - 1) ** (k - 1))
    return total


def local_prime_content(
    shape: TreeShape, local: FiniteGroup, depth: int
) -> dict:
    """Primes whose share of the truncation orders keeps growing.

    Reads the exponent of each prime off the level orders up to the given
    depth and keeps the primes whose exponent strictly increases at every
    step.  This is a finite-depth verdict: the window is reported so the
    caller knows how far the growth was actually checked.
    """
    if depth < 2:
        raise ValueError("need at least two levels to compare")
    orders = [level_order(shape, local, n) for n in range(1, depth + 1)]
    primes = sorted(prime_factors(orders[-1]))
    exponents = {
        p: [prime_factors(o).get(p, 0) for o in orders] for p in primes
    }
    growing = {
        p
        for p, exps in exponents.items()
        if all(b > a for a, b in zip(exps, exps[1:]))
    }
    return {
        "depth": depth,
        "orders": orders,
        "exponents": exponents,
        "growing_primes": growing,
    }


def congruence_kernel(
    group: FiniteGroup, shape: TreeShape, n: int, k: int
) -> FiniteGroup:
    """Elements of a depth-n level group acting trivially down to depth k."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    points = sphere_list(shape, n)
    members = []
    for e in group.element_list:
        if all(
            points[e(i)][:k] == points[i][:k] for i in range(len(points))
        ):
            members.append(e)
    return group.subgroup_from_elements(members)


# -- orbit structure -----------------------------------------------------------


def sphere_orbit_classes(
    shape: TreeShape, local: FiniteGroup, depth: int
) -> dict:
    """Orbits of the truncated base stabiliser on each sphere, structurally.

    A class is named by its least representative.  Children of a class
    split along the orbits of the local group at the representative: the
    full local group under the base vertex, the stabiliser of the return
    colour below.  Per vertex that is at most degree - 1 classes away
    from the base vertex; at the base vertex itself a small local group
    can leave all degree directions separate.
    """
    if local.degree != shape.degree:
        raise ValueError("local group degree does not match the shape")
    classes: dict[int, list[Address]] = {0: [ROOT]}
    for k in range(depth):
        nxt = []
        for rep in classes[k]:
            if shape.kind == "regular" and rep != ROOT:
                pool = _return_stabiliser(local, rep[-1])
            else:
                pool = local
            letters = set(shape.child_letters(rep))
            for orb in pool.orbits():
                shared = sorted(orb & letters)
                if shared:
                    nxt.append(rep + (shared[0],))
        classes[k + 1] = sorted(nxt)
    return {
        "classes": classes,
        "counts": {k: len(v) for k, v in classes.items()},
    }


def realized_sphere_orbits(
    shape: TreeShape, local: FiniteGroup, n: int
) -> int:
    return len(level_group(shape, local, n).orbits())


# -- transitivity witnesses ------------------------------------------------------


def transitive_generators(shape: TreeShape) -> dict[str, IsometrySpec]:
    """One colour-word generator per neighbour of the base vertex.

    Left multiplications have trivial local actions, so they witness
    vertex transitivity inside the universal group of any local group.
    """
    if shape.kind != "regular":
        raise ValueError("vertex transitivity needs a regular shape")
    return {
        f"m{c}": colour_word_isometry(shape, (c,))
        for c in shape.colours()
    }


def covering_words(
    shape: TreeShape, gens: dict[str, IsometrySpec], radius: int, bound: int
) -> dict[Address, tuple[str, ...]]:
    """Generator words carrying the base vertex onto the radius ball.

    Breadth-first over exact applications; raises NotTransitiveAtRadius
    when some vertex stays unreached by words within the length bound.
    """
    reached: dict[Address, tuple[str, ...]] = {ROOT: ()}
    frontier = [ROOT]
    for _ in range(bound):
        fresh = []
        for v in frontier:
            for name, g in gens.items():
                w = g.apply(v)
                if w not in reached:
                    reached[w] = (name,) + reached[v]
                    fresh.append(w)
        frontier = fresh
        if not frontier:
            break
    missing = [v for v in shape.ball(radius) if v not in reached]
    if missing:
        raise NotTransitiveAtRadius(radius, bound, missing)
    return {
        v: reached[v] for v in shape.ball(radius)
    }


# -- graph exports ---------------------------------------------------------------


def schreier_dot(group: FiniteGroup, point: int) -> str:
    """Schreier graph of the orbit of a point, one edge per generator."""
    orbit = sorted(group.orbit(point))
    lines = ["digraph schreier {"]
    for x in orbit:
        shapebit = ", shape=doublecircle" if x == point else ""
        lines.append(f'  n{x} [label="{x}"{shapebit}];')
    for i, g in enumerate(group.pruned_gens):
        for x in orbit:
            lines.append(f'  n{x} -> n{g(x)} [label="g{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cayley_abels_dot(
    shape: TreeShape, local: FiniteGroup, radius: int
) -> str:
    """Quotient of the radius ball by the orbit classes of the stabiliser.

    Nodes are orbit class representatives, edges go from each class to
    the classes of its children.
    """
    info = sphere_orbit_classes(shape, local, radius)
    classes = info["classes"]
    lines = ["graph cayley_abels {"]
    names: dict[Address, str] = {}
    for k in sorted(classes):
        for rep in classes[k]:
            names[rep] = f"c{len(names)}"
            label = format_address(shape, rep) if rep != ROOT else "base"
            lines.append(f'  {names[rep]} [label="{label}"];')
    for k in sorted(classes):
        if k == 0:
            continue
        for rep in classes[k]:
            parent = rep[:-1]
            # parent reps are class representatives by construction
            lines.append(f"  {names[parent]} -- {names[rep]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
