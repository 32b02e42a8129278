"""Finite permutation groups by exhaustive element closure.

Everything here is desk scale by design: groups are materialised as full
element sets behind a hard cap (default 2**20), normal subgroups are
generated as joins of conjugacy-class closures, and the structural
invariants (cores, residuals, the intersection of maximal normal
subgroups, composition factors) are read off the lattice.  No
Schreier-Sims machinery; determinism everywhere, with ties broken by the
lexicographic order on permutation image tuples.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, total_ordering

from .errors import ClosureCapExceeded, DecompositionNotFound, NotTransitive

DEFAULT_CAP = 2**20


@total_ordering
class Perm:
    """Permutation of {0..degree-1}; (p * q)(x) = p(q(x))."""

    __slots__ = ("images",)

    def __init__(self, images: tuple[int, ...] | list[int]) -> None:
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images!r}")
        object.__setattr__(self, "images", images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        mine = self.images
        return Perm(tuple(mine[y] for y in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for x, y in enumerate(self.images):
            inv[y] = x
        return Perm(tuple(inv))

    def __pow__(self, n: int) -> "Perm":
        if n < 0:
            return self.inverse() ** (-n)
        out = Perm.identity(self.degree)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate_by(self, g: "Perm") -> "Perm":
        return g * self * g.inverse()

    def is_identity(self) -> bool:
        return all(i == x for x, i in enumerate(self.images))

    def order(self) -> int:
        n, p = 1, self
        while not p.is_identity():
            p = p * self
            n += 1
        return n

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                seen.add(start)
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycs)

    def __repr__(self) -> str:
        return f"Perm({self.images!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other: "Perm") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    @staticmethod
    def identity(degree: int) -> "Perm":
        return Perm(tuple(range(degree)))

    @staticmethod
    def from_cycles(degree: int, *cycles: tuple[int, ...]) -> "Perm":
        images = list(range(degree))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                if not (0 <= x < degree):
                    raise ValueError(f"point {x} out of range for degree {degree}")
                images[x] = cyc[(i + 1) % len(cyc)]
        # rebuild to catch overlapping cycles producing a non-bijection
        return Perm(tuple(images))


def parse_perm(text: str, degree: int) -> Perm:
    """Parse cycle notation like '(0 1 2)(3 4)'; '()' is the identity."""
    text = text.strip()
    if text in ("()", "", "e", "id"):
        return Perm.identity(degree)
    if not text.startswith("("):
        raise ValueError(f"cycle notation must start with '(': {text!r}")
    cycles = []
    depth_open = False
    current: list[int] = []
    token = ""

    def flush_token() -> None:
        nonlocal token
        if token:
            current.append(int(token))
            token = ""

    for ch in text:
        if ch == "(":
            if depth_open:
                raise ValueError(f"nested '(' in {text!r}")
            depth_open = True
            current = []
        elif ch == ")":
            if not depth_open:
                raise ValueError(f"unbalanced ')' in {text!r}")
            flush_token()
            if len(current) < 2:
                raise ValueError(f"cycle needs at least two points: {text!r}")
            if len(set(current)) != len(current):
                raise ValueError(f"repeated point inside a cycle: {text!r}")
            cycles.append(tuple(current))
            depth_open = False
        elif ch.isdigit():
            token += ch
        elif ch in " ,":
            flush_token()
        else:
            raise ValueError(f"unexpected character {ch!r} in cycle notation")
    if depth_open:
        raise ValueError(f"unbalanced '(' in {text!r}")
    seen: set[int] = set()
    for cyc in cycles:
        if seen & set(cyc):
            raise ValueError(f"cycles overlap in {text!r}")
        seen |= set(cyc)
    return Perm.from_cycles(degree, *cycles)


class FiniteGroup:
    """Permutation group given by generators; elements closed lazily."""

    def __init__(
        self,
        degree: int,
        generators: list[Perm] | tuple[Perm, ...],
        cap: int = DEFAULT_CAP,
    ) -> None:
        for g in generators:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
        self.degree = degree
        self.gens = tuple(g for g in generators if not g.is_identity())
        self.cap = cap

    # -- closure -------------------------------------------------------------

    @cached_property
    def element_set(self) -> frozenset[Perm]:
        # Incremental closure with generator pruning: a generator already in
        # the closure-so-far adds nothing, and dropping it keeps the BFS cost
        # at |G| * (a dozen kept generators) even when callers pass whole
        # element sets as generating data.
        identity = Perm.identity(self.degree)
        seen: dict[Perm, None] = {identity: None}
        kept: list[Perm] = []
        for g in self.gens:
            if g in seen:
                continue
            kept.append(g)
            seen[g] = None
            frontier = list(seen)
            while frontier:
                fresh = []
                for x in frontier:
                    for h in kept:
                        y = x * h
                        if y not in seen:
                            seen[y] = None
                            fresh.append(y)
                            if len(seen) > self.cap:
                                raise ClosureCapExceeded(self.cap)
                frontier = fresh
        self.__dict__["pruned_gens"] = tuple(kept)
        return frozenset(seen)

    @cached_property
    def pruned_gens(self) -> tuple[Perm, ...]:
        """Non-redundant generating subset found while closing."""
        self.element_set
        return self.__dict__["pruned_gens"]

    @cached_property
    def element_list(self) -> tuple[Perm, ...]:
        return tuple(sorted(self.element_set))

    @property
    def order(self) -> int:
        return len(self.element_set)

    def __contains__(self, p: Perm) -> bool:
        return p in self.element_set

    def contains_group(self, other: "FiniteGroup") -> bool:
        return other.element_set <= self.element_set

    def same_group(self, other: "FiniteGroup") -> bool:
        return self.degree == other.degree and self.element_set == other.element_set

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def is_trivial(self) -> bool:
        return self.order == 1

    # -- actions -------------------------------------------------------------

    def orbit(self, point: int) -> frozenset[int]:
        seen = {point}
        frontier = [point]
        while frontier:
            fresh = []
            for x in frontier:
                for g in self.gens:
                    y = g(x)
                    if y not in seen:
                        seen.add(y)
                        fresh.append(y)
            frontier = fresh
        return frozenset(seen)

    def orbits(self) -> list[frozenset[int]]:
        left = set(range(self.degree))
        out = []
        while left:
            orb = self.orbit(min(left))
            out.append(orb)
            left -= orb
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def point_stabilizer(self, point: int) -> "FiniteGroup":
        elems = [g for g in self.element_list if g(point) == point]
        return FiniteGroup(self.degree, elems, cap=self.cap)

    # -- conjugacy and the normal lattice ---------------------------------------

    @cached_property
    def conjugacy_classes(self) -> tuple[frozenset[Perm], ...]:
        seen: set[Perm] = set()
        classes = []
        for x in self.element_list:
            if x in seen:
                continue
            orb = {x}
            frontier = [x]
            while frontier:
                fresh = []
                for y in frontier:
                    for g in self.gens:
                        z = y.conjugate_by(g)
                        if z not in orb:
                            orb.add(z)
                            fresh.append(z)
                frontier = fresh
            seen |= orb
            classes.append(frozenset(orb))
        return tuple(classes)

    def subgroup(self, gens: list[Perm] | tuple[Perm, ...]) -> "FiniteGroup":
        return FiniteGroup(self.degree, tuple(gens), cap=self.cap)

    def subgroup_from_elements(self, elems) -> "FiniteGroup":
        sub = FiniteGroup(self.degree, tuple(sorted(elems)), cap=self.cap)
        return sub

    @cached_property
    def normal_subgroups(self) -> tuple["FiniteGroup", ...]:
        """All normal subgroups, as joins of conjugacy-class closures."""
        class_closures = []
        seen_sets: set[frozenset[Perm]] = set()
        for cls in self.conjugacy_classes:
            sub = self.subgroup(tuple(sorted(cls)))
            if sub.element_set not in seen_sets:
                seen_sets.add(sub.element_set)
                class_closures.append(sub)
        trivial = self.subgroup(())
        lattice: dict[frozenset[Perm], FiniteGroup] = {
            trivial.element_set: trivial
        }
        frontier = [trivial]
        while frontier:
            fresh = []
            for known in frontier:
                for cc in class_closures:
                    if cc.element_set <= known.element_set:
                        continue
                    joined = self.subgroup(known.gens + cc.gens)
                    if joined.element_set not in lattice:
                        lattice[joined.element_set] = joined
                        fresh.append(joined)
            frontier = fresh
        return tuple(
            sorted(lattice.values(), key=lambda s: (s.order, s.element_list))
        )

    def is_normal(self, other: "FiniteGroup") -> bool:
        # conjugation by a fixed g is an automorphism, so stability of a
        # generating set of the subgroup under generators of self suffices
        if not self.contains_group(other):
            return False
        elems = other.element_set
        return all(
            x.conjugate_by(g) in elems
            for x in other.pruned_gens
            for g in self.pruned_gens
        )

    # -- derived structure ---------------------------------------------------------

    def normal_closure(self, seed: list[Perm] | tuple[Perm, ...]) -> "FiniteGroup":
        """Smallest normal subgroup containing the seed elements."""
        gens = [p for p in seed if not p.is_identity()]
        current = self.subgroup(tuple(gens))
        while True:
            extra = []
            for x in current.pruned_gens:
                for g in self.pruned_gens:
                    y = x.conjugate_by(g)
                    if y not in current.element_set:
                        extra.append(y)
            if not extra:
                return current
            gens.extend(extra)
            current = self.subgroup(tuple(gens))

    @cached_property
    def _derived(self) -> "FiniteGroup":
        comms = [
            a * b * a.inverse() * b.inverse()
            for a in self.pruned_gens
            for b in self.pruned_gens
        ]
        return self.normal_closure(comms)

    def derived_subgroup(self) -> "FiniteGroup":
        return self._derived

    @cached_property
    def _soluble(self) -> bool:
        g = self
        while g.order > 1:
            d = g.derived_subgroup()
            if d.order == g.order:
                return False
            g = d
        return True

    def is_soluble(self) -> bool:
        return self._soluble

    @cached_property
    def invariant_memo(self) -> dict:
        """Per-instance store for derived invariants keyed by name."""
        return {}

    def quotient(self, n: "FiniteGroup") -> "FiniteGroup":
        """G/N as the left-multiplication action on cosets of N."""
        if not self.is_normal(n):
            raise ValueError("quotient by a non-normal subgroup")
        reps: dict[Perm, int] = {}
        coset_of: dict[Perm, int] = {}
        order_n = n.order
        for x in self.element_list:
            if x in coset_of:
                continue
            idx = len(reps)
            members = [x * h for h in n.element_set]
            rep = min(members)
            reps[rep] = idx
            for m in members:
                coset_of[m] = idx
            if len(members) != order_n:
                raise AssertionError("coset size mismatch")
        rep_list = sorted(reps, key=lambda r: r.images)
        index_of = {coset_of[r]: i for i, r in enumerate(rep_list)}
        images = []
        for g in self.gens:
            images.append(
                Perm(
                    tuple(
                        index_of[coset_of[g * r]] for r in rep_list
                    )
                )
            )
        return FiniteGroup(len(rep_list), images, cap=self.cap)


# -- number-theoretic helpers ----------------------------------------------


def prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_pi_number(n: int, pi: frozenset[int] | set[int]) -> bool:
    return all(p in pi for p in prime_factors(n))


# -- lattice-driven invariants ----------------------------------------------


def pi_core(g: FiniteGroup, pi: set[int] | frozenset[int]) -> FiniteGroup:
    """Largest normal subgroup whose order uses only primes in pi."""
    pi = frozenset(pi)
    key = ("pi_core", pi)
    if key in g.invariant_memo:
        return g.invariant_memo[key]
    candidates = [n for n in g.normal_subgroups if is_pi_number(n.order, pi)]
    best = max(candidates, key=lambda n: (n.order, n.element_list))
    for n in candidates:
        if not best.contains_group(n):
            raise AssertionError("pi-subgroup lattice is not directed upward")
    g.invariant_memo[key] = best
    return best


def pi_residual(g: FiniteGroup, pi: set[int] | frozenset[int]) -> FiniteGroup:
    """Smallest normal subgroup with a pi-group quotient.

    Generated by all pi'-elements: their images in any pi-quotient are
    trivial, and the quotient by their span has pi order by Cauchy.
    This avoids materialising the lattice, which explodes on elementary
    abelian sections.
    """
    pi = frozenset(pi)
    key = ("pi_residual", pi)
    if key in g.invariant_memo:
        return g.invariant_memo[key]
    seeds = tuple(
        x
        for x in g.element_list
        if all(p not in pi for p in prime_factors(x.order()))
    )
    out = g.subgroup(seeds)
    g.invariant_memo[key] = out
    return out


def prosoluble_core(g: FiniteGroup) -> FiniteGroup:
    key = ("prosoluble_core",)
    if key in g.invariant_memo:
        return g.invariant_memo[key]
    candidates = [n for n in g.normal_subgroups if n.is_soluble()]
    best = max(candidates, key=lambda n: (n.order, n.element_list))
    for n in candidates:
        if not best.contains_group(n):
            raise AssertionError("soluble radical is not unique-maximal")
    g.invariant_memo[key] = best
    return best


def prosoluble_residual(g: FiniteGroup) -> FiniteGroup:
    """Smallest normal subgroup with a soluble quotient.

    This is the stable term of the derived series: quotients by later
    terms are soluble by construction, and any normal subgroup with a
    soluble quotient absorbs every term.  Computed by iteration, so no
    lattice is needed.
    """
    current = g
    while True:
        nxt = current.derived_subgroup()
        if nxt.order == current.order:
            return nxt
        current = nxt


def maximal_normal_subgroups(g: FiniteGroup) -> list[FiniteGroup]:
    proper = [n for n in g.normal_subgroups if n.order < g.order]
    out = []
    for n in proper:
        if not any(
            m.order > n.order and m.contains_group(n) for m in proper
        ):
            out.append(n)
    return out


def is_simple(g: FiniteGroup) -> bool:
    return g.order > 1 and len(g.normal_subgroups) == 2


_ALTERNATING_ORDERS = {60: 5, 360: 6, 2520: 7}
# Below order 20160 a finite simple group is determined by its order, so the
# same-order isomorphism check for labels degenerates to a table lookup.


def simple_label(g: FiniteGroup) -> str:
    if not is_simple(g):
        raise ValueError("label requested for a non-simple group")
    n = g.order
    fac = prime_factors(n)
    if len(fac) == 1 and sum(fac.values()) == 1:
        return f"C{n}"
    if n in _ALTERNATING_ORDERS:
        return f"A{_ALTERNATING_ORDERS[n]}"
    return f"simple[{n}]"


def composition_factors(g: FiniteGroup) -> list[str]:
    """Jordan-Holder factor labels, outermost factor first."""
    out: list[str] = []
    current = g
    while current.order > 1:
        maximals = maximal_normal_subgroups(current)
        n = max(maximals, key=lambda m: (m.order, m.element_list))
        out.append(simple_label(current.quotient(n)))
        current = current.subgroup_from_elements(n.element_set)
    return out


def melnikov_subgroup(g: FiniteGroup) -> FiniteGroup:
    """Intersection of all maximal normal subgroups.

    The quotient by it is verified to be a direct product of simple
    groups before returning.
    """
    if g.order == 1:
        return g
    maximals = maximal_normal_subgroups(g)
    meet = set(g.element_set)
    for m in maximals:
        meet &= m.element_set
    result = g.subgroup_from_elements(meet)
    quot = g.quotient(result)
    if not _is_semisimple(quot):
        raise AssertionError(
            "quotient by the maximal-normal intersection is not semisimple"
        )
    return result


def minimal_normal_subgroups(g: FiniteGroup) -> list[FiniteGroup]:
    nontrivial = [n for n in g.normal_subgroups if n.order > 1]
    out = []
    for n in nontrivial:
        if not any(
            m.order < n.order and n.contains_group(m) for m in nontrivial
        ):
            out.append(n)
    return out


def _internal_product_of_simples(g: FiniteGroup):
    """Greedy internal direct product of minimal normal subgroups, or None."""
    mins = minimal_normal_subgroups(g)
    picked = []
    current = g.subgroup(())
    for m in mins:
        if not is_simple(m):
            return None
        if current.element_set & m.element_set != {g.identity()}:
            continue
        joined = g.subgroup(tuple(current.gens) + tuple(m.gens))
        if joined.order != current.order * m.order:
            return None
        picked.append(m)
        current = joined
    if current.order != g.order:
        return None
    return picked


def _is_semisimple(g: FiniteGroup) -> bool:
    if g.order == 1:
        return True
    return _internal_product_of_simples(g) is not None


def char_simple_decompose(g: FiniteGroup) -> tuple[str, int]:
    """Exhibit a characteristically simple group as F^k; (label(F), k)."""
    if g.order == 1:
        raise DecompositionNotFound("the trivial group has no simple factor")
    factors = _internal_product_of_simples(g)
    if factors is None:
        raise DecompositionNotFound(
            "not an internal direct product of minimal normal subgroups"
        )
    labels = {simple_label(f) for f in factors}
    if len(labels) > 1:
        raise DecompositionNotFound(
            f"simple factors differ: {sorted(labels)}"
        )
    return labels.pop(), len(factors)


# -- block systems -----------------------------------------------------------


def _minimal_congruence(g: FiniteGroup, a: int, b: int) -> tuple[frozenset[int], ...]:
    parent = list(range(g.degree))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        for gen in g.gens:
            queue.append((gen(x), gen(y)))
    blocks: dict[int, set[int]] = {}
    for x in range(g.degree):
        blocks.setdefault(find(x), set()).add(x)
    return tuple(sorted(frozenset(v) for v in blocks.values()))


def _join_congruences(g, p1, p2) -> tuple[frozenset[int], ...]:
    parent = list(range(g.degree))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (p1, p2):
        for block in part:
            block = sorted(block)
            for y in block[1:]:
                rx, ry = find(block[0]), find(y)
                if rx != ry:
                    parent[max(rx, ry)] = min(rx, ry)
    blocks: dict[int, set[int]] = {}
    for x in range(g.degree):
        blocks.setdefault(find(x), set()).add(x)
    return tuple(sorted(frozenset(v) for v in blocks.values()))


def block_systems(g: FiniteGroup) -> list[tuple[frozenset[int], ...]]:
    """All nontrivial proper block systems of a transitive action."""
    if not g.is_transitive():
        raise NotTransitive("block systems need a transitive action")
    minimal = set()
    for b in range(1, g.degree):
        minimal.add(_minimal_congruence(g, 0, b))
    systems = set(minimal)
    frontier = list(minimal)
    while frontier:
        fresh = []
        for s in frontier:
            for m in minimal:
                joined = _join_congruences(g, s, m)
                if joined not in systems:
                    systems.add(joined)
                    fresh.append(joined)
        frontier = fresh
    out = [
        s
        for s in systems
        if 1 < len(s) < g.degree
    ]
    return sorted(out, key=lambda s: (len(s), s))


def is_primitive(g: FiniteGroup) -> bool:
    if not g.is_transitive():
        raise NotTransitive("primitivity needs a transitive action")
    return not block_systems(g)


def is_quasi_primitive(g: FiniteGroup) -> bool:
    """Every nontrivial normal subgroup acts transitively."""
    if not g.is_transitive():
        raise NotTransitive("quasi-primitivity needs a transitive action")
    for n in g.normal_subgroups:
        if n.order == 1:
            continue
        if len(n.orbit(0)) != g.degree:
            return False
    return True


# -- named checks from the structure theory ----------------------------------


def fitting_check(
    g: FiniteGroup, a: FiniteGroup, n: FiniteGroup, x: Perm
) -> dict:
    """If [A, xAx^-1] = 1 for some x in a normal N, then [A,A] <= N."""
    if not g.is_normal(n):
        raise ValueError("N must be normal in G")
    if x not in n:
        raise ValueError("x must lie in N")
    conj = [p.conjugate_by(x) for p in a.element_list]
    hypothesis = all(
        (p * q * p.inverse() * q.inverse()).is_identity()
        for p in a.element_list
        for q in conj
    )
    conclusion = n.contains_group(a.derived_subgroup())
    return {
        "hypothesis": hypothesis,
        "conclusion": conclusion,
        "holds": (not hypothesis) or conclusion,
    }


def is_subnormal_chain(chain: list[FiniteGroup]) -> bool:
    return all(
        chain[i].is_normal(chain[i + 1]) for i in range(len(chain) - 1)
    )


def wielandt_check(
    g: FiniteGroup, chain: list[FiniteGroup], pi: set[int] | frozenset[int]
) -> dict:
    """O_pi(G) normalises O^pi(S) for S subnormal via the given chain.

    Also checks the prosoluble pair O_inf(G) vs O^inf(S).
    """
    if not chain or not chain[0].same_group(g):
        raise ValueError("chain must start at G")
    if not is_subnormal_chain(chain):
        raise ValueError("chain is not subnormal")
    s = chain[-1]

    def normalises(outer: FiniteGroup, inner: FiniteGroup) -> bool:
        inner_set = inner.element_set
        return all(
            x.conjugate_by(a) in inner_set
            for a in outer.element_list
            for x in inner.gens
        )

    pi_ok = normalises(pi_core(g, pi), pi_residual(s, pi))
    sol_ok = normalises(prosoluble_core(g), prosoluble_residual(s))
    return {"pi": pi_ok, "prosoluble": sol_ok, "holds": pi_ok and sol_ok}


def core_refinement_check(
    g: FiniteGroup,
    u: FiniteGroup,
    v: FiniteGroup,
    pi: set[int] | frozenset[int],
) -> dict:
    """Containments O_pi(U) ∩ W <= O_pi(W) <= O_pi(V) for W = core_V(U ∩ V)."""
    inter = u.element_set & v.element_set
    w_elems = set(inter)
    changed = True
    while changed:
        changed = False
        for x in list(w_elems):
            for gen in v.gens:
                if x.conjugate_by(gen) not in w_elems:
                    w_elems.discard(x)
                    changed = True
                    break
    w = g.subgroup_from_elements(w_elems)
    o_u = pi_core(u, pi)
    o_w = pi_core(w, pi)
    o_v = pi_core(v, pi)
    first = (o_u.element_set & w.element_set) <= o_w.element_set
    second = o_v.contains_group(o_w)
    return {"first": first, "second": second, "holds": first and second}


# -- standard constructions ----------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(n, [Perm.from_cycles(n, tuple(range(n)))])


def symmetric_group(n: int) -> FiniteGroup:
    if n == 1:
        return FiniteGroup(1, [])
    gens = [Perm.from_cycles(n, (0, 1))]
    if n > 2:
        gens.append(Perm.from_cycles(n, tuple(range(n))))
    return FiniteGroup(n, gens)


def alternating_group(n: int) -> FiniteGroup:
    if n < 3:
        return FiniteGroup(n, [])
    gens = [Perm.from_cycles(n, (0, 1, 2))]
    if n > 3:
        if n % 2 == 1:
            gens.append(Perm.from_cycles(n, tuple(range(n))))
        else:
            gens.append(Perm.from_cycles(n, tuple(range(1, n))))
    return FiniteGroup(n, gens)


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon on n points (order 2n)."""
    rot = Perm.from_cycles(n, tuple(range(n)))
    refl = Perm(tuple((n - x) % n for x in range(n)))
    return FiniteGroup(n, [rot, refl])


def quaternion_group() -> FiniteGroup:
    """Q8 in its regular representation on 8 points."""
    # elements 1, -1, i, -i, j, -j, k, -k indexed 0..7
    mult = {}
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]

    def neg(a: int) -> int:
        return a ^ 1

    table = {
        ("i", "i"): "-1",
        ("j", "j"): "-1",
        ("k", "k"): "-1",
        ("i", "j"): "k",
        ("j", "k"): "i",
        ("k", "i"): "j",
        ("j", "i"): "-k",
        ("k", "j"): "-i",
        ("i", "k"): "-j",
    }

    def mul(a: int, b: int) -> int:
        sign = (a & 1) ^ (b & 1)
        base_a, base_b = names[a & ~1], names[b & ~1]
        if base_a == "1":
            out = base_b
        elif base_b == "1":
            out = base_a
        elif base_a == base_b:
            out = "-1"
        else:
            out = table[(base_a, base_b)]
        idx = names.index(out.lstrip("-"))
        if out.startswith("-"):
            sign ^= 1
        return idx ^ sign

    i_perm = Perm(tuple(mul(2, b) for b in range(8)))
    j_perm = Perm(tuple(mul(4, b) for b in range(8)))
    return FiniteGroup(8, [i_perm, j_perm])


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """A x B acting on the disjoint union of the two point sets."""
    d = a.degree + b.degree
    gens = []
    for g in a.gens:
        gens.append(Perm(tuple(g.images) + tuple(range(a.degree, d))))
    for g in b.gens:
        gens.append(
            Perm(tuple(range(a.degree)) + tuple(x + a.degree for x in g.images))
        )
    return FiniteGroup(d, gens)


def wreath_c2_tower(levels: int) -> FiniteGroup:
    """Iterated C2-wreath tower acting on 2**levels leaves."""
    n = 2**levels
    gens = []
    for depth in range(levels):
        width = 2 ** (levels - depth - 1)
        start = 0
        images = list(range(n))
        for x in range(width):
            images[start + x], images[start + width + x] = (
                start + width + x,
                start + x,
            )
        gens.append(Perm(tuple(images)))
    # swapping below other prefixes arises from conjugation; add one deep swap
    # per level anchored at the last block to generate the full tower
    for depth in range(1, levels):
        width = 2 ** (levels - depth - 1)
        start = n - 2 * width
        images = list(range(n))
        for x in range(width):
            images[start + x], images[start + width + x] = (
                start + width + x,
                start + x,
            )
        gens.append(Perm(tuple(images)))
    return FiniteGroup(n, gens)
