"""Rigid stabilisers and contraction behaviour at finite depth.

The rigid stabiliser of a clopen region is realized by its cheapest
witnesses: single-site decorations at vertices whose whole subtree lies
inside the region, with the decoration fixing the return colour so the
element extends by the identity outside.  Everything downstream is a
finite-depth verdict: conjugates, commutators and contraction onsets are
evaluated through exact recipe application, then checked on explicit
balls whose radius is recorded in the report.
"""
from __future__ import annotations

from .boolalg import ROOT, Address, CylinderClopen, TreeShape
from .errors import DisjointnessFailure, NotSkewering
from .permgrp import FiniteGroup
from .tree import (
    BallIsometry,
    IsometrySpec,
    SpecWord,
    in_universal_group,
    spec_image_clopen,
)


def inside(region: CylinderClopen, v: Address) -> bool:
    """Whole subtree below v contained in the region."""
    cover = region.cover
    return any(v[:k] in cover for k in range(len(v) + 1))


def region_vertices(region: CylinderClopen, max_depth: int) -> list[Address]:
    shape = region.shape
    return [v for v in shape.ball(max_depth) if inside(region, v)]


def rist_generators(
    local: FiniteGroup, region: CylinderClopen, max_depth: int
) -> list[IsometrySpec]:
    """Single-site witnesses for the rigid stabiliser, one per generator
    of the return-colour stabiliser at each vertex inside the region."""
    shape = region.shape
    if local.degree != shape.degree:
        raise ValueError("local group degree does not match the shape")
    out = []
    for v in region_vertices(region, max_depth):
        if v == ROOT or shape.kind == "rooted":
            pool = local.pruned_gens
        else:
            pool = local.point_stabilizer(v[-1]).pruned_gens
        for perm in pool:
            out.append(IsometrySpec(shape, sites=((v, perm),)))
    return out


def support_in(iso: BallIsometry, region: CylinderClopen) -> bool:
    """The table fixes every vertex that is not strictly inside the region.

    Fixing those vertices pins every ray to an end outside the region,
    so at the realized precision this is exactly "trivial off the
    region".
    """
    return all(
        iso.table[v] == v
        for v in iso.shape.ball(iso.precision)
        if not inside(region, v)
    )


def half_tree_fixator(
    shape: TreeShape, local: FiniteGroup, colour: int, max_depth: int
) -> dict:
    """Realized pointwise stabiliser of one half-tree.

    An empty generator list is a finite-depth triviality verdict: at
    every vertex of the region the local group pins the return colour's
    stabiliser, so no single-site witness exists down to max_depth.
    """
    region = CylinderClopen.cylinder(shape, (colour,))
    gens = rist_generators(local, region, max_depth)
    return {
        "region": str(region),
        "depth": max_depth,
        "generators": gens,
        "generator_count": len(gens),
        "verdict": "nontrivial" if gens else "trivial",
    }


def contraction_certificate(
    g: IsometrySpec,
    u: IsometrySpec,
    ball_radius: int,
    k_max: int | None = None,
    direction: int = 1,
) -> dict:
    """Smallest k with g^k u g^-k trivial on the given ball.

    Trivial on the radius-n ball means the conjugate fixes every vertex
    to depth n + 1, so its local actions down to depth n are all
    trivial.  After the onset the next three powers are rechecked; the
    conjugated support only moves deeper, so a non-monotone onset would
    expose a bookkeeping bug.  When no power within k_max works the
    verdict reports that the search bound was the obstruction.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    if k_max is None:
        k_max = ball_radius + 4
    check_radius = ball_radius + 1
    onset = None
    for k in range(k_max + 1):
        w = SpecWord.conjugate(g, u, direction * k)
        if w.is_identity_on(check_radius):
            onset = k
            break
    if onset is None:
        return {
            "k": None,
            "k_max": k_max,
            "ball": ball_radius,
            "checked_radius": check_radius,
            "direction": direction,
            "onset_monotone": False,
            "verdict": "no-contraction-within-bounds",
        }
    tail = [
        SpecWord.conjugate(g, u, direction * j).is_identity_on(check_radius)
        for j in range(onset, min(onset + 4, k_max + 1))
    ]
    return {
        "k": onset,
        "k_max": k_max,
        "ball": ball_radius,
        "checked_radius": check_radius,
        "direction": direction,
        "onset_monotone": all(tail),
        "verdict": "contracts" if all(tail) else "no-contraction-within-bounds",
    }


def _shrinking_chain(
    g: IsometrySpec, alpha: CylinderClopen, window: int
) -> list[CylinderClopen]:
    """Iterated images g^i alpha, verified strictly decreasing.

    Each step is compared with the previous set: strict shrink
    continues, equality means the image has stalled on a periodic clopen
    and incomparability means alpha was not moved inside itself; both
    refute the skewering shape of the orbit.
    """
    chain = [alpha]
    for i in range(1, window + 1):
        nxt = spec_image_clopen(g, chain[-1])
        prev = chain[-1]
        if nxt.lt(prev):
            chain.append(nxt)
        elif nxt == prev:
            raise NotSkewering(f"image chain stalls at step {i}")
        else:
            raise NotSkewering(f"image chain leaves the region at step {i}")
    return chain


def goodshrink_construct(
    local: FiniteGroup,
    g: IsometrySpec,
    alpha: CylinderClopen,
    depth: int,
    n0: int | None = None,
    u_level: int | None = None,
) -> tuple[CylinderClopen, dict]:
    """Contraction-friendly shrinking data for a skewered clopen.

    kappa stands in for a closed set: the clopen g^n0.alpha at the
    working depth, with the interior of the full forward intersection
    (empty at any finite stage, recorded as the excluded-interior
    marker) removed only notionally.  Four checks run on generators
    realized at u_level: conjugation by g maps the rigid stabiliser of
    kappa into itself, the rigid stabiliser of g^n0.beta sits inside
    kappa, the kappa and beta factors commute elementwise, and every
    kappa witness carries a contraction certificate.  n0 defaults to a
    bounded search along the image chain; the chain itself is verified
    strictly decreasing over a 2*depth window, which rules out stalls
    and escapes.
    """
    shape = alpha.shape
    if u_level is None:
        u_level = depth
    galpha = spec_image_clopen(g, alpha)
    if not galpha.lt(alpha):
        raise NotSkewering(
            f"{g!r} does not move {alpha} strictly inside itself"
        )
    beta = alpha.minus(galpha)
    chain = _shrinking_chain(g, alpha, 2 * depth)
    if n0 is None:
        n0 = 1
    if not 1 <= n0 <= 2 * depth:
        raise ValueError("n0 outside the verified window")
    kappa = chain[n0]

    kappa_gens = rist_generators(local, kappa, u_level)
    check_radius = depth + 2

    conj_into_kappa = []
    conj_tables = []
    for u in kappa_gens:
        tab = SpecWord.conjugate(g, u, 1).realize(check_radius)
        conj_into_kappa.append(
            support_in(tab, kappa) and in_universal_group(tab, local)
        )
        conj_tables.append(tab.table)

    gn0_beta = beta
    for _ in range(n0):
        gn0_beta = spec_image_clopen(g, gn0_beta)
    product_inside = gn0_beta.leq(kappa)
    beta_factor_gens = rist_generators(local, gn0_beta, u_level)
    beta_tables = []
    product_gens_inside = []
    for v in beta_factor_gens:
        tab = v.realize(check_radius)
        product_gens_inside.append(support_in(tab, kappa))
        beta_tables.append(tab.table)

    # the product factors are the conjugated kappa witnesses and the
    # g^n0.beta witnesses; when every witness fixes the base vertex the
    # tables permute each sphere and compose inside the checked ball,
    # and a witness moving the base vertex already refutes the product
    domain = list(shape.ball(check_radius))
    commute = all(t[ROOT] == ROOT for t in conj_tables + beta_tables)
    if commute:
        for fu in conj_tables:
            for fv in beta_tables:
                for x in domain:
                    if fu[fv[x]] != fv[fu[x]]:
                        commute = False

    contractions = [
        contraction_certificate(g, u, depth) for u in kappa_gens
    ]

    checks = {
        "image_strictly_inside": True,
        "chain_strictly_shrinking": len(chain) == 2 * depth + 1,
        "conjugation_preserves_kappa": all(conj_into_kappa),
        "product_inclusion": product_inside and all(product_gens_inside),
        "factors_commute": commute,
        "kappa_witnesses_contract": all(
            c["verdict"] == "contracts" for c in contractions
        ),
    }
    report = {
        "alpha": str(alpha),
        "beta": str(beta),
        "kappa": str(kappa),
        "n0": n0,
        "depth": depth,
        "u_level": u_level,
        "check_radius": check_radius,
        "chain_measures": [c.measure() for c in chain],
        "kappa_generators": len(kappa_gens),
        "beta_factor_generators": len(beta_factor_gens),
        "contraction_onsets": [c["k"] for c in contractions],
        "excluded_interior_atoms": [],
        "attracting_core": str(chain[-1]),
        "checks": checks,
        "verdict": "verified" if all(checks.values()) else "refuted_at_depth",
    }
    return kappa, report


def _realized_tables(
    words: list[SpecWord], radius: int
) -> list[dict[Address, Address]]:
    """Tables for displacement-zero words; levels are preserved, so the
    tables compose within the ball without leaving it."""
    out = []
    for w in words:
        tab = w.realize(radius)
        if tab.displacement != 0:
            raise ValueError("witness does not fix the base vertex")
        out.append(tab.table)
    return out


def nub_window(
    local: FiniteGroup,
    g: IsometrySpec,
    beta: CylinderClopen,
    v_level: int,
    m: int,
    depth: int,
) -> dict:
    """Window of conjugated rigid stabilisers along the translation.

    L_i is the conjugate of rist(beta) by g^i for i in [-m, m], with
    witnesses realized at v_level.  The window is coherent when the
    translates of beta are pairwise disjoint, witnesses from different
    factors commute on the whole depth ball, and conjugating the i-th
    family by g reproduces the (i+1)-st within the realized ball.  All
    factor checks run on precomputed vertex tables; the witnesses fix
    the base vertex, so their tables permute each sphere and compose
    without precision loss.
    """
    shape = beta.shape
    idx = list(range(-m, m + 1))
    translates = {
        i: spec_image_clopen(SpecWord(shape, ((g, i),)), beta) for i in idx
    }
    for i in idx:
        for j in idx:
            if i < j and translates[i].meets(translates[j]):
                raise DisjointnessFailure(
                    f"translates at {i} and {j} overlap: "
                    f"{translates[i]} vs {translates[j]}"
                )

    beta_gens = rist_generators(local, beta, v_level)
    if not beta_gens:
        raise ValueError("rigid stabiliser of beta has no realized witnesses")
    families = {
        i: [SpecWord.conjugate(g, u, i) for u in beta_gens] for i in idx
    }
    tables = {
        i: _realized_tables(families[i], depth + 1) for i in idx
    }

    supports_ok = True
    for i in idx:
        for tab, w in zip(tables[i], families[i]):
            ball_iso = BallIsometry(shape, depth + 1, tab, check=False)
            if not support_in(ball_iso, translates[i]):
                supports_ok = False

    domain = list(shape.ball(depth))
    pair_checks = 0
    commute_ok = True
    for ai in range(len(idx)):
        for aj in range(ai + 1, len(idx)):
            i, j = idx[ai], idx[aj]
            pair_checks += 1
            for fu in tables[i]:
                for fv in tables[j]:
                    for x in domain:
                        if fu[fv[x]] != fv[fu[x]]:
                            commute_ok = False

    g_word = SpecWord(shape, ((g, 1),))
    g_fwd = {v: g_word.apply(v) for v in shape.ball(depth + 1)}
    g_inv = {v: g_word.inverse().apply(v) for v in domain}
    shift_ok = True
    for pos, i in enumerate(idx[:-1]):
        nxt = tables[idx[pos + 1]]
        for fu, ft in zip(tables[i], nxt):
            for x in domain:
                if g_fwd[fu[g_inv[x]]] != ft[x]:
                    shift_ok = False

    checks = {
        "translates_disjoint": True,
        "supports_inside_translates": supports_ok,
        "cross_factor_commutators_trivial": commute_ok,
        "conjugation_shifts_families": shift_ok,
    }
    return {
        "m": m,
        "v_level": v_level,
        "depth": depth,
        "factor_count": len(idx),
        "factor_pair_checks": pair_checks,
        "witnesses_per_factor": len(beta_gens),
        "translates": {str(i): str(translates[i]) for i in idx},
        "checks": checks,
        "verdict": "verified" if all(checks.values()) else "refuted_at_depth",
    }


def _attracting_half_tree(
    g: IsometrySpec, direction: int
) -> CylinderClopen:
    shape = g.shape
    word = SpecWord(shape, ((g, direction),))
    for c in shape.colours():
        a = CylinderClopen.cylinder(shape, (c,))
        if spec_image_clopen(word, a).lt(a):
            return a
    raise NotSkewering(
        "no depth-1 cylinder is moved strictly inside itself"
    )


def _cone_vertex(region: CylinderClopen) -> Address:
    """Longest common prefix of the cover: the vertex whose subtree is
    the smallest cylinder containing the region."""
    addrs = sorted(region.cover)
    if not addrs:
        raise ValueError("empty region has no cone vertex")
    first, last = addrs[0], addrs[-1]
    k = 0
    while k < min(len(first), len(last)) and first[k] == last[k]:
        k += 1
    return first[:k]


def tits_core_generators(
    local: FiniteGroup,
    g: IsometrySpec,
    depth: int,
    alpha: CylinderClopen | None = None,
) -> tuple[list[IsometrySpec], dict]:
    """Rigid-stabiliser witnesses certified on both sides of a translation.

    The returned generators realize rist(beta) on the attracting side,
    each with a contraction certificate under g; the report carries the
    mirror family on the repelling side certified under the inverse,
    plus a normalisation check: rotations fixing beta's cone vertex
    conjugate witnesses to elements supported back in beta and allowed
    by the local group.
    """
    shape = g.shape
    if alpha is None:
        alpha = _attracting_half_tree(g, 1)
    galpha = spec_image_clopen(g, alpha)
    if not galpha.lt(alpha):
        raise NotSkewering(f"{alpha} is not moved inside itself")
    beta_f = alpha.minus(galpha)
    gens_f = rist_generators(local, beta_f, depth)
    certs_f = [contraction_certificate(g, u, depth) for u in gens_f]

    alpha_b = _attracting_half_tree(g, -1)
    back = SpecWord(shape, ((g, -1),))
    beta_b = alpha_b.minus(spec_image_clopen(back, alpha_b))
    gens_b = rist_generators(local, beta_b, depth)
    certs_b = [
        contraction_certificate(g, u, depth, direction=-1) for u in gens_b
    ]

    cone = _cone_vertex(beta_f)
    rotations = []
    if cone == ROOT or shape.kind == "rooted":
        pool = local.pruned_gens
    else:
        pool = local.point_stabilizer(cone[-1]).pruned_gens
    for perm in pool:
        rotations.append(IsometrySpec(shape, sites=((cone, perm),)))
    for perm in local.pruned_gens:
        if all(perm(c) == c for c in cone):
            rotations.append(IsometrySpec(shape, sites=((ROOT, perm),)))

    norm_ok = True
    for rho in rotations:
        for u in gens_f:
            tab = SpecWord(
                shape, ((rho, 1), (u, 1), (rho, -1))
            ).realize(depth + 2)
            if not (
                support_in(tab, beta_f) and in_universal_group(tab, local)
            ):
                norm_ok = False

    checks = {
        "forward_witnesses_contract": all(
            c["verdict"] == "contracts" for c in certs_f
        ),
        "backward_witnesses_contract": all(
            c["verdict"] == "contracts" for c in certs_b
        ),
        "cone_rotations_normalise": norm_ok,
        "witness_families_nonempty": bool(gens_f) and bool(gens_b),
    }
    report = {
        "alpha_forward": str(alpha),
        "beta_forward": str(beta_f),
        "alpha_backward": str(alpha_b),
        "beta_backward": str(beta_b),
        "cone_vertex": "".join(str(c) for c in cone) or "v0",
        "rotation_count": len(rotations),
        "depth": depth,
        "forward_onsets": [c["k"] for c in certs_f],
        "backward_onsets": [c["k"] for c in certs_b],
        "checks": checks,
        "verdict": "verified" if all(checks.values()) else "refuted_at_depth",
    }
    return gens_f, report
