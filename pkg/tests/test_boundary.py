"""Rigid stabilisers, contraction onsets and window certificates."""
from __future__ import annotations

import random

import pytest

from tdlclab.boolalg import CylinderClopen, regular
from tdlclab.boundary import (
    contraction_certificate,
    goodshrink_construct,
    half_tree_fixator,
    inside,
    nub_window,
    rist_generators,
    support_in,
    tits_core_generators,
)
from tdlclab.certificates import canonical_json
from tdlclab.errors import DisjointnessFailure, NotSkewering
from tdlclab.permgrp import Perm, cyclic_group, symmetric_group
from tdlclab.tree import IsometrySpec, hyperbolic_isometry

from util import random_clopen

T3 = regular(3)
S3 = symmetric_group(3)
C3 = cyclic_group(3)
T0 = hyperbolic_isometry(T3, (0,))
HALF0 = CylinderClopen.cylinder(T3, (0,))
BETA = CylinderClopen.cylinder(T3, (0, 2))

SWAP12 = Perm((0, 2, 1))
SWAP02 = Perm((2, 1, 0))
SWAP01 = Perm((1, 0, 2))


def sites_of(gens):
    return {g.sites[0] for g in gens}


def test_rist_generator_counts():
    # 1 + 2 + 4 in-region vertices, one stabiliser generator each
    assert len(rist_generators(S3, HALF0, 3)) == 7
    assert len(rist_generators(S3, BETA, 3)) == 3
    zero = CylinderClopen.from_addresses(T3, [])
    assert rist_generators(S3, zero, 4) == []


def test_rist_generators_fix_complement_pointwise():
    gens = rist_generators(S3, HALF0, 3)
    ray = [(1,), (1, 0), (1, 0, 1), (1, 0, 1, 0)]
    for g in gens:
        assert support_in(g.realize(5), HALF0)
        for v in ray:
            assert g.apply(v) == v


def test_rist_of_disjoint_regions_commutes_elementwise():
    # the depth-6 witness lists contain every shallower list, so one
    # pass at the deepest level covers all depths up to six; tables are
    # realized once and composed, the witnesses all fix the base vertex
    other = HALF0.complement()
    gens_a = rist_generators(S3, HALF0, 6)
    gens_b = rist_generators(S3, other, 6)
    assert sites_of(rist_generators(S3, HALF0, 4)) <= sites_of(gens_a)
    radius = 7
    ball = list(T3.ball(radius))
    tabs_a = [g.realize(radius).table for g in gens_a]
    tabs_b = [g.realize(radius).table for g in gens_b]
    for fu in tabs_a:
        for fv in tabs_b:
            assert all(fu[fv[x]] == fv[fu[x]] for x in ball)


def test_rist_of_meet_is_generatorwise_intersection():
    rng = random.Random(40901)
    for _ in range(30):
        a = random_clopen(rng, T3, 3)
        b = random_clopen(rng, T3, 3)
        both = a.meet(b)
        for depth in (2, 3, 4):
            want = sites_of(rist_generators(S3, a, depth)) & sites_of(
                rist_generators(S3, b, depth)
            )
            assert sites_of(rist_generators(S3, both, depth)) == want


def test_weakly_branch_every_proper_cylinder_has_witnesses():
    stack = [(c,) for c in T3.colours()]
    while stack:
        w = stack.pop()
        region = CylinderClopen.cylinder(T3, w)
        assert rist_generators(S3, region, len(w)) != []
        if len(w) < 4:
            stack.extend(w + (c,) for c in T3.child_letters(w))


def test_half_tree_fixator_verdicts():
    rep = half_tree_fixator(T3, S3, 0, 3)
    assert rep["verdict"] == "nontrivial"
    assert rep["generator_count"] == 7
    assert ((0,), SWAP12) in sites_of(rep["generators"])

    # regular (simply transitive) local action pins every decoration
    assert half_tree_fixator(T3, C3, 0, 3)["verdict"] == "trivial"
    assert half_tree_fixator(T3, S3, 0, 0)["verdict"] == "trivial"


def test_inside_is_prefix_containment():
    assert inside(HALF0, (0,))
    assert inside(HALF0, (0, 1, 0))
    assert not inside(HALF0, ())
    assert not inside(HALF0, (1, 0))


def test_contraction_onset_matches_axis_distance():
    u = IsometrySpec(T3, sites=(((0,), SWAP12),))
    for n in (1, 2, 3, 4):
        cert = contraction_certificate(T0, u, n)
        assert cert["verdict"] == "contracts"
        assert cert["k"] == n
        assert cert["onset_monotone"]


def test_contraction_backward_direction_is_symmetric():
    u = IsometrySpec(T3, sites=(((1,), SWAP02),))
    for n in (1, 2, 3):
        cert = contraction_certificate(T0, u, n, direction=-1)
        assert cert["verdict"] == "contracts"
        assert cert["k"] == n


def test_contraction_identity_contracts_at_zero():
    cert = contraction_certificate(T0, IsometrySpec(T3), 3)
    assert cert["k"] == 0
    assert cert["verdict"] == "contracts"


def test_contraction_elliptic_conjugator_refuted_within_bounds():
    rho = IsometrySpec(T3, sites=(((), SWAP01),))
    u = IsometrySpec(T3, sites=(((0,), SWAP12),))
    cert = contraction_certificate(rho, u, 3, k_max=8)
    assert cert["verdict"] == "no-contraction-within-bounds"
    assert cert["k"] is None


def test_contraction_certificate_replays_bit_exactly():
    u = IsometrySpec(T3, sites=(((0,), SWAP12),))
    first = contraction_certificate(T0, u, 3)
    again = contraction_certificate(T0, u, 3)
    assert canonical_json(first) == canonical_json(again)


def test_goodshrink_verified_on_attracting_half_tree():
    kappa, rep = goodshrink_construct(S3, T0, HALF0, 4)
    assert kappa == CylinderClopen.cylinder(T3, (0, 1))
    assert rep["verdict"] == "verified"
    assert all(rep["checks"].values())
    assert rep["n0"] == 1
    assert rep["beta"] == "{02}"
    measures = rep["chain_measures"]
    assert all(b < a for a, b in zip(measures, measures[1:]))
    assert rep["contraction_onsets"]
    assert rep["excluded_interior_atoms"] == []


def test_goodshrink_accepts_explicit_deeper_n0():
    kappa, rep = goodshrink_construct(S3, T0, HALF0, 3, n0=2)
    assert kappa == CylinderClopen.cylinder(T3, (0, 1, 0))
    assert rep["verdict"] == "verified"


def test_goodshrink_rejects_unmoved_or_escaping_alpha():
    with pytest.raises(NotSkewering):
        goodshrink_construct(S3, T0, CylinderClopen.cylinder(T3, (1,)), 3)
    rho = IsometrySpec(T3, sites=(((), SWAP01),))
    with pytest.raises(NotSkewering):
        goodshrink_construct(S3, rho, HALF0, 3)
    with pytest.raises(ValueError):
        goodshrink_construct(S3, T0, HALF0, 3, n0=0)
    with pytest.raises(ValueError):
        goodshrink_construct(S3, T0, HALF0, 3, n0=99)


def test_nub_window_m3_translates_and_checks():
    rep = nub_window(S3, T0, BETA, 3, 3, 6)
    assert rep["verdict"] == "verified"
    assert rep["factor_count"] == 7
    assert rep["factor_pair_checks"] == 21
    assert rep["witnesses_per_factor"] == 3
    assert rep["translates"] == {
        "-3": "{102}",
        "-2": "{12}",
        "-1": "{2}",
        "0": "{02}",
        "1": "{012}",
        "2": "{0102}",
        "3": "{01012}",
    }


def test_nub_window_m0_is_vacuous():
    rep = nub_window(S3, T0, BETA, 3, 0, 4)
    assert rep["factor_count"] == 1
    assert rep["factor_pair_checks"] == 0
    assert rep["verdict"] == "verified"


def test_nub_window_overlapping_translates_raise():
    with pytest.raises(DisjointnessFailure):
        nub_window(S3, T0, HALF0, 3, 2, 4)


def test_nub_window_needs_witnesses():
    with pytest.raises(ValueError):
        nub_window(C3, T0, BETA, 3, 1, 4)


def test_tits_core_generators_certified_both_ways():
    gens, rep = tits_core_generators(S3, T0, 3)
    assert rep["verdict"] == "verified"
    assert gens
    assert sites_of(gens) == sites_of(rist_generators(S3, BETA, 3))
    assert rep["alpha_forward"] == "{0}"
    assert rep["beta_forward"] == "{02}"
    assert rep["alpha_backward"] == "{1}"
    assert rep["beta_backward"] == "{12}"
    assert rep["cone_vertex"] == "02"
    assert rep["rotation_count"] >= 1
    assert rep["forward_onsets"] == rep["backward_onsets"]


def test_tits_core_rejects_elliptic_elements():
    rho = IsometrySpec(T3, sites=(((), SWAP01),))
    with pytest.raises(NotSkewering):
        tits_core_generators(S3, rho, 3)
