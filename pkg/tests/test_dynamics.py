"""Boundary dynamics: minimality, skewering, minorising data, pair
compression, free subsemigroups, orbit joins, invariant measures."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tdlclab.boolalg import CylinderClopen, regular
from tdlclab.certificates import canonical_json
from tdlclab.errors import SearchExhausted
from tdlclab.permgrp import Perm, symmetric_group
from tdlclab.tree import IsometrySpec, hyperbolic_isometry, spec_image_clopen
from tdlclab import dynamics as dy

T3 = regular(3)
S3 = symmetric_group(3)


def cyl(*addr):
    return CylinderClopen.cylinder(T3, tuple(addr))


# ---------------------------------------------------------------- contexts


def test_context_adds_inverses_and_detects_involutions():
    ctx = dy.translation_rotation_context(S3, depth=3, word_bound=6)
    assert "t0" in ctx.gen_names and "t0~" in ctx.gen_names
    # the root transposition and the site rotation square to the identity
    assert "rho0~" not in ctx.gen_names
    assert "s0~" not in ctx.gen_names
    assert ctx.inverse_name("t0") == "t0~"
    assert ctx.inverse_name("t0~") == "t0"
    assert ctx.inverse_name("rho0") == "rho0"
    assert ctx.word(("t0", "t0~")).is_identity_on(6)
    assert ctx.precision_budget == 3 + 6 * 1


def test_context_rejects_bad_parameters():
    gens = {"t0": hyperbolic_isometry(T3, (0,))}
    with pytest.raises(ValueError):
        dy.ActionContext(T3, S3, gens, depth=0)
    with pytest.raises(ValueError):
        dy.ActionContext(T3, S3, gens, depth=2, word_bound=0)
    with pytest.raises(ValueError):
        dy.ActionContext(T3, S3, {"bad~name": hyperbolic_isometry(T3, (0,))}, depth=2)


def test_word_image_agrees_with_composed_recipe():
    ctx = dy.translation_rotation_context(S3, depth=3, word_bound=6)
    rng = random.Random(7)
    for _ in range(20):
        names = tuple(rng.choice(ctx.gen_names) for _ in range(rng.randint(1, 4)))
        start = ctx.state_clopen(rng.choice(ctx.states()))
        assert spec_image_clopen(ctx.word(names), start) == ctx.word_image(names, start)


# -------------------------------------------------------------- minimality


def test_minimal_translation_rotation_depth3():
    ctx = dy.translation_rotation_context(S3, depth=3, word_bound=6)
    report = dy.check_minimal(ctx)
    assert report["verdict"] == "minimal-at-depth"
    assert report["counterexample"] is None
    assert report["state_count"] == 12
    assert len(report["witness_words"]) == 144
    assert report["max_word_length"] == 2
    assert all(len(w) <= 6 for w in report["witness_words"].values())


def test_minimal_monotone_in_depth():
    # minimality at a deeper truncation implies it at every shallower one
    verdicts = [
        dy.check_minimal(dy.translation_rotation_context(S3, depth=n, word_bound=6))["verdict"]
        for n in (1, 2, 3)
    ]
    assert verdicts == ["minimal-at-depth"] * 3


def test_not_minimal_for_end_stabilising_rotation():
    stab = S3.point_stabilizer(0)
    gens = {"s0": IsometrySpec(T3, sites=(((0,), stab.pruned_gens[0]),))}
    ctx = dy.ActionContext(T3, S3, gens, depth=1, word_bound=4)
    report = dy.check_minimal(ctx)
    assert report["verdict"] == "not-minimal-at-depth"
    assert report["counterexample"] == ["0", "1"]


def test_not_minimal_identity_only():
    ctx = dy.ActionContext(T3, S3, {"e": IsometrySpec(T3)}, depth=1, word_bound=2)
    report = dy.check_minimal(ctx)
    assert report["verdict"] == "not-minimal-at-depth"
    assert report["counterexample"] == ["0", "1"]


def test_two_copy_not_minimal_across_copies():
    two = dy.two_copy_product_context(S3, depth=2, word_bound=6)
    report = dy.check_minimal(two)
    assert report["verdict"] == "not-minimal-at-depth"
    a, b = report["counterexample"]
    assert a.split(":")[0] != b.split(":")[0]


# ---------------------------------------------------------------- skewering


def test_skewering_found_on_translations():
    ctx = dy.translation_rotation_context(S3, depth=3, word_bound=6)
    report = dy.skewering_search(ctx)
    assert report["verdict"] == "found"
    assert report["word"] == ["t0"]
    assert str(report["alpha"]) == "{0}"
    assert str(report["galpha"]) == "{01}"
    assert report["galpha"].lt(report["alpha"])
    assert report["galpha_measure"] < report["alpha_measure"]
    assert report["alpha_measure"] == Fraction(1, 3)
    assert report["galpha_measure"] == Fraction(1, 6)


def test_skewering_refuted_when_base_is_fixed():
    ctx = dy.rotation_context(S3, depth=2, word_bound=4)
    report = dy.skewering_search(ctx)
    assert report["verdict"] == "refuted_at_depth"
    assert "base vertex" in report["reason"]


def test_skewering_refuted_by_orbit_saturation():
    # the edge inversion moves the base vertex but generates a finite orbit
    ctx = dy.ActionContext(T3, S3, {"m0": IsometrySpec(T3, word=(0,))}, depth=2, word_bound=4)
    assert ctx.gen_names == ("m0",)
    report = dy.skewering_search(ctx)
    assert report["verdict"] == "refuted_at_depth"
    assert "orbit closed" in report["reason"]


# ----------------------------------------------------------- minorising data


def test_minorising_set_single_cylinder():
    ctx = dy.translation_rotation_context(S3, depth=2, word_bound=6)
    report = dy.minorising_set(ctx)
    assert report["set"] == ["01"]
    assert report["set_size"] == 1
    assert sorted(report["witnesses"]) == ["01", "02", "10", "12", "20", "21"]
    assert report["max_word_length"] <= 5
    # replay every witness: the image must sit strictly below its target
    start = cyl(0, 1)
    for target, data in report["witnesses"].items():
        image = ctx.word_image(tuple(data["word"]), start)
        assert image.lt(cyl(*[int(c) for c in target]))
    assert report["top_witness"]["word"] == []


def test_minorising_witnesses_project_down():
    ctx = dy.translation_rotation_context(S3, depth=3, word_bound=6)
    report = dy.minorising_set(ctx)
    start = cyl(*[int(c) for c in report["set"][0]])
    for target, data in report["witnesses"].items():
        image = ctx.word_image(tuple(data["word"]), start)
        shallower = cyl(*[int(c) for c in target[:2]])
        assert image.lt(shallower)


def test_minorising_set_two_copy_needs_both_copies():
    two = dy.two_copy_product_context(S3, depth=2, word_bound=6)
    report = dy.minorising_set(two)
    assert report["set_size"] == 2
    assert sorted(label.split(":")[0] for label in report["set"]) == ["0", "1"]


def test_minorising_degree_single_tree():
    ctx = dy.translation_rotation_context(S3, depth=2, word_bound=6)
    report = dy.minorising_degree(ctx)
    assert report["degree"] == 1
    assert len(report["reduced_set"]) == 1
    assert report["invariant_opens"] == [["01", "02", "10", "12", "20", "21"]]
    assert report["dense_orbit_check"] is True


def test_minorising_degree_two_copy():
    two = dy.two_copy_product_context(S3, depth=2, word_bound=6)
    report = dy.minorising_degree(two)
    assert report["degree"] == 2
    assert len(report["reduced_set"]) == 2
    sides = [set(label.split(":")[0] for label in open_) for open_ in report["invariant_opens"]]
    assert sides == [{"0"}, {"1"}]
    assert report["dense_orbit_check"] is None


# ------------------------------------------------------------- compression


def test_pair_compression_plain_power():
    ctx = dy.translation_rotation_context(S3, depth=2, word_bound=8)
    schedule = dy.pair_compression(ctx, (1, 2), (2, 1), cyl(0))
    assert schedule["word"] == ["t0", "t0"]
    assert schedule["strategy"] == "power"
    assert schedule["word_length"] == 2
    assert len(schedule["trace"]) == 2


def test_pair_compression_repelling_end_mixes_a_rotation():
    gens = {
        "t0": hyperbolic_isometry(T3, (0,)),
        "rho": IsometrySpec(T3, sites=(((), Perm((1, 2, 0))),)),
    }
    ctx = dy.ActionContext(T3, S3, gens, depth=2, word_bound=8)
    # (1,0) holds the repelling end of the only translation available
    schedule = dy.pair_compression(ctx, (1, 0), (0, 1), cyl(0, 2))
    assert schedule["word"] == ["rho", "t0~", "t0~", "rho~"]
    assert schedule["strategy"] == "bfs"
    final_xi, final_eta = schedule["trace"][-1]
    target = cyl(0, 2)
    assert ctx.word_image(tuple(schedule["word"]), ctx.state_clopen((1, 0))).leq(target)
    assert ctx.word_image(tuple(schedule["word"]), ctx.state_clopen((0, 1))).leq(target)
    assert final_xi != final_eta


def test_pair_compression_degenerate_pair():
    ctx = dy.translation_rotation_context(S3, depth=2, word_bound=8)
    schedule = dy.pair_compression(ctx, (1, 2), (1, 2), cyl(0))
    assert schedule["verdict"] == "verified"
    assert schedule["word_length"] <= 8


def test_pair_compression_rejects_zero_target():
    ctx = dy.translation_rotation_context(S3, depth=2, word_bound=8)
    with pytest.raises(ValueError):
        dy.pair_compression(ctx, (1, 2), (2, 1), CylinderClopen.from_addresses(T3, []))


def test_pair_compression_seeded_deep_pairs():
    ctx = dy.translation_rotation_context(S3, depth=6, word_bound=8)
    rng = random.Random(11)
    states = ctx.states()
    target = cyl(0, 1)
    for _ in range(10):
        xi, eta = rng.choice(states), rng.choice(states)
        schedule = dy.pair_compression(ctx, xi, eta, target)
        assert schedule["word_length"] <= 8
        for state in (xi, eta):
            assert ctx.word_image(tuple(schedule["word"]), ctx.state_clopen(state)).leq(target)


# ---------------------------------------------------------- free subsemigroup


def test_free_semigroup_certificate_shipped_example():
    ctx = dy.translation_rotation_context(S3, depth=3, word_bound=6)
    report = dy.free_semigroup_certificate(ctx, length_bound=8)
    assert report["verdict"] == "verified"
    assert report["g"] == ["t0"]
    assert report["h"] == ["s0", "t0", "s0"]
    assert str(report["alpha"]) == "{0}"
    assert str(report["g_alpha"]) == "{01}"
    assert str(report["h_alpha"]) == "{02}"
    assert report["image_count"] == 511
    assert report["expected_images"] == 511
    assert all(report["checks"].values())
    assert not report["g_alpha"].meets(report["h_alpha"])
    assert report["word_table"][""] == "{0}"
    assert report["word_table"]["g"] == "{01}"
    assert report["word_table"]["h"] == "{02}"


def test_free_semigroup_no_collisions_one_level_past_the_bound():
    ctx = dy.translation_rotation_context(S3, depth=3, word_bound=6)
    report = dy.free_semigroup_certificate(ctx, length_bound=9)
    assert report["image_count"] == 1023
    assert report["verdict"] == "verified"


def test_free_semigroup_length_one_is_trivial():
    ctx = dy.translation_rotation_context(S3, depth=3, word_bound=6)
    report = dy.free_semigroup_certificate(ctx, length_bound=1)
    assert report["image_count"] == 3
    assert report["verdict"] == "verified"


def test_free_semigroup_needs_a_translation():
    with pytest.raises(SearchExhausted):
        dy.free_semigroup_certificate(dy.rotation_context(S3, depth=2))


# ---------------------------------------------------------------- orbit join


def test_orbit_join_reaches_the_full_boundary():
    ctx = dy.translation_rotation_context(S3, depth=2, word_bound=6)
    report = dy.orbit_join(ctx, cyl(0, 1))
    assert report["is_top"]
    assert str(report["alpha_star"]) == "TOP"
    assert 1 <= report["witness_count"] <= 6
    # replay: the chosen translate words really join to the saturation
    acc = None
    for word in report["witness_words"]:
        image = ctx.word_image(tuple(word), cyl(0, 1))
        acc = image if acc is None else acc.join(image)
    assert acc == report["alpha_star"]


def test_orbit_join_top_needs_no_witnesses():
    ctx = dy.translation_rotation_context(S3, depth=2, word_bound=6)
    report = dy.orbit_join(ctx, ctx.top())
    assert report["witness_count"] == 0
    assert report["is_top"]


def test_orbit_join_rejects_zero():
    ctx = dy.translation_rotation_context(S3, depth=2, word_bound=6)
    with pytest.raises(ValueError):
        dy.orbit_join(ctx, ctx.zero())


def test_orbit_join_two_copy_stays_proper():
    two = dy.two_copy_product_context(S3, depth=2, word_bound=6)
    report = dy.orbit_join(two, two.state_clopen((1, (0, 1))))
    star = report["alpha_star"]
    assert not report["is_top"]
    assert star.lt(two.top())
    assert star.left.measure() == 0
    assert str(star.right) == "TOP"
    for name in two.gen_names:
        assert two.image(name, star).leq(star)


# ----------------------------------------------------------- invariant measure


def test_measure_uniform_for_rotations():
    report = dy.invariant_measure_search(dy.rotation_context(S3, depth=2))
    assert report["verdict"] == "feasible"
    assert report["uniform"] is True
    assert set(report["weights"].values()) == {Fraction(1, 6)}
    assert sum(report["weights"].values()) == 1


def test_measure_feasible_for_identity_only():
    ctx = dy.ActionContext(T3, S3, {"e": IsometrySpec(T3)}, depth=1, word_bound=2)
    report = dy.invariant_measure_search(ctx)
    assert report["verdict"] == "feasible"
    assert report["uniform"] is True


def test_measure_infeasible_for_skewering_context():
    for n in (2, 3, 4):
        report = dy.invariant_measure_search(dy.skewering_context(S3, depth=n))
        assert report["verdict"] == "infeasible"
        cert = report["certificate"]
        assert cert["skewering_word"] == ["t0"]
        assert cert["disjoint_translates"] == ["{02}", "{012}", "{0102}"]


def test_skewering_plus_minimal_forces_infeasibility():
    ctx = dy.translation_rotation_context(S3, depth=2, word_bound=6)
    assert dy.check_minimal(ctx)["verdict"] == "minimal-at-depth"
    assert dy.skewering_search(ctx)["verdict"] == "found"
    assert dy.invariant_measure_search(ctx)["verdict"] == "infeasible"


def test_averaged_point_mass_survives_a_lone_axis():
    # one translation plus the swap of its two axis ends: the pair of
    # axis directions is preserved, so a finite invariant measure exists
    gens = {
        "t0": hyperbolic_isometry(T3, (0,)),
        "swap": IsometrySpec(T3, sites=(((), Perm((1, 0, 2))),)),
    }
    ctx = dy.ActionContext(T3, S3, gens, depth=2, word_bound=6)
    report = dy.invariant_measure_search(ctx)
    assert report["verdict"] == "feasible"
    assert report["uniform"] is False
    weights = report["weights"]
    assert sum(weights.values()) == 1
    assert weights["010"] == Fraction(1, 2)
    assert weights["101"] == Fraction(1, 2)


# -------------------------------------------------------------------- replay


def test_reports_replay_byte_for_byte():
    def build():
        ctx = dy.translation_rotation_context(S3, depth=3, word_bound=6)
        return {
            "skewering": dy.skewering_search(ctx),
            "free": dy.free_semigroup_certificate(ctx, length_bound=6),
            "minimal": dy.check_minimal(ctx),
        }

    assert canonical_json(build()) == canonical_json(build())
