"""Boundary dynamics of the universal group: minimality, measures, freeness.

Everything below runs inside a finite action context: the boundary is
truncated at a fixed depth, group elements are bounded words in a named
generating set, and every verdict names the bounds it was reached under.
"""
from tdlclab import (
    check_minimal,
    free_semigroup_certificate,
    invariant_measure_search,
    minorising_degree,
    pair_compression,
    rotation_context,
    skewering_context,
    skewering_search,
    symmetric_group,
    translation_rotation_context,
    two_copy_product_context,
)
from tdlclab.boolalg import CylinderClopen

S3 = symmetric_group(3)
ctx = translation_rotation_context(S3, depth=3, word_bound=6)
print(f"context: {len(ctx.gen_names)} generator names, depth {ctx.depth}")

print("\n== minimality ==")
rep = check_minimal(ctx)
print(f"verdict: {rep['verdict']}")

print("\n== skewering ==")
rep = skewering_search(ctx)
print(f"verdict: {rep['verdict']}, word {rep.get('word')}, "
      f"alpha {rep.get('alpha')} -> strictly inside itself")

print("\n== invariant measure dichotomy ==")
feas = invariant_measure_search(rotation_context(S3, depth=2))
print(f"rotations only: {feas['verdict']}, uniform={feas['uniform']}")
for label, w in sorted(feas["weights"].items()):
    print(f"  mu({label}) = {w}")
infeas = invariant_measure_search(skewering_context(S3, depth=3))
print(f"with a skewering word: {infeas['verdict']}")
print(f"  witness word {infeas['certificate']['skewering_word']} maps "
      f"{infeas['certificate']['alpha']} into {infeas['certificate']['beta']}")

print("\n== free subsemigroup ==")
free = free_semigroup_certificate(ctx, length_bound=6)
print(f"verdict: {free['verdict']}; generators g={free['g']}, h={free['h']}")
print(f"{free['image_count']} distinct images of alpha from words of length <= 6 "
      f"(expected {free['expected_images']})")

print("\n== pair compression ==")
deep = translation_rotation_context(S3, depth=6, word_bound=8)
states = deep.states()
target = CylinderClopen.cylinder(deep.shape, (0, 1))
sched = pair_compression(deep, states[0], states[-1], target)
print(f"pair {sched['source']} -> {sched['target']}")
print(f"word {sched['word']} (length {sched['word_length']})")

print("\n== minorising degree ==")
one = minorising_degree(translation_rotation_context(S3, depth=2, word_bound=6))
two = minorising_degree(two_copy_product_context(S3, depth=2, word_bound=6))
print(f"single tree: degree {one['degree']}")
print(f"two-copy product: degree {two['degree']} "
      f"(each factor's boundary is invariant, so one open can never suffice)")
