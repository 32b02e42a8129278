"""Level truncations of the universal group over Sym(3) and their invariants.

Truncating the boundary action at depth n gives a finite permutation group
on the n-sphere.  Watching how these groups grow reveals which primes pile
up (the local prime content), how large congruence kernels act, and which
composition factors appear level by level.
"""
from tdlclab import (
    composition_factors,
    congruence_kernel,
    level_group,
    level_order,
    local_prime_content,
    melnikov_subgroup,
    sphere_orbit_classes,
    symmetric_group,
    regular,
)

T3 = regular(3)
S3 = symmetric_group(3)

print("== level orders ==")
for n in range(1, 5):
    print(f"level {n}: order {level_order(T3, S3, n)}")

print("\n== local prime content ==")
content = local_prime_content(T3, S3, 4)
for p, exps in sorted(content["exponents"].items()):
    trend = "growing" if p in content["growing_primes"] else "constant"
    print(f"prime {p}: exponents {exps} ({trend})")
print(f"eta = {sorted(content['growing_primes'])}")

print("\n== congruence kernel orbits ==")
# the depth-(n-1) kernel inside level n moves each sphere point within
# its sibling fan; orbit sizes stay bounded by 2 here
for n in (2, 3):
    g = level_group(T3, S3, n)
    kern = congruence_kernel(g, T3, n, n - 1)
    sizes = sorted({len(o) for o in kern.orbits()})
    print(f"kernel at level {n}: order {kern.order}, orbit sizes {sizes}")

print("\n== sphere orbit classes ==")
info = sphere_orbit_classes(T3, S3, 3)
for k, reps in sorted(info["classes"].items()):
    print(f"radius {k}: {info['counts'][k]} classes, reps {reps}")

print("\n== composition factors of small truncations ==")
for n in (1, 2):
    g = level_group(T3, S3, n)
    print(f"level {n}: {composition_factors(g)}")

print("\n== a local obstruction ==")
m = melnikov_subgroup(S3)
print(f"Melnikov subgroup of Sym(3) has order {m.order}")
