"""Local decomposition: perpendicularity, factorisations, invariant classes.

Regions of the boundary index local classes; two classes are perpendicular
when their rigid stabilisers commute and meet trivially.  The scan at the
end asks which classes a group action fixes: a minimal strongly mixing
action fixes only the empty class and everything.
"""
from tdlclab import (
    CylinderClopen,
    commensurated_check,
    decomposition_factors,
    fixed_point_scan,
    half_tree_stabiliser_context,
    local_class,
    perp,
    regular,
    symmetric_group,
    translation_rotation_context,
)

T3 = regular(3)
S3 = symmetric_group(3)

print("== perpendicular of a half-tree ==")
alpha = CylinderClopen.cylinder(T3, (0,))
report = perp(S3, local_class(alpha), max_depth=3)
print(f"class {report['class']} has perpendicular {report['complement']}")
for d, row in sorted(report["depths"].items()):
    print(f"  depth {d}: rist order {row['rist_order']}, perp order {row['perp_order']}, "
          f"index {row['cogeneration_index']}, commute={row['commutation']}")
print(f"perp is an involution: {report['checks']['involution']}")

print("\n== decomposition into half-tree factors ==")
factors, rep = decomposition_factors(T3, S3, depth=3)
print(f"factors: {[str(f) for f in factors]}")
lvl = rep["checks"]["levels"][3]
print(f"at depth 3: factor orders {lvl['factor_orders']}, star order {lvl['star_order']}, "
      f"product matches: {lvl['product_matches']}")
print(f"verdict: {rep['verdict']}")

print("\n== fixed-point scan ==")
full = fixed_point_scan(translation_rotation_context(S3, depth=3, word_bound=6))
print(f"full action: {full['verdict']}, classes "
      f"{[str(c.region) for c in full['classes']]}")

ctrl = half_tree_stabiliser_context(S3, 0, depth=2)
restricted = fixed_point_scan(ctrl)
print(f"half-tree stabiliser: {restricted['verdict']}, classes "
      f"{[str(c.region) for c in restricted['classes']]}")

print("\n== commensuration ==")
a = local_class(alpha)
full_ctx = translation_rotation_context(S3, depth=3, word_bound=4)
chk = commensurated_check(full_ctx, a)
print(f"full action on {a}: {chk['verdict']}")
if chk.get("witness_words"):
    print(f"  witnesses: {chk['witness_words'][:3]}")
chk = commensurated_check(ctrl, a)
print(f"half-tree stabiliser on {a}: {chk['verdict']}")
