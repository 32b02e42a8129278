"""Tour of the clopen algebra on the boundary of a tree.

Boundary points of the 3-regular tree are one-sided infinite colour words
with no letter repeated twice in a row.  A cylinder pins down a finite
prefix; finite unions of cylinders form a Boolean algebra which this
package represents exactly, with rational measures.
"""
from fractions import Fraction

from tdlclab import CylinderClopen, regular, rooted

T3 = regular(3)

print("== shapes ==")
print(f"3-regular tree: {T3}")
print(f"ball sizes to depth 4: {[T3.ball_size(n) for n in range(5)]}")
print(f"rooted binary tree ball sizes: {[rooted(2).ball_size(n) for n in range(5)]}")

print("\n== cylinders ==")
a = CylinderClopen.cylinder(T3, (0,))
b = CylinderClopen.cylinder(T3, (0, 1))
c = CylinderClopen.from_addresses(T3, [(1,), (2, 0)])
for name, s in [("a", a), ("b", b), ("c", c)]:
    print(f"{name} = {s}   measure {s.measure()}")

print("\n== lattice operations ==")
print(f"a meet b  = {a.meet(b)}   (b refines a, so the meet is b)")
print(f"a join c  = {a.join(c)}")
print(f"a minus b = {a.minus(b)}")
print(f"not a     = {a.complement()}")
print(f"b <= a: {b.leq(a)},  a meets c: {a.meets(c)}")

print("\n== exact measure arithmetic ==")
# uniform measure: the root splits 3 ways, every later step splits 2 ways
assert a.measure() == Fraction(1, 3)
assert b.measure() == Fraction(1, 6)
total = a.measure() + a.complement().measure()
print(f"mu(a) + mu(not a) = {total}")
assert total == 1

print("\n== laws hold on a worked example ==")
lhs = a.meet(b.join(c))
rhs = a.meet(b).join(a.meet(c))
print(f"a ^ (b v c) = {lhs}")
print(f"(a^b) v (a^c) = {rhs}")
assert lhs == rhs
assert a.join(b).complement() == a.complement().meet(b.complement())
print("distributivity and De Morgan check out")
