"""The doubling cube family and the Polya checks for rectangles with cubes removed."""
import math

from weylcert import admissible as A

for depth in (6, 12, 24, 40):
    f = A.remark_family(2, depth)
    print(f"depth {depth:>2}: {sum(c for _, c in f.levels):>8} cubes, s_q = {f.s_q:.9f}, "
          f"tail <= {f.tail_bound:.2e}, bound {A.REMARK_BOUND:.6f}")

f = A.remark_family(2, 40)
base = 8 * (1 + math.sqrt(2)) * math.pi + 0.01
for check in (A.check_rectangle_minus_cubes(base, f), A.check_rectangle_minus_cubes(20.0, f),
              A.check_tiled_minus_cubes(2, base, f), A.check_product_minus_cubes(10, 1, 0.5, 2)):
    d = check.data
    print(f"{d['check']}: {check.verdict}, lhs {d['lhs']:.4f}, threshold {d['threshold']:.4f}, "
          f"margin {d['margin']:+.4f}")
    for h in check.assumed:
        print(f"  assumed: {h.name}")
