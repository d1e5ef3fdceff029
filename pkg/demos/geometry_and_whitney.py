"""Geometric scalars, tubes and the Whitney decomposition of an L-shaped domain."""
from weylcert import certify, geometry
from weylcert.spectra import Box, count_exact, cube

L = geometry.RectilinearDomain([Box((2, 2))], [Box((1, 1), (1, 1))])
m = geometry.metrics(L)
print("L-shape metrics:")
for k, v in m.as_dict().items():
    print(f"  {k}: {v}")

comp = geometry.complement_in_mar(L)
print("complement in the bounding rectangle: volume", comp.volume, "surface", comp.surface)
for e in (0.05, 0.2, 0.5):
    print(f"  eps {e}: interior tube {geometry.tube_volume(L, e):.4f}, "
          f"two-sided {geometry.tube_volume(L, e, 'two_sided'):.4f}")

fam = geometry.whitney(L, depth=7)
rep = geometry.check_whitney(fam)
print(f"Whitney depth 7: {len(fam)} cubes, covered {fam.covered_volume():.4f} of {float(L.volume)}, "
      f"checks ok = {rep['ok']}, max neighbours {rep['max_neighbours']}")

# the L-shape has no exact spectrum; the 2 x 2 square gives an upper count by monotonicity
for lam in (100.0, 1000.0):
    closed, cons = certify.whitney_count_lower(L, lam, m=m)
    print(f"lambda {lam}: Whitney lower {cons.value:.1f} (closed form {closed.value:.1f}), "
          f"N(2x2 square) = {count_exact(cube(2, 2), lam)}")
