"""Exact counts on the unit square next to every bound that applies to it."""
import math

from weylcert import bounds_nd, certify, geometry
from weylcert.spectra import count_exact, cube, eigenvalues

sq = geometry.RectilinearDomain([cube(1, 2)])
m = geometry.metrics(sq)
empty = geometry.metrics(geometry.RectilinearDomain.empty(2))

print("first eigenvalues / pi^2:", [round(float(x) / math.pi ** 2, 6) for x in eigenvalues(sq, 100)])
print(f"{'lambda':>8} {'N':>6} {'weyl':>9} {'upper':>9} {'imp2d':>9} {'lower':>10} {'cube':>9}")
for lam in (50, 100, 500, 1000, 5000, 10000):
    n = count_exact(sq, lam)
    up = certify.remainder_upper_lipschitz(m, empty, lam).value
    imp = bounds_nd.product_count_upper_2d_improved(1, 1, lam).value
    lo = certify.remainder_lower_lipschitz(m, lam).value
    cl = bounds_nd.cube_count_lower(1, 2, lam, True)
    print(f"{lam:>8} {n:>6} {certify.weyl_main(1, 2, lam):>9.2f} {up:>9.2f} {imp:>9.2f} {lo:>10.1f} "
          f"{cl.value if cl.valid else float('nan'):>9.2f}")

print("k0 for a volume-95 domain in a 100 x 1 slab:", bounds_nd.k0_threshold(95, 100, 2, 1))
print("two-term diagnostic at 1e4:", round(certify.two_term_weyl(m, 1e4), 3), "exact:", count_exact(sq, 1e4))
