"""End-to-end epsilon-loss certificates for the unit square and the 1 x 2 rectangle."""
from weylcert import certify, geometry
from weylcert.spectra import Box, cube

for dom, eps in ((geometry.RectilinearDomain([cube(1, 2)]), 0.5),
                 (geometry.RectilinearDomain([Box((1, 2))]), 0.25)):
    m = geometry.metrics(dom)
    sol = certify.lambda_epsilon(m, eps)
    cert = certify.certify_epsilon_polya(dom, eps, m=m)
    print(f"box {[float(s) for s in dom.bounding_box.sides]}, eps = {eps}")
    print(f"  Lambda = {sol.capital_lambda:.6e} (residual {sol.residual:.1e}), c_lip = {m.c_lip:.5f}")
    print(f"  verdict: {cert.verdict}; {cert.work_log['count_evaluations']} exact counts, "
          f"{cert.work_log['interval_checks']} intervals, {cert.work_log['seconds']}s")
    for h in cert.hypotheses:
        print(f"  [{h.status}] {h.name}: {h.witness}")

capped = certify.certify_epsilon_polya(geometry.RectilinearDomain([cube(1, 2)]), 0.5, lambda_cap=1e7)
print("capped run:", capped.verdict, "-", capped.reason)
