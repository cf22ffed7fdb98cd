"""Trace extraction and reconstruction invert each other exactly.

Both directions of the bijection, on piecewise polynomials where all the
calculus is closed-form: extract the boundary traces of a random tensor
polynomial and reassemble it (forward), then start from a random trace
bundle, reconstruct, and read the traces back (inverse).
"""

import numpy as np

from sobrecon import coeff_distance, extract_traces_poly, multiindex_range, reconstruct
from sobrecon.verify import random_domain, random_tensor_poly, random_trace_bundle

rng = np.random.default_rng(2024)

print("forward: function -> traces -> function")
for ndim, delta in [(1, (3,)), (2, (2, 1)), (3, (2, 1, 3))]:
    dom = random_domain(rng, ndim)
    u = random_tensor_poly(rng, dom, tuple(d + 2 for d in delta))
    again = reconstruct(extract_traces_poly(u, delta))
    print(f"  N={ndim} delta={delta}: coefficient error {coeff_distance(u, again):.2e}")

print("\ninverse: bundle -> function -> bundle")
for ndim, delta in [(1, (3,)), (2, (3, 3))]:
    dom = random_domain(rng, ndim)
    bundle = random_trace_bundle(rng, delta, dom)
    back = extract_traces_poly(reconstruct(bundle), delta)
    worst = max(
        coeff_distance(bundle.entries[a], back.entries[a])
        for a in multiindex_range(delta)
    )
    print(f"  N={ndim} delta={delta}: worst trace error {worst:.2e}")

# The inverse direction is the uniqueness half of the bijection: no two
# distinct bundles reconstruct to the same function.
