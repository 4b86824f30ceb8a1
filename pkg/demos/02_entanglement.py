"""
Products versus Bell states
===========================

Two documents form a composite system through the tensor product.  A
product state always has Schmidt number 1.  A Bell state cannot be
factored: measuring the first document fixes the second.
"""

import math

from bellfusion import (
    BellStateKind,
    Outcome,
    bell_state,
    check_rotation_invariance,
    marginal_probability,
    measure_collapse,
    schmidt_decompose,
    state_from_probability,
    tensor_product,
)

pair = tensor_product(state_from_probability(0.9), state_from_probability(0.6))
print("product coeffs :", [round(c, 4) for c in pair.coeffs])
print("product Schmidt:", schmidt_decompose(pair))

phi = bell_state(BellStateKind.PHI_PLUS)
print("\nPHI_PLUS Schmidt:", schmidt_decompose(phi))

p, after = measure_collapse(phi, Outcome.RELEVANT)
print(f"first document relevant with p={p:.3f}; "
      f"then second relevant with p={marginal_probability(after, 2):.3f}")

# PHI_PLUS looks the same in every rotated basis; PSI_PLUS does not.
for kind in BellStateKind:
    dev = max(check_rotation_invariance(bell_state(kind), t) for t in (math.pi / 8, math.pi / 4, 1.0))
    print(f"{kind.value:9s} max deviation under rotation: {dev:.3g}")
