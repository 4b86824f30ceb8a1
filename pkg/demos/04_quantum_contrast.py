"""
Quantum correlations reach 2*sqrt(2)
====================================

Genuine quantum expectations on PHI_PLUS follow cos(2(a - b)).  At the
settings (0, pi/4, pi/8, 3pi/8) the CHSH value is 2*sqrt(2), the largest
quantum mechanics allows.  Product states never exceed 2, whatever the
settings.
"""

import math

from bellfusion import bell_state, maximize_quantum_chsh, quantum_chsh, state_from_probability, tensor_product

phi = bell_state()
res = quantum_chsh(phi, 0, math.pi / 4, math.pi / 8, 3 * math.pi / 8)
print(f"PHI_PLUS at canonical settings: s = {res.s_value:.6f} (2*sqrt(2) = {2 * math.sqrt(2):.6f})")
print("violates classical bound:", res.violates_classical)

# Coarse grid to keep the demo quick; the test suite uses pi/720.
print("grid maximum, PHI_PLUS:", maximize_quantum_chsh(phi, steps=180))
product = tensor_product(state_from_probability(0.3), state_from_probability(0.8))
print("grid maximum, product :", maximize_quantum_chsh(product, steps=180))
