"""
Relevance as a qubit
====================

A document's relevance to a query, for one modality, is a unit vector
``a|R> + a'|R_bar>`` in a real 2-D space.  The squared amplitudes are the
probabilities of relevance and non-relevance.  Looking at the same
document through a basis rotated by ``theta`` changes the amplitudes but
not the norm.
"""

import math

from bellfusion import Modality, Outcome, born_probability, cross_basis_probability, rotate_basis, state_from_probability

# A cosine score of 0.37 read as a probability of relevance.
text_state = state_from_probability(0.37, Modality.TEXT)
print("amplitudes:", text_state.amplitudes)
print("p(R)    =", born_probability(text_state, Outcome.RELEVANT))
print("p(notR) =", born_probability(text_state, Outcome.NON_RELEVANT))

# The same state seen in an image-relevance basis tilted by 30 degrees.
theta = math.radians(30)
tilted = rotate_basis(text_state, theta)
print("\nin the tilted basis:", tilted.amplitudes)
print("p(R) there =", born_probability(tilted))

# Agreement between two bases falls off as cos^2 of their angle.
for deg in (0, 30, 45, 60, 90):
    print(f"cos^2({deg:2d} deg) = {cross_basis_probability(math.radians(deg)):.4f}")
