"""
Why independent relevance never violates CHSH
=============================================

With relevance expectations x = 2p - 1 in [-1, 1], the CHSH combination for
a document pair factors as ``x1 (x2 + y2) + y1 (x2 - y2)``, which is at most
``|x2 + y2| + |x2 - y2| = 2 max(|x2|, |y2|) <= 2``.  Random sampling agrees.
"""

import numpy as np

from bellfusion import ScoredDocument, chsh_from_document_pair

d1 = ScoredDocument("doc-a", p_text=0.9, p_image=0.2)
d2 = ScoredDocument("doc-b", p_text=0.7, p_image=0.6)
print(chsh_from_document_pair(d1, d2))

rng = np.random.default_rng(0)
best = max(
    chsh_from_document_pair(ScoredDocument("a", *rng.random(2)), ScoredDocument("b", *rng.random(2))).s_value
    for _ in range(20_000)
)
print(f"largest s over 20000 random pairs: {best:.6f}")

# The bound is attained only at the corners, e.g. all four probabilities 1.
print("corner:", chsh_from_document_pair(ScoredDocument("a", 1, 1), ScoredDocument("b", 1, 1)).s_value)
