"""Frozen sign conventions.

CONV_SIGN orients the Berezin integral and the residue.  It was fixed by
requiring H_i^* = H_{i+4} in k^L(1|6), centrality of the po/sh Casimirs and
the 2-rho sum rule; the regression tests in ``tests/test_conventions.py``
pin every consequence.
"""

CONV_SIGN = -1

# Sign of the (alpha - beta) part of the k^L(1|6) positivity tuple.  Only
# -1 makes C_2 act by a scalar on every f v_a inside the grade window.
K16_D_SIGN = -1
