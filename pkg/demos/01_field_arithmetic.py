"""Finite-field arithmetic: prime fields, GF(2^m), and the linear algebra the codes rely on."""

import numpy as np

from lnec.galois import FieldSpec, get_field

gf7 = get_field(FieldSpec(7))
print("GF(7): 3 + 5 =", gf7.add(3, 5), " 3 * 5 =", gf7.mul(3, 5), " 1/3 =", gf7.inv(3))

# GF(16) built on x^4 + x + 1 (bitmask 0b10011); elements are polynomial bitmasks
gf16 = get_field(FieldSpec(2, 4, 0b10011))
a, b = 0b0110, 0b1011
print("GF(16): a * b =", gf16.mul(a, b), " a / b =", gf16.div(a, b))

M = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
print("rank over GF(7):", gf7.rank(M))
print("null space over GF(7):\n", gf7.nullspace(M))

# two planes in GF(7)^3 always meet in at least a line
U = np.array([[1, 0, 0], [0, 1, 0]])
V = np.array([[1, 1, 1], [0, 1, 2]])
print("planes intersect:", gf7.rank(np.vstack([U, V])) < 4)

y, kernel = gf7.solve_left(np.array([[1, 2], [3, 4]]), np.array([5, 6]))
print("solution of y M = (5, 6):", y)
