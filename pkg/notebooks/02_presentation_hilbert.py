# Hilbert series of F_p[[G]] from a presentation, checked against a group-algebra oracle.
from fractions import Fraction

from gstower import Presentation, finite_group_oracle, gs_polynomial, hilbert_coeffs, vinberg_check
from gstower.presentation import cyclic_group_table, direct_product_table

z33 = Presentation.from_strings(3, ["a", "b"], ["a^3", "b^3", "[a,b]"])
H = hilbert_coeffs(z33, 7)
print("Z/3 x Z/3 :", H.coeffs, "stabilized:", H.stabilized, "total:", H.total())

table = direct_product_table(cyclic_group_table(3), cyclic_group_table(3))
print("oracle    :", finite_group_oracle(table, 3, 7).coeffs)

# the relator polynomial and the coefficientwise check H(t) P(t) >= 1
P = gs_polynomial(z33, 7)
print("P(t) =", P)
print("H(1/2) P(1/2) =", H.evaluate(Fraction(1, 2)) * P(Fraction(1, 2)), vinberg_check(H, P, Fraction(1, 2)))

# two cube relators on two generators: still infinite, c_n grows like a Fibonacci sequence
b3 = Presentation.from_strings(3, ["a", "b"], ["a^3", "b^3"])
print("a^3, b^3  :", hilbert_coeffs(b3, 10).coeffs)
