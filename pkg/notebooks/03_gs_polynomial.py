# Negativity witnesses and certified growth bounds for GS polynomials.
from fractions import Fraction

from gstower import GsPolynomial, m_lower_bound, negativity_witness, q_certificate, rho_lower_bound

tol = Fraction(1, 2**20)

# 1 - 3t + 2t^2 = (1 - t)(1 - 2t) dips below zero just past t = 1/2
P = GsPolynomial({0: 1, 1: -3, 2: 2})
w = negativity_witness(P, tol)
print("witness t0 =", w.t0, " bracket width", float(w.width))
print("rho >=", float(rho_lower_bound(P, tol)))

# (1 - t)^2 never goes negative
print("(1-t)^2 :", negativity_witness(GsPolynomial({0: 1, 1: -2, 2: 1}), tol))

# the per-level polynomial of a tower row, evaluated at its critical point
cert = q_certificate(50, 339, 100, 3)
print(cert)
print("m >=", m_lower_bound(50, 339, 100, 3))
