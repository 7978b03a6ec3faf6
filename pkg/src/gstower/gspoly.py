"""Exact-rational analysis of Golod-Shafarevich type polynomials.

Everything here runs on :class:`fractions.Fraction`; no float enters a
certified path.  Negative values on (0, 1) are located by Descartes
sign-variation counts on dyadic subintervals, applied to the odd-multiplicity
part of the polynomial so that tangential zeros such as ``(1 - 2t)^2`` are not
mistaken for sign changes.
"""

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import InadmissibleCutError, InconclusiveError, ParameterError

RESOLUTION_FLOOR = Fraction(1, 2**40)
_MAX_REFINEMENT_STEPS = 400


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


class GsPolynomial:
    """Sparse polynomial with exact coefficients and constant term 1."""

    __slots__ = ("_terms",)

    def __init__(self, terms):
        clean = {}
        for e, c in dict(terms).items():
            e = int(e)
            if e < 0:
                raise ParameterError(f"negative exponent {e}")
            c = _frac(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        clean = {e: c for e, c in clean.items() if c}
        if clean.get(0) != 1:
            raise ParameterError("constant coefficient must be 1")
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def from_coefficients(cls, coeffs):
        """Dense ascending coefficient list ``[1, c_1, c_2, ...]``."""
        return cls({e: c for e, c in enumerate(coeffs)})

    @classmethod
    def golod_shafarevich(cls, d, depths):
        """``1 - d t + sum_i t^{depth_i}``."""
        terms = {0: 1, 1: -d}
        for w in depths:
            terms[w] = terms.get(w, 0) + 1
        return cls(terms)

    @property
    def terms(self):
        return dict(self._terms)

    @property
    def degree(self):
        return max(self._terms)

    def coefficient(self, e):
        return self._terms.get(e, Fraction(0))

    def dense(self):
        out = [Fraction(0)] * (self.degree + 1)
        for e, c in self._terms.items():
            out[e] = c
        return out

    def __call__(self, t):
        return evaluate(self, t)

    def __eq__(self, other):
        if not isinstance(other, GsPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        return f"GsPolynomial({format_polynomial(self)})"


def format_polynomial(P, var="t"):
    parts = []
    for e, c in P.terms.items():
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def evaluate(P, t):
    t = _frac(t)
    return sum((c * t**e for e, c in P.terms.items()), Fraction(0))


# dense Fraction polynomial helpers (ascending coefficient lists) ---------------

def _horner(coeffs, t):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _taylor_shift(coeffs, a):
    """Coefficients of q(x) = f(x + a)."""
    c = list(coeffs)
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += a * c[j + 1]
    return c


def _variations_on(coeffs, a, b):
    """Descartes sign-variation bound for roots of f in the open interval (a, b)."""
    q = _taylor_shift(coeffs, a)
    scale = b - a
    q = [c * scale**i for i, c in enumerate(q)]
    r = _taylor_shift(list(reversed(q)), Fraction(1))
    signs = [c > 0 for c in r if c != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def _odd_part(P):
    """Product of the odd-multiplicity square-free factors, normalised to S(0) > 0."""
    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t**e for e, c in P.terms.items())
    _, factors = sympy.Poly(expr, t, domain="QQ").sqf_list()
    S = sympy.Poly(1, t, domain="QQ")
    for f, k in factors:
        if k % 2:
            S = S * f
    coeffs = [_frac(c) for c in reversed(S.all_coeffs())]
    if coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    return coeffs


def _first_root_interval(S, a, b):
    v = _variations_on(S, a, b)
    if v == 0:
        return None
    if v == 1:
        return (a, b)
    if b - a < RESOLUTION_FLOOR:
        raise InconclusiveError(
            f"roots closer than the resolution floor 2^-40 near {float(a):.12g}"
        )
    m = (a + b) / 2
    left = _first_root_interval(S, a, m)
    if left is not None:
        return left
    if _horner(S, m) == 0:
        return (m, m)
    return _first_root_interval(S, m, b)


@dataclass(frozen=True)
class NegativityWitness:
    """``t0`` has P(t0) < 0; ``[lo, hi]`` brackets inf{t in (0,1): P(t) < 0}."""

    t0: Fraction
    lo: Fraction
    hi: Fraction

    @property
    def width(self):
        return self.hi - self.lo


def negativity_witness(P, tol):
    """Exact witness of negativity on (0, 1), or None if P >= 0 there.

    Raises :class:`InconclusiveError` when root isolation would need intervals
    narrower than 2^-40.
    """
    tol = _frac(tol)
    if tol <= 0:
        raise ParameterError("tolerance must be positive")
    S = _odd_part(P)
    if len(S) == 1:
        return None
    iv = _first_root_interval(S, Fraction(0), Fraction(1))
    if iv is None:
        return None
    a, b = iv
    if a == b:
        return _witness_at_root(P, S, a, Fraction(1), tol)
    # S(a) > 0 and S has exactly one root in (a, b); P < 0 just right of it
    b_ok = _horner(S, b) < 0 and evaluate(P, b) < 0
    for _ in range(_MAX_REFINEMENT_STEPS):
        if b - a <= tol and b_ok:
            return NegativityWitness(b, a, b)
        m = (a + b) / 2
        sm = _horner(S, m)
        if sm == 0:
            return _witness_at_root(P, S, m, b, tol)
        if sm > 0:
            a = m
        else:
            b = m
            b_ok = evaluate(P, m) < 0
    raise InconclusiveError("bisection did not produce a negative endpoint")


def _witness_at_root(P, S, root, upper, tol):
    # shrink upper until S < 0 there with no root of S in (root, upper)
    hi = upper
    while not (_horner(S, hi) < 0 and _variations_on(S, root, hi) == 0):
        hi = (root + hi) / 2
        if hi - root < RESOLUTION_FLOOR:
            raise InconclusiveError("could not isolate the region after an exact root")
    for _ in range(_MAX_REFINEMENT_STEPS):
        if hi - root <= tol and evaluate(P, hi) < 0:
            return NegativityWitness(hi, root, hi)
        hi = (root + hi) / 2
    raise InconclusiveError("could not separate the witness from the root")


def is_golod_shafarevich(P, tol=Fraction(1, 2**20)):
    return negativity_witness(P, tol) is not None


def rho_lower_bound(P, tol):
    """Certified lower bound 1/hi for the exponential growth number, or None."""
    w = negativity_witness(P, tol)
    if w is None:
        return None
    return 1 / w.hi


def cut(P, depths):
    """Add ``t^w`` for each admissible cutting element of depth ``w``."""
    terms = P.terms
    for w in depths:
        if w < 2:
            raise InadmissibleCutError(f"cutting element of depth {w} < 2")
        terms[w] = terms.get(w, Fraction(0)) + 1
    return GsPolynomial(terms)


# Q-form machinery ----------------------------------------------------------------

def q_polynomial(D, R, Rp, p, k=1, exact_k=False):
    """``1 - D t + R t^2 + R' t^p``, or with ``t^(p^k)`` when ``exact_k``."""
    D, R, Rp = _frac(D), _frac(R), _frac(Rp)
    if min(D, R, Rp) < 0:
        raise ParameterError("D, R, R' must be nonnegative")
    if k < 1:
        raise ParameterError("k must be >= 1")
    top = p**k if exact_k else p
    terms = {0: 1, 1: -D, 2: R}
    terms[top] = terms.get(top, Fraction(0)) + Rp
    return GsPolynomial(terms)


def critical_point(D, R):
    """t_n = D / (2R), the minimiser of the quadratic part."""
    R = _frac(R)
    if R == 0:
        raise ParameterError("R must be positive")
    return _frac(D) / (2 * R)


def q_at_tn(D, R, Rp, p):
    """Exact value of the Q-form at t_n = D/(2R)."""
    D, R, Rp = _frac(D), _frac(R), _frac(Rp)
    if R == 0:
        raise ParameterError("R must be positive")
    return 1 - D**2 / (4 * R) + Rp * D**p / (2**p * R**p)


def certified_negativity(D, R, Rp, p):
    """``2^(p-2) R^(p-1) D^2 > 2^p R^p + R' D^p`` in exact arithmetic."""
    D, R, Rp = _frac(D), _frac(R), _frac(Rp)
    lhs = 2 ** (p - 2) * R ** (p - 1) * D**2
    rhs = 2**p * R**p + Rp * D**p
    return lhs > rhs


def negativity_sides(D, R, Rp, p):
    """The two sides of the certification inequality, for reporting."""
    D, R, Rp = _frac(D), _frac(R), _frac(Rp)
    return 2 ** (p - 2) * R ** (p - 1) * D**2, 2**p * R**p + Rp * D**p


@dataclass(frozen=True)
class QCertificate:
    t_n: Fraction
    q_value: Fraction
    certified: bool

    @property
    def t_in_unit_interval(self):
        return 0 < self.t_n < 1


def q_certificate(D, R, Rp, p):
    return QCertificate(critical_point(D, R), q_at_tn(D, R, Rp, p), certified_negativity(D, R, Rp, p))


def m_lower_bound(D, R, Rp, p):
    """``D^2/4 - R - R' D^p / (2^p R^(p-1)) - 1``; may be negative."""
    D, R, Rp = _frac(D), _frac(R), _frac(Rp)
    if R == 0:
        raise ParameterError("R must be positive")
    return D**2 / 4 - R - Rp * D**p / (2**p * R ** (p - 1)) - 1
