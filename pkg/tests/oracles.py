"""Slow, independent reference implementations used only by the tests.

Series are plain dicts {tuple_of_letters: residue}; words are expanded by
multiplying letter by letter.  Nothing here touches numpy or gstower internals.
"""

import itertools
from fractions import Fraction

import sympy


def dict_mul(a, b, N, p):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            if len(m1) + len(m2) > N:
                continue
            key = m1 + m2
            out[key] = (out.get(key, 0) + c1 * c2) % p
    return {k: v for k, v in out.items() if v}


def dict_add(a, b, p):
    out = dict(a)
    for k, v in b.items():
        out[k] = (out.get(k, 0) + v) % p
    return {k: v for k, v in out.items() if v}


def dict_gen(j, inverse, N, p):
    """1 + u_j, or its inverse 1 - u_j + u_j^2 - ..."""
    if not inverse:
        return {(): 1, (j,): 1}
    return {(j,) * k: (-1) ** k % p for k in range(N + 1)}


def expand_letters(letters, N, p):
    """Letters are (generator, +1 or -1) pairs."""
    s = {(): 1}
    for j, e in letters:
        s = dict_mul(s, dict_gen(j, e < 0, N, p), N, p)
    return s


def commutator_letters(x, y):
    inv = lambda w: [(j, -e) for j, e in reversed(w)]
    return inv(x) + inv(y) + x + y


def words_avoiding(d, n, forbidden):
    """Number of length-n words over d letters with no forbidden factor."""
    count = 0
    for w in itertools.product(range(d), repeat=n):
        s = "".join(map(str, w))
        if not any(f in s for f in forbidden):
            count += 1
    return count


def sandwich_rank(relator_vectors, basis, p):
    """Rank of the span of m1 * r * m2 for all monomials m1, m2, via sympy over GF(p)."""
    rows = []
    monos = [basis.monomial(i) for i in range(basis.dim)]
    for r in relator_vectors:
        terms = {basis.monomial(i): int(c) for i, c in enumerate(r) if c}
        for m1 in monos:
            for m2 in monos:
                row = [0] * basis.dim
                for m, c in terms.items():
                    w = m1 + m + m2
                    if len(w) <= basis.N:
                        row[basis.index(w)] = (row[basis.index(w)] + c) % p
                if any(row):
                    rows.append(row)
    if not rows:
        return 0
    M = sympy.Matrix(rows)
    from sympy.polys.matrices import DomainMatrix

    dm = DomainMatrix.from_Matrix(M).convert_to(sympy.GF(p))
    return dm.rank()


def quadratic_negative_on_unit_interval(b, c):
    """Ground truth for 1 + b t + c t^2 taking a negative value on (0, 1)."""
    b, c = Fraction(b), Fraction(c)
    f = lambda t: 1 + b * t + c * t * t
    if c == 0:
        return b < -1
    disc = b * b - 4 * c
    if c < 0:
        # opens downward, f(0) = 1 > 0: negative near 1 iff f(1) < 0
        return f(Fraction(1)) < 0
    if disc <= 0:
        return False
    # two real roots; negative between them. Smaller root r1 = (-b - sqrt)/2c.
    # negative somewhere in (0,1) iff r1 < 1 and r2 > 0; since f(0)=1>0 both roots share sign
    # of -b/c. Roots positive iff b < 0.
    if b >= 0:
        return False
    # r1 < 1  <=>  f(1) < 0 or (vertex < 1)
    return f(Fraction(1)) < 0 or (-b / (2 * c) < 1)
