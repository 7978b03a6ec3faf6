"""Hilbert series data of a finitely presented pro-p group.

The closed ideal J generated by the relator expansions ``rho_i - 1`` is
computed inside the algebra truncated at degree N.  Because I^(N+1) lies in
I^(n+1) for n <= N, the quotients (I^n + J) / (I^(n+1) + J) are unaffected by
the truncation, so every reported c_n is exact.  With the row-echelon pivots
of J sitting on lowest-degree monomials, c_n is simply d^n minus the number of
pivots of degree n.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from .errors import InconclusiveError, NonMinimalPresentationError, ParameterError, WordSyntaxError
from .free_algebra import (
    AboveTruncation,
    FpSubspace,
    _matmul_mod,
    check_prime,
    monomial_basis,
    rref_mod_p,
)
from .gspoly import GsPolynomial, evaluate
from .words import default_names, depth, format_word, magnus_expand, parse_word


@dataclass(frozen=True)
class Presentation:
    p: int
    d: int
    relators: tuple = ()
    labels: tuple = None

    def __post_init__(self):
        check_prime(self.p)
        if self.d < 1:
            raise ParameterError("a presentation needs at least one generator")
        object.__setattr__(self, "relators", tuple(self.relators))
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(default_names(self.d)))
        for w in self.relators:
            if w.max_generator() >= self.d:
                raise ParameterError(f"relator uses generator {w.max_generator()} but d={self.d}")

    @property
    def r(self):
        return len(self.relators)

    @classmethod
    def from_strings(cls, p, generators, relators):
        names = list(generators)
        words = []
        for k, text in enumerate(relators):
            try:
                words.append(parse_word(text, names))
            except WordSyntaxError as exc:
                raise WordSyntaxError(f"relator {k} {text!r}: {exc.detail}", exc.position) from None
        return cls(p, len(names), tuple(words), tuple(names))

    @classmethod
    def from_json(cls, source):
        """Accepts a JSON string or an already-decoded mapping."""
        data = json.loads(source) if isinstance(source, str) else source
        try:
            return cls.from_strings(int(data["p"]), data["generators"], data.get("relators", []))
        except KeyError as exc:
            raise ParameterError(f"presentation is missing field {exc}") from None

    def to_json(self):
        return json.dumps(
            {
                "p": self.p,
                "generators": list(self.labels),
                "relators": [format_word(w, list(self.labels)) for w in self.relators],
            }
        )

    def with_relator(self, w):
        return Presentation(self.p, self.d, self.relators + (w,), self.labels)


@dataclass(frozen=True)
class HilbertPrefix:
    N: int
    coeffs: tuple
    stabilized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if self.coeffs and self.coeffs[0] != 1:
            raise ParameterError("c_0 must be 1")
        if any(c < 0 for c in self.coeffs):
            raise ParameterError("Hilbert coefficients must be nonnegative")

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def evaluate(self, t):
        t = Fraction(t)
        return sum((c * t**n for n, c in enumerate(self.coeffs)), Fraction(0))

    def total(self):
        return sum(self.coeffs)


@dataclass(frozen=True)
class ZassenhausData:
    a: tuple = field(default=())

    def __getitem__(self, n):
        """a_n for n >= 1."""
        return self.a[n - 1]


def relator_depths(P, N):
    depths = []
    for k, w in enumerate(P.relators):
        dv = depth(w, P.d, N, P.p)
        if dv == 1:
            raise NonMinimalPresentationError(
                f"relator {k} ({format_word(w, list(P.labels))}) has depth 1"
            )
        depths.append(dv)
    return depths


def _closure_generators(P, N):
    basis = monomial_basis(P.d, N)
    rows = np.zeros((P.r, basis.dim), dtype=np.float64)
    for k, w in enumerate(P.relators):
        rows[k] = magnus_expand(w, P.d, N, P.p).vector
        rows[k, 0] = (rows[k, 0] - 1) % P.p
    return basis, rows


def _shift_windows(basis, m):
    """Column maps from window m (cols >= off[m]) to window m+1 for u_j x and x u_j."""
    off = basis.offsets
    src = np.arange(off[m], off[basis.N])
    if basis._left is None:
        basis._src, basis._left, basis._right = basis._shift_maps()
    maps = []
    for j in range(basis.d):
        maps.append(basis._left[j][src] - off[m + 1])
        maps.append(basis._right[j][src] - off[m + 1])
    return src - off[m], maps


def _staged_closure(P, N):
    """Echelon blocks of J, one per leading degree.

    Left or right multiplication by u_j raises the leading degree by exactly
    one, so every element whose leading degree is m is settled at stage m.
    Returns a list of ``(m, rows, pivots)`` with rows in window coordinates
    (columns >= offset of degree m) and pivots inside degree m.
    """
    relator_depths(P, N)
    basis, gens = _closure_generators(P, N)
    off = basis.offsets
    dim = basis.dim
    p = P.p
    lead = [int(basis.degrees[np.flatnonzero(g)[0]]) if g.any() else None for g in gens]
    blocks = []
    carry = np.zeros((0, dim), dtype=np.float64)
    for m in range(N + 1):
        new = [gens[k:k + 1, off[m]:] for k in range(P.r) if lead[k] == m]
        V = np.vstack([carry] + new) if new else carry
        V = V[V.any(axis=1)]
        width = dim - off[m]
        if V.shape[0] > width:
            # more rows than the window can hold independently: compress first
            E, piv, _ = rref_mod_p(V, p, width)
            V = E
        E, piv, rest = rref_mod_p(V, p, basis.d**m) if V.shape[0] else (
            np.zeros((0, width)), np.zeros(0, dtype=np.int64), np.zeros((0, width)))
        blocks.append((m, E, piv))
        if m == N:
            break
        nxt = [rest[:, basis.d**m:]]
        if E.shape[0]:
            src, maps = _shift_windows(basis, m)
            for tgt in maps:
                out = np.zeros((E.shape[0], dim - off[m + 1]), dtype=np.float64)
                out[:, tgt] = E[:, src]
                nxt.append(out)
        carry = np.vstack(nxt)
    return basis, blocks


def _assemble_subspace(basis, blocks, p):
    off = basis.offsets
    dim = basis.dim
    done_rows = np.zeros((0, dim), dtype=np.float64)
    done_piv = np.zeros(0, dtype=np.int64)
    for m, E, piv in reversed(blocks):
        if E.shape[0] == 0:
            continue
        rows = np.zeros((E.shape[0], dim), dtype=np.float64)
        rows[:, off[m]:] = E
        gpiv = piv + off[m]
        if done_piv.size:
            rows = np.mod(rows - _matmul_mod(rows[:, done_piv], done_rows, p), p)
        done_rows = np.vstack([rows, done_rows])
        done_piv = np.concatenate([gpiv, done_piv])
    return FpSubspace.from_rref(done_rows, done_piv, p)


def ideal_truncation(P, N):
    """Image of the closed two-sided ideal J in the algebra truncated at N."""
    basis, blocks = _staged_closure(P, N)
    return _assemble_subspace(basis, blocks, P.p)


def _hilbert_from_pivot_counts(d, N, pivots_per_degree, basis):
    full = [d**n - int(pivots_per_degree[n]) for n in range(N + 1)]
    stabilized = False
    for n in range(1, N + 1):
        if full[n] == 0:
            # I^n + J = I^(n+1) + J; confirm the whole tail of degrees >= n is in J
            stabilized = sum(pivots_per_degree[n:]) == basis.dim - basis.offsets[n]
            break
    return HilbertPrefix(N, full[:N], stabilized)


def hilbert_from_ideal(space, d, N):
    basis = monomial_basis(d, N)
    counts = np.bincount(basis.degrees[space.pivots], minlength=N + 1) if space.rank else [0] * (N + 1)
    return _hilbert_from_pivot_counts(d, N, list(counts), basis)


def hilbert_coeffs(P, N):
    """c_0, ..., c_{N-1} of the Hilbert series, exactly."""
    basis, blocks = _staged_closure(P, N)
    counts = [0] * (N + 1)
    for m, E, _ in blocks:
        counts[m] = E.shape[0]
    return _hilbert_from_pivot_counts(P.d, N, counts, basis)


# finite group oracle ----------------------------------------------------------

def _check_table(table, p):
    table = np.asarray(table, dtype=np.int64)
    n = table.shape[0]
    if table.shape != (n, n):
        raise ParameterError("multiplication table must be square")
    order, k = n, 0
    while order % p == 0:
        order //= p
        k += 1
    if order != 1:
        raise ParameterError(f"group order {n} is not a power of {p}")
    ids = [e for e in range(n) if np.array_equal(table[e], np.arange(n))]
    if not ids:
        raise ParameterError("multiplication table has no identity element")
    return table, ids[0]


class _GroupAlgebra:
    """F_p[G] with power computations of the augmentation ideal via sympy."""

    def __init__(self, table, p):
        self.table, self.e = _check_table(table, p)
        self.n = self.table.shape[0]
        self.p = p
        self.K = GF(p)

    def right_mul(self, vec, g):
        out = [0] * self.n
        for h, c in enumerate(vec):
            if c:
                out[self.table[h, g]] = (out[self.table[h, g]] + c) % self.p
        return out

    def aug(self, g):
        v = [0] * self.n
        v[g] = 1
        v[self.e] = (v[self.e] - 1) % self.p
        return v

    def span_basis(self, vectors):
        if not vectors:
            return []
        M = DomainMatrix([[self.K(c) for c in v] for v in vectors], (len(vectors), self.n), self.K)
        R, _ = M.rref()
        rows = R.to_Matrix().tolist()
        return [[int(x) % self.p for x in row] for row in rows if any(int(x) % self.p for x in row)]

    def rank(self, vectors):
        if not vectors:
            return 0
        M = DomainMatrix([[self.K(c) for c in v] for v in vectors], (len(vectors), self.n), self.K)
        return M.rank()

    def ideal_powers(self, limit):
        """Bases of I^0, I^1, ... until I^n = 0 or n = limit."""
        powers = [[[1 if h == g else 0 for h in range(self.n)] for g in range(self.n)]]
        current = self.span_basis([self.aug(g) for g in range(self.n)])
        powers.append(current)
        while current and len(powers) <= limit:
            products = [self.right_mul_vec(x, self.aug(g)) for x in current for g in range(self.n)]
            current = self.span_basis(products)
            powers.append(current)
        return powers

    def right_mul_vec(self, x, y):
        out = [0] * self.n
        for h, a in enumerate(x):
            if not a:
                continue
            for g, b in enumerate(y):
                if b:
                    k = self.table[h, g]
                    out[k] = (out[k] + a * b) % self.p
        return out


def finite_group_oracle(table, p, N):
    """c_n of F_p[G] for a finite p-group given by its multiplication table."""
    check_prime(p)
    alg = _GroupAlgebra(table, p)
    powers = alg.ideal_powers(N + 1)
    dims = [len(b) for b in powers]
    dims += [0] * (N + 2 - len(dims))
    coeffs = [dims[n] - dims[n + 1] for n in range(N)]
    stabilized = any(dims[n] == 0 for n in range(1, N + 2))
    return HilbertPrefix(N, coeffs, stabilized)


def zassenhaus_dims(table, p, N):
    """a_n = dim G_n / G_{n+1} for n = 1..N, with G_n read off F_p[G]."""
    check_prime(p)
    alg = _GroupAlgebra(table, p)
    powers = alg.ideal_powers(N + 1)
    ranks = [len(b) for b in powers]

    def element_depth(g):
        x = alg.aug(g)
        best = 0
        for n in range(1, len(powers)):
            if not powers[n]:
                break
            if alg.rank(powers[n] + [x]) == ranks[n]:
                best = n
            else:
                break
        return best

    depths = [None if g == alg.e else element_depth(g) for g in range(alg.n)]
    sizes = []
    for n in range(1, N + 2):
        sizes.append(sum(1 for g, dv in enumerate(depths) if g == alg.e or dv >= n))
    a = []
    for n in range(N):
        ratio = sizes[n] // sizes[n + 1]
        k = 0
        while ratio > 1:
            ratio //= p
            k += 1
        a.append(k)
    return ZassenhausData(tuple(a))


def cyclic_group_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def direct_product_table(t1, t2):
    t1 = np.asarray(t1)
    t2 = np.asarray(t2)
    n1, n2 = len(t1), len(t2)
    out = np.empty((n1 * n2, n1 * n2), dtype=np.int64)
    for a in range(n1 * n2):
        for b in range(n1 * n2):
            out[a, b] = t1[a // n2, b // n2] * n2 + t2[a % n2, b % n2]
    return out


# Golod-Shafarevich polynomial and Vinberg ------------------------------------

def gs_polynomial(P, N):
    depths = relator_depths(P, N)
    unresolved = [k for k, dv in enumerate(depths) if isinstance(dv, AboveTruncation)]
    if unresolved:
        raise InconclusiveError(
            f"relators {unresolved} have depth above truncation N={N}; raise the max degree"
        )
    return GsPolynomial.golod_shafarevich(P.d, depths)


CERTIFIED_HOLDS = "certified-holds"
INCONCLUSIVE = "inconclusive"
VIOLATION = "violation"


def vinberg_check(H, Pgs, t):
    """Check H(t) P(t) >= 1 with the truncated prefix as a lower bound for H(t)."""
    t = Fraction(t)
    if not 0 < t < 1:
        raise ParameterError("t must lie in (0, 1)")
    pv = evaluate(Pgs, t)
    if pv < 0:
        return INCONCLUSIVE
    product = H.evaluate(t) * pv
    if pv > 0 and product >= 1:
        return CERTIFIED_HOLDS
    if H.stabilized:
        return VIOLATION
    return INCONCLUSIVE


def rho_estimate(H):
    """max of c_n^(1/n) over n in [N/2, N-1], to 6 decimals (diagnostic only)."""
    if H.N < 2:
        raise ParameterError("need N >= 2")
    best = Fraction(0)
    with mpmath.workdps(40):
        for n in range(max(1, H.N // 2), H.N):
            c = H.coeffs[n]
            if c == 0:
                continue
            root = mpmath.root(mpmath.mpf(c), n)
            approx = Fraction(int(mpmath.nint(root * 10**6)), 10**6)
            best = max(best, approx)
    return best


def gs_recursion_holds(H, d, depths):
    """c_n >= d c_{n-1} - sum_i c_{n - w_i} for every n in range."""
    c = H.coeffs
    for n in range(1, len(c)):
        bound = d * c[n - 1] - sum(c[n - w] for w in depths if n - w >= 0)
        if c[n] < bound:
            return False
    return True
