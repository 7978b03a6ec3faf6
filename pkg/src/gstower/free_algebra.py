"""Degree-truncated free noncommutative algebra over F_p and an F_p rank engine.

Monomials in ``u_0, ..., u_{d-1}`` are tuples of generator indices.  They are
ranked degree-major and lexicographically inside a degree, so the monomials of
degree <= N occupy the contiguous index range ``[0, (d^(N+1)-1)/(d-1))``.  Both
:class:`TruncatedSeries` and :class:`FpSubspace` work on flat residue vectors in
that order, which makes ``series.vector`` directly usable as a subspace row.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import isprime

from .errors import CapacityError, NonUnitError, ParameterError

# desk-scale budget: generator count -> largest truncation degree
MAX_DEGREE = {1: 64, 2: 12, 3: 8}
MAX_PRIME = 1 << 19


@dataclass(frozen=True)
class AboveTruncation:
    """Valuation that is only known to be at least ``bound`` (= N + 1).

    Stands in for infinity: a truncated computation can never certify more.
    """

    bound: int

    def __str__(self):
        return f">={self.bound}"


def check_prime(p):
    if not isinstance(p, (int, np.integer)) or p < 3 or p % 2 == 0 or not isprime(int(p)):
        raise ParameterError(f"p must be an odd prime, got {p!r}")
    if p >= MAX_PRIME:
        raise CapacityError(f"p={p} exceeds supported modulus bound {MAX_PRIME}")


def check_capacity(d, N):
    if d not in MAX_DEGREE:
        raise CapacityError(f"generator count d={d} outside supported range 1..3")
    if N < 1:
        raise ParameterError(f"truncation degree must be >= 1, got {N}")
    if N > MAX_DEGREE[d]:
        raise CapacityError(
            f"truncation degree N={N} exceeds budget {MAX_DEGREE[d]} for d={d}"
        )


class MonomialBasis:
    """Ranking of all monomials of degree <= N in d letters."""

    def __init__(self, d, N):
        check_capacity(d, N)
        self.d = d
        self.N = N
        self.offsets = [0]
        for n in range(N + 1):
            self.offsets.append(self.offsets[-1] + d**n)
        self.dim = self.offsets[-1]
        degs = np.empty(self.dim, dtype=np.int64)
        for n in range(N + 1):
            degs[self.offsets[n]:self.offsets[n + 1]] = n
        self.degrees = degs
        self._left = None
        self._right = None

    def index(self, letters):
        n = len(letters)
        if n > self.N:
            raise ParameterError(f"monomial degree {n} exceeds truncation {self.N}")
        v = 0
        for j in letters:
            if not 0 <= j < self.d:
                raise ParameterError(f"generator index {j} out of range for d={self.d}")
            v = v * self.d + j
        return self.offsets[n] + v

    def monomial(self, idx):
        if not 0 <= idx < self.dim:
            raise ParameterError(f"monomial index {idx} out of range")
        n = int(self.degrees[idx])
        v = idx - self.offsets[n]
        letters = []
        for _ in range(n):
            v, r = divmod(v, self.d)
            letters.append(r)
        return tuple(reversed(letters))

    def degree_slice(self, n):
        return slice(self.offsets[n], self.offsets[n + 1])

    def _shift_maps(self):
        # src: indices of degree < N; left[j][k] = index of u_j * m_src[k]
        src = np.arange(self.offsets[self.N])
        degs = self.degrees[src]
        vals = src - np.asarray(self.offsets)[degs]
        dpow = self.d ** degs
        nxt = np.asarray(self.offsets)[degs + 1]
        left = [nxt + j * dpow + vals for j in range(self.d)]
        right = [nxt + vals * self.d + j for j in range(self.d)]
        return src, left, right

    def left_multiply_rows(self, rows, j):
        """Rows of coefficient vectors times ``u_j`` on the left, truncated."""
        if self._left is None:
            self._src, self._left, self._right = self._shift_maps()
        out = np.zeros_like(rows)
        out[:, self._left[j]] = rows[:, self._src]
        return out

    def right_multiply_rows(self, rows, j):
        if self._right is None:
            self._src, self._left, self._right = self._shift_maps()
        out = np.zeros_like(rows)
        out[:, self._right[j]] = rows[:, self._src]
        return out


@lru_cache(maxsize=32)
def monomial_basis(d, N):
    return MonomialBasis(d, N)


def _mul_vectors(x, y, basis, p):
    off = basis.offsets
    N = basis.N
    xb = [x[off[k]:off[k + 1]] for k in range(N + 1)]
    yb = [y[off[k]:off[k + 1]] for k in range(N + 1)]
    xnz = [bool(b.any()) for b in xb]
    ynz = [bool(b.any()) for b in yb]
    out = np.zeros(basis.dim, dtype=np.int64)
    for a in range(N + 1):
        if not xnz[a]:
            continue
        for b in range(N + 1 - a):
            if ynz[b]:
                out[off[a + b]:off[a + b + 1]] += np.outer(xb[a], yb[b]).ravel()
    out %= p
    return out


class TruncatedSeries:
    """Element of F_p<<u_0..u_{d-1}>> modulo all monomials of degree > N.

    Immutable.  Coefficients live in a flat residue vector indexed by
    :class:`MonomialBasis`; :attr:`coeffs` exposes the sparse view.
    """

    __slots__ = ("d", "N", "p", "_vec")

    def __init__(self, d, N, p, coeffs=None):
        check_prime(p)
        basis = monomial_basis(d, N)
        vec = np.zeros(basis.dim, dtype=np.int64)
        for mono, c in (coeffs or {}).items():
            idx = basis.index(tuple(mono))
            vec[idx] = (vec[idx] + int(c)) % p
        self._set(d, N, p, vec)

    def _set(self, d, N, p, vec):
        self.d, self.N, self.p = d, N, p
        vec.flags.writeable = False
        self._vec = vec

    @classmethod
    def from_vector(cls, d, N, p, vec):
        basis = monomial_basis(d, N)
        vec = np.asarray(vec, dtype=np.int64)
        if vec.shape != (basis.dim,):
            raise ParameterError(f"vector length {vec.shape} != ambient dimension {basis.dim}")
        obj = cls.__new__(cls)
        obj._set(d, N, p, vec % p)
        return obj

    @classmethod
    def zero(cls, d, N, p):
        return cls(d, N, p)

    @classmethod
    def one(cls, d, N, p):
        return cls(d, N, p, {(): 1})

    @classmethod
    def generator(cls, i, d, N, p):
        """The variable ``u_i``."""
        return cls(d, N, p, {(i,): 1})

    @property
    def basis(self):
        return monomial_basis(self.d, self.N)

    @property
    def vector(self):
        return self._vec

    @property
    def coeffs(self):
        basis = self.basis
        return {basis.monomial(int(i)): int(self._vec[i]) for i in np.flatnonzero(self._vec)}

    @property
    def constant_term(self):
        return int(self._vec[0])

    def __len__(self):
        return int(np.count_nonzero(self._vec))

    def is_zero(self):
        return not self._vec.any()

    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if (self.d, self.N, self.p) != (other.d, other.N, other.p):
            raise ParameterError(
                f"mismatched parameters (d, N, p): {(self.d, self.N, self.p)} vs "
                f"{(other.d, other.N, other.p)}"
            )
        return True

    def _new(self, vec):
        return TruncatedSeries.from_vector(self.d, self.N, self.p, vec)

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._new(self._vec + other._vec)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._new(self._vec - other._vec)

    def __neg__(self):
        return self._new(-self._vec)

    def scale(self, c):
        return self._new(self._vec * (int(c) % self.p))

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._new(_mul_vectors(self._vec, other._vec, self.basis, self.p))

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncatedSeries.one(self.d, self.N, self.p)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.d, self.N, self.p) == (other.d, other.N, other.p) and np.array_equal(
            self._vec, other._vec
        )

    def __hash__(self):
        return hash((self.d, self.N, self.p, self._vec.tobytes()))

    def __repr__(self):
        terms = []
        for mono, c in sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0])):
            name = "*".join(f"u{j}" for j in mono) or "1"
            terms.append(name if c == 1 else f"{c}*{name}")
        body = " + ".join(terms) if terms else "0"
        return f"TruncatedSeries({body}; d={self.d}, N={self.N}, p={self.p})"

    def lowest_degree(self):
        """Degree of the lowest nonzero term; the zero series is above truncation."""
        nz = np.flatnonzero(self._vec)
        if nz.size == 0:
            return AboveTruncation(self.N + 1)
        return int(self.basis.degrees[nz[0]])

    def inverse(self):
        c0 = self.constant_term
        if c0 == 0:
            raise NonUnitError("series with zero constant term is not invertible")
        c0_inv = pow(c0, -1, self.p)
        # a = c0 (1 - y) with y in the augmentation ideal; Horner on sum y^k
        y = -(self.scale(c0_inv) - TruncatedSeries.one(self.d, self.N, self.p))
        one = TruncatedSeries.one(self.d, self.N, self.p)
        v = y.lowest_degree()
        if isinstance(v, AboveTruncation):
            return one.scale(c0_inv)
        # y^k vanishes once k * v > N
        b = one
        for _ in range(self.N // v):
            b = one + y * b
        return b.scale(c0_inv)

    def truncate(self, M):
        """Same series viewed in the algebra truncated at degree ``M <= N``."""
        if M > self.N:
            raise ParameterError(f"cannot truncate from N={self.N} up to {M}")
        basis = monomial_basis(self.d, M)
        return TruncatedSeries.from_vector(self.d, M, self.p, self._vec[: basis.dim].copy())


def series_add(a, b):
    return a + b


def series_mul(a, b):
    return a * b


def series_inverse(a):
    return a.inverse()


def lowest_degree(a):
    return a.lowest_degree()


def _matmul_mod(a, b, p):
    # float64 BLAS is exact while inner_dim * (p-1)^2 < 2^53 (guaranteed by MAX_PRIME)
    prod = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
    return np.mod(prod, p)


_BASE_ROWS = 48


def _rref_base(m, p, limit):
    m = np.mod(m, p)
    n = m.shape[0]
    done = np.zeros(n, dtype=bool)
    order = []
    while True:
        head = m[:, :limit] != 0
        head[done] = False
        has = head.any(axis=1)
        if not has.any():
            break
        lead = np.where(has, head.argmax(axis=1), limit)
        i = int(lead.argmin())
        q = int(lead[i])
        m[i] = np.mod(m[i] * pow(int(m[i, q]), -1, p), p)
        col = m[:, q].copy()
        col[i] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = np.mod(m[hit] - np.outer(col[hit], m[i]), p)
        done[i] = True
        order.append((q, i))
    order.sort()
    rows = [i for _, i in order]
    piv = np.array([q for q, _ in order], dtype=np.int64)
    rest = m[~done]
    rest = rest[rest.any(axis=1)]
    return m[rows], piv, rest


def rref_mod_p(m, p, limit=None):
    """Row-reduce ``m`` over F_p, choosing pivots only among the first ``limit`` columns.

    Returns ``(E, pivots, rest)``: ``E`` is in reduced row-echelon form with
    ``E[:, pivots]`` the identity, and ``rest`` holds the remaining nonzero rows,
    all of which vanish on the first ``limit`` columns.  Row and column counts
    are arbitrary; arrays are float64 holding exact residues.
    """
    m = np.asarray(m, dtype=np.float64)
    if limit is None:
        limit = m.shape[1]
    if m.shape[0] <= _BASE_ROWS:
        return _rref_base(m, p, limit)
    h = m.shape[0] // 2
    ea, pa, ra = rref_mod_p(m[:h], p, limit)
    b = m[h:]
    if pa.size:
        b = np.mod(b - _matmul_mod(b[:, pa], ea, p), p)
    b = b[b.any(axis=1)]
    if b.shape[0] == 0:
        return ea, pa, ra
    eb, pb, rb = rref_mod_p(b, p, limit)
    if pb.size and pa.size:
        ea = np.mod(ea - _matmul_mod(ea[:, pb], eb, p), p)
    e = np.vstack([ea, eb])
    piv = np.concatenate([pa, pb])
    order = np.argsort(piv, kind="stable")
    return e[order], piv[order], np.vstack([ra, rb])


class FpSubspace:
    """Subspace of F_p^dim kept in reduced row-echelon form.

    The pivot of a row is its first nonzero coordinate, i.e. the lowest-degree
    monomial when vectors come from :class:`TruncatedSeries`.  Rows are ordered
    by strictly increasing pivot.  Instances are mutated in place by
    :meth:`insert` and :meth:`extend`.
    """

    def __init__(self, dim, p):
        check_prime(p)
        self.dim = int(dim)
        self.p = p
        self._rows = np.zeros((0, self.dim), dtype=np.float64)
        self._pivots = np.zeros(0, dtype=np.int64)

    @classmethod
    def from_rref(cls, rows, pivots, p):
        """Adopt rows that are already in reduced row-echelon form."""
        rows = np.asarray(rows, dtype=np.float64)
        space = cls(rows.shape[1], p)
        space._rows = rows
        space._pivots = np.asarray(pivots, dtype=np.int64)
        return space

    @property
    def rank(self):
        return self._rows.shape[0]

    @property
    def rows(self):
        return self._rows.astype(np.int64)

    @property
    def pivots(self):
        return self._pivots.copy()

    def copy(self):
        return FpSubspace.from_rref(self._rows.copy(), self._pivots.copy(), self.p)

    def _as_matrix(self, vectors):
        m = np.atleast_2d(np.asarray(vectors))
        if m.ndim != 2 or m.shape[1] != self.dim:
            raise ParameterError(f"vector dimension {m.shape[-1]} != ambient dimension {self.dim}")
        return np.mod(m.astype(np.float64), self.p)

    def reduce(self, vectors):
        """Remainders of ``vectors`` modulo the subspace (zero at every pivot)."""
        m = self._as_matrix(vectors)
        if self.rank and m.shape[0]:
            m = np.mod(m - _matmul_mod(m[:, self._pivots], self._rows, self.p), self.p)
        return m.astype(np.int64)

    def contains(self, v):
        return not self.reduce(v).any()

    def insert(self, v):
        """Add one vector; returns True iff the rank grew."""
        return self.extend(v).shape[0] == 1

    def extend(self, vectors):
        """Add many vectors; returns the newly spanned rows (RREF among themselves)."""
        m = self._as_matrix(vectors)
        if self.rank and m.shape[0]:
            m = np.mod(m - _matmul_mod(m[:, self._pivots], self._rows, self.p), self.p)
        m = m[m.any(axis=1)]
        if m.shape[0] == 0:
            return m.astype(np.int64)
        new_rows, new_piv, _ = rref_mod_p(m, self.p)
        if self.rank:
            self._rows = np.mod(
                self._rows - _matmul_mod(self._rows[:, new_piv], new_rows, self.p), self.p
            )
        rows = np.vstack([self._rows, new_rows])
        piv = np.concatenate([self._pivots, new_piv])
        order = np.argsort(piv, kind="stable")
        self._rows = rows[order]
        self._pivots = piv[order]
        return new_rows.astype(np.int64)


def subspace_insert(space, v):
    """Functional form of :meth:`FpSubspace.insert`: returns ``(new_space, inserted)``.

    The argument is left untouched.
    """
    out = space.copy()
    inserted = out.insert(v)
    return out, inserted
