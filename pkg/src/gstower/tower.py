"""Growth bounds for Galois groups along split-prime Z_p-towers.

A tower is described by the base field data (:class:`TowerSpec`), how each
prime above p decomposes as one climbs (:class:`DecompositionModel`) and a
model for the p-rank of the S-class group (:class:`ClassGroupModel`).  From
these, every per-level quantity is an exact integer or rational.

Primes are indexed from 1 as in the usual ordering: prime 1 splits
completely, primes 2..T1 keep splitting, the rest eventually stop.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from sympy import isprime

from .errors import HypothesisError, ModelError, ParameterError
from .gspoly import certified_negativity, m_lower_bound, q_at_tn

UNBOUNDED = None


@dataclass(frozen=True)
class TowerSpec:
    p: int
    deg: int
    local_data: tuple
    contains_mu_p: bool = True
    T1: int = 1
    T2: int = None
    k: int = 1

    def __post_init__(self):
        if self.p < 3 or not isprime(self.p):
            raise ParameterError(f"p must be an odd prime, got {self.p}")
        data = tuple((int(e), int(f)) for e, f in self.local_data)
        object.__setattr__(self, "local_data", data)
        if not data:
            raise ModelError("at least one prime above p is required")
        if any(e < 1 or f < 1 for e, f in data):
            raise ModelError("ramification indices and inertia degrees must be >= 1")
        if sum(e * f for e, f in data) != self.deg:
            raise ModelError(f"sum of e_i*f_i is {sum(e * f for e, f in data)}, not deg={self.deg}")
        if self.contains_mu_p and self.deg % 2:
            raise ModelError(f"deg={self.deg} is odd, but a field containing mu_p is totally imaginary")
        if self.T2 is None:
            object.__setattr__(self, "T2", self.g)
        if not 1 <= self.T1 <= self.T2 <= self.g:
            raise ModelError(f"need 1 <= T1 <= T2 <= g, got T1={self.T1}, T2={self.T2}, g={self.g}")
        if self.k < 1:
            raise ParameterError("k must be >= 1")

    @property
    def g(self):
        return len(self.local_data)

    @property
    def d(self):
        """Local degrees d_i = e_i f_i."""
        return [e * f for e, f in self.local_data]


@dataclass(frozen=True)
class DecompositionModel:
    """Per prime: split delay a_i and split cap c_i (None means unbounded)."""

    split_delay: tuple
    split_cap: tuple

    def __post_init__(self):
        object.__setattr__(self, "split_delay", tuple(int(a) for a in self.split_delay))
        object.__setattr__(
            self, "split_cap", tuple(None if c is None else int(c) for c in self.split_cap)
        )
        if len(self.split_delay) != len(self.split_cap):
            raise ModelError("split_delay and split_cap must have the same length")
        if any(a < 0 for a in self.split_delay):
            raise ModelError("split delays must be >= 0")
        if any(c is not None and c < 0 for c in self.split_cap):
            raise ModelError("split caps must be >= 0")

    def validate(self, spec):
        if len(self.split_delay) != spec.g:
            raise ModelError(f"model covers {len(self.split_delay)} primes, spec has {spec.g}")
        if self.split_delay[0] != 0 or self.split_cap[0] is not None:
            raise ModelError("prime 1 must split completely (delay 0, unbounded cap)")
        for i in range(1, spec.g):
            bounded = self.split_cap[i] is not None
            if i < spec.T1 and bounded:
                raise ModelError(f"prime {i + 1} <= T1 must have an unbounded cap")
            if i >= spec.T1 and not bounded:
                raise ModelError(f"prime {i + 1} > T1 must have a finite cap")

    def g_exponent(self, i, n):
        a, c = self.split_delay[i - 1], self.split_cap[i - 1]
        x = max(n - a, 0)
        return x if c is None else min(x, c)

    def g_at(self, p, i, n):
        """g_i(n), the number of primes of the n-th layer above prime i."""
        return p ** self.g_exponent(i, n)

    def ef_at(self, p, i, n):
        """e_i(n) f_i(n) = p^n / g_i(n)."""
        return p ** (n - self.g_exponent(i, n))

    @classmethod
    def standard(cls, g, T1=1):
        """Primes 1..T1 split from the start; the others never split."""
        return cls((0,) * g, tuple([None] * T1 + [0] * (g - T1)))


@dataclass(frozen=True)
class ClassGroupModel:
    mu: int = 0
    lam: int = 0
    nu: int = 0

    def __post_init__(self):
        if self.mu < 0 or self.lam < 0:
            raise ModelError("mu and lambda must be >= 0")

    def s(self, p, n):
        return max(0, self.mu * p**n + self.lam * n + self.nu)


@dataclass(frozen=True)
class BoundProfile:
    n: int
    D: int
    R: int
    Rp: int
    t: Fraction
    n_v: tuple = field(default=())


def shafarevich_dims(g_list, degree_of_Ln, s):
    """(h1, h2) for the Galois group of the maximal p-extension unramified outside p."""
    if degree_of_Ln % 2:
        raise ModelError(f"degree {degree_of_Ln} is odd; the field must be totally imaginary")
    if s < 0:
        raise ModelError("class group rank must be >= 0")
    total = sum(g_list)
    return total + degree_of_Ln // 2 + s, total - 1 + s


@dataclass(frozen=True)
class Condition:
    label: str
    lhs: int
    op: str
    rhs: int
    passed: bool

    @property
    def comparison(self):
        shown = self.op if self.passed else {">": "<=", ">=": "<"}.get(self.op, "!" + self.op)
        return f"{self.lhs} {shown} {self.rhs}"

    def __str__(self):
        return f"({self.label}) {self.comparison}: {'pass' if self.passed else 'FAIL'}"


@dataclass(frozen=True)
class HypothesisReport:
    conditions: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.conditions)

    @property
    def failures(self):
        return [c for c in self.conditions if not c.passed]

    def __getitem__(self, label):
        for c in self.conditions:
            if c.label == str(label):
                return c
        raise KeyError(label)

    def __str__(self):
        return "\n".join(str(c) for c in self.conditions)


def check_hypotheses(spec):
    d = spec.d
    tail = sum(x * x for x in d[1:])
    conds = (
        Condition("1", spec.g, ">", 1, spec.g > 1),
        Condition("2", int(spec.contains_mu_p), "==", 1, bool(spec.contains_mu_p)),
        Condition("3", spec.deg, ">=", 2 * (d[0] + 1), spec.deg >= 2 * (d[0] + 1)),
        Condition("4", (spec.deg + 2) ** 2, ">", 8 * tail, (spec.deg + 2) ** 2 > 8 * tail),
    )
    return HypothesisReport(conds)


def local_unit_rank(spec, model, n, i):
    """n_v for a prime v of the n-th layer above prime i (1-based)."""
    if not spec.contains_mu_p:
        raise ModelError("the local unit rank formula needs mu_p in the base field")
    if not 1 <= i <= spec.g:
        raise ParameterError(f"prime index {i} outside 1..{spec.g}")
    return model.ef_at(spec.p, i, n) * spec.d[i - 1] + 2


def bound_profile(spec, dmodel, cmodel, n):
    if n < 0:
        raise ParameterError("n must be >= 0")
    dmodel.validate(spec)
    p = spec.p
    s = cmodel.s(p, n)
    G = [dmodel.g_at(p, i, n) for i in range(1, spec.g + 1)]
    nv = tuple(local_unit_rank(spec, dmodel, n, i) for i in range(1, spec.g + 1))
    D, r = shafarevich_dims(G, p**n * spec.deg, s)
    R = r + sum(Gi * comb(v, 2) for Gi, v in zip(G, nv))
    Rp = sum(Gi * v for Gi, v in zip(G, nv))
    return BoundProfile(n, D, R, Rp, Fraction(D, 2 * R), nv)


def asymptotic_constants(spec):
    """A = (1 + deg/2)^2 and B = sum_{i>=2} d_i^2 / 2."""
    A = (1 + Fraction(spec.deg, 2)) ** 2
    B = Fraction(sum(x * x for x in spec.d[1:]), 2)
    return A, B


def thm_constant(spec, cmodel):
    report = check_hypotheses(spec)
    if not report.passed:
        raise HypothesisError("tower hypotheses fail:\n" + str(report), report)
    return Fraction(2 * sum(x * x for x in spec.d[1:]), 2 * spec.T1 + spec.deg + 2 * cmodel.mu)


def cyclotomic_spec(p, ell, T1=1, contains_mu_p=True):
    """Q(mu_{p ell}) data: degree (p-1)(ell-1), ell-1 primes above p with d_i = p-1."""
    if p < 3 or not isprime(p):
        raise ParameterError(f"p must be an odd prime, got {p}")
    if not isprime(ell):
        raise ParameterError(f"ell must be prime, got {ell}")
    if ell % p != 1:
        raise ParameterError(f"ell = {ell} is not 1 mod p = {p}")
    g = ell - 1
    return TowerSpec(p, (p - 1) * g, ((p - 1, 1),) * g, contains_mu_p, T1)


def corollary_constant(p, ell, T1=1, mu=0):
    spec = cyclotomic_spec(p, ell, T1)
    if ell < 11:
        raise HypothesisError(
            f"ell = {ell} < 11; the cyclotomic constant needs ell >= 11 "
            "(the general hypothesis check may still pass for this field)",
            check_hypotheses(spec),
        )
    value = Fraction(2 * (ell - 2) * (p - 1) ** 2, 2 * T1 + (p - 1) * (ell - 1) + 2 * mu)
    general = thm_constant(spec, ClassGroupModel(mu))
    if value != general:
        raise AssertionError(f"cyclotomic constant {value} disagrees with general {general}")
    return value


@dataclass(frozen=True)
class GrowthRow:
    profile: BoundProfile
    t_in_unit_interval: bool
    q_value: Fraction
    certified: bool
    rho_bound: Fraction
    m_bound: Fraction

    @property
    def n(self):
        return self.profile.n

    @property
    def m_clamped(self):
        return max(self.m_bound, Fraction(0))


@dataclass(frozen=True)
class GrowthTable:
    spec: TowerSpec
    rows: tuple
    C_max: Fraction
    A: Fraction
    B: Fraction

    @property
    def m_limit(self):
        """A/4 - B, the limit of m_bound / p^(2n)."""
        return self.A / 4 - self.B

    @property
    def n0(self):
        """Smallest n in range with a certified row, or None."""
        return next((row.n for row in self.rows if row.certified), None)


def growth_table(spec, dmodel, cmodel, n_range, k=None):
    """Certified rho and m bounds per layer.

    The t^(p^k) term is majorised by t^p on (0, 1), so the rows are valid
    for every k >= 1 and ``k`` is only recorded.
    """
    C = thm_constant(spec, cmodel)
    A, B = asymptotic_constants(spec)
    p = spec.p
    rows = []
    for n in n_range:
        prof = bound_profile(spec, dmodel, cmodel, n)
        inside = 0 < prof.t < 1
        q = q_at_tn(prof.D, prof.R, prof.Rp, p)
        ok = inside and certified_negativity(prof.D, prof.R, prof.Rp, p)
        rho = Fraction(2 * prof.R, prof.D) if ok else None
        m = m_lower_bound(prof.D, prof.R, prof.Rp, p)
        rows.append(GrowthRow(prof, inside, q, ok, rho, m))
    rows.sort(key=lambda row: row.n)
    return GrowthTable(spec, tuple(rows), C, A, B)


# configuration ---------------------------------------------------------------

def tower_from_config(source):
    """(spec, dmodel, cmodel) from a config mapping or JSON text.

    Either the full form ``{p, deg, primes, contains_mu_p, T1, T2,
    class_model, k}`` or the cyclotomic shorthand ``{p, ell, T1, mu}``,
    which uses the standard model.
    """
    data = json.loads(source) if isinstance(source, str) else dict(source)
    try:
        p = int(data["p"])
        if "ell" in data:
            T1 = int(data.get("T1", 1))
            spec = cyclotomic_spec(p, int(data["ell"]), T1)
            if "k" in data:
                spec = TowerSpec(spec.p, spec.deg, spec.local_data, spec.contains_mu_p, T1, None, int(data["k"]))
            return spec, DecompositionModel.standard(spec.g, T1), ClassGroupModel(int(data.get("mu", 0)))
        primes = data["primes"]
        spec = TowerSpec(
            p,
            int(data["deg"]),
            tuple((q["e"], q["f"]) for q in primes),
            bool(data.get("contains_mu_p", True)),
            int(data.get("T1", 1)),
            data.get("T2"),
            int(data.get("k", 1)),
        )
        dmodel = DecompositionModel(
            tuple(q.get("split_delay", 0) for q in primes),
            tuple(q.get("split_cap") for q in primes),
        )
        cm = data.get("class_model", {})
        cmodel = ClassGroupModel(int(cm.get("mu", 0)), int(cm.get("lambda", 0)), int(cm.get("nu", 0)))
    except KeyError as exc:
        raise ParameterError(f"tower config is missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"bad tower config: {exc}") from None
    dmodel.validate(spec)
    return spec, dmodel, cmodel
