"""Continued fractions, best-approximation verification, and generation of
translation vectors whose convergent denominators obey prescribed growth.

All denominator comparisons are exact integer arithmetic; real values are
materialized only at a caller-requested precision.  Where a check depends on
the (irrational) value of a finite table, the value is replaced by the exact
rational interval spanned by the last two convergents, so every verdict is
rigorous or explicitly "undecided".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Literal

import gmpy2
import mpmath
from gmpy2 import mpfr, mpz

from .errors import CapacityError, InvalidInputError, PrecisionError
from .report import CriterionReport

__all__ = [
    "PartialQuotients",
    "ConvergentTable",
    "GrowthPolicy",
    "TranslationVector",
    "convergents",
    "nearest_int_distance",
    "best_approx_verify",
    "approx_bounds_verify",
    "build_liouville_pair",
    "real_value",
    "paper_growth",
]

Axis = Literal["x", "y"]


@dataclass(frozen=True)
class PartialQuotients:
    """Finite partial-quotient sequence [a0; a1, a2, ...]."""

    a: tuple[int, ...]

    def __post_init__(self):
        if len(self.a) == 0:
            raise InvalidInputError("empty quotient list")
        if any(int(ai) < 1 for ai in self.a[1:]):
            raise InvalidInputError("partial quotients a_i must be >= 1 for i >= 1")
        object.__setattr__(self, "a", tuple(int(ai) for ai in self.a))

    def __len__(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class ConvergentTable:
    """Rows (n, p_n, q_n).  Normally produced by convergents(); rows may be
    constructed directly (e.g. deliberately corrupted) for verifier tests."""

    rows: tuple[tuple[int, int, int], ...]

    @property
    def depth(self) -> int:
        """Largest tabulated index n."""
        return self.rows[-1][0]

    def p(self, n: int) -> int:
        return self.rows[n][1]

    def q(self, n: int) -> int:
        return self.rows[n][2]

    def fraction(self, n: int) -> Fraction:
        return Fraction(self.p(n), self.q(n))

    def bracket(self) -> tuple[Fraction, Fraction]:
        """Exact open interval containing every proper extension of the table
        (in particular the infinite continued fraction): between the last
        convergent p_L/q_L and the mediant (p_L + p_{L-1})/(q_L + q_{L-1}).
        Returned as an ordered closed pair; extensions are strictly interior
        except that the mediant is attained only by the (excluded) one-term
        extension a_{L+1} = 1 with nothing after it."""
        if len(self.rows) < 2:
            a0 = self.fraction(0)
            return a0, a0 + 1
        lo = self.fraction(self.depth)
        hi = Fraction(self.p(self.depth) + self.p(self.depth - 1),
                      self.q(self.depth) + self.q(self.depth - 1))
        return (lo, hi) if lo <= hi else (hi, lo)

    def validate(self, pq: PartialQuotients) -> None:
        """Exact recurrence + coprimality + monotonicity check against pq."""
        a = pq.a
        if len(self.rows) != len(a):
            raise InvalidInputError("table depth does not match quotient count")
        for n, p, q in self.rows:
            if math.gcd(p, q) != 1:
                raise InvalidInputError(f"gcd(p_{n}, q_{n}) != 1")
        if self.rows[0][1:] != (a[0], 1):
            raise InvalidInputError("row 0 must be (a0, 1)")
        if len(a) > 1 and self.rows[1][1:] != (a[0] * a[1] + 1, a[1]):
            raise InvalidInputError("row 1 must be (a0*a1 + 1, a1)")
        for n in range(2, len(a)):
            if self.p(n) != a[n] * self.p(n - 1) + self.p(n - 2):
                raise InvalidInputError(f"p recurrence fails at n={n}")
            if self.q(n) != a[n] * self.q(n - 1) + self.q(n - 2):
                raise InvalidInputError(f"q recurrence fails at n={n}")
            if self.q(n) <= self.q(n - 1):
                raise InvalidInputError(f"q_n not increasing at n={n}")


def convergents(pq: PartialQuotients) -> ConvergentTable:
    """Convergent table of a finite continued fraction.

    Seeds p0=a0, q0=1, p1=a0*a1+1, q1=a1, then the standard recurrences,
    all exact.
    """
    a = pq.a
    rows = [(0, a[0], 1)]
    if len(a) > 1:
        rows.append((1, a[0] * a[1] + 1, a[1]))
    for n in range(2, len(a)):
        p = a[n] * rows[n - 1][1] + rows[n - 2][1]
        q = a[n] * rows[n - 1][2] + rows[n - 2][2]
        rows.append((n, p, q))
    return ConvergentTable(tuple(rows))


def nearest_int_distance(u):
    """min over integers m of |u - m|; returns the same numeric type family
    as the input (Fraction stays exact, floats stay floats)."""
    if isinstance(u, Fraction):
        m = (2 * u.numerator + u.denominator) // (2 * u.denominator)
        return abs(u - m)
    if isinstance(u, mpmath.mpf):
        return abs(u - mpmath.nint(u))
    if isinstance(u, mpfr):
        return abs(u - gmpy2.rint(u))
    return abs(u - round(u))


# --------------------------------------------------------------------------
# exact-interval distance machinery
# --------------------------------------------------------------------------

def _dist_interval(k: int, A: int, B: int, D: int) -> tuple[int, int]:
    """Interval (scaled by D) of |||k*alpha||| given alpha*D in [A, B].

    Returns (lo, hi) with lo <= |||k alpha|||*D <= hi, exact integers.
    """
    x = (k * A) % D
    w = k * (B - A)
    half_up = (D + 1) // 2
    if w >= D:
        return 0, half_up
    y = x + w
    if y >= D:  # contains the lattice point D
        hi = half_up if (2 * x <= D or 2 * (y - D) >= D) else max(D - x, y - D)
        return 0, hi
    d_x = min(x, D - x)
    d_y = min(y, D - y)
    lo = min(d_x, d_y)
    hi = half_up if (2 * x <= D <= 2 * y) else max(d_x, d_y)
    return lo, hi


def _resolve_table(tv, axis: Axis) -> ConvergentTable:
    if isinstance(tv, ConvergentTable):
        return tv
    if isinstance(tv, TranslationVector):
        return tv.table(axis)
    raise InvalidInputError(f"expected TranslationVector or ConvergentTable, got {type(tv)!r}")


def best_approx_verify(tv, axis: Axis = "x", n: int = 1,
                       cap: int = 100_000) -> CriterionReport:
    """Check |||q_{n-1} alpha||| < |||k alpha||| for all 1 <= k < q_n
    (k = q_{n-1} itself attains equality and is skipped), by exhaustive scan
    in exact integer arithmetic against the convergent-bounded interval.
    """
    table = _resolve_table(tv, axis)
    if not (1 <= n <= table.depth):
        raise InvalidInputError(f"row n={n} not in table (depth {table.depth})")
    qn = table.q(n)
    if qn > cap:
        raise CapacityError(
            f"q_{n} = {qn} exceeds enumeration cap {cap}",
            partial=CriterionReport(
                criterion=f"best-approx[{axis}, n={n}]", passed=False,
                status="capacity", parameters={"q_n": qn, "cap": cap}),
        )
    lo, hi = table.bracket()
    D = lo.denominator * hi.denominator
    A = lo.numerator * (D // lo.denominator)
    B = hi.numerator * (D // hi.denominator)
    k_ref = table.q(n - 1)
    ref_lo, ref_hi = _dist_interval(k_ref, A, B, D)
    worst_margin = None
    witness = None
    undecided = []
    for k in range(1, qn):
        if k == k_ref:
            continue
        d_lo, d_hi = _dist_interval(k, A, B, D)
        if ref_hi < d_lo:
            margin = (d_lo - ref_hi) / D
            if worst_margin is None or margin < worst_margin:
                worst_margin = margin
        elif d_hi < ref_lo:
            witness = {"k": k, "dist_upper": f"{d_hi}/{D}", "ref_lower": f"{ref_lo}/{D}"}
            break
        else:
            undecided.append(k)
    params = {"axis": axis, "n": n, "q_n": qn, "k_ref": k_ref}
    if witness is not None:
        return CriterionReport(criterion=f"best-approx[{axis}, n={n}]", passed=False,
                               witness=witness, parameters=params)
    if undecided:
        return CriterionReport(criterion=f"best-approx[{axis}, n={n}]", passed=False,
                               status="undecided", parameters=params,
                               details={"ambiguous_k": undecided[:16]})
    return CriterionReport(criterion=f"best-approx[{axis}, n={n}]", passed=True,
                           margin=float("inf") if worst_margin is None else float(worst_margin * qn),
                           parameters=params,
                           details={"scanned_k": qn - 1})


def approx_bounds_verify(tv, axis: Axis = "x", n: int = 1,
                         bits: int = 256) -> CriterionReport:
    """Check 1/(q_n (q_n + q_{n+1})) <= (-1)^n (alpha - p_n/q_n) <= 1/(q_n q_{n+1})
    with interval arithmetic at `bits` precision."""
    table = _resolve_table(tv, axis)
    if n + 1 > table.depth:
        raise InvalidInputError(f"rows n={n}, n+1 must both be present (depth {table.depth})")
    lo, hi = table.bracket()
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = bits
        a_iv = iv.mpf(lo.numerator) / lo.denominator
        b_iv = iv.mpf(hi.numerator) / hi.denominator
        alpha_iv = iv.mpf([a_iv.a, b_iv.b])
        pn, qn, qn1 = table.p(n), table.q(n), table.q(n + 1)
        diff = (alpha_iv - iv.mpf(pn) / qn) * ((-1) ** n)
        lower = iv.mpf(1) / (iv.mpf(qn) * (qn + qn1))
        upper = iv.mpf(1) / (iv.mpf(qn) * qn1)
        holds = (diff.a >= lower.b) and (diff.b <= upper.a)
        violated = (diff.b < lower.a) or (diff.a > upper.b)
        margin = None
        if holds:
            da, db = mpmath.mpf(diff.a), mpmath.mpf(diff.b)
            lb, ua = mpmath.mpf(lower.b), mpmath.mpf(upper.a)
            m1 = float((da - lb) / lb) if lb else float("inf")
            m2 = float((ua - db) / ua) if ua else float("inf")
            margin = 1.0 + min(m1, m2)
    finally:
        iv.prec = old
    params = {"axis": axis, "n": n, "bits": bits}
    name = f"approx-bounds[{axis}, n={n}]"
    if holds:
        return CriterionReport(criterion=name, passed=True, margin=margin, parameters=params)
    if not violated:
        # interval endpoints straddle a bound by rounding only: settle exactly.
        # Extensions fill the open bracket, so closure comparisons with <= are
        # valid for the true value.
        pn, qn, qn1 = table.p(n), table.q(n), table.q(n + 1)
        sgn = (-1) ** n
        ds = sorted((sgn * (lo - Fraction(pn, qn)), sgn * (hi - Fraction(pn, qn))))
        lower_f = Fraction(1, qn * (qn + qn1))
        upper_f = Fraction(1, qn * qn1)
        if ds[0] >= lower_f and ds[1] <= upper_f:
            return CriterionReport(criterion=name, passed=True, margin=1.0,
                                   parameters=params,
                                   details={"decided_by": "exact-rational closure"})
        violated = ds[1] < lower_f or ds[0] > upper_f
    if violated:
        return CriterionReport(criterion=name, passed=False, parameters=params,
                               witness={"n": n, "p_n": str(table.p(n)), "q_n": str(table.q(n))})
    return CriterionReport(criterion=name, passed=False, status="undecided", parameters=params)


# --------------------------------------------------------------------------
# growth policies and vector generation
# --------------------------------------------------------------------------

def paper_growth(q: int, budget_bits: int = 1_000_000) -> int:
    """ceil(e^{3q}) exactly, by directed rounding at escalating precision."""
    # 3q * log2(e), kept in integer arithmetic (q itself may be astronomical)
    est_bits = (3 * int(q) * 14427) // 10000 + 16
    if est_bits > budget_bits:
        raise CapacityError(
            f"e^(3q) with q of {int(q).bit_length()} bits needs ~{est_bits} bits "
            f"> budget {budget_bits}")
    prec = est_bits + 64
    for _ in range(8):
        with gmpy2.context(precision=prec, round=gmpy2.RoundDown):
            lo = gmpy2.exp(mpfr(3 * q))
        with gmpy2.context(precision=prec, round=gmpy2.RoundUp):
            hi = gmpy2.exp(mpfr(3 * q))
        c_lo = int(gmpy2.ceil(lo))
        c_hi = int(gmpy2.ceil(hi))
        if c_lo == c_hi:
            return c_lo
        prec *= 2
    raise PrecisionError(f"could not certify ceil(e^(3*{q}))")


@dataclass(frozen=True)
class GrowthPolicy:
    """How fast successive denominators must grow.

    paper mode:    G(q) = ceil(e^{3q})   (representable for the first level only)
    relaxed mode:  user G with G(q) > q  (default cubic), so several levels fit
                   in the big-integer budget.
    """

    mode: Literal["paper", "relaxed"] = "relaxed"
    growth: Callable[[int], int] | None = None
    max_level: int = 4
    seed_a1: int = 3
    seed_a0: tuple[int, int] = (0, 0)
    max_bits: int = 1_000_000
    bits: int = 256

    def G(self, q: int) -> int:
        if self.mode == "paper":
            return paper_growth(q, self.max_bits)
        g = self.growth if self.growth is not None else (lambda v: v ** 3)
        out = int(g(q))
        if out <= q:
            raise InvalidInputError(f"growth function must satisfy G(q) > q (got G({q}) = {out})")
        return out


@dataclass(frozen=True)
class TranslationVector:
    """Pair (alpha, alpha') with interleaved continued-fraction data.

    ``value(axis)`` materializes the value at the stated precision; exact
    work goes through ``alpha_rational`` (the deepest convergent, with a
    rigorous error bound) or ``bracket``.
    """

    pq_x: PartialQuotients
    pq_y: PartialQuotients
    table_x: ConvergentTable
    table_y: ConvergentTable
    bits: int
    max_level: int
    growth_report: tuple[dict, ...] = field(default_factory=tuple)

    def table(self, axis: Axis) -> ConvergentTable:
        return self.table_x if axis == "x" else self.table_y

    def quotients(self, axis: Axis) -> PartialQuotients:
        return self.pq_x if axis == "x" else self.pq_y

    def q(self, axis: Axis, n: int) -> int:
        return self.table(axis).q(n)

    def alpha_rational(self, axis: Axis) -> tuple[int, int]:
        """Deepest convergent (num, den); |alpha - num/den| <= 1/den^2 and in
        fact <= 1/(den * q_{L-1} + den^2) for the infinite extension."""
        t = self.table(axis)
        return t.p(t.depth), t.q(t.depth)

    def alpha_error_bound(self, axis: Axis) -> Fraction:
        t = self.table(axis)
        return Fraction(1, t.q(t.depth) * t.q(t.depth - 1))

    def bracket(self, axis: Axis) -> tuple[Fraction, Fraction]:
        return self.table(axis).bracket()

    def value(self, axis: Axis) -> mpmath.mpf:
        return real_value(self.table(axis), self.bits)

    def verify_invariants(self) -> bool:
        """|value - p_n/q_n| <= 1/(q_n q_{n+1}) for all tabulated n (exact,
        via the bracket rather than the rounded value)."""
        for axis in ("x", "y"):
            t = self.table(axis)
            lo, hi = t.bracket()
            for n in range(t.depth):
                bound = Fraction(1, t.q(n) * t.q(n + 1))
                f = t.fraction(n)
                if max(abs(lo - f), abs(hi - f)) > bound:
                    return False
        return True


def real_value(table: ConvergentTable, bits: int) -> mpmath.mpf:
    """Value of the finite continued fraction, correctly rounded to `bits`."""
    if bits < 64:
        raise InvalidInputError("bits must be >= 64")
    if not table.rows:
        raise InvalidInputError("empty table")
    p, q = table.p(table.depth), table.q(table.depth)
    with mpmath.workprec(bits):
        return mpmath.mpf(p) / mpmath.mpf(q)


def _extend_to(target: int, q_prev: int, q_prev2: int) -> tuple[int, int]:
    """Minimal partial quotient a with a*q_prev + q_prev2 >= target."""
    a = max(1, -(-(target - q_prev2) // q_prev))
    return a, a * q_prev + q_prev2


def build_liouville_pair(policy: GrowthPolicy) -> TranslationVector:
    """Alternately extend the two continued fractions with the minimal
    partial quotients achieving q'_n >= G(q_n) and q_{n+1} >= G(q'_n) for
    n = 1..max_level; realized inequalities are recorded exactly."""
    if policy.max_level < 1:
        raise InvalidInputError("max_level must be >= 1")
    a0x, a0y = policy.seed_a0
    ax = [a0x, max(1, policy.seed_a1)]
    ay = [a0y]
    qx = [1, ax[1]]          # q_0, q_1 for alpha
    qy = [1]                 # q'_0
    report: list[dict] = []

    def budget_check(q: int, who: str):
        if q.bit_length() > policy.max_bits:
            raise CapacityError(
                f"{who} needs {q.bit_length()} bits > budget {policy.max_bits}")

    for n in range(1, policy.max_level + 1):
        target = policy.G(qx[n])
        budget_check(target, f"G(q_{n})")
        if n == 1:
            a = max(1, target)
            ay.append(a)
            qy.append(a)  # q'_1 = a'_1
        else:
            a, qn = _extend_to(target, qy[n - 1], qy[n - 2])
            ay.append(a)
            qy.append(qn)
        budget_check(qy[n], f"q'_{n}")
        report.append({"n": n, "inequality": "q'_n >= G(q_n)",
                       "lhs": qy[n], "rhs": target, "holds": qy[n] >= target})
        target2 = policy.G(qy[n])
        budget_check(target2, f"G(q'_{n})")
        a2, qn1 = _extend_to(target2, qx[n], qx[n - 1])
        ax.append(a2)
        qx.append(qn1)
        budget_check(qx[n + 1], f"q_{n + 1}")
        report.append({"n": n, "inequality": "q_{n+1} >= G(q'_n)",
                       "lhs": qx[n + 1], "rhs": target2, "holds": qx[n + 1] >= target2})

    pq_x = PartialQuotients(tuple(ax))
    pq_y = PartialQuotients(tuple(ay))
    tv = TranslationVector(
        pq_x=pq_x, pq_y=pq_y,
        table_x=convergents(pq_x), table_y=convergents(pq_y),
        bits=policy.bits, max_level=policy.max_level,
        growth_report=tuple(report),
    )
    return tv
