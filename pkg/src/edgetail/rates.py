"""Regime quantities and large-deviation rate functions for sparse G(n, p).

Everything here is closed-form arithmetic on (n, p) and tail parameters:
the characteristic degree scale, the typical maximum degree, the binary
relative entropy, the regime classifier, and the rate expressions whose
finite-n surrogates the rest of the package measures.  All logarithms are
natural.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, OrderError

__all__ = [
    "AsymptoticConfig",
    "Regime",
    "RegimeParams",
    "TailSpec",
    "classify_regime",
    "compute_delta_p",
    "compute_lp",
    "rate_deg_lower",
    "rate_deg_upper",
    "rate_dense_upper",
    "rate_lower_tail",
    "rate_lt_lambda1",
    "rate_marginal_upper",
    "rate_upper_tail",
    "relative_entropy",
]

# float comparisons against the "expected count >= 1" threshold are settled
# exactly (rational arithmetic) once they fall inside this band
_EXACT_BAND = 1e-12


def _check_np(n: int, p: float) -> None:
    if int(n) != n or n < 3:
        raise DomainError(f"n must be an integer >= 3, got {n!r}")
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p!r}")


def compute_lp(n: int, p: float) -> float:
    """Characteristic degree scale log n / (log log n - log(np)).

    Defined only where the denominator is positive, i.e. np < log n.
    """
    _check_np(n, p)
    denom = math.log(math.log(n)) - math.log(n * p)
    if denom <= 0.0:
        raise DomainError(
            f"degree scale undefined: log log n - log(np) = {denom:.6g} <= 0")
    return math.log(n) / denom


def relative_entropy(x: float, p: float) -> float:
    """Binary relative entropy x log(x/p) + (1-x) log((1-x)/(1-p)).

    Endpoints x in {0, 1} take their limit values.
    """
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    out = 0.0
    if x > 0.0:
        out += x * math.log(x / p)
    if x < 1.0:
        out += (1.0 - x) * math.log((1.0 - x) / (1.0 - p))
    return out


def _log_expected_count(n: int, s: int, p: float) -> float:
    """log of n * C(n-1, s) * p^s * (1-p)^(n-s)."""
    return (math.log(n)
            + math.lgamma(n) - math.lgamma(s + 1) - math.lgamma(n - s)
            + s * math.log(p) + (n - s) * math.log1p(-p))


def _expected_count_ge_one_exact(n: int, s: int, p: float) -> bool:
    # Fraction(p) is the exact binary value of the float
    pf = Fraction(p)
    val = n * math.comb(n - 1, s) * pf**s * (1 - pf) ** (n - s)
    return val >= 1


def _count_ge_one(n: int, s: int, p: float) -> bool:
    v = _log_expected_count(n, s, p)
    if abs(v) <= _EXACT_BAND:
        return _expected_count_ge_one_exact(n, s, p)
    return v >= 0.0


def compute_delta_p(n: int, p: float) -> int:
    """Typical maximum degree: the largest s >= 0 with
    n * C(n-1, s) * p^s * (1-p)^(n-s) >= 1.

    The expected-count sequence is log-concave in s, so the qualifying set is
    an interval; we locate its right edge by bisection on the decreasing side
    of the mode.  Raises DomainError when no s qualifies.
    """
    _check_np(n, p)
    # the count ratio crosses 1 at s = np - 1, so the mode sits near np;
    # widen by 2 to absorb integer effects
    mode = min(n - 1, max(0, int(n * p)))
    candidates = range(max(0, mode - 2), min(n - 1, mode + 2) + 1)
    best = max(candidates, key=lambda s: _log_expected_count(n, s, p))
    if not _count_ge_one(n, best, p):
        raise DomainError("expected degree count below 1 for every s")
    lo, hi = best, n - 1
    if _count_ge_one(n, hi, p):
        return hi
    # invariant: count(lo) >= 1 > count(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _count_ge_one(n, mid, p):
            lo = mid
        else:
            hi = mid
    return lo


class Regime(enum.Enum):
    BOUNDED_EDGE = "bounded_edge"
    DEGREE_GOVERNED = "degree_governed"
    TRANSITION_WINDOW = "transition_window"
    EDGE_COUNT_GOVERNED = "edge_count_governed"


@dataclass(frozen=True)
class AsymptoticConfig:
    """Finite-n stand-ins for the asymptotic conditions.

    big_c / small_c gate the regime classifier; tau is the slack multiplier
    used by the structural event checks.  Reports quote whichever values were
    in force.
    """

    big_c: float = 10.0
    small_c: float = 0.1
    tau: float = 0.25

    def __post_init__(self):
        if self.big_c <= 0 or self.small_c <= 0 or self.tau <= 0:
            raise DomainError("asymptotic constants must be positive")


def classify_regime(n: int, p: float,
                    consts: AsymptoticConfig = AsymptoticConfig()) -> Regime:
    """Bucket (n, p) by which tail mechanism governs.

    Scanning p upward at fixed n, the value moves through BOUNDED_EDGE,
    DEGREE_GOVERNED, TRANSITION_WINDOW, EDGE_COUNT_GOVERNED in that order and
    never revisits an earlier bucket.
    """
    _check_np(n, p)
    lg = math.log(n)
    ratio = math.sqrt(lg / math.log(lg))
    if math.log(1.0 / (n * p)) >= lg / consts.big_c:
        return Regime.BOUNDED_EDGE
    if n * p > consts.big_c * ratio:
        return Regime.EDGE_COUNT_GOVERNED
    if n * p < consts.small_c * ratio:
        return Regime.DEGREE_GOVERNED
    return Regime.TRANSITION_WINDOW


@dataclass(frozen=True)
class RegimeParams:
    """Derived thresholds used by the structure and tail machinery."""

    n: int
    p: float
    lp: float
    delta_p: int
    high_cut: float          # vertices at or above this degree are "high"
    moderate_cut: float      # vertices strictly above this degree leave Y
    cycle_budget_m: int      # per-vertex disjoint-cycle budget, log-scale
    cycle_budget_m0: int     # uncapped-variant budget, lp-scale
    long_cycle_len: int      # length from which a cycle counts as "long"
    regime: Regime
    consts: AsymptoticConfig = field(default=AsymptoticConfig())

    @classmethod
    def compute(cls, n: int, p: float,
                consts: AsymptoticConfig = AsymptoticConfig()) -> "RegimeParams":
        lp = compute_lp(n, p)
        delta_p = compute_delta_p(n, p)
        lg = math.log(n)
        return cls(
            n=int(n),
            p=float(p),
            lp=lp,
            delta_p=delta_p,
            high_cut=delta_p ** 0.75,
            moderate_cut=n * p * (1.0 + 1.0 / math.log(lg)) + delta_p ** (1.0 / 3.0),
            cycle_budget_m=math.ceil(lg ** (5.0 / 12.0)),
            cycle_budget_m0=math.ceil(lp ** (5.0 / 12.0)),
            long_cycle_len=math.ceil(lg ** (5.0 / 6.0)),
            regime=classify_regime(n, p, consts),
            consts=consts,
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n, "p": self.p, "lp": self.lp, "delta_p": self.delta_p,
            "high_cut": self.high_cut, "moderate_cut": self.moderate_cut,
            "cycle_budget_m": self.cycle_budget_m,
            "cycle_budget_m0": self.cycle_budget_m0,
            "long_cycle_len": self.long_cycle_len,
            "regime": self.regime.value,
            "big_c": self.consts.big_c, "small_c": self.consts.small_c,
            "tau": self.consts.tau,
        }


@dataclass(frozen=True)
class TailSpec:
    """Which order statistics are pushed, which way, and how far.

    target is 'eigenvalue' or 'degree'; side is 'upper' or 'lower'; deltas
    holds one offset per order statistic, validated against the monotonicity
    required for the corresponding rate to make sense.
    """

    target: str
    side: str
    deltas: tuple

    def __post_init__(self):
        if self.target not in ("eigenvalue", "degree"):
            raise DomainError(f"unknown target {self.target!r}")
        if self.side not in ("upper", "lower"):
            raise DomainError(f"unknown side {self.side!r}")
        object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))
        if not self.deltas:
            raise OrderError("at least one offset is required")
        if self.side == "upper":
            _check_nonincreasing_positive(self.deltas)
        else:
            _check_nondecreasing_in_unit(self.deltas)

    @property
    def r(self) -> int:
        return len(self.deltas)

    def rate(self, n: int | None = None, p: float | None = None) -> float:
        if self.target == "eigenvalue":
            return (rate_upper_tail(self.deltas) if self.side == "upper"
                    else rate_lower_tail(self.deltas))
        return (rate_deg_upper(self.deltas) if self.side == "upper"
                else rate_deg_lower(self.deltas))


def _check_nonincreasing_positive(deltas) -> None:
    if any(d <= 0 for d in deltas):
        raise OrderError(f"offsets must be positive, got {deltas}")
    if any(a < b for a, b in zip(deltas, deltas[1:])):
        raise OrderError(f"offsets must be nonincreasing, got {deltas}")


def _check_nondecreasing_in_unit(deltas) -> None:
    if any(not (0.0 < d < 1.0) for d in deltas):
        raise OrderError(f"offsets must lie in (0, 1), got {deltas}")
    if any(a > b for a, b in zip(deltas, deltas[1:])):
        raise OrderError(f"offsets must be nondecreasing, got {deltas}")


def rate_upper_tail(deltas) -> float:
    """Joint upper-tail eigenvalue rate: sum of 2*delta_a + delta_a^2."""
    deltas = tuple(float(d) for d in deltas)
    _check_nonincreasing_positive(deltas)
    return math.fsum(2.0 * d + d * d for d in deltas)


def rate_lower_tail(deltas) -> float:
    """Joint lower-tail eigenvalue rate 2*delta_r - delta_r^2 (double-log scale)."""
    deltas = tuple(float(d) for d in deltas)
    _check_nondecreasing_in_unit(deltas)
    d = deltas[-1]
    return 2.0 * d - d * d


def rate_deg_upper(eps) -> float:
    """Joint upper-tail degree rate: sum of the offsets."""
    eps = tuple(float(e) for e in eps)
    _check_nonincreasing_positive(eps)
    return math.fsum(eps)


def rate_deg_lower(eps) -> float:
    """Joint lower-tail degree rate: the last offset (double-log scale)."""
    eps = tuple(float(e) for e in eps)
    _check_nondecreasing_in_unit(eps)
    return eps[-1]


def rate_marginal_upper(indices, deltas) -> float:
    """Upper-tail rate for a marginal on selected order statistics.

    indices are the selected positions 1 <= i_1 < ... < i_k; deltas the
    offsets at those positions.  With i_0 = 0 the rate is
    sum over s of (i_s - i_{s-1}) * (2*delta_{i_s} + delta_{i_s}^2).
    """
    indices = tuple(int(i) for i in indices)
    deltas = tuple(float(d) for d in deltas)
    if len(indices) != len(deltas) or not indices:
        raise OrderError("indices and deltas must be equal-length, nonempty")
    if indices[0] < 1 or any(a >= b for a, b in zip(indices, indices[1:])):
        raise OrderError(f"indices must satisfy 1 <= i_1 < i_2 < ..., got {indices}")
    _check_nonincreasing_positive(deltas)
    prev = 0
    total = 0.0
    for i, d in zip(indices, deltas):
        total += (i - prev) * (2.0 * d + d * d)
        prev = i
    return total


def rate_dense_upper(delta: float, n: int, p: float) -> float:
    """Upper-tail rate in the denser regime:
    min{(1+delta)^2/2, delta*(1+delta)} * n^2 * p^2 * log(1/p)."""
    _check_np(n, p)
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    lead = min((1.0 + delta) ** 2 / 2.0, delta * (1.0 + delta))
    return lead * (n * p) ** 2 * math.log(1.0 / p)


def rate_lt_lambda1(n: int, p: float, q: float) -> float:
    """Lower-tail rate for the top eigenvalue at constant density:
    C(n, 2) * I_p(q) for 0 < q < p <= 1/2."""
    if int(n) != n or n < 3:
        raise DomainError(f"n must be an integer >= 3, got {n!r}")
    if not (0.0 < q < p <= 0.5):
        raise DomainError(f"need 0 < q < p <= 1/2, got q={q!r}, p={p!r}")
    return (n * (n - 1) / 2.0) * relative_entropy(q, p)
