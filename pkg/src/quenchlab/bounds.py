"""Closed-form entropy-growth, continuity and bond-dimension bounds.

Everything here is an explicit formula; the heavy lifting (correlation
matrices, spectra) lives in `ising_exact` and `entropy`.  Logarithm bases
are mixed on purpose and preserved verbatim: block entropies are in bits
while the additive corrections carry natural logarithms.  ``nats_to_bits``
is the one sanctioned converter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ising_exact import gamma_t_fourier

LN2 = math.log(2.0)

#: accuracy threshold 2e/(3 pi) below which the bond dimension must grow
#: exponentially in time
EPSILON_THRESHOLD = 2.0 * math.e / (3.0 * math.pi)


def nats_to_bits(x: float) -> float:
    """Convert a natural-log quantity to base-2 units."""
    return x / LN2


def entropy_growth_bound(t: float) -> float:
    """Linear lower bound (4/3pi) t - (1/2) ln t - 1 on the block entropy.

    The leading term is in bits per unit time; the ln t correction is kept in
    natural log, exactly as stated.  The evaluator is total; validity of the
    bound is a separate hypothesis check (`BoundHypotheses`).
    """
    return 4.0 / (3.0 * math.pi) * t - 0.5 * math.log(t) - 1.0


def growth_hypotheses_hold(N: int, L: int, t: float) -> bool:
    """True iff N >= 20, L >= 10, 4 <= t <= eL/4 and t <= N/5."""
    return N >= 20 and L >= 10 and 4.0 <= t <= math.e * L / 4.0 and t <= N / 5.0


@dataclass(frozen=True)
class BoundHypotheses:
    """Parameter region on which the entropy-growth bound is claimed."""

    N: int
    L: int
    t: float

    def satisfied(self) -> bool:
        return growth_hypotheses_hold(self.N, self.L, self.t)

    def failures(self) -> list[str]:
        out = []
        if self.N < 20:
            out.append(f"N={self.N} < 20")
        if self.L < 10:
            out.append(f"L={self.L} < 10")
        if self.t < 4.0:
            out.append(f"t={self.t} < 4")
        if self.t > math.e * self.L / 4.0:
            out.append(f"t={self.t} > eL/4={math.e * self.L / 4.0:.4g}")
        if self.t > self.N / 5.0:
            out.append(f"t={self.t} > N/5={self.N / 5.0:.4g}")
        return out


def _shannon_binary(p: float) -> float:
    """H(p, 1-p) in bits with the endpoint limits H(0) = H(1) = 0."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


@dataclass(frozen=True)
class AudenaertBound:
    """Continuity bound on |S(rho) - S(sigma)| at trace distance T on L qubits."""

    exact: float    # T log2(2^L - 1) + H(T, 1-T)
    relaxed: float  # T L + 1


def audenaert_bound(T: float, L: int) -> AudenaertBound:
    """Entropy-continuity bound for half trace distance T in [0, 1] on L qubits."""
    if not 0.0 <= T <= 1.0:
        raise ValueError(f"T must lie in [0, 1], got {T}")
    if L < 1:
        raise ValueError(f"L must be positive, got {L}")
    exact = T * math.log2(2.0**L - 1.0) + _shannon_binary(T)
    return AudenaertBound(exact=exact, relaxed=T * L + 1.0)


@dataclass(frozen=True)
class ApproxEntropyBound:
    """Lower bounds on the block entropy of any epsilon-close approximation."""

    unoptimized: float      # (4/3pi) t - eps L / 2 - (1/2) ln t - 2
    optimized: float        # (4/3pi - 2 eps / e) t - (1/2) ln t - 2, at L = 4t/e
    t_in_range: bool        # t >= 5e/2, needed once L = 4t/e must satisfy L >= 10
    l_is_optimal: bool      # L matches 4t/e within half a site


def approx_entropy_lower_bound(t: float, epsilon: float, L: int) -> ApproxEntropyBound:
    """Both forms of the approximation entropy bound, with hypothesis flags."""
    if epsilon < 0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    lead = 4.0 / (3.0 * math.pi)
    unopt = lead * t - 0.5 * epsilon * L - 0.5 * math.log(t) - 2.0
    opt = (lead - 2.0 * epsilon / math.e) * t - 0.5 * math.log(t) - 2.0
    return ApproxEntropyBound(
        unoptimized=unopt,
        optimized=opt,
        t_in_range=t >= 2.5 * math.e,
        l_is_optimal=abs(L - 4.0 * t / math.e) <= 0.5,
    )


@dataclass(frozen=True)
class BondDimBound:
    """Lower bound on log2 of the bond dimension and the implied minimal D."""

    log2_d: float
    min_d: int


def bond_dim_lower_bound(t: float, epsilon: float) -> BondDimBound:
    """log2 D >= (2/3pi - eps/e) t - (1/4) ln t - 1 and the ceiled integer D."""
    if epsilon < 0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    rhs = (2.0 / (3.0 * math.pi) - epsilon / math.e) * t - 0.25 * math.log(t) - 1.0
    return BondDimBound(log2_d=rhs, min_d=max(1, math.ceil(2.0**rhs)))


class BoundViolationError(AssertionError):
    """A proven inequality failed numerically; signals an implementation bug."""


def verify_entropy_bound(N: int, L: int, t_grid, strict: bool = False):
    """Evaluate the full bound chain over a time grid.

    Grid points violating the hypotheses are flagged, not fatal.  With
    ``strict=True`` a negative growth-bound margin on an applicable point
    raises BoundViolationError after all reports are collected.
    """
    from .entropy import bound_chain  # deferred: entropy imports this module
    from .ising_exact import QuenchParams

    reports = []
    for t in t_grid:
        cm = gamma_t_fourier(N, t, limit="finite")
        reports.append(bound_chain(cm, QuenchParams(N=N, L=L, t=t)))
    if strict:
        bad = [r for r in reports if r.hypotheses_ok and r.growth_margin < 0]
        if bad:
            worst = min(r.growth_margin for r in bad)
            raise BoundViolationError(
                f"growth bound violated on {len(bad)} applicable grid points (worst margin {worst:.3e})"
            )
    return reports
