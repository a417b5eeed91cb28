"""Recovery of mu(M/pi^n), the Lambda-rank, theta and the elementary
representation from exact level-order data.

The engine computes o(n, m) = ord_q((M/pi^n)_{G_m}) on a grid and exploits

    mu(M/pi^n) = n * rank(M) + sum_i min(n, alpha_i),
    o(n, m)    = mu(M/pi^n) * p^(rm) + O(p^((r-1)m)),

so mu_n is the nearest integer to o(n, m)/p^(rm) at the top levels (mu is a
nonnegative integer, which makes the rounding exact once the error term is
dominated).  The first differences D_n = mu_n - mu_(n-1) are nonincreasing
and eventually constant at the rank; the multiplicities are their second
differences.  A profile is only trusted once the rounded value agrees at the
top two levels and the normalized residual is non-increasing there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .chainring import ordq_from_form
from .errors import (
    InconsistentInput,
    InconsistentProfile,
    InvalidInput,
    NotConverged,
    ProfileTooShort,
)
from .groupring import GroupSpec
from .lambda_mod import LevelOrders, Presentation, coinvariants_ordq, level_diagonal_form, quotient_pi

DEFAULT_N_MAX = 6


def default_m_range(spec: GroupSpec) -> List[int]:
    """Desk-scale default grids: levels {0..4} for r = 1, {0..2} otherwise."""
    return list(range(5)) if spec.r == 1 else list(range(3))


@dataclass(frozen=True)
class MuProfile:
    """The sequence n -> mu(M/pi^n) with raw orders and diagnostics."""

    mu: Dict[int, int]
    raw: Dict[int, LevelOrders]
    converged: Dict[int, bool]
    levels_used: Tuple[int, ...]
    c_hat: Dict[int, Fraction]

    @property
    def n_max(self) -> int:
        return max(self.mu)


@dataclass(frozen=True)
class ElementaryRep:
    """free rank a, multiplicities (s_1, ..., s_theta) with s_theta > 0, and
    theta; mu_total = sum_i i * s_i."""

    free_rank: int
    multiplicities: Tuple[int, ...]
    theta: int
    mu_total: int

    @classmethod
    def from_data(cls, free_rank: int, mults: Sequence[int]) -> "ElementaryRep":
        mults = list(mults)
        while mults and mults[-1] == 0:
            mults.pop()
        theta = len(mults)
        mu_total = sum((i + 1) * s for i, s in enumerate(mults))
        return cls(free_rank, tuple(mults), theta, mu_total)

    def mu_of_quotient(self, n: int) -> int:
        return n * self.free_rank + sum(
            min(n, i + 1) * s for i, s in enumerate(self.multiplicities)
        )


def fit_mu(orders: Dict[int, int], p: int, r: int) -> Tuple[int, bool, Fraction]:
    """Round orders/p^(rm) at the top level; certify by agreement at the top
    two levels (half-integer ties count as non-converged).  The fitted C is
    the largest normalized residual |ord - mu p^(rm)| / p^((r-1)m) over the
    grid.  Returns (mu, converged, fitted C)."""
    ms = sorted(orders)
    if len(ms) < 2:
        raise InvalidInput("need at least two levels")
    top, second = ms[-1], ms[-2]

    def round_at(m):
        scale = p ** (r * m)
        k, rem = divmod(orders[m], scale)
        if 2 * rem == scale:
            return k, True
        return (k + 1 if 2 * rem > scale else k), False

    mu_top, tie_top = round_at(top)
    mu_sec, tie_sec = round_at(second)
    mu = mu_top

    def norm_res(m):
        return Fraction(abs(orders[m] - mu * p ** (r * m)), p ** ((r - 1) * m))

    c_hat = max(norm_res(m) for m in ms)
    converged = not tie_top and not tie_sec and mu_top == mu_sec
    return mu, converged, c_hat


def estimate_mu(P: Presentation, n: int, m_range: Sequence[int]) -> Tuple[int, bool, Fraction]:
    """mu(M/pi^n) estimated from coinvariant orders over m_range (truncation
    N = n); returns the best estimate flagged non-converged rather than
    raising, so the caller decides whether to raise levels."""
    if n < 1:
        raise InvalidInput("need n >= 1")
    ms = sorted(set(m_range))
    if len(ms) < 2:
        raise InvalidInput("need at least two levels")
    Pq = quotient_pi(P, n)
    orders = {m: coinvariants_ordq(Pq, m, n) for m in ms}
    return fit_mu(orders, P.spec.p, P.spec.r)


def mu_profile(
    P: Presentation,
    n_max: int = DEFAULT_N_MAX,
    m_range: Optional[Sequence[int]] = None,
) -> MuProfile:
    """Profiles n -> mu(M/pi^n) for n = 1..n_max.

    One diagonalization per level at truncation n_max serves every n: the
    base-change surjection O/pi^n_max -> O/pi^n caps each diagonal valuation
    at n and keeps free coordinates free, so the derived orders equal the
    direct N = n computations.  Raises InconsistentProfile if the recovered
    sequence violates the monotonicity forced by mu(M/pi^n) = n rank +
    sum min(n, alpha_i).
    """
    if n_max < 1:
        raise InvalidInput("need n_max >= 1")
    ms = sorted(set(m_range)) if m_range is not None else default_m_range(P.spec)
    if len(ms) < 2:
        raise InvalidInput("need at least two levels")
    Pq = quotient_pi(P, n_max)
    forms = {m: level_diagonal_form(Pq, m, n_max) for m in ms}
    p, r = P.spec.p, P.spec.r

    mu: Dict[int, int] = {}
    raw: Dict[int, LevelOrders] = {}
    conv: Dict[int, bool] = {}
    c_hat: Dict[int, Fraction] = {}
    for n in range(1, n_max + 1):
        orders = {m: ordq_from_form(forms[m], n_max, n) for m in ms}
        mu_n, ok, c = fit_mu(orders, p, r)
        mu[n] = mu_n
        raw[n] = LevelOrders(n, orders, n_max)
        conv[n] = ok
        c_hat[n] = c

    deltas = [mu[1]] + [mu[n] - mu[n - 1] for n in range(2, n_max + 1)]
    for i, d in enumerate(deltas):
        if d < 0:
            raise InconsistentProfile(f"mu decreases at n={i + 1}")
        if i > 0 and d > deltas[i - 1]:
            raise InconsistentProfile(f"mu differences increase at n={i + 1}")
    return MuProfile(mu, raw, conv, tuple(ms), c_hat)


def recover_elementary(profile: MuProfile) -> ElementaryRep:
    """Difference method: D_n = mu_n - mu_(n-1) is rank + #{alpha_i >= n};
    the stabilized tail is the free rank and s_i = D_i - D_(i+1).

    Stabilization is accepted when the last two differences agree or the last
    difference is zero (a nonincreasing nonnegative sequence stays at zero).
    The reconstruction identity is re-verified over the whole profile.
    """
    n_max = profile.n_max
    ns = sorted(profile.mu)
    if ns != list(range(1, n_max + 1)):
        raise InvalidInput("profile must cover n = 1..n_max")
    bad = [n for n in ns if not profile.converged[n]]
    if bad:
        raise NotConverged(f"profile not converged at n={bad} (needs more levels)")
    mu = profile.mu
    deltas = {n: mu[n] - mu.get(n - 1, 0) for n in ns}
    if n_max >= 2:
        stabilized = deltas[n_max] == deltas[n_max - 1] or deltas[n_max] == 0
    else:
        stabilized = deltas[n_max] == 0
    if not stabilized:
        raise ProfileTooShort(
            f"differences did not stabilize by n_max={n_max}; retry with n_max={n_max + 1}"
        )
    free_rank = deltas[n_max]
    mults = [deltas[n] - deltas[n + 1] for n in range(1, n_max)]
    if any(s < 0 for s in mults):
        raise InconsistentProfile("negative multiplicity from the difference method")
    rep = ElementaryRep.from_data(free_rank, mults)
    for n in ns:
        if rep.mu_of_quotient(n) != mu[n]:
            raise InconsistentProfile(
                f"reconstruction identity fails at n={n}: profile is not of the "
                "guaranteed shape"
            )
    return rep


def solve_multiplicities(mu_vector: Sequence[int], theta: int) -> Tuple[int, ...]:
    """Solves mu_n = s_1 + 2 s_2 + ... + (n-1) s_(n-1) + n (s_n + ... + s_theta)
    for n = 1..theta by exact inversion of the staircase matrix (the inverse
    is the second-difference operator).  Rejects inputs with any negative
    multiplicity, which is exactly a violation of the monotonicity of the
    first differences."""
    if theta < 1:
        raise InvalidInput("need theta >= 1")
    if len(mu_vector) != theta:
        raise InvalidInput("mu vector must have length theta")
    mu = [0] + [int(v) for v in mu_vector]
    s = []
    for n in range(1, theta):
        s.append(-mu[n - 1] + 2 * mu[n] - mu[n + 1])
    s.append(mu[theta] - mu[theta - 1])
    if any(v < 0 for v in s):
        raise InconsistentInput(f"no nonnegative solution: s = {tuple(s)}")
    return tuple(s)


def is_pseudonull_pi_part(
    P: Presentation,
    m_range: Optional[Sequence[int]] = None,
    n_max: int = DEFAULT_N_MAX,
) -> bool:
    """True iff the recovered theta vanishes (mu(M) = 0, i.e. the pi-primary
    part is pseudo-null).  Propagates NotConverged."""
    rep = recover_elementary(mu_profile(P, n_max, m_range))
    return rep.theta == 0
