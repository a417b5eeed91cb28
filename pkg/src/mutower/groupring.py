"""Uniform pro-p group presets, their lower p-series quotients, and group-ring
polynomials with exact O-coefficients.

Two preset families are shipped:

  * abelian:    G = Z_p^r, generators g_1, ..., g_r;
  * metacyclic: G = <a, b | b a b^-1 = a^(1+p)> (pro-p completion), p >= 3,
                uniform of dimension 2, generators ordered (a, b).

The level-m quotient G/G_m (G_m the (m+1)-st lower p-series subgroup, equal to
G^(p^m) for uniform G) has order p^(rm); its elements are enumerated as
exponent tuples in lexicographic order, every group element having the unique
normal form g_1^e_1 ... g_r^e_r (a^e_1 b^e_2 for the metacyclic preset) with
0 <= e_i < p^m.

A group-ring polynomial is a finite sum of terms (coefficient, exponents)
where the coefficient is an exact integer vector of length e*f interpreted in
O (see chainring.RingBase); truncation into a chain ring happens only at
reduction time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .chainring import ChainRing, RingBase, galois_modulus, _is_prime
from .errors import InvalidInput

ABELIAN = "abelian"
METACYCLIC = "metacyclic"


@dataclass(frozen=True)
class GroupSpec:
    """A uniform pro-p group preset of dimension r."""

    kind: str
    p: int
    r: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise InvalidInput(f"p = {self.p} is not prime")
        if self.kind == ABELIAN:
            if self.r < 1:
                raise InvalidInput("abelian preset needs r >= 1")
        elif self.kind == METACYCLIC:
            if self.r != 2:
                raise InvalidInput("metacyclic preset has dimension 2")
            if self.p < 3:
                # Uniformity at p = 2 would need G/closure(G^4) abelian; the
                # corresponding 1+4 preset is not shipped.
                raise InvalidInput("metacyclic preset requires p >= 3")
        else:
            raise InvalidInput(f"unknown group kind {self.kind!r}")

    @classmethod
    def abelian(cls, p: int, r: int) -> "GroupSpec":
        return cls(ABELIAN, p, r)

    @classmethod
    def metacyclic(cls, p: int) -> "GroupSpec":
        return cls(METACYCLIC, p, 2)

    @property
    def action_unit(self) -> int:
        """The unit u with b a b^-1 = a^u for the metacyclic preset."""
        if self.kind != METACYCLIC:
            raise InvalidInput("action_unit is only defined for the metacyclic preset")
        return 1 + self.p

    def exponent_product(self, x: Tuple[int, ...], y: Tuple[int, ...]) -> Tuple[int, ...]:
        """Exponent tuple of the normal form of (g^x)(g^y), exact over Z."""
        if self.kind == ABELIAN:
            return tuple(a + b for a, b in zip(x, y))
        # b^x2 a^y1 = a^(y1 * u^x2) b^x2
        u = self.action_unit
        return (x[0] + y[0] * u ** x[1], x[1] + y[1])


def quotient_order(spec: GroupSpec, m: int) -> int:
    """|G/G_m| = p^(rm)."""
    if m < 0:
        raise InvalidInput("level m must be >= 0")
    return spec.p ** (spec.r * m)


class GroupLevel:
    """The finite quotient G/G_m with a fixed lexicographic element order."""

    def __init__(self, spec: GroupSpec, m: int):
        if m < 0:
            raise InvalidInput("level m must be >= 0")
        self.spec = spec
        self.m = m
        self.radix = spec.p ** m
        self.order = spec.p ** (spec.r * m)
        self._table = None

    def index(self, exps: Sequence[int]) -> int:
        if len(exps) != self.spec.r:
            raise InvalidInput("exponent tuple of wrong arity")
        idx = 0
        for e in exps:
            idx = idx * self.radix + (e % self.radix)
        return idx

    def exps(self, idx: int) -> Tuple[int, ...]:
        out = []
        for _ in range(self.spec.r):
            out.append(idx % self.radix)
            idx //= self.radix
        return tuple(reversed(out))

    def table(self) -> np.ndarray:
        """Multiplication table: table[i, j] = index of g_i * g_j."""
        if self._table is not None:
            return self._table
        L, R, r = self.order, self.radix, self.spec.r
        idx = np.arange(L, dtype=np.int64)
        digits = []
        rest = idx.copy()
        for _ in range(r):
            digits.append(rest % R)
            rest //= R
        digits = list(reversed(digits))  # digits[k] = exponent of generator k
        if self.spec.kind == ABELIAN:
            tab = np.zeros((L, L), dtype=np.int64)
            for k in range(r):
                dk = (digits[k][:, None] + digits[k][None, :]) % R
                tab = tab * R + dk
        else:
            u = self.spec.action_unit
            upow = np.ones(R, dtype=np.int64)
            for t in range(1, R):
                upow[t] = (upow[t - 1] * u) % R
            x1, x2 = digits[0][:, None], digits[1][:, None]
            y1, y2 = digits[0][None, :], digits[1][None, :]
            t1 = (x1 + y1 * upow[digits[1]][:, None]) % R if R > 1 else x1 * 0
            t2 = (x2 + y2) % R if R > 1 else x2 * 0
            tab = t1 * R + t2
        tab.setflags(write=False)
        self._table = tab
        return tab

    def project(self, m_lower: int) -> np.ndarray:
        """Index map realizing the projection G/G_m -> G/G_{m_lower}."""
        if not 0 <= m_lower <= self.m:
            raise InvalidInput("projection target must satisfy 0 <= m' <= m")
        low = group_level(self.spec, m_lower)
        return np.array(
            [low.index(self.exps(i)) for i in range(self.order)], dtype=np.int64
        )


@lru_cache(maxsize=256)
def group_level(spec: GroupSpec, m: int) -> GroupLevel:
    return GroupLevel(spec, m)


# ---------------------------------------------------------------------------
# Group-ring polynomials.

@dataclass(frozen=True)
class GroupRingPoly:
    """Canonical finite sum of (coefficient vector, exponent tuple) terms.

    Terms are sorted by exponent tuple, exponent tuples are unique, and no
    coefficient vector is identically zero.  Coefficients are exact integers;
    no truncation happens before reduce_poly.
    """

    terms: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]

    @property
    def is_zero(self) -> bool:
        return not self.terms


def _norm_terms(terms: Iterable[Tuple[Sequence[int], Sequence[int]]]) -> GroupRingPoly:
    acc = {}
    width = None
    for coeffs, exps in terms:
        exps = tuple(int(e) for e in exps)
        if any(e < 0 for e in exps):
            raise InvalidInput("negative generator exponents are not allowed")
        coeffs = tuple(int(c) for c in coeffs)
        if width is None:
            width = len(coeffs)
        elif len(coeffs) != width:
            raise InvalidInput("inconsistent coefficient vector lengths")
        if exps in acc:
            acc[exps] = tuple(a + b for a, b in zip(acc[exps], coeffs))
        else:
            acc[exps] = coeffs
    out = [(c, e) for e, c in acc.items() if any(c)]
    out.sort(key=lambda t: t[1])
    return GroupRingPoly(tuple(out))


def poly_zero() -> GroupRingPoly:
    return GroupRingPoly(())


def poly_scalar(base: RingBase, vec: Sequence[int], r: int) -> GroupRingPoly:
    """The scalar with O-coefficient vector ``vec`` at the identity element."""
    if len(vec) != base.e * base.f:
        raise InvalidInput("coefficient vector length mismatch")
    return _norm_terms([(tuple(vec), (0,) * r)])


def poly_int(base: RingBase, n: int, r: int) -> GroupRingPoly:
    vec = [0] * (base.e * base.f)
    vec[0] = n
    return poly_scalar(base, vec, r)


def pi_pow_coeffs(base: RingBase, k: int) -> Tuple[int, ...]:
    """Exact O-coefficient vector of pi^k (pi^e = p)."""
    vec = [0] * (base.e * base.f)
    vec[(k % base.e) * base.f] = base.p ** (k // base.e)
    return tuple(vec)


def poly_pi_pow(base: RingBase, k: int, r: int) -> GroupRingPoly:
    return _norm_terms([(pi_pow_coeffs(base, k), (0,) * r)])


def poly_gen(base: RingBase, j: int, r: int, power: int = 1, coeff: int = 1) -> GroupRingPoly:
    """coeff * g_j^power as a group-ring polynomial (1-based generator index)."""
    if not 1 <= j <= r:
        raise InvalidInput(f"generator index {j} out of range")
    vec = [0] * (base.e * base.f)
    vec[0] = coeff
    exps = [0] * r
    exps[j - 1] = power
    return _norm_terms([(tuple(vec), tuple(exps))])


def poly_add(x: GroupRingPoly, y: GroupRingPoly) -> GroupRingPoly:
    return _norm_terms(list(x.terms) + list(y.terms))


def poly_neg(x: GroupRingPoly) -> GroupRingPoly:
    return GroupRingPoly(tuple((tuple(-c for c in cs), e) for cs, e in x.terms))


def poly_sub(x: GroupRingPoly, y: GroupRingPoly) -> GroupRingPoly:
    return poly_add(x, poly_neg(y))


def _coeff_mul(base: RingBase, a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    # Exact product in O = Z_q[pi]/(pi^e - p): Galois convolution mod h per
    # pi-block, blocks >= e folded down with a factor of p.
    e, f = base.e, base.f
    h = galois_modulus(base.p, f)

    def gr_mul(u, v):
        res = [0] * (2 * f - 1) if f > 1 else [u[0] * v[0]]
        if f > 1:
            for i in range(f):
                if u[i]:
                    for j in range(f):
                        res[i + j] += u[i] * v[j]
            for i in range(2 * f - 2, f - 1, -1):
                c = res[i]
                if c:
                    res[i] = 0
                    for j in range(f):
                        res[i - f + j] -= c * h[j]
        return res[:f]

    out = [0] * (e * f)
    for i in range(e):
        ai = a[i * f : (i + 1) * f]
        if not any(ai):
            continue
        for j in range(e):
            bj = b[j * f : (j + 1) * f]
            if not any(bj):
                continue
            prod = gr_mul(ai, bj)
            k = i + j
            scale = base.p ** (k // e)
            k %= e
            for t in range(f):
                out[k * f + t] += scale * prod[t]
    return tuple(out)


def poly_mul(spec: GroupSpec, base: RingBase, x: GroupRingPoly, y: GroupRingPoly) -> GroupRingPoly:
    """Exact product in O[[G]], using the preset's normal-form rewriting
    (b a = a^(1+p) b for the metacyclic preset)."""
    if spec.p != base.p:
        raise InvalidInput("group and coefficient primes disagree")
    terms = []
    for cx, ex in x.terms:
        for cy, ey in y.terms:
            terms.append((_coeff_mul(base, cx, cy), spec.exponent_product(ex, ey)))
    return _norm_terms(terms)


def poly_scale(base: RingBase, n: int, x: GroupRingPoly) -> GroupRingPoly:
    return _norm_terms([(tuple(n * c for c in cs), e) for cs, e in x.terms])


def reduce_poly(x: GroupRingPoly, spec: GroupSpec, m: int, ring: ChainRing) -> List:
    """Image of x under O[[G]] -> (O/pi^N)[G/G_m], as a dense coefficient
    vector over the level's element enumeration."""
    if ring.p != spec.p:
        raise InvalidInput("ring.p must equal spec.p")
    level = group_level(spec, m)
    vec = [ring.zero] * level.order
    for coeffs, exps in x.terms:
        if len(exps) != spec.r:
            raise InvalidInput("exponent tuple arity disagrees with the group")
        idx = level.index(exps)
        vec[idx] = ring.add(vec[idx], ring.from_coeffs(coeffs))
    return vec


def regular_rep(ring: ChainRing, level: GroupLevel, vec: Sequence) -> List[List]:
    """Matrix of right multiplication by the group-ring element ``vec`` on the
    free module with basis G/G_m; row k lists the coordinates of g_k * x.

    Right multiplication commutes with the left module structure, so these
    blocks expand presentations of left modules faithfully, and the map is a
    ring homomorphism into chain-ring matrices.
    """
    L = level.order
    tab = level.table()
    M = [[ring.zero] * L for _ in range(L)]
    for h, c in enumerate(vec):
        if ring.is_zero(c):
            continue
        for k in range(L):
            col = int(tab[k, h])
            M[k][col] = ring.add(M[k][col], c)
    return M
