"""Exact arithmetic and diagonal normal forms over the finite chain rings O/pi^N.

O is the ring of integers of a finite extension of Q_p with ramification index
e and residue degree f; pi is a local parameter, q = p^f the residue field
order.  The truncation O/pi^N is a finite local principal ideal ring of order
q^N whose ideals form the chain (1) > (pi) > ... > (pi^N) = 0.

Concrete model.  The unramified part is the Galois ring GR(p^M, f) =
Z[x]/(p^M, h(x)) for a fixed monic degree-f lift h of an irreducible
polynomial over F_p; for e > 1 the ring is the Eisenstein extension by
pi^e = p over it.  A scalar is

  * a plain int in [0, p^N)                     when e == f == 1,
  * a tuple of e tuples of f ints otherwise, component i holding the
    Galois-ring coordinates of the pi^i digit, reduced mod p^{ceil((N-i)/e)}.

Canonical forms are equal iff the ring elements are equal, so scalars compare
with ==.  All operations are pure; rings and scalars are immutable and safe to
share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidInput

# Marker reserved for module-level interpretation of orders that saturate at
# the truncation N.  cokernel_ordq itself always returns an exact finite
# integer; see the saturation handling in lambda_mod.
INFINITE = "INFINITE"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# F_p[x] helpers for choosing the Galois-ring modulus.

def _poly_mul_mod(a, b, h, p):
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    f = len(h) - 1
    for i in range(len(res) - 1, f - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(f):
                res[i - f + j] = (res[i - f + j] - c * h[j]) % p
    while len(res) > f:
        res.pop()
    while len(res) < f:
        res.append(0)
    return res


def _poly_pow_mod(a, k, h, p):
    result = [1] + [0] * (len(h) - 2)
    base = list(a)
    while k:
        if k & 1:
            result = _poly_mul_mod(result, base, h, p)
        base = _poly_mul_mod(base, base, h, p)
        k >>= 1
    return result


def _poly_gcd(a, b, p):
    def norm(v):
        v = [c % p for c in v]
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = norm(a), norm(b)
    while b:
        inv = pow(b[-1], -1, p)
        r = list(a)
        while len(r) >= len(b):
            c = (r[-1] * inv) % p
            shift = len(r) - len(b)
            for j in range(len(b)):
                r[shift + j] = (r[shift + j] - c * b[j]) % p
            r = norm(r)
            if not r:
                break
        a, b = b, r
    return a


def _is_irreducible(h, p):
    # h monic of degree f over F_p: irreducible iff x^{p^f} == x (mod h) and
    # gcd(x^{p^{f/d}} - x, h) = 1 for every prime divisor d of f.
    f = len(h) - 1
    if f == 1:
        return True
    x = [0, 1] + [0] * (f - 2)
    xq = _poly_pow_mod(x, p ** f, h, p)
    if any((xq[i] - x[i]) % p for i in range(f)):
        return False
    d = 2
    ff = f
    primes = set()
    while d * d <= ff:
        if ff % d == 0:
            primes.add(d)
            while ff % d == 0:
                ff //= d
        d += 1
    if ff > 1:
        primes.add(ff)
    for d in primes:
        xq = _poly_pow_mod(x, p ** (f // d), h, p)
        diff = [(xq[i] - x[i]) % p for i in range(f)]
        g = _poly_gcd(diff, h, p)
        if len(g) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def galois_modulus(p: int, f: int) -> Tuple[int, ...]:
    """Monic degree-f integer lift used to realize the Galois ring GR(p^M, f).

    The Conway polynomial is used when the optional ``conway_polynomials``
    package is importable; otherwise the lexicographically least monic
    irreducible lift (constant coefficient first) is chosen.  The choice only
    fixes the element representation; every computed order is independent of
    it.
    """
    if f == 1:
        return (0, 1)
    try:  # pragma: no cover - optional dependency
        import conway_polynomials

        db = conway_polynomials.database()
        coeffs = db[p][f]
        return tuple(int(c) % p for c in coeffs)
    except Exception:
        pass
    for code in range(p ** f):
        lower = []
        c = code
        for _ in range(f):
            lower.append(c % p)
            c //= p
        h = tuple(lower + [1])
        if _is_irreducible(h, p):
            return h
    raise RuntimeError(f"no irreducible polynomial of degree {f} over F_{p}")


@dataclass(frozen=True)
class RingBase:
    """The exact coefficient ring O, described by (p, e, f)."""

    p: int
    e: int
    f: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise InvalidInput(f"p = {self.p} is not prime")
        if self.e < 1 or self.f < 1:
            raise InvalidInput("need e >= 1 and f >= 1")

    @property
    def q(self) -> int:
        return self.p ** self.f


class ChainRing:
    """The truncation O/pi^N together with its exact scalar arithmetic.

    Invariants: q = p^f, |ring| = q^N, every nonzero scalar factors uniquely
    as unit * pi^v with 0 <= v < N, and val(0) = N by convention.
    """

    def __init__(self, p: int, e: int, f: int, N: int):
        base = RingBase(p, e, f)
        if N < 1:
            raise InvalidInput("need N >= 1")
        self.base = base
        self.p = p
        self.e = e
        self.f = f
        self.N = N
        self.q = p ** f
        self.size = self.q ** N
        self.is_simple = e == 1 and f == 1
        # Component i of an Eisenstein vector carries precision ceil((N-i)/e).
        self.prec = tuple(-((-(N - i)) // e) for i in range(e))
        self.M = self.prec[0]
        self.pM = p ** self.M
        self.h = galois_modulus(p, f)
        if self.is_simple:
            self.zero = 0
            self.one = 1
            self.pi = p % (p ** N)
        else:
            gz = (0,) * f
            gone = (1,) + (0,) * (f - 1)
            self.zero = tuple(gz for _ in range(e))
            one = [gz] * e
            one[0] = gone
            self.one = tuple(one)
            self.pi = self.pi_pow(1)

    @classmethod
    def from_base(cls, base: RingBase, N: int) -> "ChainRing":
        return cls(base.p, base.e, base.f, N)

    def __repr__(self):
        return f"ChainRing(p={self.p}, e={self.e}, f={self.f}, N={self.N})"

    def __eq__(self, other):
        return (
            isinstance(other, ChainRing)
            and (self.p, self.e, self.f, self.N) == (other.p, other.e, other.f, other.N)
        )

    def __hash__(self):
        return hash((self.p, self.e, self.f, self.N))

    # -- construction -------------------------------------------------------

    def _canon(self, comps) -> tuple:
        out = []
        for i in range(self.e):
            m = self.p ** self.prec[i]
            out.append(tuple(int(c) % m for c in comps[i]))
        return tuple(out)

    def from_int(self, n: int):
        if self.is_simple:
            return n % (self.p ** self.N)
        comps = [[0] * self.f for _ in range(self.e)]
        comps[0][0] = n
        return self._canon(comps)

    def from_coeffs(self, vec: Sequence[int]):
        """Build a scalar from the exact O-coefficient vector of length e*f
        (entry i*f + j is the x^j coordinate of the pi^i digit)."""
        if len(vec) != self.e * self.f:
            raise InvalidInput(
                f"coefficient vector of length {len(vec)}, expected {self.e * self.f}"
            )
        if self.is_simple:
            return vec[0] % (self.p ** self.N)
        comps = [vec[i * self.f : (i + 1) * self.f] for i in range(self.e)]
        return self._canon(comps)

    def to_coeffs(self, x) -> Tuple[int, ...]:
        if self.is_simple:
            return (x,)
        return tuple(c for comp in x for c in comp)

    def check_scalar(self, x) -> None:
        if self.is_simple:
            if not isinstance(x, (int, np.integer)) or not 0 <= x < self.p ** self.N:
                raise InvalidInput(f"scalar {x!r} is not canonical for {self!r}")
            return
        if (
            not isinstance(x, tuple)
            or len(x) != self.e
            or any(len(c) != self.f for c in x)
        ):
            raise InvalidInput(f"scalar {x!r} is not canonical for {self!r}")
        for i, comp in enumerate(x):
            m = self.p ** self.prec[i]
            if any(not 0 <= c < m for c in comp):
                raise InvalidInput(f"scalar {x!r} is not canonical for {self!r}")

    # -- arithmetic ----------------------------------------------------------

    def add(self, x, y):
        if self.is_simple:
            return (x + y) % (self.p ** self.N)
        return self._canon(
            [[x[i][j] + y[i][j] for j in range(self.f)] for i in range(self.e)]
        )

    def sub(self, x, y):
        if self.is_simple:
            return (x - y) % (self.p ** self.N)
        return self._canon(
            [[x[i][j] - y[i][j] for j in range(self.f)] for i in range(self.e)]
        )

    def neg(self, x):
        if self.is_simple:
            return (-x) % (self.p ** self.N)
        return self._canon([[-c for c in comp] for comp in x])

    def _gr_mul(self, a, b):
        # Galois-ring product: polynomial convolution reduced by the monic
        # modulus h, over Z (canonicalization happens in the caller).
        f = self.f
        res = [0] * (2 * f - 1)
        for i in range(f):
            ai = a[i]
            if ai:
                for j in range(f):
                    res[i + j] += ai * b[j]
        for i in range(2 * f - 2, f - 1, -1):
            c = res[i]
            if c:
                res[i] = 0
                for j in range(f):
                    res[i - f + j] -= c * self.h[j]
        return res[:f]

    def mul(self, x, y):
        if self.is_simple:
            return (x * y) % (self.p ** self.N)
        e = self.e
        comps = [[0] * self.f for _ in range(e)]
        for i in range(e):
            if all(c == 0 for c in x[i]):
                continue
            for j in range(e):
                if all(c == 0 for c in y[j]):
                    continue
                prod = self._gr_mul(x[i], y[j])
                k = i + j
                scale = self.p ** (k // e)  # pi^e = p
                k %= e
                for t in range(self.f):
                    comps[k][t] += scale * prod[t]
        return self._canon(comps)

    def is_zero(self, x) -> bool:
        if self.is_simple:
            return x == 0
        return all(c == 0 for comp in x for c in comp)

    # -- valuation structure --------------------------------------------------

    def val(self, x) -> int:
        """pi-adic valuation in [0, N]; val(0) = N."""
        if self.is_simple:
            if x == 0:
                return self.N
            v = 0
            while x % self.p == 0:
                x //= self.p
                v += 1
            return v
        best = self.N
        for i, comp in enumerate(x):
            for c in comp:
                if c:
                    vp = 0
                    while c % self.p == 0:
                        c //= self.p
                        vp += 1
                    best = min(best, self.e * vp + i)
        return best

    def pi_pow(self, v: int):
        if v >= self.N:
            return self.zero if not self.is_simple else 0
        if self.is_simple:
            return (self.p ** v) % (self.p ** self.N)
        comps = [[0] * self.f for _ in range(self.e)]
        comps[v % self.e][0] = self.p ** (v // self.e)
        return self._canon(comps)

    def _div_pi_once(self, x):
        # Exact on representatives: requires val(x) >= 1, i.e. p | component 0.
        if self.is_simple:
            return x // self.p
        comps = [list(x[i + 1]) for i in range(self.e - 1)]
        comps.append([c // self.p for c in x[0]])
        return self._canon(comps)

    def div_pi_pow(self, x, v: int):
        """A representative of x / pi^v; requires val(x) >= v.  The result u
        satisfies u * pi^v == x exactly."""
        if v == 0:
            return x
        if self.val(x) < v:
            raise InvalidInput("div_pi_pow applied below the valuation")
        if self.is_simple:
            return x // (self.p ** v)
        y = x
        for _ in range(v):
            y = self._div_pi_once(y)
        return y

    def unit_part(self, x):
        """A unit u with u * pi^val(x) == x (u = 1 for x = 0)."""
        v = self.val(x)
        if v >= self.N:
            return self.one
        return self.div_pi_pow(x, v)

    def inv(self, x):
        """Inverse of a unit scalar (val 0), by Newton iteration over the
        residue-field inverse."""
        if self.val(x) != 0:
            raise InvalidInput("inverse of a non-unit")
        if self.is_simple:
            return pow(int(x), -1, self.p ** self.N)
        # residue-field inverse of the mod-pi image, via c^(q-2)
        res = tuple(c % self.p for c in x[0])
        if self.f == 1:
            y0_coeffs = (pow(res[0], -1, self.p),)
        else:
            k = ChainRing(self.p, 1, self.f, 1)
            rx = (res,)
            y0 = k.one
            power = self.q - 2
            b = rx
            while power:
                if power & 1:
                    y0 = k.mul(y0, b)
                b = k.mul(b, b)
                power >>= 1
            y0_coeffs = tuple(y0[0])
        y = self.from_coeffs(y0_coeffs + (0,) * (self.e * self.f - self.f))
        for _ in range(self.N.bit_length() + 2):
            err = self.sub(self.mul(x, y), self.one)
            if self.is_zero(err):
                return y
            y = self.sub(y, self.mul(y, err))
        if self.is_zero(self.sub(self.mul(x, y), self.one)):
            return y
        raise RuntimeError("Newton inversion failed to converge")

    def elements(self):
        """Iterate every scalar (for brute-force oracles at tiny sizes)."""
        if self.is_simple:
            yield from range(self.p ** self.N)
            return

        def comps(i):
            m = self.p ** self.prec[i]
            vecs = [()]
            for _ in range(self.f):
                vecs = [v + (c,) for v in vecs for c in range(m)]
            return vecs

        stack = [comps(i) for i in range(self.e)]
        out = [()]
        for block in stack:
            out = [o + (b,) for o in out for b in block]
        yield from out

    def random_scalar(self, rng):
        if self.is_simple:
            return rng.randrange(self.p ** self.N)
        comps = tuple(
            tuple(rng.randrange(self.p ** self.prec[i]) for _ in range(self.f))
            for i in range(self.e)
        )
        return comps


@dataclass(frozen=True)
class DiagonalForm:
    """Result of diagonalizing a matrix over a chain ring.

    coker(A) on b target coordinates is isomorphic to
    (+)_i (O/pi^N)/pi^{v_i}  (+)  (O/pi^N)^{free_cols},
    with diag_valuations = (v_i) sorted ascending (zeros contribute nothing).
    """

    diag_valuations: Tuple[int, ...]
    free_cols: int
    row_count: int
    col_count: int


@lru_cache(maxsize=64)
def _val_table(p: int, N: int) -> np.ndarray:
    mod = p ** N
    table = np.zeros(mod, dtype=np.int64)
    for v in range(1, N):
        table[p ** v :: p ** v] = v
    table[0] = N
    table.setflags(write=False)
    return table


def _diagonalize_numpy(ring: ChainRing, A: np.ndarray) -> DiagonalForm:
    p, N = ring.p, ring.N
    mod = p ** N
    nrows, ncols = A.shape
    val_table = _val_table(p, N)

    vals: List[int] = []
    d = 0
    top = min(nrows, ncols)
    while d < top:
        sub = A[d:, d:]
        tv = val_table[sub]
        pos = int(np.argmin(tv))  # row-major argmin = (row, col) lex tie-break
        i, j = divmod(pos, sub.shape[1])
        v = int(tv[i, j])
        if v >= N:
            break
        i += d
        j += d
        if i != d:
            A[[d, i], :] = A[[i, d], :]
        if j != d:
            A[:, [d, j]] = A[:, [j, d]]
        pv = p ** v
        u = int(A[d, d]) // pv
        uinv = pow(u, -1, mod)
        A[d, d:] = (A[d, d:] * uinv) % mod
        if d + 1 < nrows:
            f = A[d + 1 :, d] // pv  # exact: pivot has minimal valuation
            block = A[d + 1 :, d:]
            block -= f[:, None] * A[d, d:]
            block %= mod
        # Column operations clearing row d touch no other row: column d is
        # zero outside the pivot at this point.
        A[d, d + 1 :] = 0
        vals.append(v)
        d += 1
    return DiagonalForm(tuple(sorted(vals)), ncols - len(vals), nrows, ncols)


def _diagonalize_generic(ring: ChainRing, rows, ncols: int) -> DiagonalForm:
    N = ring.N
    A = [list(r) for r in rows]
    nrows = len(A)
    vals: List[int] = []
    d = 0
    top = min(nrows, ncols)
    while d < top:
        best = None
        best_v = N
        for i in range(d, nrows):
            for j in range(d, ncols):
                v = ring.val(A[i][j])
                if v < best_v:
                    best_v = v
                    best = (i, j)
        if best is None:
            break
        i, j = best
        v = best_v
        if i != d:
            A[d], A[i] = A[i], A[d]
        if j != d:
            for r in A:
                r[d], r[j] = r[j], r[d]
        uinv = ring.inv(ring.unit_part(A[d][d]))
        A[d] = [ring.mul(uinv, x) for x in A[d]]
        for i in range(d + 1, nrows):
            x = A[i][d]
            if ring.is_zero(x):
                continue
            fct = ring.div_pi_pow(x, v)
            A[i] = [ring.sub(A[i][k], ring.mul(fct, A[d][k])) for k in range(ncols)]
        for j in range(d + 1, ncols):
            A[d][j] = ring.zero
        vals.append(v)
        d += 1
    return DiagonalForm(tuple(sorted(vals)), ncols - len(vals), nrows, ncols)


def diagonalize(ring: ChainRing, rows, ncols: Optional[int] = None) -> DiagonalForm:
    """Diagonal normal form of a relation matrix by invertible row/column
    operations, pivoting on an entry of minimal pi-valuation (ties broken by
    (row, col) lexicographic order).

    ``rows`` is a sequence of length-``ncols`` scalar rows (or a 2d int array
    for a simple ring); ``ncols`` is mandatory for empty matrices.  The
    multiset of diagonal valuations together with the free-column count is an
    isomorphism invariant of the cokernel.
    """
    fast = ring.is_simple and ring.p ** ring.N <= 2 ** 31
    if isinstance(rows, np.ndarray):
        if rows.ndim != 2:
            raise InvalidInput("expected a 2d array")
        if not fast:
            raise InvalidInput("array input requires a simple small ring")
        nrows, nc = rows.shape
        if ncols is not None and ncols != nc:
            raise InvalidInput("ncols disagrees with the array shape")
        if nrows == 0 or nc == 0:
            return DiagonalForm((), nc, nrows, nc)
        A = rows.astype(np.int64, copy=True) % (ring.p ** ring.N)
        return _diagonalize_numpy(ring, A)

    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise InvalidInput("ncols is required for a matrix with no rows")
        ncols = len(rows[0])
    for r in rows:
        if len(r) != ncols:
            raise InvalidInput("ragged matrix")
    if not rows or ncols == 0:
        return DiagonalForm((), ncols, len(rows), ncols)
    if fast:
        mod = ring.p ** ring.N
        try:
            A = np.array(rows, dtype=np.int64)
        except (TypeError, ValueError, OverflowError) as exc:
            raise InvalidInput(f"non-integer entries for {ring!r}") from exc
        if A.ndim != 2:
            raise InvalidInput("ragged matrix")
        if (A < 0).any() or (A >= mod).any():
            raise InvalidInput(f"entries outside the canonical range of {ring!r}")
        return _diagonalize_numpy(ring, A)
    for r in rows:
        for x in r:
            ring.check_scalar(x)
    return _diagonalize_generic(ring, rows, ncols)


def cokernel_ordq(ring: ChainRing, rows, ncols: Optional[int] = None) -> int:
    """ord_q of the cokernel of the relation matrix, |coker| = q^ord.

    Every target coordinate without a pivot counts N (it contributes a full
    O/pi^N summand); the value is always finite and exact over O/pi^N.
    """
    form = diagonalize(ring, rows, ncols)
    return sum(min(v, ring.N) for v in form.diag_valuations) + ring.N * form.free_cols


def ordq_from_form(form: DiagonalForm, N: int, n: Optional[int] = None) -> int:
    """ord_q of the cokernel after base change O/pi^N -> O/pi^n (n <= N).

    The surjection carries an invertible diagonalization to an invertible one,
    so the valuations simply cap at n and free coordinates contribute n each.
    """
    if n is None:
        n = N
    if n > N:
        raise InvalidInput("base change target exceeds the computed truncation")
    return sum(min(v, n) for v in form.diag_valuations) + n * form.free_cols
