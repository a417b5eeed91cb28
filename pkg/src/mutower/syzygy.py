"""Strong Groebner bases over R[T_1, ..., T_r] for a finite chain ring R.

This is the exact linear-algebra substrate for Koszul homology of finitely
presented modules over the abelian Iwasawa algebra truncations
(O/pi^N)[[T_1, ..., T_r]]: because the homology in question is supported at
the maximal ideal (pi, T_1, ..., T_r), it agrees with the homology computed
over the polynomial ring, where Buchberger-style computation is available.

Elements of a free module S^s are dicts {(position, monomial): scalar} with
scalars in the chain ring and monomials exponent tuples.  The term order is
degree-lexicographic with a position tie-break, optionally preceded by a
block flag so that a leading block can be eliminated (module elimination
order).  Every basis element is normalized to leading coefficient pi^v; a
strong basis is maintained by completing S-polynomials together with the
annihilator multiples pi^(N-v) * g, as in the standard chain-ring Buchberger
theory.

The two consumers are:

  * preimage_gens  -- generators of {v : v B in W} for a matrix B and a
                      submodule W (syzygies, kernels, relation modules);
  * quotient_ordq  -- q-order of a finite quotient S^s / W read off the
                      staircase of a strong basis: each standard
                      position-monomial contributes the minimal leading-
                      coefficient valuation among the basis leading terms
                      dividing it.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .chainring import ChainRing
from .errors import InvalidInput

Term = Tuple[int, Tuple[int, ...]]
Element = Dict[Term, object]


class PolyContext:
    """A chain ring together with a number of polynomial variables."""

    def __init__(self, ring: ChainRing, nvars: int):
        self.ring = ring
        self.nvars = nvars

    def key(self, split: int):
        def _key(term: Term):
            pos, mono = term
            return (1 if pos < split else 0, sum(mono), mono, -pos)

        return _key


def _clean(ctx: PolyContext, elem: Element) -> Element:
    ring = ctx.ring
    return {t: c for t, c in elem.items() if not ring.is_zero(c)}


def _add_into(ctx: PolyContext, acc: Element, other: Element, factor, shift: Tuple[int, ...], negate: bool) -> None:
    ring = ctx.ring
    for (pos, mono), c in other.items():
        val = ring.mul(factor, c)
        if negate:
            val = ring.neg(val)
        t = (pos, tuple(a + b for a, b in zip(mono, shift)))
        cur = acc.get(t)
        new = val if cur is None else ring.add(cur, val)
        if ring.is_zero(new):
            acc.pop(t, None)
        else:
            acc[t] = new


def scale_elem(ctx: PolyContext, elem: Element, factor) -> Element:
    out: Element = {}
    _add_into(ctx, out, elem, factor, (0,) * ctx.nvars, False)
    return out


def leading_term(ctx: PolyContext, elem: Element, keyfn) -> Term:
    return max(elem, key=keyfn)


def _divides(lt: Term, t: Term) -> bool:
    return lt[0] == t[0] and all(a <= b for a, b in zip(lt[1], t[1]))


def normal_form(ctx: PolyContext, elem: Element, basis: List[Element], keyfn) -> Element:
    """Full strong reduction of ``elem`` by ``basis`` (leading coefficients of
    ``basis`` are pi^v after normalization)."""
    ring = ctx.ring
    work = dict(elem)
    out: Element = {}
    lts = [(leading_term(ctx, g, keyfn), g) for g in basis]
    lt_vals = [ring.val(g[lt]) for lt, g in lts]
    while work:
        t = max(work, key=keyfn)
        c = work.pop(t)
        vc = ring.val(c)
        red = None
        for (lt, g), vg in zip(lts, lt_vals):
            if vg <= vc and _divides(lt, t):
                red = (lt, g, vg)
                break
        if red is None:
            out[t] = c
            continue
        lt, g, vg = red
        # factor * lc(g) == c exactly, so the term is killed.
        factor = ring.mul(ring.unit_part(c), ring.pi_pow(vc - vg))
        shift = tuple(a - b for a, b in zip(t[1], lt[1]))
        work[t] = c
        _add_into(ctx, work, g, factor, shift, True)
        work.pop(t, None)
    return out


def _normalize(ctx: PolyContext, elem: Element, keyfn) -> Element:
    lt = leading_term(ctx, elem, keyfn)
    u = ctx.ring.unit_part(elem[lt])
    return scale_elem(ctx, elem, ctx.ring.inv(u))


def strong_groebner(ctx: PolyContext, gens: Sequence[Element], split: int = 0) -> List[Element]:
    """Strong Groebner basis of the submodule generated by ``gens``."""
    ring = ctx.ring
    keyfn = ctx.key(split)
    basis: List[Element] = []
    for g in gens:
        g = _clean(ctx, dict(g))
        if g:
            basis.append(_normalize(ctx, g, keyfn))

    pending: List[Tuple[str, int, int]] = []
    for i in range(len(basis)):
        pending.append(("ann", i, i))
        for j in range(i):
            pending.append(("spair", j, i))

    def lt_of(i):
        return leading_term(ctx, basis[i], keyfn)

    while pending:
        kind, i, j = pending.pop(0)
        gi, gj = basis[i], basis[j]
        lti, ltj = lt_of(i), lt_of(j)
        vi, vj = ring.val(gi[lti]), ring.val(gj[ltj])
        if kind == "ann":
            if vi == 0:
                continue
            cand = scale_elem(ctx, gi, ring.pi_pow(ring.N - vi))
        else:
            if lti[0] != ltj[0]:
                continue
            lcm = tuple(max(a, b) for a, b in zip(lti[1], ltj[1]))
            v = max(vi, vj)
            shift_i = tuple(a - b for a, b in zip(lcm, lti[1]))
            shift_j = tuple(a - b for a, b in zip(lcm, ltj[1]))
            cand = {}
            _add_into(ctx, cand, gi, ring.pi_pow(v - vi), shift_i, False)
            _add_into(ctx, cand, gj, ring.pi_pow(v - vj), shift_j, True)
        cand = _clean(ctx, cand)
        if not cand:
            continue
        rem = normal_form(ctx, cand, basis, keyfn)
        if not rem:
            continue
        rem = _normalize(ctx, rem, keyfn)
        basis.append(rem)
        k = len(basis) - 1
        pending.append(("ann", k, k))
        for t in range(k):
            pending.append(("spair", t, k))
    return basis


def preimage_gens(
    ctx: PolyContext,
    target_rank: int,
    mapped: Sequence[Element],
    sub: Sequence[Element],
) -> List[Element]:
    """Generators of {v in S^s : sum_i v_i * mapped[i] in <sub>}, where
    ``mapped[i]`` in S^target_rank is the image of the i-th source basis
    vector.  Computed by module elimination on the graph submodule."""
    s = len(mapped)
    zero_mono = (0,) * ctx.nvars
    gens: List[Element] = []
    for i, b in enumerate(mapped):
        g: Element = {}
        for (pos, mono), c in b.items():
            g[(pos, mono)] = c
        t = (target_rank + i, zero_mono)
        g[t] = ctx.ring.add(g.get(t, ctx.ring.zero), ctx.ring.one)
        gens.append(_clean(ctx, g))
    for w in sub:
        gens.append(_clean(ctx, dict(w)))
    basis = strong_groebner(ctx, gens, split=target_rank)
    out: List[Element] = []
    for g in basis:
        if any(pos < target_rank for (pos, _mono) in g):
            continue
        stripped = {(pos - target_rank, mono): c for (pos, mono), c in g.items()}
        if stripped:
            out.append(stripped)
    return out


def quotient_ordq(ctx: PolyContext, rank: int, gens: Sequence[Element]) -> int:
    """ord_q of S^rank / <gens>; raises InvalidInput if the quotient is not
    finite (no pure-power unit leading term in some variable)."""
    ring = ctx.ring
    if rank == 0:
        return 0
    basis = strong_groebner(ctx, gens, split=0)
    keyfn = ctx.key(0)
    lts: Dict[int, List[Tuple[Tuple[int, ...], int]]] = {pos: [] for pos in range(rank)}
    for g in basis:
        lt = leading_term(ctx, g, keyfn)
        lts[lt[0]].append((lt[1], ring.val(g[lt])))

    total = 0
    for pos in range(rank):
        entries = lts[pos]
        bounds = []
        for k in range(ctx.nvars):
            b = None
            for mono, v in entries:
                if v == 0 and all(mono[j] == 0 for j in range(ctx.nvars) if j != k):
                    b = mono[k] if b is None else min(b, mono[k])
            if b is None:
                raise InvalidInput("quotient module is not finite")
            bounds.append(b)

        def walk(prefix):
            nonlocal total
            if len(prefix) == ctx.nvars:
                v = ring.N
                for mono, vg in entries:
                    if all(a <= b for a, b in zip(mono, prefix)):
                        v = min(v, vg)
                total += v
                return
            for x in range(bounds[len(prefix)]):
                walk(prefix + (x,))

        if all(b > 0 for b in bounds):
            walk(())
    return total
