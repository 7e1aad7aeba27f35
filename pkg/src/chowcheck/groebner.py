"""Groebner bases over Q and the ideal operations built on them.

The engine is Buchberger's algorithm with the Gebauer-Moeller pair update
(coprime, chain and equal-lcm criteria) and normal selection.  Internally
polynomials are primitive integer coefficient dicts so the hot reduction
loop never touches Fraction; reduced monic bases are produced only at the
end.  Reduced bases are unique per (ideal, order) and cached write-once on
the Ideal object.

Derived operations follow the standard eliminations: kernels of ring maps
via graph ideals, intersections via the one-tag trick, colon ideals via
intersection with a principal ideal, subalgebra membership via tag
variables ordered after the originals.
"""

from __future__ import annotations

import math
from bisect import insort
from fractions import Fraction
from functools import reduce as _fold
from heapq import heappush, heappop
from itertools import count

from .polyarith import (
    GREVLEX,
    MonomialOrder,
    Polynomial,
    VarTable,
    mono_coprime,
    mono_div,
    mono_lcm,
    mono_mul,
)


# ---------------------------------------------------------------------------
# integer-core helpers

def _int_terms(poly: Polynomial) -> dict:
    """Clear denominators and strip content; {} for the zero polynomial."""
    if not poly.terms:
        return {}
    den = 1
    for c in poly.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    terms = {m: int(c * den) for m, c in poly.terms.items()}
    g = _fold(math.gcd, terms.values())
    if g > 1:
        terms = {m: c // g for m, c in terms.items()}
    return terms


def _strip(terms: dict, lead_mono=None, keyfn=None) -> dict:
    """Divide by the content and normalise the leading sign to positive."""
    if not terms:
        return terms
    g = _fold(math.gcd, terms.values())
    if lead_mono is None:
        lead_mono = max(terms, key=keyfn)
    if terms[lead_mono] < 0:
        g = -g
    if g != 1:
        terms = {m: c // g for m, c in terms.items()}
    return terms


class _Engine:
    """Buchberger state for one monomial order and one variable count."""

    def __init__(self, order: MonomialOrder):
        self.order = order
        self._keys = {}

    def key(self, mono):
        k = self._keys.get(mono)
        if k is None:
            k = self.order.key(mono)
            self._keys[mono] = k
        return k

    # -- reduction ----------------------------------------------------------

    def reduce_int(self, p: dict, reducers) -> dict:
        """Fully reduce integer terms modulo reducers, fraction-free.

        `reducers` is a list of (lmkey, lm, lc, terms) sorted by lmkey.  The
        result is primitive with positive leading coefficient; membership in
        the generated ideal is preserved up to a nonzero rational factor.
        """
        work = dict(p)
        rem = {}
        if not work:
            return rem
        key = self.key
        agenda = sorted((key(m), m) for m in work)
        while agenda:
            _, m = agenda.pop()
            c = work.get(m)
            if not c:
                work.pop(m, None)
                continue
            hit = None
            for _, lm, lc, terms in reducers:
                q = mono_div(m, lm)
                if q is not None:
                    hit = (lc, terms, q)
                    break
            if hit is None:
                rem[m] = c
                del work[m]
                continue
            lc, terms, q = hit
            d = math.gcd(c, lc)
            s = lc // d
            t = c // d
            if s != 1:
                for mm in work:
                    work[mm] *= s
                for mm in rem:
                    rem[mm] *= s
            for gm, gc in terms.items():
                mm = mono_mul(gm, q)
                old = work.get(mm)
                if old is None:
                    v = -t * gc
                    if v:
                        work[mm] = v
                        insort(agenda, (key(mm), mm))
                else:
                    v = old - t * gc
                    if v:
                        work[mm] = v
                    else:
                        del work[mm]
        if rem:
            rem = _strip(rem, keyfn=self.key)
        return rem

    def spoly(self, f, g) -> dict:
        """S-polynomial of primitive integer term dicts, stripped."""
        lmf, lcf, tf = f
        lmg, lcg, tg = g
        L = mono_lcm(lmf, lmg)
        qf = mono_div(L, lmf)
        qg = mono_div(L, lmg)
        d = math.gcd(lcf, lcg)
        a = lcg // d
        b = lcf // d
        out = {}
        for m, c in tf.items():
            out[mono_mul(m, qf)] = a * c
        for m, c in tg.items():
            mm = mono_mul(m, qg)
            v = out.get(mm, 0) - b * c
            if v:
                out[mm] = v
            else:
                out.pop(mm, None)
        return out


def buchberger(gens, order: MonomialOrder = GREVLEX):
    """Reduced monic Groebner basis, sorted by decreasing leading monomial."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return ()
    context = gens[0].context
    for g in gens:
        if g.context != context:
            raise ValueError("generators live in different variable tables")
    eng = _Engine(order)
    key = eng.key

    lead = []      # per element: (lmkey, lm, lc, terms)
    alive = set()
    reducers = []  # alive + dead, sorted by lmkey; duplicates of `lead`
    pairs = []     # heap of (lcmkey, i, j)
    pair_live = {} # (i,j) -> lcm monomial

    def push_element(terms):
        """Insert a fully reduced nonzero element, run the pair update."""
        t = len(lead)
        lm = max(terms, key=key)
        entry = (key(lm), lm, terms[lm], terms)
        # Gebauer-Moeller update for the new index t
        cand = []
        for i in sorted(alive):
            L = mono_lcm(lead[i][1], lm)
            cand.append((key(L), L, i))
        cand.sort()
        kept = []
        while cand:
            Lk, L, i = cand.pop(0)
            cop = mono_coprime(lead[i][1], lm)
            if not cop:
                dominated = any(
                    mono_div(L, L2) is not None for _, L2, _ in cand
                ) or any(mono_div(L, L2) is not None for _, L2, _ in kept)
                if dominated:
                    continue
            kept.append((Lk, L, i))
        # chain criterion against surviving old pairs
        for (i, j), L in list(pair_live.items()):
            if (
                mono_div(L, lm) is not None
                and mono_lcm(lead[i][1], lm) != L
                and mono_lcm(lead[j][1], lm) != L
            ):
                del pair_live[(i, j)]
        for Lk, L, i in kept:
            if mono_coprime(lead[i][1], lm):
                continue
            pair_live[(i, t)] = L
            heappush(pairs, (Lk, i, t))
        for i in list(alive):
            if mono_div(lead[i][1], lm) is not None:
                alive.discard(i)
        lead.append(entry)
        alive.add(t)
        insort(reducers, entry, key=lambda e: e[0])

    for g in sorted(gens, key=lambda p: key(p.leading_monomial(order))):
        r = eng.reduce_int(_int_terms(g), reducers)
        if r:
            push_element(r)

    while pairs:
        _, i, j = heappop(pairs)
        if pair_live.pop((i, j), None) is None:
            continue
        s = eng.spoly(
            (lead[i][1], lead[i][2], lead[i][3]),
            (lead[j][1], lead[j][2], lead[j][3]),
        )
        r = eng.reduce_int(s, reducers)
        if r:
            push_element(r)

    # interreduce the minimal generators to the unique reduced basis
    minimal = sorted(alive, key=lambda i: lead[i][0])
    basis = {i: lead[i][3] for i in minimal}
    changed = True
    while changed:
        changed = False
        for i in minimal:
            others = [
                (key(max(t, key=key)), max(t, key=key), t[max(t, key=key)], t)
                for j, t in basis.items()
                if j != i
            ]
            others.sort(key=lambda e: e[0])
            r = eng.reduce_int(basis[i], others)
            if r != basis[i]:
                basis[i] = r
                changed = True

    out = []
    for i in minimal:
        terms = basis[i]
        lm = max(terms, key=key)
        lc = terms[lm]
        poly = Polynomial(context, {m: Fraction(c, lc) for m, c in terms.items()})
        out.append(poly)
    out.sort(key=lambda p: key(p.leading_monomial(order)), reverse=True)
    return tuple(out)


# ---------------------------------------------------------------------------
# reduction against a monic basis, exact coefficients

def reduce_full(f: Polynomial, basis, order: MonomialOrder = GREVLEX, with_quotients=False):
    """Remainder of f modulo a list of polynomials (top and tail reduction).

    Returns the remainder, or (remainder, quotients) with `with_quotients`,
    where f = sum(q_i * basis_i) + remainder exactly.
    """
    context = f.context
    key = order.key
    entries = []
    for i, g in enumerate(basis):
        if g.is_zero():
            continue
        lm = g.leading_monomial(order)
        entries.append((key(lm), lm, g.terms[lm], g.terms, i))
    entries.sort(key=lambda e: e[0])
    work = dict(f.terms)
    rem = {}
    quotients = [dict() for _ in basis]
    agenda = sorted((key(m), m) for m in work)
    while agenda:
        _, m = agenda.pop()
        c = work.get(m)
        if not c:
            continue
        hit = None
        for _, lm, lc, terms, i in entries:
            q = mono_div(m, lm)
            if q is not None:
                hit = (lc, terms, q, i)
                break
        if hit is None:
            rem[m] = c
            del work[m]
            continue
        lc, terms, q, i = hit
        factor = c / lc
        if with_quotients:
            qd = quotients[i]
            qd[q] = qd.get(q, Fraction(0)) + factor
        for gm, gc in terms.items():
            mm = mono_mul(gm, q)
            old = work.get(mm)
            if old is None:
                v = -factor * gc
                if v:
                    work[mm] = v
                    insort(agenda, (key(mm), mm))
            else:
                v = old - factor * gc
                if v:
                    work[mm] = v
                else:
                    del work[mm]
    r = Polynomial(context, rem)
    if with_quotients:
        qs = [Polynomial(context, qd) for qd in quotients]
        return r, qs
    return r


def exact_divide(p: Polynomial, f: Polynomial) -> Polynomial:
    """Quotient p/f when f divides p exactly, else ValueError."""
    if f.is_zero():
        raise ValueError("division by the zero polynomial")
    r, qs = reduce_full(p, [f], GREVLEX, with_quotients=True)
    if not r.is_zero():
        raise ValueError("polynomial is not divisible")
    return qs[0]


# ---------------------------------------------------------------------------
# ideals

class Ideal:
    """Finitely generated ideal in Q[context] with cached reduced bases."""

    __slots__ = ("context", "gens", "_gb")

    def __init__(self, context: VarTable, gens):
        self.context = context
        clean = []
        for g in gens:
            if isinstance(g, (int, Fraction)):
                g = Polynomial.constant(context, g)
            if g.context != context:
                raise ValueError("generator lives in a different variable table")
            if not g.is_zero():
                clean.append(g)
        self.gens = tuple(clean)
        self._gb = {}

    def __repr__(self):
        inside = ", ".join(str(g) for g in self.gens) or "0"
        return f"Ideal({inside})"

    def groebner(self, order: MonomialOrder = GREVLEX):
        """Reduced monic basis; cached write-once per order."""
        cached = self._gb.get(order.tag)
        if cached is None:
            cached = buchberger(self.gens, order)
            self._gb[order.tag] = cached
        return cached

    def normal_form(self, f: Polynomial, order: MonomialOrder = GREVLEX, with_quotients=False):
        return reduce_full(f, self.groebner(order), order, with_quotients)

    def member(self, f: Polynomial, order: MonomialOrder = GREVLEX) -> bool:
        return self.normal_form(f, order).is_zero()

    def is_trivial(self) -> bool:
        """True when the ideal is the whole ring."""
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.gens

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.context != self.context:
            raise ValueError("ideals live in different variable tables")
        return Ideal(self.context, self.gens + other.gens)

    def contains(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.member(other)
        return all(self.member(g) for g in other.gens)

    def equals(self, other: "Ideal") -> bool:
        return ideal_equal(self, other)


def ideal_equal(I: Ideal, J: Ideal, order: MonomialOrder = GREVLEX) -> bool:
    """Compare reduced bases under one fixed order."""
    if I.context != J.context:
        return False
    return list(I.groebner(order)) == list(J.groebner(order))


# ---------------------------------------------------------------------------
# variable bookkeeping for eliminations

def _fresh_names(base: str, n: int, taken) -> list:
    names = []
    i = 0
    for _ in range(n):
        while True:
            cand = f"{base}{i}"
            i += 1
            if cand not in taken:
                names.append(cand)
                break
    return names


def _block_order(left_weights, right_weights) -> MonomialOrder:
    return MonomialOrder.block(
        len(left_weights),
        MonomialOrder.wgrevlex(left_weights) if left_weights else MonomialOrder.grevlex(),
        MonomialOrder.wgrevlex(right_weights),
    )


def eliminate(I: Ideal, drop) -> Ideal:
    """Generators of I intersected with Q[kept variables].

    The result lives in the VarTable of kept variables (original relative
    order and weights).
    """
    drop = list(drop)
    ctx = I.context
    for name in drop:
        ctx.index(name)
    dropset = set(drop)
    if len(dropset) != len(drop):
        raise ValueError("duplicate variable in elimination list")
    kept = [n for n in ctx.names if n not in dropset]
    dropped = [n for n in ctx.names if n in dropset]
    wd = tuple(ctx.weight(n) for n in dropped)
    wk = tuple(ctx.weight(n) for n in kept)
    perm = VarTable(dropped + kept, wd + wk)
    kept_table = VarTable(kept, wk)
    order = _block_order(wd, wk)
    gens = [g.rename(perm) for g in I.gens]
    gb = buchberger(gens, order)
    keptset = set(kept)
    out = []
    for g in gb:
        if g.support_names() <= keptset:
            out.append(g.rename(kept_table))
    return Ideal(kept_table, out)


def map_kernel(source: VarTable, images: dict, target_ideal: Ideal | None = None,
               target: VarTable | None = None) -> Ideal:
    """Kernel of the ring map Q[source] -> Q[target]/target_ideal.

    `images` maps each source variable name to a Polynomial over the target
    table (or a constant).  Computed from the graph ideal by eliminating
    the target block.  A source variable whose image is a bare target
    variable is identified with it instead of eliminated, which keeps the
    graph small for restriction-style maps.
    """
    if target is None:
        if target_ideal is not None:
            target = target_ideal.context
        else:
            for v in images.values():
                if isinstance(v, Polynomial):
                    target = v.context
                    break
    if target is None:
        raise ValueError("cannot infer the target variable table")
    missing = [n for n in source.names if n not in images]
    if missing:
        raise ValueError(f"no image given for {missing[0]!r}")
    imgs = {}
    for name in source.names:
        img = images[name]
        if isinstance(img, (int, Fraction)):
            img = Polynomial.constant(target, img)
        if img.context != target:
            raise ValueError("image lives in a different variable table")
        imgs[name] = img
    # identify tags whose image is a single bare variable, one per variable
    shared = {}  # target variable name -> tag name
    for name in source.names:
        img = imgs[name]
        if len(img.terms) != 1:
            continue
        (mono, c), = img.terms.items()
        if c != 1 or sum(mono) != 1:
            continue
        tvar = target.names[mono.index(1)]
        if tvar not in shared:
            shared[tvar] = name
    elim_names = [n for n in target.names if n not in shared]
    welim = tuple(target.weight(n) for n in elim_names)
    fresh = _fresh_names("_z", len(elim_names), set(source.names))
    combined = VarTable(tuple(fresh) + source.names, welim + source.weights)
    rename_t = dict(zip(elim_names, fresh))
    rename_t.update({tv: tag for tv, tag in shared.items()})
    gens = []
    if target_ideal is not None:
        if target_ideal.context != target:
            raise ValueError("target ideal lives in a different variable table")
        for g in target_ideal.gens:
            gens.append(g.rename(combined, rename_t))
    shared_tags = set(shared.values())
    for name in source.names:
        if name in shared_tags:
            continue
        tag = Polynomial.variable(combined, name)
        gens.append(tag - imgs[name].rename(combined, rename_t))
    order = _block_order(welim, source.weights)
    gb = buchberger(gens, order)
    srcset = set(source.names)
    out = []
    for g in gb:
        if g.support_names() <= srcset:
            out.append(g.rename(source))
    return Ideal(source, out)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I intersected with J via the auxiliary variable trick."""
    ctx = I.context
    if J.context != ctx:
        raise ValueError("ideals live in different variable tables")
    if I.is_zero() or J.is_zero():
        return Ideal(ctx, [])
    tname = _fresh_names("_t", 1, set(ctx.names))[0]
    table = VarTable((tname,) + ctx.names, (1,) + ctx.weights)
    t = Polynomial.variable(table, tname)
    one = Polynomial.one(table)
    gens = [t * f.rename(table) for f in I.gens]
    gens += [(one - t) * g.rename(table) for g in J.gens]
    elim = eliminate(Ideal(table, gens), [tname])
    # eliminate() returns the kept table, which equals ctx
    return Ideal(ctx, [g.rename(ctx) for g in elim.gens])


def ideal_quotient(I: Ideal, f: Polynomial) -> Ideal:
    """Colon ideal (I : f) via intersection with the principal ideal (f)."""
    if f.context != I.context:
        raise ValueError("polynomial lives in a different variable table")
    if f.is_zero():
        raise ValueError("colon by the zero polynomial")
    H = intersect(I, Ideal(I.context, [f]))
    return Ideal(I.context, [exact_divide(g, f) for g in H.gens])


def is_nonzerodivisor(f: Polynomial, I: Ideal) -> bool:
    """True when f is a non-zero-divisor on Q[context]/I."""
    return ideal_equal(ideal_quotient(I, f), I)


def subalgebra_member(f: Polynomial, gens, tag_table: VarTable | None = None):
    """Express f in the subalgebra generated by named polynomials.

    `gens` is a list of (name, Polynomial) over f's table.  Returns the
    expression as a Polynomial over the tag table (tags weighted by the
    weighted degree of each generator) or None when f is not a member.
    Tag variables are ordered after the original variables so the normal
    form pushes everything expressible into tags.
    """
    ctx = f.context
    names = [n for n, _ in gens]
    if tag_table is None:
        weights = []
        for n, g in gens:
            d = g.weighted_degree()
            weights.append(d if d > 0 else 1)
        tag_table = VarTable(names, weights)
    if set(names) & set(ctx.names):
        raise ValueError("tag name collides with an original variable")
    combined = VarTable(ctx.names + tag_table.names, ctx.weights + tag_table.weights)
    gens_c = []
    for n, g in gens:
        if g.context != ctx:
            raise ValueError("generator lives in a different variable table")
        gens_c.append(Polynomial.variable(combined, n) - g.rename(combined))
    order = _block_order(ctx.weights, tag_table.weights)
    gb = buchberger(gens_c, order)
    nf = reduce_full(f.rename(combined), gb, order)
    if nf.support_names() <= set(tag_table.names):
        return nf.rename(tag_table)
    return None


def zero_dimensional(I: Ideal, order: MonomialOrder = GREVLEX):
    """(True, count of standard monomials) for 0-dimensional I, else (False, None)."""
    gb = I.groebner(order)
    if not gb:
        return (False, None) if len(I.context) else (True, 1)
    if len(gb) == 1 and gb[0].is_constant():
        return True, 0
    n = len(I.context)
    lms = [g.leading_monomial(order) for g in gb]
    bounds = [None] * n
    for lm in lms:
        support = [i for i, e in enumerate(lm) if e]
        if len(support) == 1:
            i = support[0]
            e = lm[i]
            if bounds[i] is None or e < bounds[i]:
                bounds[i] = e
    if any(b is None for b in bounds):
        return False, None
    total = 0
    stack = [(0, [0] * n)]
    while stack:
        i, exps = stack.pop()
        if i == n:
            m = tuple(exps)
            if not any(mono_div(m, lm) is not None for lm in lms):
                total += 1
            continue
        for e in range(bounds[i]):
            stack.append((i + 1, exps[:i] + [e] + [0] * (n - i - 1)))
    return True, total


def standard_monomials(I: Ideal, degree: int, order: MonomialOrder = GREVLEX):
    """Monomials of exact weighted degree not in the leading term ideal.

    Sorted decreasingly in the order; this is the canonical linear basis of
    the degree piece of Q[context]/I.
    """
    gb = I.groebner(order)
    lms = [g.leading_monomial(order) for g in gb]
    ctx = I.context
    n = len(ctx)
    w = ctx.weights
    out = []

    def walk(i, acc, exps):
        if i == n:
            if acc == degree:
                m = tuple(exps)
                if not any(mono_div(m, lm) is not None for lm in lms):
                    out.append(m)
            return
        remaining = degree - acc
        # weights are positive so the exponent range is finite
        for e in range(remaining // w[i] + 1):
            exps.append(e)
            walk(i + 1, acc + e * w[i], exps)
            exps.pop()

    walk(0, 0, [])
    out.sort(key=order.key, reverse=True)
    return out


def graded_dimension_of_quotient(I: Ideal, degree: int) -> int:
    return len(standard_monomials(I, degree))


# ---------------------------------------------------------------------------
# independent membership oracle for tests

def brute_force_member(f: Polynomial, gens, slack: int = 2):
    """Certify membership by solving for cofactors of bounded degree.

    Searches for a_i with deg(a_i * g_i) <= deg(f) + slack such that
    f = sum a_i g_i.  Returns True when such a combination exists; False is
    inconclusive (membership may still hold with larger cofactors).
    """
    from .linalg import solve_linear

    ctx = f.context
    if f.is_zero():
        return True
    d = f.total_degree() + slack
    columns = []
    for g in gens:
        if g.is_zero():
            continue
        dg = g.total_degree()
        bound = d - dg
        if bound < 0:
            continue
        for m in _monomials_up_to(len(ctx), bound):
            prod = {}
            for gm, gc in g.terms.items():
                prod[mono_mul(gm, m)] = gc
            columns.append(prod)
    if not columns:
        return False
    rows = sorted({m for col in columns for m in col} | set(f.terms))
    index = {m: i for i, m in enumerate(rows)}
    matrix = [[Fraction(0)] * len(columns) for _ in rows]
    for j, col in enumerate(columns):
        for m, c in col.items():
            matrix[index[m]][j] = c
    rhs = [f.terms.get(m, Fraction(0)) for m in rows]
    return solve_linear(matrix, rhs) is not None


def _monomials_up_to(n: int, d: int):
    if n == 0:
        yield ()
        return
    for e in range(d + 1):
        for rest in _monomials_up_to(n - 1, d - e):
            yield (e,) + rest
