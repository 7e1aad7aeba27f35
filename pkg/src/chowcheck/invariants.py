"""Finite groups acting on variables by signed permutations.

An element sends each variable to plus or minus another variable of the
same weight; the group is closed off from its generators by breadth-first
search.  On top of the action sit the Reynolds and transfer operators,
+/-1 characters with their isotypic projections, per-degree bases of
invariants, a minimal generator sweep for the invariant algebra, and a
presentation of that algebra by generators and relations.
"""

from __future__ import annotations

from fractions import Fraction

from .polyarith import MonomialOrder, Polynomial, VarTable
from .groebner import Ideal, map_kernel, standard_monomials, subalgebra_member
from .linalg import independent_rows
from .ringpres import Presentation


class InvariantError(ValueError):
    pass


def _parse_signed_name(text: str):
    text = text.strip()
    sign = 1
    while text and text[0] in "+-":
        if text[0] == "-":
            sign = -sign
        text = text[1:].strip()
    if not text:
        raise InvariantError("empty variable name in group generator")
    return text, sign


class GroupAction:
    """A finite group of signed variable permutations of one table.

    Elements are tuples over variable positions: element[i] == (j, s)
    means the i-th variable maps to s times the j-th one.
    """

    __slots__ = ("table", "elements")

    def __init__(self, table: VarTable, generators):
        self.table = table
        gens = [self._element(g) for g in generators]
        identity = tuple((i, 1) for i in range(len(table)))
        seen = {identity}
        queue = [identity]
        while queue:
            cur = queue.pop()
            for g in gens:
                nxt = _compose(g, cur)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        self.elements = tuple(sorted(seen))

    def _element(self, spec) -> tuple:
        table = self.table
        if isinstance(spec, dict):
            pairs = {}
            for src, dst in spec.items():
                name, sign = _parse_signed_name(dst)
                pairs[table.index(src)] = (table.index(name), sign)
        else:
            pairs = {i: (j, s) for i, (j, s) in enumerate(spec)}
        if sorted(pairs) != list(range(len(table))):
            raise InvariantError("group generator must map every variable")
        images = [pairs[i] for i in range(len(table))]
        if sorted(j for j, _ in images) != list(range(len(table))):
            raise InvariantError("group generator is not a permutation")
        for i, (j, s) in enumerate(images):
            if s not in (1, -1):
                raise InvariantError("signs must be +1 or -1")
            if table.weights[i] != table.weights[j]:
                raise InvariantError("group generator does not preserve weights")
        return tuple(images)

    @property
    def order(self) -> int:
        return len(self.elements)

    def act(self, element: tuple, poly: Polynomial) -> Polynomial:
        if poly.context != self.table:
            raise InvariantError("polynomial lives in a different variable table")
        terms = {}
        for mono, coeff in poly.terms.items():
            exps = [0] * len(mono)
            sign = 1
            for i, e in enumerate(mono):
                if not e:
                    continue
                j, s = element[i]
                exps[j] += e
                if s < 0 and e % 2:
                    sign = -sign
            key = tuple(exps)
            val = terms.get(key, Fraction(0)) + sign * coeff
            if val:
                terms[key] = val
            else:
                terms.pop(key, None)
        return Polynomial(self.table, terms)

    def transfer(self, poly: Polynomial) -> Polynomial:
        """Sum of the whole orbit, with multiplicity |stabilizer|."""
        total = Polynomial.zero(self.table)
        for g in self.elements:
            total = total + self.act(g, poly)
        return total

    def reynolds(self, poly: Polynomial) -> Polynomial:
        return self.transfer(poly) * Fraction(1, self.order)

    def is_invariant(self, poly: Polynomial) -> bool:
        return all(self.act(g, poly) == poly for g in self.elements)


class Character:
    """A +/-1 one-dimensional character of a GroupAction."""

    __slots__ = ("action", "values")

    def __init__(self, action: GroupAction, values):
        self.action = action
        if callable(values):
            values = {g: values(g) for g in action.elements}
        self.values = dict(values)
        for g in action.elements:
            if self.values.get(g) not in (1, -1):
                raise InvariantError("character must take values +1 or -1")
        for g in action.elements:
            for h in action.elements:
                gh = _compose(g, h)
                if self.values[gh] != self.values[g] * self.values[h]:
                    raise InvariantError("character is not multiplicative")

    @staticmethod
    def trivial(action: GroupAction) -> "Character":
        return Character(action, {g: 1 for g in action.elements})

    @staticmethod
    def determinant(action: GroupAction) -> "Character":
        """Determinant of the signed permutation matrix of each element."""
        return Character(action, {g: _det(g) for g in action.elements})

    def __call__(self, element: tuple) -> int:
        return self.values[element]


def _compose(g: tuple, h: tuple) -> tuple:
    """Element acting as: apply h first, then g."""
    out = []
    for j, s in h:
        j2, s2 = g[j]
        out.append((j2, s * s2))
    return tuple(out)


def _det(element: tuple) -> int:
    perm = [j for j, _ in element]
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    for _, s in element:
        sign *= s
    return sign


def isotypic_component(action: GroupAction, character: Character,
                       poly: Polynomial) -> Polynomial:
    """Projection onto the character's isotypic summand."""
    total = Polynomial.zero(action.table)
    for g in action.elements:
        total = total + action.act(g, poly) * character(g)
    return total * Fraction(1, action.order)


def invariant_basis(action: GroupAction, degree: int,
                    character: Character | None = None) -> list:
    """Monic basis of the degree piece of the invariants (or an isotypic piece).

    Candidates are Reynolds (or isotypic) images of the degree monomials in
    decreasing order; a maximal independent subset is kept and normalised.
    """
    table = action.table
    order = MonomialOrder.wgrevlex(table.weights)
    monos = standard_monomials(Ideal(table, ()), degree, order)
    images = []
    for m in monos:
        f = Polynomial(table, {m: Fraction(1)})
        f = (action.reynolds(f) if character is None
             else isotypic_component(action, character, f))
        if not f.is_zero():
            images.append(f)
    columns = sorted({m for f in images for m in f.terms}, key=order.key, reverse=True)
    index = {m: i for i, m in enumerate(columns)}
    matrix = []
    for f in images:
        row = [Fraction(0)] * len(columns)
        for m, c in f.terms.items():
            row[index[m]] = c
        matrix.append(row)
    kept = independent_rows(matrix)
    out = []
    for i in kept:
        f = images[i]
        out.append(f * (1 / f.leading_coefficient(order)))
    return out


def algebra_generators(action: GroupAction, max_degree: int | None = None,
                       tag_base: str = "z") -> list:
    """Minimal generators of the invariant algebra, swept degree by degree.

    The sweep runs through the Noether bound |G| unless a smaller cap is
    given; within a degree, candidates are taken in the deterministic
    invariant_basis order and kept when they are not already expressible in
    the generators found so far.
    """
    bound = action.order if max_degree is None else max_degree
    selected = []
    for d in range(1, bound + 1):
        for f in invariant_basis(action, d):
            if selected:
                names = [f"{tag_base}{i}" for i in range(len(selected))]
                if subalgebra_member(f, list(zip(names, selected))) is not None:
                    continue
            selected.append(f)
    return selected


def invariant_presentation(action: GroupAction, names=None, generators=None,
                           check_degree: int | None = None) -> Presentation:
    """Present the invariant algebra by generators and relations.

    The relation ideal is the kernel of the evaluation map onto the chosen
    generators.  Completeness holds in every degree: the canonical sweep up
    to the group-order degree bound yields generators of the whole invariant
    algebra, and each of those is checked to be expressible in the supplied
    ones.  A degreewise dimension comparison through the check degree
    (default |G| + 2) runs as an independent cross-check.
    """
    canonical = algebra_generators(action)
    if generators is None:
        generators = canonical
    generators = list(generators)
    if names is None:
        names = [f"z{i+1}" for i in range(len(generators))]
    if len(names) != len(generators):
        raise InvariantError("one name per generator is required")
    weights = []
    for f in generators:
        if f.is_zero() or not f.is_homogeneous():
            raise InvariantError("generators must be homogeneous and nonzero")
        if not action.is_invariant(f):
            raise InvariantError(f"generator is not invariant: {f}")
        weights.append(f.weighted_degree())
    table = VarTable(names, weights)
    supplied = list(zip(names, generators))
    for f in canonical:
        if subalgebra_member(f, supplied) is None:
            raise InvariantError(
                f"generators do not span the invariant algebra; "
                f"not reachable: {f}"
            )
    kernel = map_kernel(table, dict(zip(names, generators)))
    pres = Presentation(table, kernel.gens, check=False)
    bound = action.order + 2 if check_degree is None else check_degree
    for d in range(0, bound + 1):
        expected = len(invariant_basis(action, d)) if d else 1
        got = pres.dim(d)
        if expected != got:
            raise InvariantError(
                f"generators miss the invariants in degree {d}: "
                f"dimension {got} presented, {expected} invariant"
            )
    return pres
