"""Finitely presented graded rings, graded maps, and fiber products.

A presentation is Q[x_1..x_n]/I with positive integer weights on the
variables and weighted-homogeneous relations.  Maps are determined by
generator images and are checked to preserve the grading and to kill the
source relations.  The fiber product of two maps out of a common free tag
ring is presented by the intersection of their kernels; relations that
only exist on one side of a fiber square are transported across it by
`apply_quotient`, solving for a correction supported on the tags the other
side kills whenever the naive lift fails.
"""

from __future__ import annotations

from fractions import Fraction

from .polyarith import MonomialOrder, Polynomial, VarTable
from .groebner import Ideal, intersect, map_kernel, standard_monomials
from .linalg import solve_linear, sparse_rank


class PresentationError(ValueError):
    pass


class Presentation:
    """Q[table]/relations with weighted-homogeneous relations."""

    __slots__ = ("table", "relations", "order")

    def __init__(self, table: VarTable, relations=(), check: bool = True):
        self.table = table
        rels = []
        for rel in relations:
            if isinstance(rel, (int, Fraction)):
                rel = Polynomial.constant(table, rel)
            if rel.context != table:
                raise PresentationError("relation lives in a different variable table")
            if rel.is_zero():
                continue
            if not rel.is_homogeneous():
                raise PresentationError(f"relation is not weighted-homogeneous: {rel}")
            rels.append(rel)
        self.relations = Ideal(table, rels)
        self.order = MonomialOrder.wgrevlex(table.weights)
        if check and rels:
            gb = self.relations.groebner(self.order)
            if len(gb) == 1 and gb[0].is_constant():
                raise PresentationError("relations collapse the ring to zero")

    @staticmethod
    def free(names, weights=None) -> "Presentation":
        return Presentation(VarTable(names, weights), ())

    def is_free(self) -> bool:
        return self.relations.is_zero()

    def normal_form(self, f: Polynomial) -> Polynomial:
        return self.relations.normal_form(f, self.order)

    def is_zero(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def dim(self, degree: int) -> int:
        """Dimension of the degree piece as a Q-vector space."""
        return len(self.basis(degree))

    def basis(self, degree: int):
        """Standard monomials of exact weighted degree, decreasing."""
        return standard_monomials(self.relations, degree, self.order)

    def quotient(self, extra_relations, check: bool = True) -> "Presentation":
        return Presentation(
            self.table, list(self.relations.gens) + list(extra_relations), check=check
        )

    def __repr__(self):
        return f"Presentation({self.table!r}, {len(self.relations.gens)} relations)"


class Morphism:
    """Graded ring map Presentation -> Presentation given by generator images."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source: Presentation, target: Presentation, images: dict,
                 check: bool = True):
        self.source = source
        self.target = target
        fixed = {}
        for name in source.table.names:
            if name not in images:
                raise PresentationError(f"no image given for generator {name}")
            img = images[name]
            if isinstance(img, (int, Fraction)):
                img = Polynomial.constant(target.table, img)
            if img.context != target.table:
                raise PresentationError(f"image of {name} lives in the wrong table")
            fixed[name] = img
        self.images = fixed
        if check:
            for name, img in fixed.items():
                if img.is_zero():
                    continue
                w = source.table.weight(name)
                if not img.is_homogeneous() or img.weighted_degree() != w:
                    raise PresentationError(
                        f"image of {name} is not homogeneous of weight {w}: {img}"
                    )
            for rel in source.relations.gens:
                if not self.target.is_zero(self._raw(rel)):
                    raise PresentationError(f"relation does not map to zero: {rel}")

    def _raw(self, f: Polynomial) -> Polynomial:
        return f.substitute(self.images, target=self.target.table)

    def __call__(self, f: Polynomial) -> Polynomial:
        if f.context != self.source.table:
            raise PresentationError("argument lives in a different variable table")
        return self.target.normal_form(self._raw(f))

    def kernel(self) -> Ideal:
        """Kernel as an ideal over the source table (full preimage of 0)."""
        target_ideal = None if self.target.is_free() else self.target.relations
        return map_kernel(self.source.table, self.images, target_ideal=target_ideal,
                          target=self.target.table)

    def killed_names(self):
        return [n for n in self.source.table.names if self.images[n].is_zero()]


def fiber_product(alpha: Morphism, beta: Morphism) -> Presentation:
    """Present the image of the common source inside target(alpha) x target(beta).

    Both maps must leave the same free tag ring.  The relation ideal is the
    intersection of the two kernels; triviality cannot occur for unital
    maps, so the constructor check is skipped.
    """
    if alpha.source is not beta.source and alpha.source.table != beta.source.table:
        raise PresentationError("fiber product needs a common source")
    if not alpha.source.is_free():
        raise PresentationError("fiber product source must be free")
    rels = intersect(alpha.kernel(), beta.kernel())
    return Presentation(alpha.source.table, rels.gens, check=False)


def graded_dimension(pres: Presentation, degree: int) -> int:
    return pres.dim(degree)


def _vector(tagged, poly: Polynomial) -> dict:
    return {(tagged,) + m: c for m, c in poly.terms.items()}


def pair_image_rank(alpha: Morphism, beta: Morphism, degree: int) -> int:
    """Rank of the span of images of degree-d tag monomials in A_d x C_d.

    This is the honest linear-system count: one row per monomial in the
    tags, coordinates running over both targets at once.
    """
    table = alpha.source.table
    monos = standard_monomials(Ideal(table, ()), degree,
                               MonomialOrder.wgrevlex(table.weights))
    rows = []
    for m in monos:
        f = Polynomial(table, {m: Fraction(1)})
        row = _vector("A", alpha(f))
        row.update(_vector("C", beta(f)))
        rows.append(row)
    return sparse_rank(rows)


def graded_surjectivity(fiber: Presentation, alpha: Morphism, beta: Morphism,
                        bottom: Presentation, degrees) -> list:
    """Certify degreewise that the tags generate the whole fiber ring.

    For each degree d the expected fiber dimension is
    dim A_d + dim C_d - dim B_d (valid because the projection of A onto the
    bottom ring is onto), the independent linear-system rank of the tag
    images is computed from scratch, and the quotient presentation's own
    graded dimension is read off its standard monomials.  All three must
    agree for the degree to be certified.
    """
    out = []
    for d in degrees:
        expected = alpha.target.dim(d) + beta.target.dim(d) - bottom.dim(d)
        rank_d = pair_image_rank(alpha, beta, d)
        quotient_d = fiber.dim(d)
        out.append({
            "degree": d,
            "pair_rank": rank_d,
            "fiber_dim": expected,
            "quotient_dim": quotient_d,
            "certified": rank_d == expected and quotient_d == expected,
        })
    return out


def apply_quotient(fiber: Presentation, alpha: Morphism, beta: Morphism,
                   extras) -> tuple:
    """Impose relations of the beta side on a fiber presentation.

    Each extra is a polynomial over the beta target table (all of whose
    variables must also be tags) that holds in the beta-side ring and whose
    alpha-side counterpart is zero.  The naive lift renames it into the tag
    ring; when its alpha image is nonzero the difference is solved for as a
    combination of same-degree monomials supported on tags that beta kills,
    so the corrected lift dies on both sides.  Returns the quotient
    presentation and one note per extra.
    """
    table = fiber.table
    killed = set(beta.killed_names())
    for name in beta.target.table.names:
        if name not in set(table.names):
            raise PresentationError(f"beta-side variable {name} is not a tag")
    order = MonomialOrder.wgrevlex(table.weights)
    lifts = []
    notes = []
    for extra in extras:
        naive = extra.rename(table)
        resid = alpha(naive)
        if resid.is_zero():
            lifts.append(naive)
            notes.append({"relation": str(extra), "lift": str(naive),
                          "correction": None})
            continue
        d = naive.weighted_degree()
        candidates = [m for m in standard_monomials(Ideal(table, ()), d, order)
                      if any(m[i] for i, n in enumerate(table.names) if n in killed)]
        images = [alpha(Polynomial(table, {m: Fraction(1)})) for m in candidates]
        coords = sorted({mm for img in images for mm in img.terms} | set(resid.terms))
        index = {mm: i for i, mm in enumerate(coords)}
        matrix = [[Fraction(0)] * len(candidates) for _ in coords]
        for j, img in enumerate(images):
            for mm, c in img.terms.items():
                matrix[index[mm]][j] = c
        rhs = [resid.terms.get(mm, Fraction(0)) for mm in coords]
        sol = solve_linear(matrix, rhs)
        if sol is None:
            raise PresentationError(
                f"relation cannot be transported across the fiber square: {extra}"
            )
        correction = Polynomial(table, {m: c for m, c in zip(candidates, sol) if c})
        lift = naive - correction
        if not alpha(lift).is_zero() or not beta(correction).is_zero():
            raise PresentationError(f"correction failed to stay on one side: {extra}")
        lifts.append(lift)
        notes.append({"relation": str(extra), "lift": str(lift),
                      "correction": str(correction)})
    return fiber.quotient(lifts), notes
