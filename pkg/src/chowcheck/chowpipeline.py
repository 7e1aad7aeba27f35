"""Staged reconstruction of a boundary-stratified intersection ring.

The computation builds one ring per stage.  Each stage is driven by a
stratum data file: variables of a finite cover, a finite group of signed
permutations, invariant coordinates for the closed stratum's ring, the top
Chern class of its normal directions, and restriction formulas for every
ambient generator.  The stage glues the previous ring to the stratum ring
along the quotient by the top Chern class (checked to be a non-zero-divisor
first), presents the glued ring by the intersection of the two kernels,
transports the previous relations across the square, and certifies
degreewise that the chosen generators span everything.

Sign conventions enter as the symbols e1, e2, e3 (kappa-class pullbacks)
and eg (pushforward classes); every stage can be re-run under any of the
sixteen choices.  Claims extracted from the source text are data: each one
is evaluated against the computed objects and compared to its expected
status, so known misprints are flagged exactly, with corrected forms
verified alongside.
"""

from __future__ import annotations

import json
from collections import Counter
from fractions import Fraction
from importlib import resources
from pathlib import Path
from time import perf_counter

from .polyarith import MonomialOrder, Polynomial, VarTable
from .groebner import (
    Ideal,
    ideal_equal,
    intersect,
    is_nonzerodivisor,
    map_kernel,
    subalgebra_member,
    zero_dimensional,
)
from .exprparser import (
    Document,
    ParseError,
    parse_document,
    parse_name_weight,
    parse_polynomial,
    parse_rational,
    split_list,
)
from .invariants import GroupAction, invariant_presentation
from .ringpres import (
    Morphism,
    Presentation,
    PresentationError,
    apply_quotient,
    fiber_product,
    graded_surjectivity,
)


SIGN_NAMES = ("e1", "e2", "e3", "eg")
DEFAULT_SIGNS = (-1, -1, -1, 1)

STRATUM_FILES = ("gamma1.stratum", "gamma2.stratum", "gamma3p.stratum",
                 "gamma3pp.stratum")
BASE_FILE = "base.pres"
CLAIMS_FILE = "paper.claims"


class PipelineError(ValueError):
    pass


class SignConvention:
    """One choice of the four sign symbols, each +1 or -1."""

    __slots__ = ("values",)

    def __init__(self, e1=-1, e2=-1, e3=-1, eg=1):
        vals = (e1, e2, e3, eg)
        if any(v not in (1, -1) for v in vals):
            raise PipelineError("signs must be +1 or -1")
        self.values = dict(zip(SIGN_NAMES, vals))

    @staticmethod
    def parse(text: str) -> "SignConvention":
        parts = [p.strip() for p in text.replace("(", "").replace(")", "").split(",")]
        if len(parts) not in (3, 4):
            raise PipelineError("convention needs 3 or 4 comma-separated signs")
        try:
            nums = [int(p) for p in parts]
        except ValueError as exc:
            raise PipelineError(f"bad sign in convention: {text!r}") from exc
        if len(nums) == 3:
            nums.append(1)
        return SignConvention(*nums)

    @staticmethod
    def all() -> list:
        out = []
        for e1 in (-1, 1):
            for e2 in (-1, 1):
                for e3 in (-1, 1):
                    for eg in (-1, 1):
                        out.append(SignConvention(e1, e2, e3, eg))
        return out

    @property
    def label(self) -> str:
        return ",".join(f"{n}={v:+d}" for n, v in self.values.items())

    def __eq__(self, other):
        return isinstance(other, SignConvention) and self.values == other.values

    def __repr__(self):
        return f"SignConvention({self.label})"


# ---------------------------------------------------------------------------
# data loading

def _data_text(name: str, root=None) -> str:
    if root is not None:
        base = Path(root)
        for candidate in (base / name, base / "strata" / name):
            if candidate.is_file():
                return candidate.read_text()
        raise PipelineError(f"missing data file {name!r} under {root}")
    pkg = resources.files("chowcheck").joinpath("data")
    for candidate in (pkg.joinpath("strata", name), pkg.joinpath(name)):
        if candidate.is_file():
            return candidate.read_text()
    raise PipelineError(f"missing data file {name!r}")


class StratumSpec:
    """Raw, convention-independent contents of one stratum file."""

    def __init__(self, doc: Document):
        if doc.kind != "stratum":
            raise PipelineError("expected a stratum document")
        self.label = doc.single("label").value
        from .exprparser import parse_vartable

        self.table = parse_vartable(doc.section("vars", required=True))
        self.group_specs = []
        for entry in doc.section("group", required=True):
            gen = {}
            for piece in split_list(entry.value if entry.key is None
                                    else f"{entry.key}: {entry.value}"):
                if "->" not in piece:
                    raise ParseError(f"bad group image {piece!r}", entry.line)
                src, dst = piece.split("->", 1)
                gen[src.strip()] = dst.strip()
            self.group_specs.append(gen)
        self.defs = [(e.key, e.value) for e in (doc.section("defs") or [])]
        self.ring = []
        for e in doc.section("ring", required=True):
            name, weight = parse_name_weight(e.key, e.line)
            self.ring.append((name, weight, e.value))
        self.top = doc.single("top").value
        self.restrict = [(e.key, e.value) for e in doc.section("restrict", required=True)]
        self.pairs = {e.key: e.value for e in (doc.section("pairs") or [])}
        self.new = []
        for e in doc.section("new", required=True):
            self.new.append(parse_name_weight(e.key if e.key else e.value, e.line))
        order_entry = doc.single("tags", required=False)
        self.tag_order = (split_list(order_entry.value)
                          if order_entry is not None else None)

    @staticmethod
    def load(name: str, root=None) -> "StratumSpec":
        return StratumSpec(parse_document(_data_text(name, root)))


def load_stratum(document, convention: SignConvention | None = None) -> StratumSpec:
    """Validate a stratum document (text or parsed) and return its spec.

    Validation includes materialising the stratum under one convention, so
    group closure, declared variables and invariance of every class form
    are all checked before the spec is handed back.
    """
    if isinstance(document, str):
        document = parse_document(document)
    spec = StratumSpec(document)
    Stratum(spec, convention or SignConvention())
    return spec


class Stratum:
    """A stratum spec materialised under one sign convention."""

    def __init__(self, spec: StratumSpec, convention: SignConvention):
        self.spec = spec
        self.label = spec.label
        self.table = spec.table
        self.action = GroupAction(spec.table, spec.group_specs)
        self.functions = {"transfer": self.action.transfer,
                          "reynolds": self.action.reynolds}
        env = dict(convention.values)
        for name, text in spec.defs:
            env[name] = parse_polynomial(text, self.table, env, self.functions)
        self.env = env
        self.ring_names = [n for n, _, _ in spec.ring]
        self.ring_weights = [w for _, w, _ in spec.ring]
        self.ring_forms = [self._psi(text) for _, _, text in spec.ring]
        for name, form in zip(self.ring_names, self.ring_forms):
            self._require_invariant(f"ring coordinate {name}", form)
        self.ring = invariant_presentation(
            self.action, names=self.ring_names, generators=self.ring_forms
        )
        self.top_form = self._psi(spec.top)
        self._require_invariant("top Chern form", self.top_form)
        self.restrictions = {}
        self.restriction_coords = {}
        for tag, text in spec.restrict:
            form = self._psi(text)
            self._require_invariant(f"restriction of {tag}", form)
            self.restrictions[tag] = form
            self.restriction_coords[tag] = self.coordinates_of(form)
        pair_env = dict(convention.values)
        pair_env.update(self.restriction_coords)
        self.pair_overrides = {
            tag: parse_polynomial(text, self.ring.table, pair_env)
            for tag, text in spec.pairs.items()
        }

    def _psi(self, text: str) -> Polynomial:
        return parse_polynomial(text, self.table, self.env, self.functions)

    def _require_invariant(self, what: str, form: Polynomial) -> None:
        for element in self.action.elements:
            if self.action.act(element, form) != form:
                moved = ", ".join(
                    f"{src} -> {'-' if sign < 0 else ''}{self.table.names[j]}"
                    for src, (j, sign) in zip(self.table.names, element)
                )
                raise PipelineError(
                    f"{self.label}: {what} is not invariant under ({moved})"
                )

    def coordinates_of(self, form: Polynomial) -> Polynomial:
        """Express an invariant form in the ring coordinates."""
        expr = subalgebra_member(form, list(zip(self.ring_names, self.ring_forms)),
                                 tag_table=self.ring.table)
        if expr is None:
            raise PipelineError(
                f"form is not in the coordinate ring of {self.label}: {form}"
            )
        return expr


def load_base(name: str = BASE_FILE, root=None) -> Presentation:
    doc = parse_document(_data_text(name, root))
    if doc.kind != "presentation":
        raise PipelineError("expected a presentation document")
    from .exprparser import parse_vartable

    table = parse_vartable(doc.section("vars", required=True))
    rels = [parse_polynomial(e.value, table) for e in (doc.section("relations") or [])]
    return Presentation(table, rels)


# ---------------------------------------------------------------------------
# one induction step

def induction_step(prev: Presentation, stratum: Stratum, dmax: int = 12) -> dict:
    """Glue the previous ring with one stratum; returns the stage artifacts.

    Steps: non-zero-divisor gate for the top Chern class, restriction of
    every ambient generator into the stratum coordinates, validation of
    displayed gluing pairs against those restrictions (bottom-compatible
    overrides are used, incompatible ones fall back), the kernel
    intersection presenting the glued ring, transport of the previous
    relations, and the degreewise generation certificate.
    """
    A = stratum.ring
    ctop = stratum.coordinates_of(stratum.top_form)
    gate = is_nonzerodivisor(ctop, A.relations)
    info = {
        "label": stratum.label,
        "top_chern": str(ctop),
        "nzd": gate,
        "assumed": [
            "the glued ring is the fiber product of the two restrictions",
        ],
    }
    if not gate:
        raise PipelineError(
            f"top Chern class of {stratum.label} is a zero divisor; "
            "the gluing square does not apply"
        )
    B = A.quotient([ctop])
    p = Morphism(A, B, {n: Polynomial.variable(B.table, n) for n in A.table.names})

    names = list(prev.table.names) + [n for n, _ in stratum.spec.new]
    weights = list(prev.table.weights) + [w for _, w in stratum.spec.new]
    if stratum.spec.tag_order is not None:
        by_name = dict(zip(names, weights))
        if sorted(stratum.spec.tag_order) != sorted(names):
            raise PipelineError(
                f"tag order of {stratum.label} must permute {sorted(names)}"
            )
        names = list(stratum.spec.tag_order)
        weights = [by_name[n] for n in names]
    tags = VarTable(names, weights)
    free_tags = Presentation(tags, ())

    alpha_images = {}
    pair_rows = []
    for tag in names:
        if tag not in stratum.restrictions:
            raise PipelineError(f"{stratum.label} gives no restriction for {tag}")
        true_side = stratum.restriction_coords[tag]
        override = stratum.pair_overrides.get(tag)
        if override is None:
            alpha_images[tag] = true_side
            pair_rows.append({"tag": tag, "a_side": str(true_side),
                              "source": "restriction"})
            continue
        compatible = B.is_zero(p(override - true_side))
        if compatible:
            alpha_images[tag] = override
            pair_rows.append({"tag": tag, "a_side": str(override),
                              "source": "displayed",
                              "differs_from_restriction": override != true_side})
        else:
            alpha_images[tag] = true_side
            pair_rows.append({"tag": tag, "a_side": str(true_side),
                              "source": "fallback",
                              "rejected": str(override)})
    info["pairs"] = pair_rows

    prev_free = Presentation.free(prev.table.names, prev.table.weights)
    beta_images = {n: (Polynomial.variable(prev.table, n) if n in prev.table.names
                       else Polynomial.zero(prev.table)) for n in names}
    alpha = Morphism(free_tags, A, alpha_images)
    beta = Morphism(free_tags, prev_free, beta_images)

    # the previous ring must actually map to the bottom: relations die there
    phi_images = {n: p(alpha_images[n]) for n in prev.table.names}
    Morphism(prev, B, phi_images)

    ker_alpha = alpha.kernel()
    ker_beta = beta.kernel()
    fiber = Presentation(tags, intersect(ker_alpha, ker_beta).gens, check=False)
    result, lift_notes = apply_quotient(fiber, alpha, beta, prev.relations.gens)
    info["lifts"] = lift_notes
    info["surjectivity"] = graded_surjectivity(fiber, alpha, beta, B,
                                               range(0, dmax + 1))
    info["certified_through"] = dmax if all(
        row["certified"] for row in info["surjectivity"]) else -1
    info["result_relations"] = [str(g) for g in result.relations.gens]
    return {
        "info": info,
        "result": result,
        "fiber": fiber,
        "ker_alpha": ker_alpha,
        "ker_beta": ker_beta,
        "alpha": alpha,
        "beta": beta,
        "bottom": B,
        "stratum": stratum,
    }


# ---------------------------------------------------------------------------
# full pipeline

def run_pipeline(convention: SignConvention | None = None, dmax: int = 12,
                 through: str | None = None, root=None) -> dict:
    """Run the staged computation; returns the artifact registry.

    `through` stops after the named stratum (all four when None); `root`
    overrides the packaged data directory.
    """
    convention = convention or SignConvention()
    base = load_base(root=root)
    artifacts = {
        "convention": convention,
        "base": base,
        "stages": [],
        "by_label": {},
    }
    current = base
    for filename in STRATUM_FILES:
        spec = StratumSpec.load(filename, root=root)
        stratum = Stratum(spec, convention)
        stage = induction_step(current, stratum, dmax=dmax)
        artifacts["stages"].append(stage)
        artifacts["by_label"][stratum.label] = stage
        current = stage["result"]
        if through is not None and stratum.label == through:
            break
    artifacts["final"] = current
    return artifacts


def minimal_generators(pres: Presentation) -> list:
    """Degree-increasing irredundant generating set of the relation ideal."""
    order = pres.order
    basis = sorted(pres.relations.groebner(order),
                   key=lambda g: (g.weighted_degree(), str(g)))
    selected = []
    for g in basis:
        if selected and Ideal(pres.table, selected).member(g, order):
            continue
        selected.append(g)
    return selected


# ---------------------------------------------------------------------------
# claims

class Claim:
    def __init__(self, entries):
        fields = {}
        for e in entries:
            if e.key is None:
                raise ParseError("claim entries need a key", e.line)
            fields.setdefault(e.key, []).append(e.value)
        self.fields = fields
        self.id = self.get("id")
        self.kind = self.get("kind")
        self.expect = self.get("expect", "pass")
        self.note = self.get("note", "")

    def get(self, key, default=None):
        vals = self.fields.get(key)
        if vals is None:
            if default is None and key in ("id", "kind"):
                raise PipelineError(f"claim is missing the {key!r} field")
            return default
        if len(vals) != 1:
            raise PipelineError(f"claim field {key!r} repeated")
        return vals[0]

    def get_all(self, key):
        return self.fields.get(key, [])


def load_claims(name: str = CLAIMS_FILE, path=None) -> list:
    if path is not None:
        text = Path(path).read_text()
    else:
        text = _data_text(name)
    doc = parse_document(text)
    if doc.kind != "claims":
        raise PipelineError("expected a claims document")
    return [Claim(entries) for entries in doc.all_sections("claim")]


class ClaimRunner:
    """Evaluate claims against the pipeline artifacts."""

    def __init__(self, artifacts):
        self.artifacts = artifacts

    # -- helpers -----------------------------------------------------------

    def stage(self, label: str):
        stage = self.artifacts["by_label"].get(label)
        if stage is None:
            raise PipelineError(f"no stage with label {label!r}")
        return stage

    def claim_env(self, stratum: Stratum) -> dict:
        env = dict(stratum.env)
        for name, form in zip(stratum.ring_names, stratum.ring_forms):
            env[name] = form
        for tag, form in stratum.restrictions.items():
            env[tag] = form
        return env

    def psi(self, label: str, text: str) -> Polynomial:
        stratum = self.stage(label)["stratum"]
        return parse_polynomial(text, stratum.table, self.claim_env(stratum),
                                stratum.functions)

    def space(self, name: str) -> Presentation:
        if name == "final":
            return self.artifacts["final"]
        if ":" in name:
            kind, label = name.split(":", 1)
            stage = self.stage(label)
            if kind == "ring":
                return stage["stratum"].ring
            if kind == "result":
                return stage["result"]
            if kind == "fiber":
                return stage["fiber"]
            if kind == "bottom":
                return stage["bottom"]
            if kind in ("keralpha", "kerbeta"):
                ideal = stage["ker_alpha" if kind == "keralpha" else "ker_beta"]
                return Presentation(ideal.context, ideal.gens, check=False)
        raise PipelineError(f"unknown space {name!r}")

    def parse_in(self, pres: Presentation, text: str) -> Polynomial:
        return parse_polynomial(text, pres.table,
                                dict(self.artifacts["convention"].values))

    # -- claim kinds ---------------------------------------------------------

    def run(self, claim: Claim) -> dict:
        handler = getattr(self, "kind_" + claim.kind, None)
        if handler is None:
            raise PipelineError(f"unknown claim kind {claim.kind!r}")
        passed, detail = handler(claim)
        if passed is None:
            status = "ASSUMED"
        else:
            status = "PASS" if passed else "FAIL"
        ok = status == claim.expect.upper()
        if detail and "corrected_ok" in detail:
            ok = ok and detail["corrected_ok"]
        row = {
            "id": claim.id,
            "kind": claim.kind,
            "status": status,
            "expected": claim.expect.upper(),
            "ok": ok,
        }
        if claim.note:
            row["note"] = claim.note
        if detail:
            row["detail"] = detail
        return row

    def kind_identity(self, claim):
        label = claim.get("where")
        lhs = self.psi(label, claim.get("lhs"))
        rhs = self.psi(label, claim.get("rhs"))
        return lhs == rhs, None

    def kind_member(self, claim):
        pres = self.space(claim.get("space"))
        f = self.parse_in(pres, claim.get("expr"))
        return pres.relations.member(f, pres.order), None

    def kind_ideal_equal(self, claim):
        pres = self.space(claim.get("space"))
        rhs_texts = split_list(claim.get("rhs", ""))
        rhs = Ideal(pres.table, [self.parse_in(pres, t) for t in rhs_texts])
        same = ideal_equal(pres.relations, rhs, pres.order)
        detail = None
        if not same:
            missing = [str(g) for g in pres.relations.groebner(pres.order)
                       if not rhs.member(g, pres.order)]
            extra = [str(g) for g in rhs.gens
                     if not pres.relations.member(g, pres.order)]
            detail = {"computed_not_in_stated": missing,
                      "stated_not_in_computed": extra}
        return same, detail

    def _claim_tables(self, claim):
        svars = [parse_name_weight(t) for t in split_list(claim.get("vars"))]
        source = VarTable([n for n, _ in svars], [w for _, w in svars])
        where = claim.get("where", None)
        if where:
            stratum = self.stage(where)["stratum"]
            target = stratum.table
            env = self.claim_env(stratum)
            functions = stratum.functions
        else:
            tvars = [parse_name_weight(t) for t in split_list(claim.get("tvars"))]
            target = VarTable([n for n, _ in tvars], [w for _, w in tvars])
            env = dict(self.artifacts["convention"].values)
            functions = None
        return source, target, env, functions

    def kind_map_kernel_equal(self, claim):
        source, target, env, functions = self._claim_tables(claim)
        images = {}
        for item in split_list(claim.get("images")):
            name, text = item.split("->", 1)
            images[name.strip()] = parse_polynomial(text.strip(), target, env,
                                                    functions)
        kernel = map_kernel(source, images, target=target)
        order = MonomialOrder.wgrevlex(source.weights)
        rhs = Ideal(source, [parse_polynomial(t, source)
                             for t in split_list(claim.get("rhs", ""))])
        return ideal_equal(kernel, rhs, order), None

    def kind_evaluate(self, claim):
        label = claim.get("where")
        stratum = self.stage(label)["stratum"]
        f = self.psi(label, claim.get("expr"))
        point = {}
        for item in split_list(claim.get("point")):
            name, val = item.split("=", 1)
            point[name.strip()] = Fraction(parse_rational(val.strip()))
        mapping = {n: Polynomial.constant(stratum.table, point[n])
                   for n in stratum.table.names}
        got = f.substitute(mapping)
        want = parse_rational(claim.get("value"))
        return got.is_constant() and got.constant_value() == want, str(got)

    def kind_zero_dim(self, claim):
        label = claim.get("where")
        gens = [self.psi(label, t) for t in split_list(claim.get("gens"))]
        table = self.stage(label)["stratum"].table
        finite, count = zero_dimensional(Ideal(table, gens))
        want = int(claim.get("count"))
        return finite and count == want, {"finite": finite, "count": count}

    def kind_pair_display(self, claim):
        label = claim.get("where")
        stratum = self.stage(label)["stratum"]
        shown = self.psi(label, claim.get("a_side"))
        true_form = stratum.restrictions[claim.get("tag")]
        if claim.get("mode", "exact") == "bottom":
            diff = shown - true_form
            ok = Ideal(stratum.table, [stratum.top_form]).member(diff)
        else:
            ok = shown == true_form
        return ok, None

    def kind_relation_row(self, claim):
        final = self.artifacts["final"]
        row = self.parse_in(final, claim.get("row"))
        in_ideal = final.relations.member(row, final.order)
        detail = {}
        corrected = claim.get("corrected", None)
        if corrected is not None:
            cpoly = self.parse_in(final, corrected)
            detail["corrected_ok"] = final.relations.member(cpoly, final.order)
        return in_ideal, detail

    def kind_surjectivity(self, claim):
        stage = self.stage(claim.get("stage"))
        dmax = int(claim.get("dmax"))
        rows = [r for r in stage["info"]["surjectivity"] if r["degree"] <= dmax]
        ok = bool(rows) and all(r["certified"] for r in rows) and rows[-1][
            "degree"] == dmax
        return ok, None

    def kind_dimension(self, claim):
        pres = self.space(claim.get("space"))
        degree = int(claim.get("degree"))
        want = int(claim.get("value"))
        got = pres.dim(degree)
        return got == want, {"computed": got}

    def kind_nzd(self, claim):
        label = claim.get("where")
        stratum = self.stage(label)["stratum"]
        f = parse_polynomial(claim.get("expr"), stratum.ring.table,
                             dict(self.artifacts["convention"].values))
        return is_nonzerodivisor(f, stratum.ring.relations), None

    def kind_generator_count(self, claim):
        final = self.artifacts["final"]
        want = int(claim.get("value"))
        return len(final.table) == want, {"computed": len(final.table)}

    def kind_minimal_relation_count(self, claim):
        if "minimal" not in self.artifacts:
            self.artifacts["minimal"] = minimal_generators(self.artifacts["final"])
        minimal = self.artifacts["minimal"]
        want = int(claim.get("value"))
        detail = {"computed": len(minimal)}
        corrected = claim.get("corrected", None)
        if corrected is not None:
            detail["corrected_ok"] = len(minimal) == int(corrected)
        return len(minimal) == want, detail

    def kind_free_ring(self, claim):
        pres = self.space(claim.get("space"))
        decl = [parse_name_weight(t) for t in split_list(claim.get("vars"))]
        table = VarTable([n for n, _ in decl], [w for _, w in decl])
        return pres.table == table and pres.relations.is_zero(), None

    def kind_lift_profile(self, claim):
        notes = self.stage(claim.get("stage"))["info"]["lifts"]
        exact = sum(1 for n in notes if n["correction"] is None)
        corrected = len(notes) - exact
        want = (int(claim.get("exact")), int(claim.get("corrected")))
        return (exact, corrected) == want, {"exact": exact,
                                            "corrected": corrected}

    def kind_assumption(self, claim):
        # recorded, never checked: the hypothesis each gluing square rests on
        return None, {"stage": claim.get("stage", ""),
                      "statement": claim.get("statement", "")}


def run_claims(artifacts, claims=None) -> list:
    runner = ClaimRunner(artifacts)
    rows = []
    for claim in (claims if claims is not None else load_claims()):
        rows.append(runner.run(claim))
    return rows


def verify_claim(claim: Claim, convention: SignConvention | None = None,
                 artifacts=None) -> dict:
    """Evaluate a single claim, building the pipeline artifacts if needed."""
    if artifacts is None:
        artifacts = run_pipeline(convention)
    return ClaimRunner(artifacts).run(claim)


# ---------------------------------------------------------------------------
# sign-convention sweep

_STAGE_ORDER = ("Gamma1", "Gamma2", "Gamma3p", "Gamma3pp")


def _claim_requirements(claim: Claim):
    """Which strata must exist, and which stages must have been glued."""
    strata, stages = set(), set()
    where = claim.get("where", "")
    if where:
        strata.add(where)
    stage = claim.get("stage", "")
    if stage:
        stages.add(stage)
    space = claim.get("space", "")
    if space:
        stages.add(space.split(":", 1)[1] if ":" in space else _STAGE_ORDER[-1])
    if claim.kind in ("relation_row", "generator_count",
                      "minimal_relation_count"):
        stages.add(_STAGE_ORDER[-1])
    for label in strata | stages:
        if label not in _STAGE_ORDER:
            raise PipelineError(f"claim {claim.id!r} names unknown stage {label!r}")
    return strata, stages


def convention_search(claims=None, conventions=None, dmax: int = 12) -> dict:
    """Evaluate the claims as stated under every sign convention.

    A claim counts as passed when its raw status is PASS (its expectation
    annotation plays no role here).  Only the work each claim actually
    needs is run per convention; a convention whose pipeline aborts keeps
    an error row instead of results.
    """
    if claims is None:
        claims = load_claims()
    claims = [c for c in claims if c.kind != "assumption"]
    strata_needed, stages_needed = set(), set()
    for claim in claims:
        strata, stages = _claim_requirements(claim)
        strata_needed |= strata
        stages_needed |= stages
    through = (max(stages_needed, key=_STAGE_ORDER.index)
               if stages_needed else None)
    rows = []
    for convention in (conventions if conventions is not None
                       else SignConvention.all()):
        row = {"convention": convention.label, "passed": [], "failed": [],
               "errors": []}
        try:
            if through is not None:
                artifacts = run_pipeline(convention, dmax=dmax, through=through)
            else:
                artifacts = {"convention": convention, "stages": [],
                             "by_label": {}}
            for label in sorted(strata_needed, key=_STAGE_ORDER.index):
                if label not in artifacts["by_label"]:
                    spec = StratumSpec.load(
                        STRATUM_FILES[_STAGE_ORDER.index(label)])
                    artifacts["by_label"][label] = {
                        "stratum": Stratum(spec, convention)}
            runner = ClaimRunner(artifacts)
            for claim in claims:
                try:
                    outcome = runner.run(claim)
                    key = "passed" if outcome["status"] == "PASS" else "failed"
                    row[key].append(claim.id)
                except (PipelineError, PresentationError, InvariantError,
                        ParseError) as exc:
                    row["errors"].append({"id": claim.id, "error": str(exc)})
        except (PipelineError, PresentationError, InvariantError) as exc:
            row["aborted"] = str(exc)
            row["errors"] = [{"id": c.id, "error": "pipeline aborted"}
                             for c in claims]
        row["pass_count"] = len(row["passed"])
        rows.append(row)
    best = max((r["pass_count"] for r in rows), default=0)
    pass_sets = [(r["convention"], frozenset(r["passed"])) for r in rows]
    maximal, seen = [], set()
    for _, subset in pass_sets:
        if subset in seen or any(subset < other for _, other in pass_sets):
            continue
        seen.add(subset)
        maximal.append({
            "claims": sorted(subset),
            "conventions": sorted(c for c, s in pass_sets if s == subset),
        })
    return {
        "claims": [c.id for c in claims],
        "rows": rows,
        "best_pass_count": best,
        "best_conventions": sorted(r["convention"] for r in rows
                                   if r["pass_count"] == best),
        "jointly_satisfiable": best == len(claims),
        "all_pass_conventions": sorted(r["convention"] for r in rows
                                       if r["pass_count"] == len(claims)),
        "maximal_pass_sets": maximal,
    }


# ---------------------------------------------------------------------------
# full verification and reports

def verify_paper(convention: SignConvention | None = None, dmax: int = 12,
                 strata_root=None, claims_path=None) -> dict:
    """Run the pipeline, evaluate every claim, and assemble the report."""
    timing = {}
    convention = convention or SignConvention()

    t0 = perf_counter()
    artifacts = run_pipeline(convention, dmax=dmax, root=strata_root)
    timing["pipeline_s"] = round(perf_counter() - t0, 3)

    t1 = perf_counter()
    claims = load_claims(path=claims_path)
    outcomes = run_claims(artifacts, claims)
    timing["claims_s"] = round(perf_counter() - t1, 3)

    t2 = perf_counter()
    final = artifacts["final"]
    minimal = artifacts.get("minimal")
    if minimal is None:
        minimal = minimal_generators(final)
    profile = Counter(g.weighted_degree() for g in minimal)
    reduced = final.relations.groebner(final.order)

    theorem_rows = []
    stated = []
    for claim, outcome in zip(claims, outcomes):
        if claim.kind != "relation_row":
            continue
        entry = {
            "row": claim.get("row"),
            "status": outcome["status"],
            "corrected": claim.get("corrected", None),
        }
        detail = outcome.get("detail")
        if isinstance(detail, dict) and "corrected_ok" in detail:
            entry["corrected_ok"] = detail["corrected_ok"]
        theorem_rows.append(entry)
        text = (entry["row"] if outcome["status"] == "PASS"
                else entry["corrected"])
        if text is not None:
            stated.append(parse_polynomial(text, final.table,
                                           dict(convention.values)))
    stated_ideal = Ideal(final.table, stated)
    gap = [str(g) for g in reduced
           if not stated_ideal.member(g, final.order)]
    extra = [str(g) for g in stated
             if not final.relations.member(g, final.order)]
    timing["analysis_s"] = round(perf_counter() - t2, 3)

    t3 = perf_counter()
    groups = {}
    for claim in claims:
        tag = claim.get("sweep", None)
        if tag:
            groups.setdefault(tag, []).append(claim)
    sign_search = {tag: convention_search(group, dmax=dmax)
                   for tag, group in sorted(groups.items())}
    timing["sign_search_s"] = round(perf_counter() - t3, 3)

    status = ("OK" if all(o["status"] != "FAIL" for o in outcomes)
              else "DISCREPANCY")
    return {
        "format": "chowcheck-verification-report",
        "convention": convention.label,
        "dmax": dmax,
        "status": status,
        "all_as_expected": all(o["ok"] for o in outcomes),
        "claims": outcomes,
        "stages": [stage["info"] for stage in artifacts["stages"]],
        "final": {
            "generators": [{"name": n, "weight": w} for n, w in
                           zip(final.table.names, final.table.weights)],
            "dims": [final.dim(d) for d in range(dmax + 1)],
            "theorem_rows": theorem_rows,
            "relation_analysis": {
                "displayed_rows": len(theorem_rows),
                "minimal_generator_count": len(minimal),
                "minimal_degree_profile": {str(d): c for d, c in
                                           sorted(profile.items())},
                "reduced_basis_size": len(reduced),
                "missing_from_displayed": gap,
                "displayed_not_in_computed": extra,
            },
        },
        "sign_search": sign_search,
        "timing": timing,
    }


def emit_report(report: dict, format: str = "text") -> str:
    """Serialise a verification report.

    The machine format is deterministic byte-for-byte across runs (it
    excludes timings); the text format is for reading and keeps them.
    """
    if format == "machine":
        stripped = {k: v for k, v in report.items() if k != "timing"}
        return json.dumps(stripped, indent=2, sort_keys=True) + "\n"
    if format != "text":
        raise PipelineError(f"unknown report format {format!r}")

    lines = []
    add = lines.append
    add("chowcheck verification report")
    add("=" * 64)
    add(f"convention: {report['convention']}")
    add(f"status: {report['status']}")
    add("matches the recorded expectations: "
        + ("yes" if report["all_as_expected"] else "NO"))
    add("")

    add("stages")
    add("-" * 64)
    for stage in report["stages"]:
        add(f"[{stage['label']}]")
        add(f"  top Chern class: {stage['top_chern']}")
        add("  non-zero-divisor gate: "
            + ("passed" if stage["nzd"] else "FAILED"))
        for item in stage["assumed"]:
            add(f"  assumed: {item}")
        for pair in stage["pairs"]:
            text = f"  pair {pair['tag']}: {pair['a_side']} [{pair['source']}]"
            if pair.get("differs_from_restriction"):
                text += " (differs from the restriction by a boundary term)"
            add(text)
            if "rejected" in pair:
                add(f"    rejected displayed value: {pair['rejected']}")
        for lift in stage["lifts"]:
            if lift["correction"] is None:
                add(f"  lift (exact): {lift['relation']}")
            else:
                add(f"  lift (corrected): {lift['relation']}")
                add(f"    correction: {lift['correction']}")
        add(f"  generation certified through degree {stage['certified_through']}")
        add("")

    add("claims")
    add("-" * 64)
    for row in report["claims"]:
        flag = "" if row["ok"] else "  <-- UNEXPECTED"
        add(f"{row['status']:<8} (expected {row['expected'].lower()})"
            f"  {row['id']}{flag}")
        if row.get("note"):
            add(f"         {row['note']}")
    add("")

    final = report["final"]
    add("final ring")
    add("-" * 64)
    gens = ", ".join(f"{g['name']}({g['weight']})"
                     for g in final["generators"])
    add(f"generators ({len(final['generators'])}): {gens}")
    add(f"graded dimensions 0..{report['dmax']}: {final['dims']}")
    add("")

    add("displayed relation table")
    add("-" * 64)
    for i, row in enumerate(final["theorem_rows"], start=1):
        add(f"row {i:2d}: {row['status']:<4}  {row['row']}")
        if row["status"] != "PASS" and row.get("corrected"):
            verdict = ("verified" if row.get("corrected_ok")
                       else "NOT verified")
            add(f"        corrected ({verdict}): {row['corrected']}")
    add("")

    analysis = final["relation_analysis"]
    add("relation ideal analysis")
    add("-" * 64)
    add(f"displayed rows: {analysis['displayed_rows']}")
    add(f"minimal homogeneous generators of the computed ideal: "
        f"{analysis['minimal_generator_count']}")
    profile = ", ".join(f"{d}: {c}" for d, c in
                        analysis["minimal_degree_profile"].items())
    add(f"  count by weight: {profile}")
    add(f"reduced basis size: {analysis['reduced_basis_size']}")
    missing = analysis["missing_from_displayed"]
    add(f"classes missing from the displayed rows (after corrections): "
        f"{len(missing)}")
    for g in missing:
        add(f"  {g}")
    extra = analysis["displayed_not_in_computed"]
    if extra:
        add("displayed rows outside the computed ideal:")
        for g in extra:
            add(f"  {g}")
    add("")

    if report["sign_search"]:
        add("sign-convention sweeps")
        add("-" * 64)
        for tag, sweep in report["sign_search"].items():
            add(f"group {tag!r}: {', '.join(sweep['claims'])}")
            if sweep["jointly_satisfiable"]:
                add("  jointly satisfiable under: "
                    + "; ".join(sweep["all_pass_conventions"]))
            else:
                add("  no single sign convention satisfies all of them; "
                    f"best is {sweep['best_pass_count']} of "
                    f"{len(sweep['claims'])} under: "
                    + "; ".join(sweep["best_conventions"]))
        add("")

    if "timing" in report:
        add("timing")
        add("-" * 64)
        for key, value in report["timing"].items():
            add(f"{key}: {value}")
        add("")
    return "\n".join(lines) + "\n"
