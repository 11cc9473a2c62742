"""The dimensionwise interleaving of free operad and free contraction steps.

States carry a collection, an operad structure up to dimension j, a
contraction structure up to dimension i, and the stage (i, j) with i equal to
j or j + 1: after the initial 0-dimensional operad step the ladder alternates
a contraction step (i, i) -> (i + 1, i) with an operad step
(i + 1, i) -> (i + 1, i + 1).  A contraction step only adds cells one
dimension above the operad structure, and an operad step only rebuilds the
dimension the contraction just filled, so each step leaves the other
structure's tables untouched; the steps assert this.

Applying the ladder to the empty collection yields the bounded truncation of
the initial operad-with-contraction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .collection import Bounds, Collection, Overflow, check_collection, empty_collection
from .contraction import (
    ContractionStructure,
    CtrCell,
    admissible_triples,
    check_contraction,
    contraction_morphism_check,
    free_contraction_step,
)
from .globset import GlobMorphism, GlobularSet, check_glob_morphism
from .operad import (
    NodeTerm,
    OperadStructure,
    UnitTerm,
    free_operad_dim0,
    free_operad_step,
    mult_table,
)
from .pasting import all_cells, labelled
from .report import Report


@dataclass(frozen=True)
class Provenance:
    step: str
    stratum: int | None = None

    def to_json(self):
        return {"step": self.step, "stratum": self.stratum}


@dataclass
class OwcState:
    collection: Collection
    operad: OperadStructure
    contraction: ContractionStructure
    stage: tuple[int, int]
    bounds: Bounds
    provenance: dict
    overflows: tuple[Overflow, ...] = ()


def _pad_collection(a: Collection, max_dim: int) -> Collection:
    if a.max_dim >= max_dim:
        return a
    extra = max_dim - a.max_dim
    return Collection(
        GlobularSet(
            a.carrier.cells + ((),) * extra,
            a.carrier.src + ({},) * extra,
            a.carrier.tgt + ({},) * extra,
        ),
        a.arity + ({},) * extra,
    )


def start_state(a: Collection, bounds: Bounds) -> OwcState:
    """Free 0-dimensional operad structure on a collection: stage (0, 0)."""
    rep = check_collection(a)
    if not rep.passed:
        raise ValueError(f"input is not a collection: {rep.violations[0].message}")
    padded = _pad_collection(a, bounds.max_dim)
    provenance = {
        (k, c): Provenance("input")
        for k in range(padded.max_dim + 1)
        for c in padded.cells_at(k)
    }
    res = free_operad_dim0(padded, bounds)
    for cell, stratum in res.strata.items():
        provenance[(0, cell)] = Provenance("operad-0", stratum)
    return OwcState(
        collection=res.operad.over,
        operad=res.operad,
        contraction=ContractionStructure(res.operad.over, 0, {}),
        stage=(0, 0),
        bounds=bounds,
        provenance=provenance,
        overflows=res.overflows,
    )


def step_contraction(s: OwcState) -> OwcState:
    """The lifted free contraction step (k, k) -> (k + 1, k).  Asserts the
    k-operad multiplication tables are bit-identical before and after."""
    i, j = s.stage
    if i != j:
        raise ValueError(f"contraction step needs stage (k, k), got {s.stage}")
    before = mult_table(s.operad, s.bounds)
    res = free_contraction_step(s.collection, s.contraction, s.bounds)
    new_operad = OperadStructure(
        res.collection, s.operad.up_to_dim, dict(s.operad.units), s.operad.mult_fn
    )
    after = mult_table(new_operad, s.bounds)
    if before != after:
        raise AssertionError("contraction step disturbed the operad multiplication")
    provenance = dict(s.provenance)
    for cell in res.new_cells:
        provenance[(res.new_dim, cell)] = Provenance(f"contraction-{res.new_dim}")
    return OwcState(
        collection=res.collection,
        operad=new_operad,
        contraction=res.contraction,
        stage=(i + 1, j),
        bounds=s.bounds,
        provenance=provenance,
        overflows=s.overflows,
    )


def step_operad(s: OwcState) -> OwcState:
    """The lifted free operad step (k + 1, k) -> (k + 1, k + 1).  Asserts the
    (k + 1)-contraction table is untouched."""
    i, j = s.stage
    if i != j + 1:
        raise ValueError(f"operad step needs stage (k + 1, k), got {s.stage}")
    triples_before = {
        k: admissible_triples(s.collection, k, s.bounds) for k in range(1, i + 1)
    }
    gamma_before = dict(s.contraction.gamma)
    res = free_operad_step(s.operad, s.bounds)
    new_coll = res.operad.over
    for k, triples in triples_before.items():
        if admissible_triples(new_coll, k, s.bounds) != triples:
            raise AssertionError("operad step changed the admissible triples below it")
    for (a, b, theta), lift in gamma_before.items():
        if not new_coll.has_cell(theta.dim, lift):
            raise AssertionError("operad step removed a contraction cell")
    new_contraction = ContractionStructure(new_coll, s.contraction.up_to_dim, gamma_before)
    provenance = dict(s.provenance)
    for cell, stratum in res.strata.items():
        provenance.setdefault((res.new_dim, cell), Provenance(f"operad-{res.new_dim}", stratum))
    return OwcState(
        collection=new_coll,
        operad=res.operad,
        contraction=new_contraction,
        stage=(i, j + 1),
        bounds=s.bounds,
        provenance=provenance,
        overflows=s.overflows + res.overflows,
    )


def free_owc_trace(a: Collection, bounds: Bounds) -> list[tuple[str, OwcState]]:
    """The whole ladder, one labelled state per step."""
    state = start_state(a, bounds)
    trace = [("M0", state)]
    for k in range(bounds.max_dim):
        state = step_contraction(state)
        trace.append((f"H{k + 1}", state))
        state = step_operad(state)
        trace.append((f"M{k + 1}", state))
    return trace


def free_owc(a: Collection, bounds: Bounds) -> OwcState:
    """Free operad-with-contraction on a collection, truncated by the bounds."""
    return free_owc_trace(a, bounds)[-1][1]


def initial_owc(bounds: Bounds) -> OwcState:
    """The bounded truncation of the initial operad-with-contraction."""
    return free_owc(empty_collection(), bounds)


# ---------------------------------------------------------------------------
# the induced morphism out of an initial state


@dataclass
class InducedMorphismResult:
    morphism: GlobMorphism | None
    missing: list
    reports: list[Report]

    @property
    def receptive(self) -> bool:
        return not self.missing

    @property
    def passed(self) -> bool:
        return self.receptive and all(r.passed for r in self.reports)


def induced_morphism(s: OwcState, t: OwcState, seed: dict | None = None) -> InducedMorphismResult:
    """The structure-forced map from a freely built state into any other
    state over the same bounds: units to units, contraction cells through the
    codomain's gamma, grafted terms through the codomain's multiplication.
    Input cells need images supplied by ``seed``.

    A missing gamma or multiplication value in the codomain is reported as
    non-receptivity rather than raised.
    """
    top = s.stage[1]
    maps: dict[int, dict] = {k: {} for k in range(s.collection.max_dim + 1)}
    missing: list = []

    def image(k, c):
        if c in maps[k]:
            return maps[k][c]
        val = None
        if isinstance(c, UnitTerm):
            val = t.operad.units.get(k)
            if val is None:
                missing.append(("unit", k, c))
        elif isinstance(c, CtrCell):
            ia, ib = image(k - 1, c.a), image(k - 1, c.b)
            if ia is not None and ib is not None:
                val = t.contraction.gamma.get((ia, ib, c.theta))
                if val is None:
                    missing.append(("gamma", k, c))
        elif isinstance(c, NodeTerm):
            shape = s.collection.arity_of(k, c.gen)
            ig = image(k, c.gen)
            images = [image(a.dim, lab) for a, lab in zip(all_cells(shape), c.labels)]
            if ig is not None and all(v is not None for v in images):
                val = t.operad.mult(k, ig, labelled(shape, dict(zip(all_cells(shape), images))))
                if not t.collection.has_cell(k, val):
                    missing.append(("mult", k, c))
                    val = None
        else:
            if seed and (k, c) in seed:
                val = seed[(k, c)]
            else:
                missing.append(("seed", k, c))
        maps[k][c] = val
        return val

    for k in range(s.collection.max_dim + 1):
        for c in s.collection.cells_at(k):
            image(k, c)
    if missing:
        return InducedMorphismResult(None, missing, [])
    f = GlobMorphism({k: dict(m) for k, m in maps.items()})
    return InducedMorphismResult(f, [], morphism_reports(f, s, t, up_to=top))


def operad_morphism_check(
    f: GlobMorphism, s_op: OperadStructure, t_op: OperadStructure, bounds: Bounds, up_to: int
) -> Report:
    rep = Report("operad-morphism")
    for d in range(up_to + 1):
        if f.apply(d, s_op.units[d]) != t_op.units[d]:
            rep.add("unit not preserved", witness=d)
    table = mult_table(s_op, bounds, dims=range(up_to + 1))
    for (d, a, labels), r in table.items():
        if not s_op.over.has_cell(d, r):
            continue
        shape = s_op.over.arity_of(d, a)
        mapped = labelled(
            shape,
            {x: f.apply(x.dim, lab) for x, lab in zip(all_cells(shape), labels)},
        )
        if t_op.mult(d, f.apply(d, a), mapped) != f.apply(d, r):
            rep.add("multiplication not preserved", witness=(d, a))
    return rep


def arity_morphism_check(f: GlobMorphism, s: Collection, t: Collection, up_to: int) -> Report:
    rep = Report("collection-morphism")
    rep.extend(check_glob_morphism(f, s.carrier, t.carrier))
    for k in range(up_to + 1):
        for c in s.cells_at(k):
            try:
                if t.arity_of(k, f.apply(k, c)) != s.arity_of(k, c):
                    rep.add("arity not preserved", witness=(k, c))
            except KeyError:
                rep.add("image has no arity", witness=(k, c))
    return rep


def morphism_reports(f: GlobMorphism, s: OwcState, t: OwcState, up_to: int) -> list[Report]:
    """Collection, operad and contraction morphism checks within bounds."""
    return [
        arity_morphism_check(f, s.collection, t.collection, up_to),
        operad_morphism_check(f, s.operad, t.operad, s.bounds, up_to),
        contraction_morphism_check(f, s.contraction, t.contraction, s.bounds),
    ]
