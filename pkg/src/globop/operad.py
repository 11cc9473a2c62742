"""Operad structures on collections and the dimensionwise free operad steps.

Cells freely added at dimension d are normal-form terms: the formal unit, or
a generator grafted with a labelling of its arity whose d-dimensional labels
are themselves normal forms and whose lower labels are existing cells.  A
generator composed with the all-unit labelling collapses to the bare
generator, so the embedding of the input cells into the free structure is the
identity and the right unit law holds by construction.

The new dimension is built as a union of strata: stratum 0 holds the unit,
stratum n+1 everything expressible with top labels from stratum n.  Strata
grow monotonically and stabilize under the bounds; the step reports the
stabilization depth.  Boundaries of new terms are evaluated eagerly in the
operad structure one dimension down and stored in the cell tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .collection import Bounds, Collection, Overflow, enumerate_labellings, make_collection
from .pasting import (
    CellAddr,
    LabelledDiagram,
    PastingDiagram,
    all_cells,
    boundary,
    boundary_inclusion,
    cells,
    labelled,
    size,
    slice_at,
    subst_arities,
    unit_tree,
)
from .report import Report
from .util import canonical_key


@dataclass(frozen=True)
class UnitTerm:
    dim: int

    def _sort_key_(self):
        return (self.dim,)

    def __repr__(self):
        return f"UnitTerm({self.dim})"


@dataclass(frozen=True)
class NodeTerm:
    """A generator grafted with a labelling of its arity.

    ``labels`` is aligned with ``all_cells`` of the generator's arity; entries
    at the node's own dimension are terms, lower entries are plain cells.
    """

    dim: int
    gen: object
    labels: tuple

    def _sort_key_(self):
        return (self.dim, canonical_key(self.gen), canonical_key(self.labels))


def is_term(c) -> bool:
    return isinstance(c, (UnitTerm, NodeTerm))


@dataclass
class OperadStructure:
    """A collection with unit cells and a multiplication up to a dimension.

    ``mult_fn(d, a, phi)`` composes the d-cell ``a`` with a labelling ``phi``
    of its arity by cells of the collection.
    """

    over: Collection
    up_to_dim: int
    units: dict[int, object]
    mult_fn: Callable[[int, object, LabelledDiagram], object] | None = None

    def mult(self, d: int, a, phi: LabelledDiagram):
        return self.mult_fn(d, a, phi)


# ---------------------------------------------------------------------------
# structural term operations


def cell_arity(op: OperadStructure, j: int, c) -> PastingDiagram:
    """Arity of a cell, computed structurally for terms so that it is defined
    even for composition results that were never materialized."""
    if isinstance(c, UnitTerm):
        return unit_tree(j)
    if isinstance(c, NodeTerm):
        shape = op.over.arity_of(j, c.gen)
        return subst_arities(
            shape,
            tuple(cell_arity(op, a.dim, lab) for a, lab in zip(all_cells(shape), c.labels)),
        )
    return op.over.arity_of(j, c)


def term_size(op: OperadStructure, j: int, c) -> int:
    """Number of grafting nodes at dimension j; lower labels are opaque."""
    if isinstance(c, UnitTerm):
        return 0
    if isinstance(c, NodeTerm):
        shape = op.over.arity_of(j, c.gen)
        return 1 + sum(
            term_size(op, j, lab)
            for a, lab in zip(all_cells(shape), c.labels)
            if a.dim == j
        )
    return 1


def _term_side(op: OperadStructure, j: int, c, side: int):
    if isinstance(c, UnitTerm):
        return op.units[j - 1]
    if isinstance(c, NodeTerm):
        shape = op.over.arity_of(j, c.gen)
        incl = boundary_inclusion(shape, side)
        mapping = dict(zip(all_cells(shape), c.labels))
        phi = labelled(boundary(shape), {a: mapping[incl[a]] for a in incl})
        head = op.over.src_of(j, c.gen) if side == 0 else op.over.tgt_of(j, c.gen)
        return op.mult(j - 1, head, phi)
    return op.over.src_of(j, c) if side == 0 else op.over.tgt_of(j, c)


def term_src(op: OperadStructure, j: int, c):
    """Source of a dimension-j term, evaluated in the operad one level down."""
    return _term_side(op, j, c, 0)


def term_tgt(op: OperadStructure, j: int, c):
    return _term_side(op, j, c, 1)


def make_node(op: OperadStructure, d: int, gen, phi: LabelledDiagram):
    """Build a normal-form node, collapsing the all-unit labelling to the
    bare generator."""
    shape = op.over.arity_of(d, gen)
    if phi.shape != shape:
        raise ValueError("labelling shape differs from the generator arity")
    trivial = all(
        lab == op.units[addr.dim]
        for addr, lab in zip(all_cells(shape), phi.labels)
    )
    if trivial:
        return gen
    return NodeTerm(d, gen, phi.labels)


def unit_labelling(op: OperadStructure, d: int, shape: PastingDiagram) -> LabelledDiagram:
    return labelled(shape, {a: op.units[a.dim] for a in all_cells(shape)})


def term_mult(op: OperadStructure, d: int, a, phi: LabelledDiagram):
    """Grafting with unit collapse.

    ``phi`` lies over the arity of ``a``; its labels at dimension d are terms
    and its lower labels are cells.  Top labels of a node are composed with
    their slice of ``phi``, lower labels are composed in the lower operad.
    """
    if phi.shape != cell_arity(op, d, a):
        raise ValueError("labelling shape differs from the arity of the operation")
    if isinstance(a, UnitTerm):
        return phi.label_of(cells(phi.shape, d)[0])
    if isinstance(a, NodeTerm):
        shape = op.over.arity_of(d, a.gen)
        psi = dict(zip(all_cells(shape), a.labels))
        arities = tuple(cell_arity(op, x.dim, psi[x]) for x in all_cells(shape))
        new_labels = {}
        for x in all_cells(shape):
            piece = slice_at(phi, shape, arities, x)
            if x.dim == d:
                new_labels[x] = term_mult(op, d, psi[x], piece)
            else:
                new_labels[x] = op.mult(x.dim, psi[x], piece)
        return make_node(op, d, a.gen, labelled(shape, new_labels))
    # bare generator: behaves as the unit-labelled node, so the slices are
    # exactly the labels of phi
    return make_node(op, d, a, phi)


def counit_eval(y: OperadStructure, d: int, t):
    """Evaluate a term over the cells of ``y`` using y's own structure."""
    if isinstance(t, UnitTerm):
        return y.units[d]
    if isinstance(t, NodeTerm):
        if not y.over.has_cell(d, t.gen):
            raise KeyError(f"unknown generator {t.gen!r}")
        shape = y.over.arity_of(d, t.gen)
        new_labels = {
            a: counit_eval(y, d, lab) if a.dim == d else lab
            for a, lab in zip(all_cells(shape), t.labels)
        }
        return y.mult(d, t.gen, labelled(shape, new_labels))
    if not y.over.has_cell(d, t):
        raise KeyError(f"unknown generator {t!r}")
    return t


# ---------------------------------------------------------------------------
# operad structures over a collection


def extend_operad(lower: OperadStructure | None, coll: Collection, d: int) -> OperadStructure:
    """Operad structure whose dimension-d multiplication is term grafting and
    whose lower dimensions delegate to ``lower``."""
    units = dict(lower.units) if lower else {}
    units[d] = UnitTerm(d)
    op = OperadStructure(coll, d, units, None)

    def mult_fn(j, a, phi):
        if j < d and lower is not None:
            return lower.mult(j, a, phi)
        return term_mult(op, j, a, phi)

    op.mult_fn = mult_fn
    return op


def state_operad(coll: Collection, up_to: int) -> OperadStructure | None:
    """The operad structure of a fully interleaved state: every dimension up
    to ``up_to`` is term-based with the formal unit."""
    op = None
    for j in range(up_to + 1):
        op = extend_operad(op, coll, j)
    return op


def terminal_operad(bounds: Bounds) -> OperadStructure:
    """Diagrams as cells, substitution as multiplication."""
    from .collection import terminal_collection

    if 2 * bounds.max_dim + 1 > bounds.max_arity_size:
        raise ValueError("single-cell diagrams at the top dimension exceed the arity bound")
    coll = terminal_collection(bounds)
    units = {k: unit_tree(k) for k in range(bounds.max_dim + 1)}
    op = OperadStructure(coll, bounds.max_dim, units, None)

    def mult_fn(d, a, phi):
        if phi.shape != a:
            raise ValueError("labelling shape differs from the operation")
        return subst_arities(phi.shape, phi.labels)

    op.mult_fn = mult_fn
    return op


# ---------------------------------------------------------------------------
# the free steps


@dataclass
class FreeOperadResult:
    operad: OperadStructure
    new_dim: int
    stabilization_depth: int
    overflows: tuple[Overflow, ...]
    strata: dict = field(default_factory=dict)  # new cell -> stratum of first appearance


def free_operad_dim0(a: Collection, bounds: Bounds) -> FreeOperadResult:
    """Replace the 0-cells by all bounded normal-form composites of them."""
    return _free_at(a, None, 0, bounds)


def free_operad_step(x: OperadStructure, bounds: Bounds) -> FreeOperadResult:
    """One dimension of free operad structure on top of an operad up to k."""
    return _free_at(x.over, x, x.up_to_dim + 1, bounds)


def _free_at(coll: Collection, lower: OperadStructure | None, d: int, bounds: Bounds) -> FreeOperadResult:
    if d > coll.max_dim:
        raise ValueError("collection has no layer at the requested dimension")
    if 2 * d + 1 > bounds.max_arity_size:
        raise ValueError(
            f"the unit at dimension {d} needs arity size {2 * d + 1}, over the bound"
        )
    ctx = extend_operad(lower, coll, d)
    gens = list(coll.cells_at(d))
    unit = UnitTerm(d)

    nsrc: dict = {}
    ntgt: dict = {}
    narity: dict = {unit: unit_tree(d)}
    tsize: dict = {unit: 0}
    for g in gens:
        tsize[g] = 1
    if d >= 1:
        nsrc[unit] = ctx.units[d - 1]
        ntgt[unit] = ctx.units[d - 1]
    lower_cells = set(coll.cells_at(d - 1)) if d >= 1 else set()

    def top_src(j, t):
        if isinstance(t, UnitTerm):
            return ctx.units[d - 1]
        if isinstance(t, NodeTerm):
            return nsrc[t]
        return coll.src_of(d, t)

    def top_tgt(j, t):
        if isinstance(t, UnitTerm):
            return ctx.units[d - 1]
        if isinstance(t, NodeTerm):
            return ntgt[t]
        return coll.tgt_of(d, t)

    def fits(terms):
        # a node is at least one bigger than any of its top labels
        return [t for t in terms if tsize[t] <= bounds.max_term_size - 1]

    def candidates(j):
        if j == d:
            return fits(current)
        return coll.cells_at(j)

    def src_of(j, lab):
        return top_src(j, lab) if j == d else coll.src_of(j, lab)

    def tgt_of(j, lab):
        return top_tgt(j, lab) if j == d else coll.tgt_of(j, lab)

    strata: dict = {}
    skipped: dict[str, list] = {"term": [], "arity": [], "boundary": []}
    old: list = []
    current: list = [unit]
    frontier: list = [unit]
    depth = 0
    n = 0
    while frontier:
        n += 1
        additions = []
        for g in gens:
            shape = coll.arity_of(d, g)
            tops = cells(shape, d)
            labellings: list[LabelledDiagram] = []
            if not tops:
                if n == 1:
                    labellings = enumerate_labellings(shape, candidates, src_of, tgt_of)
            else:
                for pos in range(len(tops)):
                    overrides = {tops[i]: fits(old) for i in range(pos)}
                    overrides[tops[pos]] = fits(frontier)
                    labellings.extend(
                        enumerate_labellings(shape, candidates, src_of, tgt_of, overrides)
                    )
            for phi in labellings:
                cell = make_node(ctx, d, g, phi)
                if not isinstance(cell, NodeTerm) or cell in strata:
                    continue
                ts = term_size(ctx, d, cell)
                if ts > bounds.max_term_size:
                    skipped["term"].append(cell)
                    continue
                ar = cell_arity(ctx, d, cell)
                if size(ar) > bounds.max_arity_size:
                    skipped["arity"].append(cell)
                    continue
                if d >= 1:
                    s = term_src(ctx, d, cell)
                    t = term_tgt(ctx, d, cell)
                    if s not in lower_cells or t not in lower_cells:
                        skipped["boundary"].append(cell)
                        continue
                    nsrc[cell], ntgt[cell] = s, t
                narity[cell] = ar
                tsize[cell] = ts
                strata[cell] = n
                additions.append(cell)
        additions.sort(key=canonical_key)
        if additions or (n == 1 and gens):
            depth = n
        if n == 1:
            frontier = gens + additions
        else:
            frontier = additions
        old = current
        current = current + frontier

    nodes = sorted((c for c in strata), key=canonical_key)
    new_layer = tuple(gens) + (unit,) + tuple(nodes)
    cells_by_dim = [
        new_layer if k == d else coll.cells_at(k) for k in range(coll.max_dim + 1)
    ]
    src = [dict(coll.carrier.src[k]) for k in range(coll.max_dim + 1)]
    tgt = [dict(coll.carrier.tgt[k]) for k in range(coll.max_dim + 1)]
    arity = [dict(coll.arity[k]) for k in range(coll.max_dim + 1)]
    if d >= 1:
        src[d].update({c: nsrc[c] for c in (unit, *nodes)})
        tgt[d].update({c: ntgt[c] for c in (unit, *nodes)})
    arity[d].update({c: narity[c] for c in (unit, *nodes)})
    new_coll = make_collection(cells_by_dim, src, tgt, arity)

    overflows = tuple(
        Overflow(
            step=f"operad-{d}",
            dim=d,
            reason=reason,
            count=len(items),
            sample=tuple(repr(c) for c in items[:3]),
        )
        for reason, items in skipped.items()
        if items
    )
    strata[unit] = 0
    return FreeOperadResult(
        operad=extend_operad(lower, new_coll, d),
        new_dim=d,
        stabilization_depth=depth,
        overflows=overflows,
        strata=strata,
    )


# ---------------------------------------------------------------------------
# tables and law checking


def mult_table(op: OperadStructure, bounds: Bounds, dims=None) -> dict:
    """Materialized multiplication on all composable pairs within bounds.

    Keys are (dim, operation, label tuple); configurations whose composite
    arity exceeds the bound are left out.
    """
    from .collection import collection_labellings

    table = {}
    for d in dims if dims is not None else range(op.up_to_dim + 1):
        for a in op.over.cells_at(d):
            shape = op.over.arity_of(d, a)
            for phi in collection_labellings(shape, op.over):
                composed = subst_arities(
                    shape,
                    tuple(
                        op.over.arity_of(x.dim, phi.label_of(x))
                        for x in all_cells(shape)
                    ),
                )
                if size(composed) > bounds.max_arity_size:
                    continue
                table[(d, a, phi.labels)] = op.mult(d, a, phi)
    return table


def compose_labellings(op: OperadStructure, phi: LabelledDiagram, chi: LabelledDiagram) -> LabelledDiagram:
    """Compose every label of ``phi`` with its slice of ``chi``."""
    shape = phi.shape
    arities = tuple(
        cell_arity(op, x.dim, phi.label_of(x)) for x in all_cells(shape)
    )
    return labelled(
        shape,
        {
            x: op.mult(x.dim, phi.label_of(x), slice_at(chi, shape, arities, x))
            for x in all_cells(shape)
        },
    )


def _unit_argument(op: OperadStructure, d: int, t) -> LabelledDiagram:
    """The labelling of the single-cell shape whose top label is ``t``."""
    shape = unit_tree(d)
    out = {}
    for addr in all_cells(shape):
        c = t
        j = d
        while j > addr.dim:
            c = term_src(op, j, c) if addr.path[-1] == 0 else term_tgt(op, j, c)
            j -= 1
        out[addr] = c
    return labelled(shape, out)


def check_operad_laws(op: OperadStructure, bounds: Bounds, dims=None) -> Report:
    """Unit laws and associativity on every composable configuration whose
    composite arities stay within the bounds."""
    from .collection import collection_labellings

    memo: dict = {}

    def labellings(shape):
        if shape not in memo:
            memo[shape] = collection_labellings(shape, op.over)
        return memo[shape]

    rep = Report("operad-laws")
    for d in dims if dims is not None else range(op.up_to_dim + 1):
        unit = op.units[d]
        for t in op.over.cells_at(d):
            if op.mult(d, unit, _unit_argument(op, d, t)) != t:
                rep.add("left unit law fails", witness=(d, t))
        for a in op.over.cells_at(d):
            shape = op.over.arity_of(d, a)
            if op.mult(d, a, unit_labelling(op, d, shape)) != a:
                rep.add("right unit law fails", witness=(d, a))
            for phi in labellings(shape):
                arities = tuple(
                    op.over.arity_of(x.dim, phi.label_of(x)) for x in all_cells(shape)
                )
                mid_shape = subst_arities(shape, arities)
                if size(mid_shape) > bounds.max_arity_size:
                    continue
                r = op.mult(d, a, phi)
                if cell_arity(op, d, r) != mid_shape:
                    rep.add("arity of composite differs from substitution", witness=(d, a, phi.labels))
                    continue
                for chi in labellings(mid_shape):
                    final = subst_arities(
                        mid_shape,
                        tuple(
                            op.over.arity_of(x.dim, chi.label_of(x))
                            for x in all_cells(mid_shape)
                        ),
                    )
                    if size(final) > bounds.max_arity_size:
                        continue
                    lhs = op.mult(d, r, chi)
                    rhs = op.mult(d, a, compose_labellings(op, phi, chi))
                    if lhs != rhs:
                        rep.add(
                            "associativity fails",
                            witness=(d, a, phi.labels, chi.labels),
                        )
    return rep
