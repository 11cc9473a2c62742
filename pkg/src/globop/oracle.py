"""Deliberately naive re-implementations used to cross-check the pipeline.

Everything here works by direct recursion or cartesian products with a
filtering predicate, shares only the base type definitions with the code it
checks, and is restricted to the dimensions where hand verification is
feasible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .collection import Bounds, Collection
from .contraction import CtrCell
from .globset import GlobularSet, glob_set
from .interleave import OwcState, morphism_reports
from .globset import GlobMorphism
from .operad import NodeTerm, OperadStructure, UnitTerm
from .pasting import (
    LabelledDiagram,
    PastingDiagram,
    all_cells,
    boundary_inclusion,
    cell_src,
    cell_tgt,
    chain,
    labelled,
    size,
    subst_arities,
)
from .util import canonical_key


# ---------------------------------------------------------------------------
# explicit low-dimensional diagrams


@dataclass(frozen=True)
class ExplicitDiagram2:
    """A diagram of dimension at most 2 held as explicit cell tables.

    ``counts`` lists the number of top cells per column: () at dimension 0,
    (m,) for m arrows at dimension 1, one entry per column at dimension 2.
    """

    dim: int
    counts: tuple[int, ...]

    def glob(self) -> GlobularSet:
        if self.dim == 0:
            return glob_set([[("p", 0)]], [{}], [{}])
        if self.dim == 1:
            m = self.counts[0]
            points = [("p", i) for i in range(m + 1)]
            arrows = [("a", i) for i in range(1, m + 1)]
            src = {("a", i): ("p", i - 1) for i in range(1, m + 1)}
            tgt = {("a", i): ("p", i) for i in range(1, m + 1)}
            return glob_set([points, arrows], [{}, src], [{}, tgt])
        m = len(self.counts)
        points = [("p", i) for i in range(m + 1)]
        arrows, faces = [], []
        asrc, atgt, fsrc, ftgt = {}, {}, {}, {}
        for i, n in enumerate(self.counts, start=1):
            for t in range(n + 1):
                arrows.append(("a", i, t))
                asrc[("a", i, t)] = ("p", i - 1)
                atgt[("a", i, t)] = ("p", i)
            for t in range(1, n + 1):
                faces.append(("c", i, t))
                fsrc[("c", i, t)] = ("a", i, t - 1)
                ftgt[("c", i, t)] = ("a", i, t)
        return glob_set([points, arrows, faces], [{}, asrc, fsrc], [{}, atgt, ftgt])

    def to_tree(self) -> PastingDiagram:
        if self.dim == 0:
            return PastingDiagram(0, ())
        if self.dim == 1:
            return chain(self.counts[0])
        return PastingDiagram(2, tuple(chain(n) for n in self.counts))


def explicit_from_tree(pi: PastingDiagram) -> ExplicitDiagram2:
    if pi.dim > 2:
        raise ValueError("explicit diagrams stop at dimension 2")
    if pi.dim == 0:
        return ExplicitDiagram2(0, ())
    if pi.dim == 1:
        return ExplicitDiagram2(1, (len(pi.children),))
    return ExplicitDiagram2(2, tuple(len(c.children) for c in pi.children))


def oracle_trees(k: int, max_size: int) -> list[ExplicitDiagram2]:
    """Diagrams of dimension k <= 2 generated by direct column-list
    recursion, with the size accounted cell by cell."""
    if k > 2:
        raise ValueError("the oracle stops at dimension 2")
    out: list[ExplicitDiagram2] = []
    if k == 0:
        if max_size >= 1:
            out.append(ExplicitDiagram2(0, ()))
        return out
    if k == 1:
        m = 0
        while (m + 1) + m <= max_size:
            out.append(ExplicitDiagram2(1, (m,)))
            m += 1
        return out

    def column_lists(budget: int):
        # a column with n faces costs (n + 1) arrows plus n faces
        yield ()
        n = 0
        while 2 * n + 1 <= budget:
            for rest in column_lists(budget - (2 * n + 1)):
                yield (n,) + rest
            n += 1

    seen = set()
    for counts in column_lists(max_size - 1):
        total = (len(counts) + 1) + sum(n + 1 for n in counts) + sum(counts)
        if total <= max_size and counts not in seen:
            seen.add(counts)
            out.append(ExplicitDiagram2(2, counts))
    out.sort(key=lambda e: (e.dim, len(e.counts), e.counts))
    return out


def oracle_substitute2(ld: LabelledDiagram) -> ExplicitDiagram2:
    """Substitution for dimensions <= 2 by splicing column counts directly."""
    shape = ld.shape
    if shape.dim > 2:
        raise ValueError("the oracle stops at dimension 2")
    if shape.dim == 0:
        return ExplicitDiagram2(0, ())
    if shape.dim == 1:
        total = 0
        for i in range(1, len(shape.children) + 1):
            lab = ld.label_of(_addr(1, (i, 0)))
            if lab.dim != 1:
                raise ValueError("arrow labelled by a non-arrow diagram")
            total += len(lab.children)
        return ExplicitDiagram2(1, (total,))
    columns: list[int] = []
    for i, child in enumerate(shape.children, start=1):
        n = len(child.children)
        if n == 0:
            alpha = ld.label_of(_addr(1, (i, 0)))
            columns.extend([0] * len(alpha.children))
            continue
        betas = [ld.label_of(_addr(2, (i, t, 0))) for t in range(1, n + 1)]
        widths = {len(b.children) for b in betas}
        if len(widths) != 1:
            raise ValueError("stacked labels have different widths")
        width = widths.pop()
        for r in range(width):
            columns.append(sum(len(b.children[r].children) for b in betas))
    return ExplicitDiagram2(2, tuple(columns))


def _addr(dim, path):
    from .pasting import CellAddr

    return CellAddr(dim, tuple(path))


# ---------------------------------------------------------------------------
# free operad terms by recursion on size


def oracle_boundary(lower: OperadStructure | None, coll: Collection, d: int, t, side: int):
    """Independent recursive evaluation of the formal boundary composite."""
    if isinstance(t, UnitTerm):
        return lower.units[d - 1]
    if isinstance(t, NodeTerm):
        shape = coll.arity_of(d, t.gen)
        incl = boundary_inclusion(shape, side)
        table = dict(zip(all_cells(shape), t.labels))
        head = coll.src_of(d, t.gen) if side == 0 else coll.tgt_of(d, t.gen)
        from .pasting import boundary

        phi = labelled(boundary(shape), {a: table[incl[a]] for a in incl})
        return lower.mult(d - 1, head, phi)
    return coll.src_of(d, t) if side == 0 else coll.tgt_of(d, t)


def oracle_terms(lower: OperadStructure | None, coll: Collection, d: int, bounds: Bounds) -> set:
    """Every bounded normal-form term of dimension d over the d-cells of the
    collection, generated by recursion on term size with a cartesian product
    over labellings and a compatibility filter."""
    unit = UnitTerm(d)
    by_size: dict[int, list] = {0: [unit]}
    sizes = {unit: 0}
    bnd: dict = {}
    if d >= 1:
        bnd[unit] = (lower.units[d - 1], lower.units[d - 1])

    def side_of(t, s):
        if t in bnd:
            return bnd[t][s]
        value = (
            oracle_boundary(lower, coll, d, t, 0),
            oracle_boundary(lower, coll, d, t, 1),
        )
        bnd[t] = value
        return value[s]

    gens = list(coll.cells_at(d))
    for g in gens:
        sizes[g] = 1
    lower_cells = set(coll.cells_at(d - 1)) if d >= 1 else set()

    for target in range(1, bounds.max_term_size + 1):
        found = []
        smaller = [t for s in range(target) for t in by_size.get(s, [])]
        for g in gens:
            shape = coll.arity_of(d, g)
            addrs = all_cells(shape)
            tops = [a for a in addrs if a.dim == d]
            lowers = [a for a in addrs if a.dim < d]
            top_pools = [smaller] * len(tops)
            lower_pools = [coll.cells_at(a.dim) for a in lowers]
            for top_choice in itertools.product(*top_pools):
                if 1 + sum(sizes[t] for t in top_choice) != target:
                    continue
                for lower_choice in itertools.product(*lower_pools):
                    table = dict(zip(tops, top_choice))
                    table.update(zip(lowers, lower_choice))
                    ok = True
                    for a in addrs:
                        if a.dim == 0:
                            continue
                        lab = table[a]
                        if a.dim == d:
                            s_val, t_val = side_of(lab, 0), side_of(lab, 1)
                        else:
                            s_val = coll.src_of(a.dim, lab)
                            t_val = coll.tgt_of(a.dim, lab)
                        if table[cell_src(shape, a)] != s_val or table[cell_tgt(shape, a)] != t_val:
                            ok = False
                            break
                    if not ok:
                        continue
                    if all(
                        (a.dim == d and isinstance(table[a], UnitTerm))
                        or (a.dim < d and table[a] == lower.units[a.dim])
                        for a in addrs
                    ):
                        continue  # the all-unit labelling is the bare generator
                    cell = NodeTerm(d, g, tuple(table[a] for a in addrs))
                    ar = subst_arities(
                        shape,
                        tuple(_oracle_arity(lower, coll, a.dim, table[a], d) for a in addrs),
                    )
                    if size(ar) > bounds.max_arity_size:
                        continue
                    if d >= 1:
                        if side_of(cell, 0) not in lower_cells or side_of(cell, 1) not in lower_cells:
                            continue
                    sizes[cell] = target
                    found.append(cell)
        by_size[target] = found
        if target == 1:
            by_size[1] = gens + found

    out = set()
    for group in by_size.values():
        out.update(group)
    return out


def _oracle_arity(lower, coll, j, c, d):
    if isinstance(c, UnitTerm):
        from .pasting import unit_tree

        return unit_tree(j)
    if isinstance(c, NodeTerm):
        shape = coll.arity_of(j, c.gen)
        return subst_arities(
            shape,
            tuple(
                _oracle_arity(lower, coll, a.dim, lab, d)
                for a, lab in zip(all_cells(shape), c.labels)
            ),
        )
    return coll.arity_of(j, c)


# ---------------------------------------------------------------------------
# contraction triples as a flat product with a predicate


def oracle_triples(coll: Collection, k: int, bounds: Bounds) -> set[CtrCell]:
    """All contraction k-cells (k <= 2) as a cartesian product of cell pairs
    and bounded diagrams filtered by the admissibility predicate."""
    if not 1 <= k <= 2:
        raise ValueError("the oracle covers contraction dimensions 1 and 2")
    pool = [e.to_tree() for e in oracle_trees(k, bounds.max_arity_size)]
    out = set()
    lower = coll.cells_at(k - 1)
    for a, b, theta in itertools.product(lower, lower, pool):
        if k - 1 >= 1:
            if coll.src_of(k - 1, a) != coll.src_of(k - 1, b):
                continue
            if coll.tgt_of(k - 1, a) != coll.tgt_of(k - 1, b):
                continue
        if coll.arity_of(k - 1, a) != coll.arity_of(k - 1, b):
            continue
        if k == 1:
            matches = coll.arity_of(0, a) == PastingDiagram(0, ())
        else:
            matches = chain(len(theta.children)) == coll.arity_of(1, a)
        if matches:
            out.add(CtrCell(a, b, theta))
    return out


# ---------------------------------------------------------------------------
# exhaustive search for structure-preserving morphisms


def search_all_morphisms(s: OwcState, t: OwcState, up_to: int) -> list[GlobMorphism]:
    """Complete backtracking search over all assignments of cells of ``s`` to
    cells of ``t`` that preserve arity, boundaries, units, gamma and the
    multiplication; every found assignment is re-verified with the full
    morphism checks."""
    from .operad import term_size

    order: list[tuple[int, object]] = []
    for k in range(up_to + 1):
        layer = sorted(
            s.collection.cells_at(k),
            key=lambda c, k=k: (term_size(s.operad, k, c), canonical_key(c)),
        )
        order.extend((k, c) for c in layer)
    assignment: dict[tuple[int, object], object] = {}
    results: list[GlobMorphism] = []

    def candidates(k, c):
        if isinstance(c, UnitTerm):
            u = t.operad.units.get(k)
            return [u] if u is not None else []
        if isinstance(c, CtrCell):
            ia = assignment[(k - 1, c.a)]
            ib = assignment[(k - 1, c.b)]
            lift = t.contraction.gamma.get((ia, ib, c.theta))
            return [lift] if lift is not None else []
        if isinstance(c, NodeTerm):
            shape = s.collection.arity_of(k, c.gen)
            ig = assignment[(k, c.gen)]
            phi = labelled(
                shape,
                {
                    a: assignment[(a.dim, lab)]
                    for a, lab in zip(all_cells(shape), c.labels)
                },
            )
            val = t.operad.mult(k, ig, phi)
            return [val] if t.collection.has_cell(k, val) else []
        out = []
        for cand in t.collection.cells_at(k):
            if t.collection.arity_of(k, cand) != s.collection.arity_of(k, c):
                continue
            if k >= 1:
                if t.collection.src_of(k, cand) != assignment[(k - 1, s.collection.src_of(k, c))]:
                    continue
                if t.collection.tgt_of(k, cand) != assignment[(k - 1, s.collection.tgt_of(k, c))]:
                    continue
            out.append(cand)
        return out

    def place(i):
        if i == len(order):
            f = GlobMorphism(
                {
                    k: {c: assignment[(k, c)] for c in s.collection.cells_at(k)}
                    for k in range(up_to + 1)
                }
            )
            if all(r.passed for r in morphism_reports(f, s, t, up_to)):
                results.append(f)
            return
        k, c = order[i]
        for cand in candidates(k, c):
            if k >= 1:
                if t.collection.src_of(k, cand) != assignment[(k - 1, s.collection.src_of(k, c))]:
                    continue
                if t.collection.tgt_of(k, cand) != assignment[(k - 1, s.collection.tgt_of(k, c))]:
                    continue
            if t.collection.arity_of(k, cand) != s.collection.arity_of(k, c):
                continue
            assignment[(k, c)] = cand
            place(i + 1)
            del assignment[(k, c)]

    place(0)
    return results
