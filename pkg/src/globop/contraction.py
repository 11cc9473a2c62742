"""Contraction structures and the dimensionwise free contraction step.

A contraction assigns, to every pair of parallel (k-1)-cells with a common
arity and every k-diagram bounding that arity, a lift cell whose arity is the
chosen diagram.  The free step adds one fresh cell per admissible triple; the
triple is its own lift, so the extended assignment is tautological.
"""

from __future__ import annotations

from dataclasses import dataclass

from .collection import Bounds, Collection, make_collection
from .globset import GlobMorphism, parallel
from .pasting import PastingDiagram, boundary, size, trees_with_boundary
from .report import Report
from .util import canonical_key


@dataclass(frozen=True)
class CtrCell:
    """A freely added contraction cell: source, target and chosen arity."""

    a: object
    b: object
    theta: PastingDiagram

    def __post_init__(self):
        if self.theta.dim < 1:
            raise ValueError("a contraction cell lives one dimension above its ends")

    def _sort_key_(self):
        return (canonical_key(self.a), canonical_key(self.b), self.theta)


@dataclass
class ContractionStructure:
    """gamma maps admissible triples (a, b, theta) at dimensions <= up_to_dim
    to their lift cells."""

    over: Collection
    up_to_dim: int
    gamma: dict[tuple[object, object, PastingDiagram], object]


def empty_contraction(over: Collection) -> ContractionStructure:
    return ContractionStructure(over, 0, {})


def admissible_triples(coll: Collection, k: int, bounds: Bounds) -> list[tuple]:
    """All (a, b, theta) requiring a contraction k-cell: a, b parallel
    (k-1)-cells with equal arity, theta a k-diagram bounding that arity with
    size within the bound.  Depends only on the cells below dimension k."""
    if k < 1:
        raise ValueError("contraction cells start at dimension 1")
    out = []
    lower = coll.cells_at(k - 1)
    for a in lower:
        for b in lower:
            if k - 1 >= 1 and not parallel(coll.carrier, a, b):
                continue
            ar = coll.arity_of(k - 1, a)
            if ar != coll.arity_of(k - 1, b):
                continue
            for theta in trees_with_boundary(ar, bounds.max_arity_size):
                out.append((a, b, theta))
    return out


@dataclass
class FreeContractionResult:
    collection: Collection
    contraction: ContractionStructure
    new_dim: int
    new_cells: tuple


def free_contraction_step(
    coll: Collection, ctr: ContractionStructure, bounds: Bounds
) -> FreeContractionResult:
    """Extend a contraction up to dimension k to one up to k+1 by adjoining a
    fresh cell for every admissible triple.  Only (k+1)-cells are added."""
    k = ctr.up_to_dim
    d = k + 1
    if d > bounds.max_dim or d > coll.max_dim:
        raise ValueError(f"dimension {d} is outside the bounds")
    triples = admissible_triples(coll, d, bounds)
    new_cells = []
    gamma = dict(ctr.gamma)
    existing = set(coll.cells_at(d))
    for a, b, theta in triples:
        cell = CtrCell(a, b, theta)
        if cell in existing:
            raise ValueError(f"freshly minted contraction cell {cell!r} already present")
        new_cells.append(cell)
        gamma[(a, b, theta)] = cell
    new_cells = sorted(new_cells, key=canonical_key)

    cells_by_dim = [
        coll.cells_at(j) + (tuple(new_cells) if j == d else ())
        for j in range(coll.max_dim + 1)
    ]
    src = [dict(coll.carrier.src[j]) for j in range(coll.max_dim + 1)]
    tgt = [dict(coll.carrier.tgt[j]) for j in range(coll.max_dim + 1)]
    arity = [dict(coll.arity[j]) for j in range(coll.max_dim + 1)]
    for cell in new_cells:
        src[d][cell] = cell.a
        tgt[d][cell] = cell.b
        arity[d][cell] = cell.theta
    new_coll = make_collection(cells_by_dim, src, tgt, arity)
    return FreeContractionResult(
        collection=new_coll,
        contraction=ContractionStructure(new_coll, d, gamma),
        new_dim=d,
        new_cells=tuple(new_cells),
    )


def check_contraction(s: ContractionStructure, bounds: Bounds) -> Report:
    """gamma must be total on the admissible triples within bounds and every
    lift must have the stated arity, source and target."""
    rep = Report("contraction-laws")
    coll = s.over
    for k in range(1, s.up_to_dim + 1):
        for a, b, theta in admissible_triples(coll, k, bounds):
            lift = s.gamma.get((a, b, theta))
            if lift is None:
                rep.add("gamma undefined on an admissible triple", witness=(k, a, b, theta))
                continue
            if not coll.has_cell(k, lift):
                rep.add("gamma lands outside the collection", witness=(k, a, b, theta))
                continue
            if coll.arity_of(k, lift) != theta:
                rep.add("arity of the lift differs from theta", witness=(k, a, b, theta))
            if coll.src_of(k, lift) != a:
                rep.add("src of the lift is not a", witness=(k, a, b, theta))
            if coll.tgt_of(k, lift) != b:
                rep.add("tgt of the lift is not b", witness=(k, a, b, theta))
    return rep


def contraction_morphism_check(
    f: GlobMorphism, s: ContractionStructure, s2: ContractionStructure, bounds: Bounds
) -> Report:
    """Verify f(gamma(a, b, theta)) == gamma'(fa, fb, theta) on all admissible
    triples of the domain within bounds."""
    rep = Report("contraction-morphism")
    for k in range(1, min(s.up_to_dim, s2.up_to_dim) + 1):
        for a, b, theta in admissible_triples(s.over, k, bounds):
            lift = s.gamma.get((a, b, theta))
            if lift is None:
                rep.add("domain gamma undefined", witness=(k, a, b, theta))
                continue
            image = (f.apply(k - 1, a), f.apply(k - 1, b), theta)
            expected = s2.gamma.get(image)
            if expected is None:
                rep.add("codomain gamma undefined on the image triple", witness=(k, a, b, theta))
                continue
            if f.apply(k, lift) != expected:
                rep.add("contraction cell not preserved", witness=(k, a, b, theta))
    return rep


def terminal_contraction(coll: Collection, up_to: int, bounds: Bounds) -> ContractionStructure:
    """On the diagram collection every theta is its own lift."""
    gamma = {}
    for k in range(1, up_to + 1):
        for a, b, theta in admissible_triples(coll, k, bounds):
            gamma[(a, b, theta)] = theta
    return ContractionStructure(coll, up_to, gamma)
