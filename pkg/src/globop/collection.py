"""Collections: globular sets equipped with a pasting-diagram arity map.

Also home to the generic labelling enumerator used by the tensor product and
by the free-operad strata: a labelling of a shape valued in a graded cell
family is a globular map, so labels of higher cells force the labels of their
boundary cells.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import pasting
from .globset import GlobularSet, check_globularity, empty_glob_set, glob_set
from .pasting import (
    CellAddr,
    LabelledDiagram,
    PastingDiagram,
    all_cells,
    boundary,
    cell_src,
    cell_tgt,
    enumerate_trees,
    labelled,
    size,
    subst_arities,
    unit_tree,
)
from .report import Report
from .util import canonical_key


@dataclass(frozen=True)
class Bounds:
    max_dim: int
    max_arity_size: int
    max_term_size: int

    def __post_init__(self):
        if min(self.max_dim, self.max_arity_size, self.max_term_size) < 0:
            raise ValueError("bounds must be non-negative")


@dataclass(frozen=True)
class Overflow:
    """Aggregated record of candidates a step refused to materialize."""

    step: str
    dim: int
    reason: str
    count: int
    sample: tuple = ()


@dataclass(frozen=True, eq=True)
class Collection:
    carrier: GlobularSet
    arity: tuple[dict, ...]

    @property
    def max_dim(self) -> int:
        return self.carrier.max_dim

    def cells_at(self, k: int) -> tuple:
        return self.carrier.cells_at(k)

    def src_of(self, k: int, c):
        return self.carrier.src_of(k, c)

    def tgt_of(self, k: int, c):
        return self.carrier.tgt_of(k, c)

    def arity_of(self, k: int, c) -> PastingDiagram:
        return self.arity[k][c]

    def has_cell(self, k: int, c) -> bool:
        return c in self.arity[k]


def make_collection(cells_by_dim, src, tgt, arity) -> Collection:
    carrier = glob_set(cells_by_dim, src, tgt)
    return Collection(carrier, tuple(dict(a) for a in arity))


def empty_collection(max_dim: int = 0) -> Collection:
    return Collection(empty_glob_set(max_dim), ({},) * (max_dim + 1))


def check_collection(a: Collection) -> Report:
    """The arity map must be globular: arities of src and tgt are the arity's
    boundary."""
    rep = Report("collection")
    for k in range(a.max_dim + 1):
        for c in a.cells_at(k):
            if c not in a.arity[k]:
                rep.add("cell has no arity", witness=(k, c))
                continue
            if a.arity_of(k, c).dim != k:
                rep.add("arity dimension differs from cell dimension", witness=(k, c))
                continue
            if k >= 1:
                b = boundary(a.arity_of(k, c))
                if a.arity_of(k - 1, a.src_of(k, c)) != b:
                    rep.add("arity of src is not the boundary of the arity", witness=(k, c))
                if a.arity_of(k - 1, a.tgt_of(k, c)) != b:
                    rep.add("arity of tgt is not the boundary of the arity", witness=(k, c))
    return rep


def unit_collection(max_dim: int) -> Collection:
    """One cell per dimension, with the single-cell diagram as arity."""
    cells = [[("u", k)] for k in range(max_dim + 1)]
    src = [{("u", k): ("u", k - 1)} for k in range(max_dim + 1)]
    tgt = [{("u", k): ("u", k - 1)} for k in range(max_dim + 1)]
    arity = [{("u", k): unit_tree(k)} for k in range(max_dim + 1)]
    return make_collection(cells, src, tgt, arity)


def one_cell_collection(max_dim: int = 0) -> Collection:
    """A single 0-cell named "v" (padding empty layers up to max_dim)."""
    layers = max_dim + 1
    cells = [["v"]] + [[] for _ in range(layers - 1)]
    src = [{} for _ in range(layers)]
    tgt = [{} for _ in range(layers)]
    arity = [{"v": PastingDiagram(0, ())}] + [{} for _ in range(layers - 1)]
    return make_collection(cells, src, tgt, arity)


def terminal_collection(bounds: Bounds) -> Collection:
    """The bounded slice of the diagram family itself: cells are diagrams,
    src and tgt are the boundary, the arity is the identity."""
    cells, src, tgt, arity = [], [], [], []
    for k in range(bounds.max_dim + 1):
        layer = enumerate_trees(k, bounds.max_arity_size)
        cells.append(layer)
        src.append({t: boundary(t) for t in layer} if k >= 1 else {})
        tgt.append({t: boundary(t) for t in layer} if k >= 1 else {})
        arity.append({t: t for t in layer})
    return make_collection(cells, src, tgt, arity)


def truncate(a: Collection, k: int) -> Collection:
    """Discard all cells of dimension greater than k."""
    top = min(k, a.max_dim)
    return Collection(
        GlobularSet(a.carrier.cells[: top + 1], a.carrier.src[: top + 1], a.carrier.tgt[: top + 1]),
        a.arity[: top + 1],
    )


# ---------------------------------------------------------------------------
# labellings of a shape valued in a graded cell family


def enumerate_labellings(
    shape: PastingDiagram,
    candidates_by_dim,
    src_of,
    tgt_of,
    overrides: dict[CellAddr, list] | None = None,
) -> list[LabelledDiagram]:
    """All labellings of ``shape`` with labels drawn per dimension from
    ``candidates_by_dim`` such that the label of every cell's source/target is
    the source/target of that cell's label.

    Cells are assigned top dimension first, so boundary labels are forced by
    the time their turn comes.  ``overrides`` narrows the candidate list of
    individual cells.  Deterministic output order.
    """
    order = sorted(all_cells(shape), key=lambda a: (-a.dim, a.path))
    forced: dict[CellAddr, object] = {}
    assign: dict[CellAddr, object] = {}
    out: list[LabelledDiagram] = []

    def options(addr: CellAddr):
        if addr in forced:
            return [forced[addr]]
        if overrides and addr in overrides:
            return overrides[addr]
        return candidates_by_dim(addr.dim)

    def place(i: int) -> None:
        if i == len(order):
            out.append(labelled(shape, assign))
            return
        addr = order[i]
        for lab in options(addr):
            pushed = []
            ok = True
            if addr.dim >= 1:
                for neighbour, value in (
                    (cell_src(shape, addr), src_of(addr.dim, lab)),
                    (cell_tgt(shape, addr), tgt_of(addr.dim, lab)),
                ):
                    if neighbour in forced:
                        if forced[neighbour] != value:
                            ok = False
                            break
                    else:
                        forced[neighbour] = value
                        pushed.append(neighbour)
            if ok:
                assign[addr] = lab
                place(i + 1)
                del assign[addr]
            for neighbour in pushed:
                del forced[neighbour]

    place(0)
    return out


def collection_labellings(shape: PastingDiagram, b: Collection, overrides=None) -> list[LabelledDiagram]:
    return enumerate_labellings(
        shape,
        lambda j: b.cells_at(j),
        lambda j, c: b.src_of(j, c),
        lambda j, c: b.tgt_of(j, c),
        overrides,
    )


# ---------------------------------------------------------------------------
# tensor product


@dataclass(frozen=True)
class PairCell:
    """A cell of a tensor product: a left cell with a labelling of its arity
    by right cells."""

    left: object
    labelling: LabelledDiagram

    def _sort_key_(self):
        return (canonical_key(self.left), canonical_key(self.labelling))


@dataclass(frozen=True)
class TensorResult:
    collection: Collection
    overflows: tuple[Overflow, ...]


def tensor(a: Collection, b: Collection, bounds: Bounds) -> TensorResult:
    """Bounded tensor product of collections.

    k-cells are pairs of a k-cell of ``a`` with a compatible labelling of its
    arity by cells of ``b``; the arity of a pair is the substitution of the
    labels' arities.  Pairs whose arity exceeds the bound are counted, not
    silently dropped.
    """
    top = min(a.max_dim, bounds.max_dim)
    cells, src, tgt, arity = [], [], [], []
    skipped: list[tuple[int, PairCell]] = []
    for k in range(top + 1):
        layer = []
        layer_src, layer_tgt, layer_arity = {}, {}, {}
        for left in a.cells_at(k):
            shape = a.arity_of(k, left)
            for phi in collection_labellings(shape, b):
                pair = PairCell(left, phi)
                composed = subst_arities(
                    shape, tuple(b.arity_of(x.dim, phi.label_of(x)) for x in all_cells(shape))
                )
                if size(composed) > bounds.max_arity_size:
                    skipped.append((k, pair))
                    continue
                layer.append(pair)
                layer_arity[pair] = composed
                if k >= 1:
                    layer_src[pair] = PairCell(
                        a.src_of(k, left), pasting.boundary_restrict(phi, 0)
                    )
                    layer_tgt[pair] = PairCell(
                        a.tgt_of(k, left), pasting.boundary_restrict(phi, 1)
                    )
        cells.append(tuple(layer))
        src.append(layer_src)
        tgt.append(layer_tgt)
        arity.append(layer_arity)
    overflows = ()
    if skipped:
        overflows = (
            Overflow(
                step="tensor",
                dim=-1,
                reason="arity",
                count=len(skipped),
                sample=tuple(repr(s) for s in skipped[:3]),
            ),
        )
    return TensorResult(Collection(glob_set(cells, src, tgt), tuple(arity)), overflows)
