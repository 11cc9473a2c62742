import pytest

from globop.collection import (
    Bounds,
    PairCell,
    check_collection,
    collection_labellings,
    empty_collection,
    make_collection,
    one_cell_collection,
    tensor,
    terminal_collection,
    truncate,
    unit_collection,
)
from globop.globset import check_globularity
from globop.pasting import (
    DOT,
    all_cells,
    boundary,
    chain,
    size,
    subst_arities,
    unit_tree,
)

B = Bounds(max_dim=2, max_arity_size=5, max_term_size=2)


def test_bounds_validation():
    with pytest.raises(ValueError):
        Bounds(-1, 0, 0)


def test_check_collection_examples():
    assert check_collection(empty_collection(2)).passed
    assert check_collection(one_cell_collection()).passed
    bad = make_collection(
        [["x"], ["f"]],
        [{}, {"f": "x"}],
        [{}, {"f": "x"}],
        [{"x": DOT}, {"f": chain(2)}],  # fine: boundary(chain 2) == DOT
    )
    assert check_collection(bad).passed
    worse = make_collection(
        [["x"], ["f"]],
        [{}, {"f": "x"}],
        [{}, {"f": "x"}],
        [{"x": DOT}, {"f": unit_tree(2)}],  # wrong dimension
    )
    assert not check_collection(worse).passed


def test_unit_collection():
    u = unit_collection(2)
    assert u.arity_of(0, ("u", 0)) == DOT
    assert u.arity_of(2, ("u", 2)) == unit_tree(2)
    assert check_globularity(u.carrier).passed
    assert check_collection(u).passed


def test_terminal_collection_valid():
    t = terminal_collection(B)
    assert check_globularity(t.carrier).passed
    assert check_collection(t).passed


def test_truncate():
    u = unit_collection(2)
    t = truncate(u, 1)
    assert t.max_dim == 1
    assert sum(len(t.cells_at(k)) for k in range(2)) == 2
    assert truncate(truncate(u, 1), 1) == truncate(u, 1)
    assert truncate(empty_collection(2), 1) == empty_collection(1)


def test_tensor_one_cell_square():
    one = one_cell_collection()
    res = tensor(one, one, B)
    assert len(res.collection.cells_at(0)) == 1
    assert check_collection(res.collection).passed


def test_tensor_left_unit_bijection():
    u = unit_collection(2)
    b = unit_collection(2)
    res = tensor(u, b, B)
    # (unit cell, labelling of the single-cell shape) <-> top label
    for k in range(3):
        pairs = res.collection.cells_at(k)
        tops = [p.labelling.label_of(all_cells(p.labelling.shape)[-1]) for p in pairs]
        assert sorted(tops) == sorted(b.cells_at(k))
        for p in pairs:
            assert res.collection.arity_of(k, p) == b.arity_of(k, tops[pairs.index(p)])


def test_tensor_right_unit_bijection():
    a = terminal_collection(Bounds(2, 5, 2))
    u = unit_collection(2)
    res = tensor(a, u, B)
    for k in range(3):
        pairs = res.collection.cells_at(k)
        # exactly one labelling per left cell, arity preserved
        assert [p.left for p in pairs] == list(a.cells_at(k))
        for p in pairs:
            assert res.collection.arity_of(k, p) == a.arity_of(k, p.left)


def test_tensor_reports_overflow():
    t = terminal_collection(Bounds(1, 5, 2))
    res = tensor(t, t, Bounds(1, 3, 2))
    assert res.overflows and res.overflows[0].reason == "arity"
    assert res.overflows[0].count > 0


def test_tensor_associativity_small():
    """(A x B) x C and A x (B x C) match by the canonical re-association."""
    a = unit_collection(1)
    b = terminal_collection(Bounds(1, 3, 2))
    c = unit_collection(1)
    bounds = Bounds(1, 5, 2)
    left = tensor(tensor(a, b, bounds).collection, c, bounds).collection
    right = tensor(a, tensor(b, c, bounds).collection, bounds).collection
    for k in range(2):
        lefts = left.cells_at(k)
        rights = right.cells_at(k)
        assert len(lefts) == len(rights)
        remapped = set()
        for cell in lefts:
            inner_pair, psi = cell.left, cell.labelling
            shape = inner_pair.labelling.shape
            from globop.pasting import slice_at

            arities = tuple(
                b.arity_of(x.dim, inner_pair.labelling.label_of(x))
                for x in all_cells(shape)
            )
            chi = inner_pair.labelling.map_labels(
                lambda addr, lab: PairCell(
                    lab, slice_at(psi, shape, arities, addr)
                )
            )
            remapped.add(PairCell(inner_pair.left, chi))
        assert remapped == set(rights)
        for cell in lefts:
            assert left.arity_of(k, cell) in {right.arity_of(k, r) for r in rights}


def test_labellings_are_globular_maps():
    t = terminal_collection(Bounds(2, 5, 2))
    shape = unit_tree(2)
    for ld in collection_labellings(shape, t):
        for addr in all_cells(shape):
            if addr.dim >= 1:
                from globop.pasting import cell_src, cell_tgt

                assert ld.label_of(cell_src(shape, addr)) == boundary(ld.label_of(addr))
                assert ld.label_of(cell_tgt(shape, addr)) == boundary(ld.label_of(addr))


def test_tensor_cells_satisfy_collection_invariant():
    t = terminal_collection(Bounds(2, 5, 2))
    res = tensor(t, t, Bounds(2, 5, 2))
    assert check_collection(res.collection).passed
    assert check_globularity(res.collection.carrier).passed
