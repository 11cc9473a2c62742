import pytest

from globop.collection import Bounds, empty_collection, make_collection, one_cell_collection
from globop.operad import (
    NodeTerm,
    OperadStructure,
    UnitTerm,
    cell_arity,
    check_operad_laws,
    counit_eval,
    extend_operad,
    free_operad_dim0,
    free_operad_step,
    make_node,
    mult_table,
    term_mult,
    term_size,
    term_src,
    term_tgt,
    terminal_operad,
    unit_labelling,
)
from globop.pasting import (
    DOT,
    all_cells,
    cells,
    chain,
    labelled,
    unit_tree,
    PastingDiagram,
)


def self_loop_operad(max_dim=1):
    """One 0-cell acting as its own unit, one 1-generator on it."""
    coll = make_collection(
        [["e"], ["g"]] + [[] for _ in range(max_dim - 1)],
        [{}, {"g": "e"}] + [{} for _ in range(max_dim - 1)],
        [{}, {"g": "e"}] + [{} for _ in range(max_dim - 1)],
        [{"e": DOT}, {"g": unit_tree(1)}] + [{} for _ in range(max_dim - 1)],
    )
    op = OperadStructure(coll, 0, {0: "e"}, None)
    op.mult_fn = lambda d, a, phi: phi.label_of(cells(phi.shape, 0)[0])
    return op


def idempotent_one_operad():
    """Hand-built operad up to dimension 1 with a collapsing composition."""
    coll = make_collection(
        [["w"], ["i", "f"], []],
        [{}, {"i": "w", "f": "w"}, {}],
        [{}, {"i": "w", "f": "w"}, {}],
        [{"w": DOT}, {"i": unit_tree(1), "f": unit_tree(1)}, {}],
    )
    op = OperadStructure(coll, 1, {0: "w", 1: "i"}, None)

    def mult_fn(d, a, phi):
        if d == 0:
            return phi.label_of(cells(phi.shape, 0)[0])
        top = phi.label_of(cells(phi.shape, 1)[0])
        return top if a == "i" else ("f" if top in ("i", "f") else None)

    op.mult_fn = mult_fn
    return op


# --- dimension 0 -------------------------------------------------------------


def test_free_dim0_on_empty():
    res = free_operad_dim0(empty_collection(0), Bounds(0, 1, 3))
    assert res.operad.over.cells_at(0) == (UnitTerm(0),)
    assert res.operad.over.arity_of(0, UnitTerm(0)) == DOT
    assert res.stabilization_depth == 0


def test_free_dim0_one_generator():
    res = free_operad_dim0(one_cell_collection(), Bounds(0, 1, 2))
    got = set(res.operad.over.cells_at(0))
    gg = NodeTerm(0, "v", ("v",))
    assert got == {UnitTerm(0), "v", gg}
    assert res.stabilization_depth == 2


def test_dim0_unit_collapse():
    res = free_operad_dim0(one_cell_collection(), Bounds(0, 1, 3))
    op = res.operad
    for t in op.over.cells_at(0):
        assert op.mult(0, UnitTerm(0), labelled(DOT, {all_cells(DOT)[0]: t})) == t
        assert op.mult(0, t, unit_labelling(op, 0, DOT)) == t


# --- the free step -----------------------------------------------------------


def test_free_step_single_loop_generator():
    lower = self_loop_operad()
    res = free_operad_step(lower, Bounds(1, 3, 3))
    g1 = NodeTerm(1, "g", ("e", "e", "g"))
    g2 = NodeTerm(1, "g", ("e", "e", g1))
    assert set(res.operad.over.cells_at(1)) == {UnitTerm(1), "g", g1, g2}
    assert res.operad.over.src_of(1, g2) == "e"
    assert res.stabilization_depth == 3


def test_free_step_no_generators_adds_only_unit():
    coll = make_collection(
        [["e"], []], [{}, {}], [{}, {}], [{"e": DOT}, {}]
    )
    lower = OperadStructure(coll, 0, {0: "e"}, None)
    lower.mult_fn = lambda d, a, phi: phi.label_of(cells(phi.shape, 0)[0])
    res = free_operad_step(lower, Bounds(1, 3, 3))
    assert res.operad.over.cells_at(1) == (UnitTerm(1),)
    assert res.operad.over.src_of(1, UnitTerm(1)) == "e"


def test_strata_are_monotone_and_reported():
    lower = self_loop_operad()
    res = free_operad_step(lower, Bounds(1, 3, 4))
    strata = res.strata
    assert strata[UnitTerm(1)] == 0
    depth = res.stabilization_depth
    assert depth == max(strata.values())
    # every node's top labels come from strictly earlier strata
    for cell, n in strata.items():
        if isinstance(cell, NodeTerm):
            for addr, lab in zip(all_cells(unit_tree(1)), cell.labels):
                if addr.dim == 1 and isinstance(lab, NodeTerm):
                    assert strata[lab] < n


# --- grafting ----------------------------------------------------------------


def test_term_mult_unit_laws():
    lower = self_loop_operad()
    res = free_operad_step(lower, Bounds(1, 3, 3))
    op = res.operad
    for t in op.over.cells_at(1):
        shape = op.over.arity_of(1, t)
        assert op.mult(1, t, unit_labelling(op, 1, shape)) == t
        arg = {a: t if a.dim == 1 else None for a in all_cells(unit_tree(1))}
        arg[all_cells(unit_tree(1))[0]] = term_src(op, 1, t)
        arg[all_cells(unit_tree(1))[1]] = term_tgt(op, 1, t)
        assert op.mult(1, UnitTerm(1), labelled(unit_tree(1), arg)) == t


def test_term_mult_chain_arities():
    """Composing a two-slot generator with two one-slot generators."""
    coll = make_collection(
        [["e"], ["g1", "g2"]],
        [{}, {"g1": "e", "g2": "e"}],
        [{}, {"g1": "e", "g2": "e"}],
        [{"e": DOT}, {"g1": chain(1), "g2": chain(2)}],
    )
    lower = OperadStructure(coll, 0, {0: "e"}, None)
    lower.mult_fn = lambda d, a, phi: phi.label_of(cells(phi.shape, 0)[0])
    ctx = extend_operad(lower, coll, 1)
    sh = chain(2)
    arg = {a: "e" for a in cells(sh, 0)}
    arg[cells(sh, 1)[0]] = "g1"
    arg[cells(sh, 1)[1]] = "g1"
    out = term_mult(ctx, 1, "g2", labelled(sh, arg))
    assert isinstance(out, NodeTerm)
    assert cell_arity(ctx, 1, out) == chain(2)
    assert term_size(ctx, 1, out) == 3


def test_term_mult_shape_mismatch():
    lower = self_loop_operad()
    ctx = extend_operad(lower, lower.over, 1)
    with pytest.raises(ValueError):
        term_mult(ctx, 1, "g", labelled(chain(2), {a: "e" if a.dim == 0 else "g" for a in all_cells(chain(2))}))


def test_term_mult_associativity_exhaustive():
    lower = self_loop_operad()
    res = free_operad_step(lower, Bounds(1, 7, 4))
    rep = check_operad_laws(res.operad, Bounds(1, 7, 4))
    assert rep.passed, rep.violations[:3]


def test_arity_homomorphism():
    lower = self_loop_operad()
    res = free_operad_step(lower, Bounds(1, 3, 3))
    op = res.operad
    from globop.pasting import subst_arities

    for (d, a, labels), r in mult_table(op, Bounds(1, 3, 3)).items():
        shape = op.over.arity_of(d, a)
        assert cell_arity(op, d, r) == subst_arities(
            shape,
            tuple(cell_arity(op, x.dim, lab) for x, lab in zip(all_cells(shape), labels)),
        )


# --- evaluation ---------------------------------------------------------------


def test_counit_examples():
    y = terminal_operad(Bounds(1, 5, 2))
    assert counit_eval(y, 1, UnitTerm(1)) == unit_tree(1)
    assert counit_eval(y, 1, chain(2)) == chain(2)
    # a depth-2 term over diagram cells evaluates to its arity
    inner = NodeTerm(1, chain(2), (DOT, DOT, DOT, chain(1), chain(1)))
    outer = NodeTerm(1, chain(1), (DOT, DOT, inner))
    assert counit_eval(y, 1, outer) == chain(2)
    with pytest.raises(KeyError):
        counit_eval(y, 1, NodeTerm(1, "nope", (DOT, DOT, UnitTerm(1))))


def test_triangle_counit_of_embedding_is_identity():
    lower = self_loop_operad()
    res = free_operad_step(lower, Bounds(1, 3, 3))
    op = res.operad
    for t in op.over.cells_at(1):
        assert counit_eval(op, 1, t) == t
    for x in ("g",):
        assert counit_eval(op, 1, x) == x


def test_counit_is_homomorphic():
    y = idempotent_one_operad()
    # evaluate a composite two ways on terms over y's 1-cells
    t = NodeTerm(1, "f", ("w", "w", "f"))
    head = NodeTerm(1, "f", ("w", "w", UnitTerm(1)))
    sh = unit_tree(1)
    arg = labelled(sh, {a: (t if a.dim == 1 else "w") for a in all_cells(sh)})
    composed = term_mult(_term_ctx(y), 1, head, arg)
    lhs = counit_eval(y, 1, composed)
    rhs = y.mult(
        1,
        counit_eval(y, 1, head),
        labelled(sh, {a: (counit_eval(y, 1, t) if a.dim == 1 else "w") for a in all_cells(sh)}),
    )
    assert lhs == rhs


def _term_ctx(y):
    return extend_operad(
        OperadStructure(y.over, 0, {0: y.units[0]}, lambda d, a, phi: y.mult(d, a, phi)),
        y.over,
        1,
    )


# --- law checking -------------------------------------------------------------


def test_terminal_operad_laws():
    rep = check_operad_laws(terminal_operad(Bounds(2, 7, 2)), Bounds(2, 7, 2))
    assert rep.passed, rep.violations[:3]


def test_corrupted_mult_located():
    base = terminal_operad(Bounds(1, 5, 2))
    broken = OperadStructure(base.over, 1, dict(base.units), None)

    def mult_fn(d, a, phi):
        out = base.mult_fn(d, a, phi)
        if d == 1 and a == chain(2) and out == chain(2):
            return chain(1)  # wrong size on purpose
        return out

    broken.mult_fn = mult_fn
    rep = check_operad_laws(broken, Bounds(1, 5, 2))
    assert not rep.passed


def test_lower_dims_unchanged_by_step():
    lower = self_loop_operad()
    res = free_operad_step(lower, Bounds(1, 3, 3))
    assert res.operad.over.cells_at(0) == lower.over.cells_at(0)
    assert mult_table(lower, Bounds(1, 3, 3), dims=[0]) == mult_table(
        res.operad, Bounds(1, 3, 3), dims=[0]
    )


def test_make_node_unit_collapse_definitional():
    lower = self_loop_operad()
    ctx = extend_operad(lower, lower.over, 1)
    phi = unit_labelling(ctx, 1, unit_tree(1))
    assert make_node(ctx, 1, "g", phi) == "g"
