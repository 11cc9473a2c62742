import json

import pytest

from globop.collection import Bounds, empty_collection, one_cell_collection, terminal_collection, unit_collection
from globop.contraction import CtrCell, terminal_contraction
from globop.interleave import (
    OwcState,
    free_owc,
    free_owc_trace,
    induced_morphism,
    initial_owc,
    step_contraction,
    step_operad,
)
from globop.operad import NodeTerm, UnitTerm, mult_table, terminal_operad
from globop.pasting import DOT, chain, unit_tree
from globop.serialize import slice_json, state_text
from globop.util import canonical_json

PB = Bounds(max_dim=1, max_arity_size=3, max_term_size=2)


def test_initial_dim0():
    st = initial_owc(Bounds(0, 1, 2))
    assert st.collection.cells_at(0) == (UnitTerm(0),)
    assert st.stage == (0, 0)


def test_initial_dim1_counts():
    st = initial_owc(Bounds(1, 5, 1))
    assert len(st.collection.cells_at(1)) == 4
    got = {c for c in st.collection.cells_at(1) if isinstance(c, CtrCell)}
    assert got == {CtrCell(UnitTerm(0), UnitTerm(0), chain(m)) for m in range(3)}


def test_stage_errors():
    st = initial_owc(Bounds(1, 5, 1))
    with pytest.raises(ValueError):
        step_operad(st)  # already at (1, 1)
    trace = dict(free_owc_trace(empty_collection(), Bounds(1, 5, 1)))
    with pytest.raises(ValueError):
        step_contraction(trace["H1"])  # at (1, 0), needs (k, k)


def test_trace_stages():
    trace = free_owc_trace(empty_collection(), Bounds(2, 5, 1))
    assert [label for label, _ in trace] == ["M0", "H1", "M1", "H2", "M2"]
    assert [s.stage for _, s in trace] == [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)]


def test_ladder_coherence_lower_dims_frozen():
    small = initial_owc(Bounds(1, 7, 1))
    large = initial_owc(Bounds(3, 7, 1))
    for k in (0, 1):
        assert canonical_json(slice_json(small, k)) == canonical_json(slice_json(large, k))


def test_gamma_and_mult_survive_later_steps():
    trace = free_owc_trace(empty_collection(), Bounds(2, 5, 1))
    states = dict(trace)
    h1, m1, h2, m2 = states["H1"], states["M1"], states["H2"], states["M2"]
    b = Bounds(2, 5, 1)
    assert mult_table(h1.operad, b) == mult_table(states["M0"].operad, b)
    for key, value in h1.contraction.gamma.items():
        assert m2.contraction.gamma[key] == value
    t0 = mult_table(m1.operad, b, dims=[0, 1])
    t1 = mult_table(m2.operad, b, dims=[0, 1])
    assert t0 == t1


def test_provenance_complete_and_unique():
    st = initial_owc(Bounds(2, 5, 1))
    for k in range(3):
        for c in st.collection.cells_at(k):
            assert (k, c) in st.provenance
    steps = {p.step for p in st.provenance.values()}
    assert steps == {"operad-0", "contraction-1", "operad-1", "contraction-2", "operad-2"}


def test_free_owc_keeps_input_cells():
    st = free_owc(unit_collection(1), Bounds(1, 5, 2))
    for k in range(2):
        assert ("u", k) in st.collection.cells_at(k)
        assert st.provenance[(k, ("u", k))].step == "input"


def test_determinism_bitwise():
    a = state_text(initial_owc(Bounds(2, 5, 1)))
    b = state_text(initial_owc(Bounds(2, 5, 1)))
    assert a == b


def test_dim2_arities_bound_their_ends():
    from globop.pasting import boundary

    st = initial_owc(Bounds(2, 5, 1))
    for c in st.collection.cells_at(2):
        theta = st.collection.arity_of(2, c)
        s = st.collection.src_of(2, c)
        t = st.collection.tgt_of(2, c)
        assert st.collection.arity_of(1, s) == boundary(theta)
        assert st.collection.arity_of(1, t) == boundary(theta)


# --- induced morphisms ---------------------------------------------------------


def terminal_state(bounds):
    coll = terminal_collection(bounds)
    return OwcState(
        collection=coll,
        operad=terminal_operad(bounds),
        contraction=terminal_contraction(coll, bounds.max_dim, bounds),
        stage=(bounds.max_dim, bounds.max_dim),
        bounds=bounds,
        provenance={},
    )


def test_induced_into_terminal_is_arity():
    s = initial_owc(PB)
    t = terminal_state(PB)
    result = induced_morphism(s, t)
    assert result.receptive
    assert result.passed, [r.violations[:2] for r in result.reports]
    for k in range(2):
        for c in s.collection.cells_at(k):
            assert result.morphism.apply(k, c) == s.collection.arity_of(k, c)


def test_induced_into_free_over_one_cell():
    s = initial_owc(PB)
    t = free_owc(one_cell_collection(PB.max_dim), PB)
    result = induced_morphism(s, t)
    assert result.receptive
    assert result.passed, [r.violations[:2] for r in result.reports]
    # units map to units, contraction cells to contraction cells
    assert result.morphism.apply(0, UnitTerm(0)) == UnitTerm(0)
    c = CtrCell(UnitTerm(0), UnitTerm(0), chain(0))
    assert result.morphism.apply(1, c) == c


def test_induced_reports_non_receptive():
    s = initial_owc(PB)
    t = free_owc(one_cell_collection(PB.max_dim), PB)
    gamma = dict(t.contraction.gamma)
    gamma.pop((UnitTerm(0), UnitTerm(0), chain(0)))
    broken = OwcState(
        collection=t.collection,
        operad=t.operad,
        contraction=type(t.contraction)(t.collection, 1, gamma),
        stage=t.stage,
        bounds=t.bounds,
        provenance=t.provenance,
    )
    result = induced_morphism(s, broken)
    assert not result.receptive
    assert any(kind == "gamma" for kind, *_ in result.missing)


def test_seed_required_for_input_cells():
    s = free_owc(one_cell_collection(PB.max_dim), PB)
    t = terminal_state(PB)
    bare = induced_morphism(s, t)
    assert not bare.receptive
    seeded = induced_morphism(s, t, seed={(0, "v"): DOT})
    assert seeded.receptive and seeded.passed
