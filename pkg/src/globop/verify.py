"""Named verification suites producing machine-readable reports.

Each suite asserts the invariants of its home module at desk scale.  A suite
given a fixture validates the fixture instead of freshly built objects, so a
corrupted fixture demonstrates that the suite can fail.
"""

from __future__ import annotations

import itertools
import json
import time
from pathlib import Path

from .collection import (
    Bounds,
    Collection,
    Overflow,
    check_collection,
    empty_collection,
    enumerate_labellings,
    make_collection,
    one_cell_collection,
    tensor,
    unit_collection,
    terminal_collection,
)
from .contraction import (
    ContractionStructure,
    CtrCell,
    admissible_triples,
    check_contraction,
    free_contraction_step,
    terminal_contraction,
)
from .globset import check_globularity
from .interleave import (
    OwcState,
    Provenance,
    free_owc,
    free_owc_trace,
    induced_morphism,
    initial_owc,
)
from .operad import (
    check_operad_laws,
    counit_eval,
    free_operad_dim0,
    free_operad_step,
    mult_table,
    state_operad,
    terminal_operad,
)
from .oracle import (
    explicit_from_tree,
    oracle_substitute2,
    oracle_terms,
    oracle_triples,
    oracle_trees,
    search_all_morphisms,
)
from .pasting import (
    LabelledDiagram,
    PastingDiagram,
    all_cells,
    boundary,
    boundary_restrict,
    chain,
    enumerate_trees,
    flatten,
    labelled,
    size,
    substitute,
    tree_from_json,
    unit_tree,
)
from .report import Report
from .serialize import (
    DecodedState,
    globset_from_json,
    slice_json,
    slice_of_data,
    state_from_json,
    table_backed_operad,
)
from .util import canonical_json

DEFAULT_BOUNDS = Bounds(max_dim=2, max_arity_size=5, max_term_size=2)
STABILITY_BOUNDS = Bounds(max_dim=3, max_arity_size=7, max_term_size=1)
PROBE_BOUNDS = Bounds(max_dim=1, max_arity_size=3, max_term_size=2)
LADDER_PAIRS = {
    0: (Bounds(0, 5, 2), Bounds(2, 5, 2)),
    1: (Bounds(1, 7, 1), Bounds(3, 7, 1)),
}

SUITE_NAMES = (
    "globularity",
    "monoid-laws",
    "operad-laws",
    "contraction-laws",
    "triangle-identities",
    "stability-contraction",
    "stability-operad",
    "ladder-coherence",
    "oracle-equivalence",
    "initiality-probe",
)

_state_cache: dict[Bounds, OwcState] = {}
_trace_cache: dict[Bounds, list] = {}


def cached_initial(bounds: Bounds) -> OwcState:
    if bounds not in _state_cache:
        _state_cache[bounds] = initial_owc(bounds)
    return _state_cache[bounds]


def cached_trace(bounds: Bounds) -> list:
    if bounds not in _trace_cache:
        _trace_cache[bounds] = free_owc_trace(empty_collection(), bounds)
    return _trace_cache[bounds]


def input_collection_of(state: OwcState) -> Collection:
    """The sub-collection of cells the ladder started from."""
    keep = [
        [
            c
            for c in state.collection.cells_at(k)
            if state.provenance.get((k, c), Provenance("input")).step == "input"
        ]
        for k in range(state.collection.max_dim + 1)
    ]
    src = [
        {c: state.collection.src_of(k, c) for c in keep[k]} if k >= 1 else {}
        for k in range(len(keep))
    ]
    tgt = [
        {c: state.collection.tgt_of(k, c) for c in keep[k]} if k >= 1 else {}
        for k in range(len(keep))
    ]
    arity = [
        {c: state.collection.arity_of(k, c) for c in keep[k]} for k in range(len(keep))
    ]
    return make_collection(keep, src, tgt, arity)


# ---------------------------------------------------------------------------
# substitution laws (the monoid-laws engine)

_tree_labelling_cache: dict = {}


def tree_labellings(shape: PastingDiagram, max_label_size: int):
    key = (shape, max_label_size)
    if key not in _tree_labelling_cache:
        _tree_labelling_cache[key] = enumerate_labellings(
            shape,
            lambda j: enumerate_trees(j, max_label_size),
            lambda j, t: boundary(t),
            lambda j, t: boundary(t),
        )
    return _tree_labelling_cache[key]


def check_substitution_laws(max_shape_size: int, max_label_size: int, max_dim: int = 2) -> Report:
    """Unit laws, associativity and boundary naturality of substitution,
    exhaustively over the stated ranges."""
    rep = Report("monoid-laws")
    for d in range(max_dim + 1):
        for t in enumerate_trees(d, max_label_size):
            arg = {}
            for a in all_cells(unit_tree(d)):
                v = t
                for _ in range(d - a.dim):
                    v = boundary(v)
                arg[a] = v
            if substitute(labelled(unit_tree(d), arg)) != t:
                rep.add("left unit law fails", witness=repr(t))
        for shape in enumerate_trees(d, max_shape_size):
            ru = labelled(shape, {a: unit_tree(a.dim) for a in all_cells(shape)})
            if substitute(ru) != shape:
                rep.add("right unit law fails", witness=repr(shape))
            for outer in tree_labellings(shape, max_label_size):
                composed = substitute(outer)
                if d >= 1:
                    b = boundary(composed)
                    for side in (0, 1):
                        if substitute(boundary_restrict(outer, side)) != b:
                            rep.add(
                                "boundary of composite differs from composite of boundary",
                                witness=(repr(shape), side),
                            )
                # second-level labellings: the inner labelling of a boundary
                # cell is the boundary restriction of its neighbour's
                second = enumerate_labellings(
                    shape,
                    lambda j: (),
                    lambda j, phi: boundary_restrict(phi, 0),
                    lambda j, phi: boundary_restrict(phi, 1),
                    overrides={
                        c: tree_labellings(outer.label_of(c), max_label_size)
                        for c in all_cells(shape)
                    },
                )
                for nested in second:
                    inner = nested.as_dict()
                    one = substitute(
                        labelled(
                            shape,
                            {c: substitute(inner[c]) for c in all_cells(shape)},
                        )
                    )
                    two = substitute(flatten(shape, inner))
                    if one != two:
                        rep.add(
                            "associativity of substitution fails",
                            witness=(repr(shape), repr(outer.labels)),
                        )
    return rep


# ---------------------------------------------------------------------------
# suites


def _suite_globularity(bounds: Bounds, fixture) -> Report:
    rep = Report("globularity")
    if fixture is not None:
        rep.extend(check_globularity(globset_from_json(fixture)))
        return rep
    rep.extend(check_globularity(unit_collection(3).carrier))
    rep.extend(check_globularity(terminal_collection(bounds).carrier))
    state = cached_initial(bounds)
    rep.extend(check_globularity(state.collection.carrier))
    rep.extend(check_collection(state.collection))
    square = tensor(unit_collection(2), unit_collection(2), bounds)
    rep.extend(check_globularity(square.collection.carrier))
    rep.extend(check_collection(square.collection))
    return rep


def _suite_monoid_laws(bounds: Bounds, fixture) -> Report:
    if fixture is None:
        return check_substitution_laws(7, 5)
    rep = Report("monoid-laws")
    for case in fixture["cases"]:
        d = case["dim"]
        shape = tree_from_json(case["shape"], d)
        labels = tuple(
            tree_from_json(raw, a.dim)
            for a, raw in zip(all_cells(shape), case["labels"])
        )
        expected = tree_from_json(case["expected"], d)
        if substitute(LabelledDiagram(shape, labels)) != expected:
            rep.add("substitution differs from recorded value", witness=case)
    return rep


def _suite_operad_laws(bounds: Bounds, fixture) -> Report:
    rep = Report("operad-laws")
    if fixture is not None:
        decoded = state_from_json(fixture)
        op = table_backed_operad(decoded)
        rep.extend(check_operad_laws(op, decoded.state.bounds))
        return rep
    rep.extend(check_operad_laws(terminal_operad(Bounds(2, 9, 2)), Bounds(2, 9, 2)))
    small = cached_initial(Bounds(2, 5, 1))
    rep.extend(check_operad_laws(small.operad, small.bounds))
    return rep


def _suite_contraction_laws(bounds: Bounds, fixture) -> Report:
    rep = Report("contraction-laws")
    if fixture is not None:
        decoded = state_from_json(fixture)
        rep.extend(check_contraction(decoded.state.contraction, decoded.state.bounds))
        return rep
    state = cached_initial(STABILITY_BOUNDS)
    rep.extend(check_contraction(state.contraction, state.bounds))
    term_bounds = Bounds(2, 5, 1)
    term = terminal_contraction(terminal_collection(term_bounds), 2, term_bounds)
    rep.extend(check_contraction(term, term_bounds))
    return rep


def _suite_triangle(bounds: Bounds, fixture) -> Report:
    rep = Report("triangle-identities")
    if fixture is not None:
        decoded = state_from_json(fixture)
        state, op = decoded.state, table_backed_operad(decoded)
    else:
        state = cached_initial(bounds)
        op = state.operad
    for d in range(state.stage[1] + 1):
        for t in state.collection.cells_at(d):
            if counit_eval(op, d, t) != t:
                rep.add("operad counit of the unit embedding is not the identity", witness=(d, repr(t)))
    for (a, b, theta), lift in state.contraction.gamma.items():
        if lift != CtrCell(a, b, theta):
            rep.add(
                "contraction counit of the unit embedding is not the identity",
                witness=repr((a, b, theta)),
            )
    return rep


def _mult_table_diffs(before, after) -> list:
    keys = set(before) | set(after)
    return [k for k in sorted(keys, key=repr) if before.get(k) != after.get(k)]


def _suite_stability_contraction(bounds: Bounds, fixture) -> Report:
    rep = Report("stability-contraction")
    if fixture is not None:
        return _fixture_integrity(rep, fixture, part="mult")
    trace = cached_trace(STABILITY_BOUNDS)
    for (label_before, before), (label_after, after) in zip(trace, trace[1:]):
        if not label_after.startswith("H"):
            continue
        dims = range(before.operad.up_to_dim + 1)
        tb = mult_table(before.operad, STABILITY_BOUNDS, dims=dims)
        ta = mult_table(after.operad, STABILITY_BOUNDS, dims=dims)
        for key in _mult_table_diffs(tb, ta):
            rep.add(
                f"multiplication changed across {label_after}",
                witness=repr(key),
            )
    return rep


def _suite_stability_operad(bounds: Bounds, fixture) -> Report:
    rep = Report("stability-operad")
    if fixture is not None:
        return _fixture_integrity(rep, fixture, part="gamma")
    trace = cached_trace(STABILITY_BOUNDS)
    for (label_before, before), (label_after, after) in zip(trace, trace[1:]):
        if not label_after.startswith("M") or label_after == "M0":
            continue
        if before.contraction.gamma != after.contraction.gamma:
            rep.add(f"gamma table changed across {label_after}")
        for k in range(1, before.contraction.up_to_dim + 1):
            if admissible_triples(before.collection, k, STABILITY_BOUNDS) != admissible_triples(
                after.collection, k, STABILITY_BOUNDS
            ):
                rep.add(f"admissible triples changed across {label_after}", witness=k)
    return rep


def _fixture_integrity(rep: Report, fixture, part: str) -> Report:
    """Rebuild the fixture's ladder from its input cells and diff the
    requested table."""
    decoded = state_from_json(fixture)
    state = decoded.state
    rebuilt = free_owc(input_collection_of(state), state.bounds)
    if part == "mult":
        want = {
            k: v
            for k, v in mult_table(rebuilt.operad, rebuilt.bounds).items()
            if rebuilt.collection.has_cell(k[0], v)
        }
        for key in _mult_table_diffs(want, decoded.mult_entries):
            rep.add("fixture multiplication table differs from a fresh build", witness=repr(key))
    else:
        if rebuilt.contraction.gamma != state.contraction.gamma:
            keys = set(rebuilt.contraction.gamma) | set(state.contraction.gamma)
            for key in sorted(keys, key=repr):
                if rebuilt.contraction.gamma.get(key) != state.contraction.gamma.get(key):
                    rep.add("fixture gamma table differs from a fresh build", witness=repr(key))
    return rep


def _suite_ladder(bounds: Bounds, fixture) -> Report:
    rep = Report("ladder-coherence")
    if fixture is not None:
        decoded = state_from_json(fixture)
        rebuilt = free_owc(input_collection_of(decoded.state), decoded.state.bounds)
        for k in range(decoded.state.stage[1] + 1):
            if canonical_json(slice_of_data(fixture, k)) != canonical_json(
                slice_json(rebuilt, k)
            ):
                rep.add("fixture slice differs from a fresh build", witness=k)
        return rep
    for k, (small, large) in LADDER_PAIRS.items():
        a = slice_json(cached_initial(small), k)
        b = slice_json(cached_initial(large), k)
        if canonical_json(a) != canonical_json(b):
            rep.add(
                f"dimension-{k} data differs between max_dim={small.max_dim} and {large.max_dim}"
            )
    return rep


def _suite_oracle(bounds: Bounds, fixture) -> Report:
    rep = Report("oracle-equivalence")
    if fixture is not None:
        decoded = state_from_json(fixture)
        state = decoded.state
        rebuilt = free_owc(input_collection_of(state), state.bounds)
        for k in range(state.collection.max_dim + 1):
            if set(state.collection.cells_at(k)) != set(rebuilt.collection.cells_at(k)):
                rep.add("fixture cells differ from a fresh build", witness=k)
        if state.contraction.gamma != rebuilt.contraction.gamma:
            rep.add("fixture gamma differs from a fresh build")
        return rep

    # trees
    for k in range(3):
        mine = set(enumerate_trees(k, 9))
        theirs = {e.to_tree() for e in oracle_trees(k, 9)}
        if mine != theirs:
            rep.add("tree enumeration differs from the oracle", witness=k)

    # substitution against explicit column splicing
    for d in range(3):
        for shape in enumerate_trees(d, 9):
            for ld in tree_labellings(shape, 3):
                if explicit_from_tree(substitute(ld)) != oracle_substitute2(ld):
                    rep.add("substitution differs from column splicing", witness=repr(shape))

    # free operad terms
    term_bounds = Bounds(2, 7, 3)
    empty = empty_collection(0)
    res0 = free_operad_dim0(empty, term_bounds)
    if set(res0.operad.over.cells_at(0)) != oracle_terms(None, empty, 0, term_bounds):
        rep.add("free 0-terms over the empty collection differ from the oracle")
    single = one_cell_collection()
    res1 = free_operad_dim0(single, term_bounds)
    if set(res1.operad.over.cells_at(0)) != oracle_terms(None, single, 0, term_bounds):
        rep.add("free 0-terms over one generator differ from the oracle")
    trace = cached_trace(Bounds(1, 5, 2))
    h1 = dict(trace)["H1"]
    m1 = dict(trace)["M1"]
    want = oracle_terms(h1.operad, h1.collection, 1, Bounds(1, 5, 2))
    if set(m1.collection.cells_at(1)) != want:
        rep.add("free 1-terms differ from the oracle")

    # contraction triples
    t0 = dict(cached_trace(Bounds(2, 7, 1)))
    step1 = free_contraction_step(t0["M0"].collection, t0["M0"].contraction, Bounds(2, 7, 1))
    if set(step1.new_cells) != oracle_triples(t0["M0"].collection, 1, Bounds(2, 7, 1)):
        rep.add("contraction 1-cells differ from the oracle")
    step2 = free_contraction_step(t0["M1"].collection, t0["M1"].contraction, Bounds(2, 7, 1))
    if set(step2.new_cells) != oracle_triples(t0["M1"].collection, 2, Bounds(2, 7, 1)):
        rep.add("contraction 2-cells differ from the oracle")
    for m in range(7):
        b = Bounds(1, 2 * m + 1, 1)
        triples = admissible_triples(t0["M0"].collection, 1, b)
        if len(triples) != m + 1:
            rep.add("contraction count law fails", witness=m)
    return rep


def _suite_initiality(bounds: Bounds, fixture) -> Report:
    rep = Report("initiality-probe")
    s = cached_initial(PROBE_BOUNDS)
    if fixture is not None:
        decoded = state_from_json(fixture)
        t = decoded.state
        if t.bounds != PROBE_BOUNDS:
            rep.add("fixture bounds differ from the probe bounds")
            return rep
    else:
        t = free_owc(one_cell_collection(PROBE_BOUNDS.max_dim), PROBE_BOUNDS)
    result = induced_morphism(s, t)
    if not result.receptive:
        rep.add("codomain is not receptive", witness=result.missing[:3])
        return rep
    for sub in result.reports:
        rep.extend(sub)
    found = search_all_morphisms(s, t, up_to=1)
    if len(found) != 1:
        rep.add("structure-preserving morphism count differs from one", witness=len(found))
    elif found[0].maps != result.morphism.maps:
        rep.add("search result differs from the induced morphism")
    return rep


_SUITES = {
    "globularity": _suite_globularity,
    "monoid-laws": _suite_monoid_laws,
    "operad-laws": _suite_operad_laws,
    "contraction-laws": _suite_contraction_laws,
    "triangle-identities": _suite_triangle,
    "stability-contraction": _suite_stability_contraction,
    "stability-operad": _suite_stability_operad,
    "ladder-coherence": _suite_ladder,
    "oracle-equivalence": _suite_oracle,
    "initiality-probe": _suite_initiality,
}


def run_suite(name: str, bounds: Bounds | None = None, fixture=None) -> Report:
    """Run one named suite.  ``fixture`` may be a path or parsed JSON."""
    if name not in _SUITES:
        raise KeyError(f"unknown suite {name!r}")
    if isinstance(fixture, (str, Path)):
        fixture = json.loads(Path(fixture).read_text())
    start = time.perf_counter()
    rep = _SUITES[name](bounds or DEFAULT_BOUNDS, fixture)
    rep.suite = name
    rep.ms = (time.perf_counter() - start) * 1000.0
    return rep
