"""JSON encoding of cells, collections and interleaving states.

Cell values are tagged: {"unit": k}, {"node": {...}}, {"ctr": {...}} and
{"atom": v}.  Where a cell is listed as a term of the free operad structure,
a bare generator is wrapped as {"gen": <cell>}; the wrapper is accepted
anywhere on decode.  In-table references are indices into the per-dimension
cell lists, and all output is canonical single-line JSON.
"""

from __future__ import annotations

from dataclasses import dataclass

from .collection import Bounds, Collection, Overflow, make_collection
from .contraction import ContractionStructure, CtrCell
from .interleave import OwcState, Provenance
from .operad import NodeTerm, OperadStructure, UnitTerm, mult_table, state_operad, term_mult
from .pasting import LabelledDiagram, all_cells, tree_from_json, tree_to_json
from .util import canonical_json


def _atom_to_json(v):
    if isinstance(v, tuple):
        return [_atom_to_json(x) for x in v]
    if isinstance(v, (str, int)):
        return v
    raise TypeError(f"cannot encode atom {v!r}")


def _atom_from_json(v):
    if isinstance(v, list):
        return tuple(_atom_from_json(x) for x in v)
    return v


def cell_to_json(c) -> dict:
    if isinstance(c, UnitTerm):
        return {"unit": c.dim}
    if isinstance(c, NodeTerm):
        return {
            "node": {
                "dim": c.dim,
                "gen": cell_to_json(c.gen),
                "labels": [cell_to_json(l) for l in c.labels],
            }
        }
    if isinstance(c, CtrCell):
        # degenerate arity trees do not determine their dimension, so it is
        # stored explicitly
        return {
            "ctr": {
                "dim": c.theta.dim,
                "a": cell_to_json(c.a),
                "b": cell_to_json(c.b),
                "theta": tree_to_json(c.theta),
            }
        }
    return {"atom": _atom_to_json(c)}


def cell_from_json(data, dim: int):
    if "gen" in data:
        return cell_from_json(data["gen"], dim)
    if "unit" in data:
        return UnitTerm(int(data["unit"]))
    if "node" in data:
        node = data["node"]
        d = int(node["dim"])
        labels = tuple(cell_from_json(l, -1) for l in node["labels"])
        return NodeTerm(d, cell_from_json(node["gen"], d), labels)
    if "ctr" in data:
        ctr = data["ctr"]
        d = int(ctr.get("dim", dim if dim >= 1 else _depth(ctr["theta"])))
        theta = tree_from_json(ctr["theta"], d)
        return CtrCell(
            cell_from_json(ctr["a"], d - 1),
            cell_from_json(ctr["b"], d - 1),
            theta,
        )
    if "atom" in data:
        return _atom_from_json(data["atom"])
    raise ValueError(f"unrecognized cell encoding: {data!r}")


def _depth(data) -> int:
    if not data:
        return 1
    return 1 + max(_depth(c) for c in data)


def _term_json(c, is_term_dim: bool) -> dict:
    enc = cell_to_json(c)
    if is_term_dim and not isinstance(c, (UnitTerm, NodeTerm)):
        return {"gen": enc}
    return enc


# ---------------------------------------------------------------------------
# globular sets


def globset_to_json(g) -> dict:
    index = [{c: i for i, c in enumerate(g.cells_at(k))} for k in range(g.max_dim + 1)]
    return {
        "dims": g.max_dim,
        "cells": [[_atom_to_json(c) for c in g.cells_at(k)] for k in range(g.max_dim + 1)],
        "src": [
            [index[k - 1][g.src_of(k, c)] for c in g.cells_at(k)]
            for k in range(1, g.max_dim + 1)
        ],
        "tgt": [
            [index[k - 1][g.tgt_of(k, c)] for c in g.cells_at(k)]
            for k in range(1, g.max_dim + 1)
        ],
    }


def globset_from_json(data: dict):
    from .globset import glob_set

    cells = [[_atom_from_json(c) for c in layer] for layer in data["cells"]]
    dims = len(cells)
    src = [{} for _ in range(dims)]
    tgt = [{} for _ in range(dims)]
    for k in range(1, dims):
        for i, c in enumerate(cells[k]):
            src[k][c] = cells[k - 1][data["src"][k - 1][i]]
            tgt[k][c] = cells[k - 1][data["tgt"][k - 1][i]]
    return glob_set(cells, src, tgt)


# ---------------------------------------------------------------------------
# states


@dataclass
class DecodedState:
    state: OwcState
    mult_entries: dict  # (dim, op, labels) -> result, as serialized


def state_to_json(s: OwcState) -> dict:
    coll = s.collection
    index = [
        {c: i for i, c in enumerate(coll.cells_at(k))} for k in range(coll.max_dim + 1)
    ]
    cells = []
    for k in range(coll.max_dim + 1):
        layer = []
        for c in coll.cells_at(k):
            prov = s.provenance.get((k, c), Provenance("input"))
            layer.append(
                {
                    "cell": _term_json(c, k <= s.operad.up_to_dim),
                    "provenance": prov.to_json(),
                }
            )
        cells.append(layer)
    src = [
        [index[k - 1][coll.src_of(k, c)] for c in coll.cells_at(k)]
        for k in range(1, coll.max_dim + 1)
    ]
    tgt = [
        [index[k - 1][coll.tgt_of(k, c)] for c in coll.cells_at(k)]
        for k in range(1, coll.max_dim + 1)
    ]
    arity = [
        [tree_to_json(coll.arity_of(k, c)) for c in coll.cells_at(k)]
        for k in range(coll.max_dim + 1)
    ]
    mult = []
    for (d, a, labels), r in mult_table(s.operad, s.bounds).items():
        if not coll.has_cell(d, r):
            continue
        shape = coll.arity_of(d, a)
        from .pasting import all_cells

        mult.append(
            {
                "dim": d,
                "op": index[d][a],
                "labels": [
                    [x.dim, index[x.dim][lab]]
                    for x, lab in zip(all_cells(shape), labels)
                ],
                "result": index[d][r],
            }
        )
    gamma = [
        {
            "dim": theta.dim,
            "a": index[theta.dim - 1][a],
            "b": index[theta.dim - 1][b],
            "theta": tree_to_json(theta),
            "cell": index[theta.dim][lift],
        }
        for (a, b, theta), lift in sorted(
            s.contraction.gamma.items(),
            key=lambda kv: (
                kv[0][2].dim,
                index[kv[0][2].dim - 1][kv[0][0]],
                index[kv[0][2].dim - 1][kv[0][1]],
                tree_to_json(kv[0][2]),
            ),
        )
    ]
    return {
        "stage": list(s.stage),
        "bounds": {
            "max_dim": s.bounds.max_dim,
            "max_arity_size": s.bounds.max_arity_size,
            "max_term_size": s.bounds.max_term_size,
        },
        "cells": cells,
        "src": src,
        "tgt": tgt,
        "arity": arity,
        "mult": mult,
        "gamma": gamma,
        "overflows": [
            {
                "step": o.step,
                "dim": o.dim,
                "reason": o.reason,
                "count": o.count,
                "sample": list(o.sample),
            }
            for o in s.overflows
        ],
    }


def state_text(s: OwcState) -> str:
    return canonical_json(state_to_json(s)) + "\n"


def state_from_json(data: dict) -> DecodedState:
    bounds = Bounds(**data["bounds"])
    stage = tuple(data["stage"])
    cells_by_dim = []
    provenance = {}
    for k, layer in enumerate(data["cells"]):
        decoded = []
        for entry in layer:
            c = cell_from_json(entry["cell"], k)
            decoded.append(c)
            p = entry.get("provenance", {})
            provenance[(k, c)] = Provenance(p.get("step", "input"), p.get("stratum"))
        cells_by_dim.append(tuple(decoded))
    max_dim = len(cells_by_dim) - 1
    src = [{} for _ in range(max_dim + 1)]
    tgt = [{} for _ in range(max_dim + 1)]
    for k in range(1, max_dim + 1):
        for i, c in enumerate(cells_by_dim[k]):
            src[k][c] = cells_by_dim[k - 1][data["src"][k - 1][i]]
            tgt[k][c] = cells_by_dim[k - 1][data["tgt"][k - 1][i]]
    arity = [
        {
            c: tree_from_json(data["arity"][k][i], k)
            for i, c in enumerate(cells_by_dim[k])
        }
        for k in range(max_dim + 1)
    ]
    coll = make_collection(cells_by_dim, src, tgt, arity)
    operad = state_operad(coll, stage[1])
    gamma = {}
    for entry in data["gamma"]:
        k = entry["dim"]
        gamma[
            (
                cells_by_dim[k - 1][entry["a"]],
                cells_by_dim[k - 1][entry["b"]],
                tree_from_json(entry["theta"], k),
            )
        ] = cells_by_dim[k][entry["cell"]]
    contraction = ContractionStructure(coll, stage[0], gamma)
    mult_entries = {}
    for entry in data["mult"]:
        d = entry["dim"]
        labels = tuple(cells_by_dim[j][i] for j, i in entry["labels"])
        mult_entries[(d, cells_by_dim[d][entry["op"]], labels)] = cells_by_dim[d][
            entry["result"]
        ]
    overflows = tuple(
        Overflow(o["step"], o["dim"], o["reason"], o["count"], tuple(o["sample"]))
        for o in data.get("overflows", [])
    )
    state = OwcState(
        collection=coll,
        operad=operad,
        contraction=contraction,
        stage=stage,
        bounds=bounds,
        provenance=provenance,
        overflows=overflows,
    )
    return DecodedState(state, mult_entries)


def table_backed_operad(decoded: DecodedState) -> OperadStructure:
    """Operad view of a decoded state whose multiplication consults the
    serialized table first; structural grafting is the fallback for entries
    the table never materialized."""
    state = decoded.state
    op = OperadStructure(
        state.collection, state.stage[1], dict(state.operad.units), None
    )

    def mult_fn(d, a, phi: LabelledDiagram):
        key = (d, a, phi.labels)
        if key in decoded.mult_entries:
            return decoded.mult_entries[key]
        return term_mult(op, d, a, phi)

    op.mult_fn = mult_fn
    return op


def slice_of_data(data: dict, k: int) -> dict:
    """The dimension-k part of a serialized state."""
    max_dim = len(data["cells"]) - 1
    return {
        "cells": data["cells"][k] if k <= max_dim else [],
        "src": data["src"][k - 1] if 1 <= k <= max_dim else [],
        "tgt": data["tgt"][k - 1] if 1 <= k <= max_dim else [],
        "arity": data["arity"][k] if k <= max_dim else [],
        "mult": [e for e in data["mult"] if e["dim"] == k],
        "gamma": [e for e in data["gamma"] if e["dim"] == k],
    }


def slice_json(s: OwcState, k: int) -> dict:
    """The dimension-k part of a state, for stability comparisons."""
    return slice_of_data(state_to_json(s), k)
