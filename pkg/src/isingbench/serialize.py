"""JSON serialisation of instances and sample sets.

Formats are self-describing ("ising-v1", "qubo-v1", "samples-v1") and
round-trip exactly: floats are written with Python's shortest repr, which
decodes to the identical double.  Files deliberately carry no timestamp
so reruns are byte-identical; provenance (tool version, command line,
seed) is embedded instead.
"""

from __future__ import annotations

import json

import numpy as np

from .model import IsingModel, Qubo, SampleRecord, SampleSet
from .topology import HardwareGraph


class FormatError(ValueError):
    """Input JSON does not match the expected schema."""


def _graph_to_obj(graph: HardwareGraph) -> dict:
    return {
        "family": graph.family,
        "params": dict(graph.params),
        "nodes": list(graph.nodes),
        "edges": [list(e) for e in graph.edges],
    }


def _graph_from_obj(obj: dict) -> HardwareGraph:
    nodes = obj["nodes"]
    if nodes != list(range(len(nodes))):
        raise FormatError("graph nodes must be contiguous 0..N-1")
    return HardwareGraph(
        family=obj["family"],
        params=dict(obj.get("params", {})),
        num_nodes=len(nodes),
        edges=tuple(sorted((min(i, j), max(i, j)) for i, j in obj["edges"])),
    )


def instance_to_json(model: IsingModel, provenance: dict | None = None) -> str:
    obj = {
        "format": "ising-v1",
        "graph": _graph_to_obj(model.graph),
        "h": {str(i): v for i, v in sorted(model.h.items())},
        "J": [[i, j, v] for (i, j), v in sorted(model.J.items())],
        "h_range": list(model.h_range),
        "J_range": list(model.J_range),
        "seed": model.info.get("seed"),
    }
    if provenance:
        obj["provenance"] = provenance
    return json.dumps(obj, indent=1) + "\n"


def instance_from_json(text: str) -> IsingModel:
    obj = json.loads(text)
    if obj.get("format") != "ising-v1":
        raise FormatError(f"expected format ising-v1, got {obj.get('format')!r}")
    info = {}
    if obj.get("seed") is not None:
        info["seed"] = obj["seed"]
    return IsingModel(
        graph=_graph_from_obj(obj["graph"]),
        h={int(k): float(v) for k, v in obj["h"].items()},
        J={(int(i), int(j)): float(v) for i, j, v in obj["J"]},
        h_range=tuple(obj["h_range"]),
        J_range=tuple(obj["J_range"]),
        info=info,
    )


def qubo_to_json(qubo: Qubo, provenance: dict | None = None) -> str:
    obj = {
        "format": "qubo-v1",
        "n": qubo.n,
        "linear": {str(i): v for i, v in sorted(qubo.linear.items())},
        "quadratic": [[i, j, v] for (i, j), v in sorted(qubo.quadratic.items())],
        "offset": qubo.offset,
    }
    if provenance:
        obj["provenance"] = provenance
    return json.dumps(obj, indent=1) + "\n"


def qubo_from_json(text: str) -> Qubo:
    obj = json.loads(text)
    if obj.get("format") != "qubo-v1":
        raise FormatError(f"expected format qubo-v1, got {obj.get('format')!r}")
    return Qubo(
        n=int(obj["n"]),
        linear={int(k): float(v) for k, v in obj["linear"].items()},
        quadratic={(int(i), int(j)): float(v) for i, j, v in obj["quadratic"]},
        offset=float(obj["offset"]),
    )


def sample_set_to_json(samples: SampleSet, provenance: dict | None = None) -> str:
    obj = {
        "format": "samples-v1",
        "solver": samples.solver_name,
        "params": samples.solver_params,
        "seed": samples.seed,
        "records": [
            {"state": [int(v) for v in r.state], "energy": r.energy, "count": r.count}
            for r in samples.records
        ],
    }
    if provenance:
        obj["provenance"] = provenance
    return json.dumps(obj, indent=1) + "\n"


def sample_set_from_json(text: str) -> SampleSet:
    obj = json.loads(text)
    if obj.get("format") != "samples-v1":
        raise FormatError(f"expected format samples-v1, got {obj.get('format')!r}")
    records = [
        SampleRecord(
            state=np.asarray(r["state"], dtype=np.int8),
            energy=float(r["energy"]),
            count=int(r.get("count", 1)),
        )
        for r in obj["records"]
    ]
    return SampleSet(
        records=records,
        solver_name=obj.get("solver", "unknown"),
        solver_params=dict(obj.get("params", {})),
        seed=int(obj.get("seed", 0)),
    )
