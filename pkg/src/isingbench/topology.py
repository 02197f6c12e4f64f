"""Qubit-connectivity graph generators (Chimera, Pegasus, Zephyr) and loaders.

The generators follow the vendor's published coordinate schemes.  All
node ids are contiguous ``0..N-1``, assigned in lexicographic coordinate
order, so identical parameters always produce identical graphs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

MAX_NODES = 10_000_000

# Pegasus shift offsets (standard device offsets, index 0).
_PEG_OFF = (
    (2, 2, 2, 2, 6, 6, 6, 6, 10, 10, 10, 10),  # vertical qubits
    (6, 6, 6, 6, 10, 10, 10, 10, 2, 2, 2, 2),  # horizontal qubits
)


class GraphSizeError(ValueError):
    """Requested topology exceeds the configured size cap."""


class EdgeListParseError(ValueError):
    """Malformed edge-list input; message carries the line number."""


@dataclass(frozen=True)
class HardwareGraph:
    """Undirected qubit-connectivity graph.

    edges are unordered pairs stored once as ``(i, j)`` with ``i < j``.
    """

    family: str
    params: dict
    num_nodes: int
    edges: tuple
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop edge ({i}, {j})")
            if not (0 <= i < self.num_nodes and 0 <= j < self.num_nodes):
                raise ValueError(f"edge ({i}, {j}) endpoint outside 0..{self.num_nodes - 1}")
            if i > j:
                raise ValueError(f"edge ({i}, {j}) not stored in canonical (low, high) order")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))

    @property
    def nodes(self) -> range:
        return range(self.num_nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.num_nodes
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


def _check_size(count: int) -> None:
    if count > MAX_NODES:
        raise GraphSizeError(f"graph would have {count} nodes (cap {MAX_NODES})")


def _canonical(edges) -> tuple:
    return tuple(sorted((i, j) if i < j else (j, i) for i, j in edges))


def build_chimera(m: int, n: int, t: int) -> HardwareGraph:
    """Chimera C(m, n, t): an m x n grid of K_{t,t} cells.

    Internal couplers form the bipartite cell; external couplers join
    same-orientation qubits of adjacent cells in the same row/column.
    Interior qubits have degree t + 2 (six for the standard t=4).
    """
    if m < 1 or n < 1 or t < 1:
        raise ValueError("chimera parameters must be >= 1")
    _check_size(2 * t * m * n)

    def nid(i, j, u, k):
        return ((i * n + j) * 2 + u) * t + k

    edges = []
    for i in range(m):
        for j in range(n):
            for k0 in range(t):
                for k1 in range(t):
                    edges.append((nid(i, j, 0, k0), nid(i, j, 1, k1)))
            for k in range(t):
                if i + 1 < m:
                    edges.append((nid(i, j, 0, k), nid(i + 1, j, 0, k)))
                if j + 1 < n:
                    edges.append((nid(i, j, 1, k), nid(i, j + 1, 1, k)))
    return HardwareGraph(
        family="chimera",
        params={"m": m, "n": n, "t": t},
        num_nodes=2 * t * m * n,
        edges=_canonical(edges),
    )


def _pegasus_internal_neighbors(m, u, w, k, z):
    """Internal (orthogonal) couplers of one Pegasus qubit.

    A qubit is a length-12 wire: the vertical qubit (0, w, k, z) sits at
    x = 12w + k and spans y in [12z + off, 12z + off + 12).  Two orthogonal
    qubits are coupled iff their wires cross.
    """
    off_self = _PEG_OFF[u][k]
    off_other = _PEG_OFF[1 - u]
    x = 12 * w + k
    span = 12 * z + off_self
    out = []
    for pos in range(span, span + 12):
        w2, k2 = divmod(pos, 12)
        if not 0 <= w2 < m:
            continue
        z2, rem = divmod(x - off_other[k2], 12)
        if 0 <= z2 <= m - 2:
            out.append((1 - u, w2, k2, z2))
    return out


def build_pegasus(m: int) -> HardwareGraph:
    """Pegasus P(m) under the standard coordinate adjacency.

    Follows the vendor fabric convention: the 8(m-1) boundary qubits that
    would carry no internal couplers are dropped, giving 5640 nodes for
    P(16).  Interior qubits have degree 15 (12 internal + 2 external + 1 odd).
    """
    if m < 2:
        raise ValueError("pegasus size parameter must be >= 2")
    _check_size(24 * m * (m - 1))

    coords = [
        (u, w, k, z)
        for u in range(2)
        for w in range(m)
        for k in range(12)
        for z in range(m - 1)
    ]
    internal = {}
    for c in coords:
        internal[c] = _pegasus_internal_neighbors(m, *c)

    kept = sorted(c for c in coords if internal[c])
    nid = {c: i for i, c in enumerate(kept)}

    edges = set()
    for c in kept:
        u, w, k, z = c
        for c2 in internal[c]:
            if c2 in nid:
                edges.add((c, c2) if c < c2 else (c2, c))
        if z + 1 <= m - 2 and (u, w, k, z + 1) in nid:  # external
            edges.add((c, (u, w, k, z + 1)))
        if k % 2 == 0 and (u, w, k + 1, z) in nid:  # odd
            edges.add((c, (u, w, k + 1, z)))

    return HardwareGraph(
        family="pegasus",
        params={"m": m},
        num_nodes=len(kept),
        edges=_canonical((nid[a], nid[b]) for a, b in edges),
    )


def build_zephyr(m: int, t: int = 4) -> HardwareGraph:
    """Zephyr Z(m, t) under the standard coordinate adjacency.

    Coordinates (u, w, k, j, z): orientation u, orthogonal offsets (w, k),
    parallel offsets (j, z).  Collinear wires overlap in a staggered
    pattern: "odd" couplers join overlapping neighbours, "external"
    couplers join abutting ones.  Interior qubits have degree 4t + 4
    (twenty for the standard t=4).
    """
    if m < 1 or t < 1:
        raise ValueError("zephyr parameters must be >= 1")
    _check_size(4 * t * m * (2 * m + 1))

    def nid(u, w, k, j, z):
        return (((u * (2 * m + 1) + w) * t + k) * 2 + j) * m + z

    edges = []
    for u in range(2):
        for w in range(2 * m + 1):
            for k in range(t):
                for j in range(2):
                    for z in range(m):
                        me = nid(u, w, k, j, z)
                        if z + 1 < m:  # external: wires abut end to end
                            edges.append((me, nid(u, w, k, j, z + 1)))
                        if j == 0:  # odd: overlapping staggered pair
                            edges.append((me, nid(u, w, k, 1, z)))
                        elif z + 1 < m:
                            edges.append((me, nid(u, w, k, 0, z + 1)))
    # internal: vertical (0,w,k,j,z) crosses horizontal rows w' = 2z+j, 2z+j+1
    # and is covered by horizontal wires with parallel position 2z'+j' in
    # {w-1, w}; k' is free.
    for w in range(2 * m + 1):
        for k in range(t):
            for j in range(2):
                for z in range(m):
                    me = nid(0, w, k, j, z)
                    for w2 in (2 * z + j, 2 * z + j + 1):
                        for p2 in (w - 1, w):
                            if not 0 <= p2 <= 2 * m - 1:
                                continue
                            z2, j2 = divmod(p2, 2)
                            for k2 in range(t):
                                edges.append((me, nid(1, w2, k2, j2, z2)))
    return HardwareGraph(
        family="zephyr",
        params={"m": m, "t": t},
        num_nodes=4 * t * m * (2 * m + 1),
        edges=_canonical(edges),
    )


def load_graph(source: str) -> HardwareGraph:
    """Parse an edge-list text into a custom-family graph.

    One edge per line as two whitespace-separated non-negative integers; a
    single integer declares an isolated node; lines starting with '#' are
    ignored.  Node ids are relabelled to contiguous 0..N-1 in ascending
    order of the original ids (kept in ``info["original_ids"]``).
    Duplicate edges are dropped with a warning.
    """
    declared: set[int] = set()
    raw_edges: list[tuple[int, int]] = []
    duplicates = 0
    seen = set()
    for lineno, line in enumerate(source.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) not in (1, 2):
            raise EdgeListParseError(f"line {lineno}: expected 1 or 2 fields, got {len(fields)}")
        try:
            ids = [int(f) for f in fields]
        except ValueError:
            raise EdgeListParseError(f"line {lineno}: non-integer field") from None
        if any(i < 0 for i in ids):
            raise EdgeListParseError(f"line {lineno}: negative node id")
        if len(ids) == 1:
            declared.add(ids[0])
            continue
        a, b = ids
        if a == b:
            raise EdgeListParseError(f"line {lineno}: self-loop edge {a} {b}")
        declared.update(ids)
        key = (min(a, b), max(a, b))
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        raw_edges.append(key)

    if duplicates:
        warnings.warn(f"ignored {duplicates} duplicate edge(s)", stacklevel=2)
    original = sorted(declared)
    relabel = {orig: i for i, orig in enumerate(original)}
    return HardwareGraph(
        family="custom",
        params={},
        num_nodes=len(original),
        edges=_canonical((relabel[a], relabel[b]) for a, b in raw_edges),
        info={"original_ids": original, "duplicate_edges": duplicates},
    )
