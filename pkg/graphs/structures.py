"""
This module contains the immutable graph types shared by every other app.

The included types are:
    - Graph: node count plus a directed, weighted arc list
    - ShiftMatrix: a dense n x n graph shift operator
    - NeighborhoodTable: extended hop neighborhoods of every node, precomputed once per graph

"""

from dataclasses import dataclass, field

import numpy as np

from median_gnn.exceptions import GraphValidationError, ShapeError


@dataclass(frozen=True)
class Graph:
    """
    A graph G = (V, E, W) with nodes 0..n_nodes-1.

    Attributes:
        n_nodes (int): Number of nodes.
        edges (tuple[tuple[int, int, float], ...]): Arcs (src, dst, weight), sorted by (src, dst).
            Undirected graphs store both orientations of every edge.
        directed (bool): Whether the arc list is read as directed.

    Methods:
        `from_edges()`: Builds a graph, closing undirected edge lists under symmetry.
        `degrees()`: Degree of each node (in-degree + out-degree for directed graphs).
        `permuted()`: The same graph with its nodes relabeled.
    """

    n_nodes: int
    edges: tuple
    directed: bool = False

    def __post_init__(self):
        if self.n_nodes < 0:
            raise GraphValidationError(f"negative node count {self.n_nodes}")
        seen = {}
        for src, dst, weight in self.edges:
            if not (0 <= src < self.n_nodes and 0 <= dst < self.n_nodes):
                raise GraphValidationError(
                    f"arc ({src}, {dst}) references a node outside 0..{self.n_nodes - 1}"
                )
            if src == dst:
                raise GraphValidationError(f"self-loop on node {src}")
            if (src, dst) in seen:
                raise GraphValidationError(f"duplicate arc ({src}, {dst})")
            seen[(src, dst)] = weight
        if not self.directed:
            for (src, dst), weight in seen.items():
                if seen.get((dst, src)) != weight:
                    raise GraphValidationError(
                        f"undirected edge ({src}, {dst}) is missing its reverse arc"
                    )

    @classmethod
    def from_edges(cls, n_nodes, edges, directed=False):
        """
        Builds a graph from (src, dst, weight) triplets.

        For undirected graphs every edge is stored in both orientations; listing both orientations
        with the same weight is accepted.

        Args:
            n_nodes (int): Number of nodes.
            edges (Iterable[tuple[int, int, float]]): The arcs.
            directed (bool): Whether the arcs are directed.

        Returns:
            Graph: The validated graph.
        """
        arcs = {}
        for src, dst, weight in edges:
            src, dst, weight = int(src), int(dst), float(weight)
            pairs = [(src, dst)] if directed else [(src, dst), (dst, src)]
            for pair in pairs:
                if pair in arcs and arcs[pair] != weight:
                    raise GraphValidationError(
                        f"conflicting weights for arc {pair}: {arcs[pair]!r} and {weight!r}"
                    )
                arcs[pair] = weight
        ordered = tuple((src, dst, weight) for (src, dst), weight in sorted(arcs.items()))
        return cls(n_nodes=n_nodes, edges=ordered, directed=directed)

    @property
    def n_arcs(self) -> int:
        """Number of stored arcs (twice the edge count for undirected graphs)."""
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        """
        Counts the degree of every node.

        Undirected graphs store each edge twice, so the out-degree is the degree. Directed graphs
        add in-degree and out-degree.

        Returns:
            np.ndarray: Integer degrees of shape (n_nodes,).
        """
        degree = np.zeros(self.n_nodes, dtype=np.int64)
        for src, dst, _ in self.edges:
            degree[src] += 1
            if self.directed:
                degree[dst] += 1
        return degree

    def permuted(self, permutation):
        """
        Relabels the nodes: node i becomes node permutation[i].

        Args:
            permutation (Sequence[int]): A permutation of 0..n_nodes-1.

        Returns:
            Graph: The relabeled graph.
        """
        permutation = np.asarray(permutation, dtype=np.int64)
        if sorted(permutation.tolist()) != list(range(self.n_nodes)):
            raise GraphValidationError("relabeling is not a permutation of the node ids")
        return Graph.from_edges(
            self.n_nodes,
            [(permutation[src], permutation[dst], weight) for src, dst, weight in self.edges],
            directed=self.directed,
        )


@dataclass(frozen=True)
class ShiftMatrix:
    """
    A dense graph shift operator.

    Attributes:
        entries (np.ndarray): Read-only float64 matrix of shape (n, n).
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ShapeError(f"shift matrix must be square, got shape {entries.shape}")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        """Number of nodes the operator acts on."""
        return self.entries.shape[0]

    def scaled(self, factor):
        """Returns the operator multiplied by a scalar."""
        return ShiftMatrix(self.entries * factor)

    def transposed(self):
        """Returns the operator with every arc reversed."""
        return ShiftMatrix(self.entries.T)


@dataclass(frozen=True)
class NeighborhoodTable:
    """
    Extended r-hop neighborhoods of every node for r = 0..max_hop.

    Attributes:
        max_hop (int): Largest hop radius R stored.
        members (tuple): members[i][r] is the sorted int array of the extended r-hop
            neighborhood of node i.
        sizes (np.ndarray): Neighborhood sizes N_i^r, shape (n_nodes, max_hop + 1).
        gather_groups (tuple): For every hop r, a tuple of (nodes, member_matrix) pairs that
            groups nodes sharing a neighborhood size m; member_matrix has shape (len(nodes), m).
            The median activations gather one group at a time.
    """

    max_hop: int
    members: tuple
    sizes: np.ndarray = field(repr=False)
    gather_groups: tuple = field(repr=False)

    @property
    def n_nodes(self) -> int:
        """Number of nodes covered by the table."""
        return len(self.members)

    @classmethod
    def from_members(cls, members, max_hop):
        """
        Builds the table, its size matrix and its gather groups from per-node member arrays.

        Args:
            members (Sequence[Sequence[np.ndarray]]): members[i][r], sorted node ids.
            max_hop (int): Largest hop radius.

        Returns:
            NeighborhoodTable: The frozen table.
        """
        frozen_members = []
        for rows in members:
            frozen_rows = []
            for ids in rows:
                ids = np.asarray(ids, dtype=np.intp)
                ids.flags.writeable = False
                frozen_rows.append(ids)
            frozen_members.append(tuple(frozen_rows))
        sizes = np.array(
            [[len(ids) for ids in rows] for rows in frozen_members], dtype=np.int64
        ).reshape(len(frozen_members), max_hop + 1)
        sizes.flags.writeable = False

        gather_groups = []
        for hop in range(max_hop + 1):
            groups = []
            for size in np.unique(sizes[:, hop]):
                nodes = np.flatnonzero(sizes[:, hop] == size)
                matrix = np.stack([frozen_members[node][hop] for node in nodes])
                nodes.flags.writeable = False
                matrix.flags.writeable = False
                groups.append((nodes, matrix))
            gather_groups.append(tuple(groups))

        return cls(
            max_hop=max_hop,
            members=tuple(frozen_members),
            sizes=sizes,
            gather_groups=tuple(gather_groups),
        )
