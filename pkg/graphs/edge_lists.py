"""
Reading and writing graphs as whitespace-separated edge lists.

Format (UTF-8): one arc per line as "src dst [weight]"; the weight defaults to 1.0; blank lines
and lines starting with '#' are ignored. Undirected files may list an edge once or in both
orientations.
"""

import io
import logging
import math

from median_gnn.exceptions import GraphParseError, GraphValidationError
from median_gnn.files import atomic_write
from .structures import Graph

logger = logging.getLogger(__name__)


def _parse_node(token, line_number):
    try:
        node = int(token)
    except ValueError:
        raise GraphParseError(line_number, f"node id {token!r} is not an integer") from None
    if node < 0:
        raise GraphValidationError(f"line {line_number}: negative node id {node}")
    return node


def load_edge_list(source, directed=False, n_nodes=None) -> Graph:
    """
    Parses an edge list from a byte stream.

    The node count is one more than the largest node id seen, raised to n_nodes or to the count
    of a "# nodes N" comment when those are larger (trailing isolated nodes leave no other trace
    in an edge list). Self-loops are dropped with a warning, since a node always belongs to its
    own neighborhoods.

    Args:
        source (BinaryIO | bytes): The edge-list bytes or a binary stream.
        directed (bool): Whether arcs are directed.
        n_nodes (int | None): Minimum node count.

    Returns:
        Graph: The parsed graph.

    Raises:
        GraphParseError: If a line is malformed, not UTF-8 or has a non-finite weight (carries
            the line number).
        GraphValidationError: If a node id is negative or an edge is listed with two weights.
    """
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)

    edges = []
    max_node = -1
    declared = 0
    for line_number, raw in enumerate(source, start=1):
        try:
            stripped = raw.decode("utf-8").strip()
        except UnicodeDecodeError as error:
            raise GraphParseError(line_number, f"not valid UTF-8 ({error.reason})") from None
        if stripped.startswith("#"):
            fields = stripped[1:].split()
            if len(fields) >= 2 and fields[0] == "nodes" and fields[1].isdigit():
                declared = int(fields[1])
            continue
        if not stripped:
            continue
        tokens = stripped.split()
        if len(tokens) not in (2, 3):
            raise GraphParseError(
                line_number, f"expected 'src dst [weight]', got {len(tokens)} fields"
            )
        src = _parse_node(tokens[0], line_number)
        dst = _parse_node(tokens[1], line_number)
        weight = 1.0
        if len(tokens) == 3:
            try:
                weight = float(tokens[2])
            except ValueError:
                raise GraphParseError(
                    line_number, f"weight {tokens[2]!r} is not a number"
                ) from None
            if not math.isfinite(weight):
                raise GraphParseError(line_number, f"weight {tokens[2]!r} is not finite")
        max_node = max(max_node, src, dst)
        if src == dst:
            logger.warning("line %d: dropping self-loop on node %d", line_number, src)
            continue
        edges.append((src, dst, weight))

    graph = Graph.from_edges(
        max(max_node + 1, n_nodes or 0, declared), edges, directed=directed
    )
    logger.debug(
        "loaded %s graph with %d nodes and %d arcs",
        "directed" if directed else "undirected",
        graph.n_nodes,
        graph.n_arcs,
    )
    return graph


def read_edge_list(path, directed=False, n_nodes=None) -> Graph:
    """Opens an edge-list file and parses it with `load_edge_list()`."""
    with open(path, "rb") as stream:
        return load_edge_list(stream, directed=directed, n_nodes=n_nodes)


def format_edge_list(g) -> str:
    """
    Serializes a graph as edge-list text.

    Undirected edges are written once (src < dst); weights use the shortest decimal text that
    reads back to the same float.

    Args:
        g (Graph): The graph.

    Returns:
        str: The edge-list text, LF line endings.
    """
    lines = [
        f"# nodes {g.n_nodes} {'directed' if g.directed else 'undirected'}",
    ]
    for src, dst, weight in g.edges:
        if not g.directed and src > dst:
            continue
        lines.append(f"{src} {dst} {weight!r}")
    return "\n".join(lines) + "\n"


def write_edge_list(g, path):
    """Writes `format_edge_list()` atomically to path and returns the path."""
    written = atomic_write(path, format_edge_list(g))
    logger.info("wrote %d-node edge list to %s", g.n_nodes, written)
    return written
