import logging
from itertools import combinations
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, TextIO, Tuple, Union

import networkx as nx
import numpy as np

logger = logging.getLogger(__name__)

Number = Union[int, float]
Pair = Tuple[int, int]

PULLAN_MODULUS = 200


def _as_number(value) -> Number:
    """Return `value` as an int when it is integral, as a float otherwise."""
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"Non finite value {value}")
    return int(value) if value.is_integer() else value


def _canonical_pair(i: int, j: int) -> Pair:
    return (i, j) if i < j else (j, i)


def _read_text(text: Union[str, TextIO]) -> str:
    if hasattr(text, "read"):
        return text.read()
    return text


class WeightedGraph:
    """Sparse simple undirected graph with edge weights and node weights.

    Nodes are identified by 1..n. Each edge is stored once as (i, j) with i < j.
    Node weights default to 1. Instances are immutable: methods that change
    weights return a new graph.

    Args:
        n (int): Number of nodes (positive).
        edges (Union[Mapping[Pair, Number], Iterable[Tuple[int, int, Number]]]): Edge weights, either as a {(i, j): w} mapping or as (i, j, w) triples.
        node_weights (Mapping[int, Number], optional): Node weights q_i. Missing nodes get weight 1. Defaults to None.

    Raises:
        ValueError: If an edge is a self-loop, an endpoint is outside 1..n, an edge is given twice or a node weight is negative.

    Example:

    >>> from kplexpart.graph import WeightedGraph
    >>> g = WeightedGraph(3, [(1, 2, 5), (2, 3, -1)])
    >>> g.m, g.weight(2, 1)
    (2, 5)
    """

    def __init__(
        self,
        n: int,
        edges: Union[Mapping[Pair, Number], Iterable[Tuple[int, int, Number]]] = (),
        node_weights: Mapping[int, Number] = None,
    ) -> None:
        if int(n) != n or n < 1:
            raise ValueError(f"Number of nodes must be a positive integer, got {n}")
        self._n = int(n)

        if isinstance(edges, Mapping):
            items = [(i, j, w) for (i, j), w in edges.items()]
        else:
            items = list(edges)

        weights: Dict[Pair, Number] = {}
        for i, j, w in items:
            i, j = int(i), int(j)
            self._check_node(i)
            self._check_node(j)
            if i == j:
                raise ValueError(f"Self-loop on node {i} is not allowed")
            pair = _canonical_pair(i, j)
            if pair in weights:
                raise ValueError(f"Edge {pair} given more than once")
            weights[pair] = _as_number(w)
        self._weights = dict(sorted(weights.items()))

        adjacency = [set() for _ in range(self._n + 1)]
        for i, j in self._weights:
            adjacency[i].add(j)
            adjacency[j].add(i)
        self._adjacency = tuple(frozenset(a) for a in adjacency)

        q = [1] * self._n
        if node_weights is not None:
            for i, value in node_weights.items():
                self._check_node(int(i))
                value = _as_number(value)
                if value < 0:
                    raise ValueError(f"Node weight of node {i} is negative ({value})")
                q[int(i) - 1] = value
        self._node_weights = tuple(q)

    def _check_node(self, i: int) -> None:
        if not 1 <= i <= self._n:
            raise ValueError(f"Node {i} outside the range 1..{self._n}")

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self._n}, m={self.m})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self._n == other._n
            and self._weights == other._weights
            and self._node_weights == other._node_weights
        )

    def __hash__(self) -> int:
        return hash((self._n, tuple(self._weights.items()), self._node_weights))

    @property
    def n(self) -> int:
        """Number of nodes"""
        return self._n

    @property
    def m(self) -> int:
        """Number of edges"""
        return len(self._weights)

    @property
    def nodes(self) -> range:
        return range(1, self._n + 1)

    @property
    def edges(self) -> List[Pair]:
        """Edges (i, j), i < j, in lexicographic order"""
        return list(self._weights)

    @property
    def edge_weights(self) -> Dict[Pair, Number]:
        return dict(self._weights)

    @property
    def node_weights(self) -> Tuple[Number, ...]:
        """Node weights q_1..q_n (index 0 holds q_1)"""
        return self._node_weights

    def q(self, i: int) -> Number:
        return self._node_weights[i - 1]

    def has_edge(self, i: int, j: int) -> bool:
        return _canonical_pair(i, j) in self._weights

    def weight(self, i: int, j: int) -> Number:
        """Weight of edge (i, j). Raises KeyError if the edge does not exist."""
        return self._weights[_canonical_pair(i, j)]

    def neighbors(self, i: int) -> FrozenSet[int]:
        return self._adjacency[i]

    def degree(self, i: int) -> int:
        return len(self._adjacency[i])

    def complement_neighbors(self, i: int) -> List[int]:
        """Nodes j != i not adjacent to i, in increasing order"""
        adj = self._adjacency[i]
        return [j for j in self.nodes if j != i and j not in adj]

    def total_weight(self) -> Number:
        return sum(self._weights.values())

    def total_node_weight(self) -> Number:
        return sum(self._node_weights)

    def is_complete(self) -> bool:
        return self.m == self._n * (self._n - 1) // 2

    def has_integral_weights(self) -> bool:
        return all(isinstance(w, int) for w in self._weights.values())

    def has_integral_node_weights(self) -> bool:
        return all(isinstance(q, int) for q in self._node_weights)

    def has_negative_weights(self) -> bool:
        return any(w < 0 for w in self._weights.values())

    def weight_matrix(self) -> np.ndarray:
        """Dense symmetric n x n weight matrix (0 on non-edges).

        The dtype is int64 when every weight is integral and float64 otherwise.
        Row/column r corresponds to node r + 1.
        """
        dtype = np.int64 if self.has_integral_weights() else np.float64
        W = np.zeros((self._n, self._n), dtype=dtype)
        for (i, j), w in self._weights.items():
            W[i - 1, j - 1] = w
            W[j - 1, i - 1] = w
        return W

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self._n, self._n), dtype=bool)
        for i, j in self._weights:
            A[i - 1, j - 1] = True
            A[j - 1, i - 1] = True
        return A

    def rebuild_adjacency_matches(self) -> bool:
        """Check that the neighbor index agrees with the edge set."""
        adjacency = [set() for _ in range(self._n + 1)]
        for i, j in self._weights:
            adjacency[i].add(j)
            adjacency[j].add(i)
        return all(set(a) == b for a, b in zip(self._adjacency, adjacency))

    def with_weights(self, weights: Mapping[Pair, Number]) -> "WeightedGraph":
        """Return a copy with the weights of the listed edges replaced."""
        new = dict(self._weights)
        for (i, j), w in weights.items():
            pair = _canonical_pair(i, j)
            if pair not in new:
                raise KeyError(f"Edge {pair} not in graph")
            new[pair] = w
        return WeightedGraph(self._n, new, self._node_weight_map())

    def with_node_weights(self, node_weights: Mapping[int, Number]) -> "WeightedGraph":
        q = self._node_weight_map()
        q.update(node_weights)
        return WeightedGraph(self._n, self._weights, q)

    def _node_weight_map(self) -> Dict[int, Number]:
        return {i: self._node_weights[i - 1] for i in self.nodes}

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(self.nodes)
        G.add_weighted_edges_from((i, j, w) for (i, j), w in self._weights.items())
        return G


def parse_dimacs(text: Union[str, TextIO]) -> WeightedGraph:
    """Parse a graph in DIMACS clique format.

    Comment lines start with 'c', the problem line reads "p edge <n> <m>" (the
    "col" format word is accepted too) and each edge line reads "e <i> <j>".
    Optional "n <i> <q>" lines set node weights. All edge weights are 1.
    Duplicate edge lines, also in reversed orientation, collapse to one edge. A
    header edge count that disagrees with the edges read is only logged.

    Args:
        text (Union[str, TextIO]): DIMACS text or an open text stream.

    Returns:
        WeightedGraph: The parsed graph.

    Raises:
        ValueError: If the problem line is missing or garbled, an edge line comes before it, an endpoint is outside 1..n or an edge line is a self-loop.
    """
    n = None
    header_m = None
    edges: Dict[Pair, int] = {}
    node_weights = {}
    duplicates = 0
    for lineno, raw in enumerate(_read_text(text).splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0].startswith("c"):
            continue
        tag = tokens[0]
        if tag == "p":
            if n is not None:
                raise ValueError(f"Line {lineno}: duplicate problem line")
            if len(tokens) != 4 or tokens[1] not in ("edge", "col"):
                raise ValueError(f"Line {lineno}: garbled problem line '{raw.strip()}'")
            try:
                n, header_m = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise ValueError(f"Line {lineno}: garbled problem line '{raw.strip()}'")
            if n < 1 or header_m < 0:
                raise ValueError(f"Line {lineno}: invalid graph size in '{raw.strip()}'")
        elif tag in ("e", "n"):
            if n is None:
                raise ValueError(f"Line {lineno}: '{tag}' line before the problem line")
            if len(tokens) != 3:
                raise ValueError(f"Line {lineno}: garbled line '{raw.strip()}'")
            try:
                a, b = int(tokens[1]), float(tokens[2]) if tag == "n" else int(tokens[2])
            except ValueError:
                raise ValueError(f"Line {lineno}: non-numeric token in '{raw.strip()}'")
            if not 1 <= a <= n:
                raise ValueError(f"Line {lineno}: node {a} outside 1..{n}")
            if tag == "n":
                node_weights[a] = b
                continue
            if not 1 <= b <= n:
                raise ValueError(f"Line {lineno}: node {b} outside 1..{n}")
            if a == b:
                raise ValueError(f"Line {lineno}: self-loop on node {a}")
            pair = _canonical_pair(a, b)
            if pair in edges:
                duplicates += 1
            edges[pair] = 1
        else:
            raise ValueError(f"Line {lineno}: unknown line type '{tag}'")

    if n is None:
        raise ValueError("Missing problem line 'p edge <n> <m>'")
    if duplicates:
        logger.debug(f"{duplicates} duplicate edge lines collapsed")
    if header_m != len(edges):
        logger.warning(
            f"DIMACS header declares {header_m} edges but {len(edges)} distinct edges were read"
        )
    return WeightedGraph(n, edges, node_weights or None)


def parse_weighted_edge_list(text: Union[str, TextIO]) -> WeightedGraph:
    """Parse a graph in weighted edge-list format.

    The first non-comment line holds the number of nodes n. Every following
    line is either an edge "<i> <j> <w>" or a node weight "q <i> <value>".
    Lines starting with '#' and blank lines are ignored. Nodes without a "q"
    line get weight 1.

    Args:
        text (Union[str, TextIO]): Edge-list text or an open text stream.

    Returns:
        WeightedGraph: The parsed graph.

    Raises:
        ValueError: On non-numeric tokens, endpoints outside 1..n, an edge repeated with a different weight, a node weight given twice or a negative node weight.
    """
    n = None
    edges: Dict[Pair, Number] = {}
    node_weights: Dict[int, Number] = {}
    for lineno, raw in enumerate(_read_text(text).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        try:
            if n is None:
                if len(tokens) != 1:
                    raise ValueError(f"Line {lineno}: expected the node count, got '{line}'")
                n = int(tokens[0])
                if n < 1:
                    raise ValueError(f"Line {lineno}: node count must be positive")
                continue
            if tokens[0] == "q":
                if len(tokens) != 3:
                    raise ValueError(f"Line {lineno}: expected 'q <i> <value>', got '{line}'")
                i, value = int(tokens[1]), _as_number(tokens[2])
                if not 1 <= i <= n:
                    raise ValueError(f"Line {lineno}: node {i} outside 1..{n}")
                if value < 0:
                    raise ValueError(f"Line {lineno}: negative node weight {value}")
                if i in node_weights and node_weights[i] != value:
                    raise ValueError(f"Line {lineno}: conflicting weight for node {i}")
                node_weights[i] = value
                continue
            if len(tokens) != 3:
                raise ValueError(f"Line {lineno}: expected '<i> <j> <w>', got '{line}'")
            i, j, w = int(tokens[0]), int(tokens[1]), _as_number(tokens[2])
        except ValueError as e:
            if str(e).startswith("Line"):
                raise
            raise ValueError(f"Line {lineno}: non-numeric token in '{line}'")
        for node in (i, j):
            if not 1 <= node <= n:
                raise ValueError(f"Line {lineno}: node {node} outside 1..{n}")
        if i == j:
            raise ValueError(f"Line {lineno}: self-loop on node {i}")
        pair = _canonical_pair(i, j)
        if pair in edges and edges[pair] != w:
            raise ValueError(
                f"Line {lineno}: edge {pair} repeated with conflicting weight ({edges[pair]} vs {w})"
            )
        edges[pair] = w

    if n is None:
        raise ValueError("Missing node count line")
    return WeightedGraph(n, edges, node_weights or None)


def _format_number(value: Number) -> str:
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def write_weighted_edge_list(g: WeightedGraph) -> str:
    """Serialize `g` in the weighted edge-list format read by `parse_weighted_edge_list`."""
    lines = [str(g.n)]
    for (i, j), w in g.edge_weights.items():
        lines.append(f"{i} {j} {_format_number(w)}")
    for i in g.nodes:
        if g.q(i) != 1:
            lines.append(f"q {i} {_format_number(g.q(i))}")
    return "\n".join(lines) + "\n"


def apply_pullan_weights(g: WeightedGraph) -> WeightedGraph:
    """Weight every edge (i, j) with ((i + j) mod 200) + 1, using 1-based node ids.

    Node weights are left unchanged.
    """
    weights = {(i, j): ((i + j) % PULLAN_MODULUS) + 1 for i, j in g.edges}
    return g.with_weights(weights)


def apply_unit_weights(g: WeightedGraph) -> WeightedGraph:
    return g.with_weights({e: 1 for e in g.edges})


def complement_edges(g: WeightedGraph) -> List[Pair]:
    """Missing edges of `g`: all pairs (i, j), i < j, that are not edges, in lexicographic order."""
    return [(i, j) for i, j in combinations(g.nodes, 2) if not g.has_edge(i, j)]


def density(g: WeightedGraph) -> float:
    """Graph density 2|E| / (n (n - 1)).

    Raises:
        ValueError: If n < 2, where the density is undefined.
    """
    if g.n < 2:
        raise ValueError(f"Density is undefined for a graph with {g.n} node")
    return 2 * g.m / (g.n * (g.n - 1))


def min_degree(g: WeightedGraph) -> int:
    return min(g.degree(i) for i in g.nodes)


def read_graph(path: Union[str, Path], weights: str = "file") -> WeightedGraph:
    """Read a graph file, detecting DIMACS or weighted edge-list format from its content.

    Args:
        path (Union[str, Path]): Path to the graph file.
        weights (str, optional): "file" keeps the weights read from the file, "unit" sets every edge weight to 1, "pullan" applies `apply_pullan_weights`. Defaults to "file".

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If `weights` is not a known scheme or the file is malformed.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Graph file {path} does not exist")
    if weights not in ("file", "unit", "pullan"):
        raise ValueError(f"Unknown weighting scheme '{weights}'")

    text = path.read_text()
    is_dimacs = any(line.split()[:1] == ["p"] for line in text.splitlines())
    g = parse_dimacs(text) if is_dimacs else parse_weighted_edge_list(text)
    logger.info(
        f"Read {'DIMACS' if is_dimacs else 'edge-list'} graph {path.name}: n={g.n}, |E|={g.m}"
    )

    if weights == "unit":
        g = apply_unit_weights(g)
    elif weights == "pullan":
        g = apply_pullan_weights(g)
    return g


def random_graph(
    n: int,
    density: float,
    seed: int,
    weight_range: Tuple[int, int] = None,
) -> WeightedGraph:
    """Seeded Erdos-Renyi graph G(n, p) on nodes 1..n.

    Args:
        n (int): Number of nodes.
        density (float): Edge probability p.
        seed (int): Random seed, used both for the structure and the weights.
        weight_range (Tuple[int, int], optional): Inclusive range of the integer edge weights. Unit weights if None. Defaults to None.
    """
    G = nx.gnp_random_graph(n, density, seed=seed)
    edges = sorted(_canonical_pair(i + 1, j + 1) for i, j in G.edges())
    if weight_range is None:
        weights = [1] * len(edges)
    else:
        low, high = weight_range
        rng = np.random.default_rng(seed)
        weights = rng.integers(low, high + 1, size=len(edges)).tolist()
    return WeightedGraph(n, [(i, j, w) for (i, j), w in zip(edges, weights)])
