import logging
from collections import Counter
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple, TypedDict, Union

from kplexpart.config import SolverConfig
from kplexpart.graph import Number, WeightedGraph

logger = logging.getLogger(__name__)

VIOLATION_KINDS = ("kplex", "lb", "ub", "components")


def canonical_labels(labels: Sequence[int]) -> Tuple[int, ...]:
    """Relabel `labels` as a restricted-growth string.

    The first node gets label 1 and every new label is one more than the
    largest label used so far, e.g. (3, 3, 1, 2) -> (1, 1, 2, 3).
    """
    mapping: Dict[int, int] = {}
    out = []
    for label in labels:
        if label not in mapping:
            mapping[label] = len(mapping) + 1
        out.append(mapping[label])
    return tuple(out)


class Partition:
    """Total assignment of nodes 1..n to component labels.

    Labels are positive integers. Two partitions compare equal when they
    group the nodes the same way, whatever the label values.

    Args:
        labels (Sequence[int]): labels[i - 1] is the component label of node i.

    Example:

    >>> from kplexpart.partition import Partition
    >>> pt = Partition.from_components(4, [[1, 3], [2], [4]])
    >>> pt.labels
    (1, 2, 1, 3)
    """

    def __init__(self, labels: Sequence[int]) -> None:
        labels = tuple(int(x) for x in labels)
        if not labels:
            raise ValueError("A partition needs at least one node")
        if min(labels) < 1:
            raise ValueError("Component labels must be positive integers")
        self._labels = labels

    def __repr__(self) -> str:
        return f"Partition({list(self.blocks())})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return canonical_labels(self._labels) == canonical_labels(other._labels)

    def __hash__(self) -> int:
        return hash(canonical_labels(self._labels))

    def __len__(self) -> int:
        return len(self._labels)

    @property
    def n(self) -> int:
        return len(self._labels)

    @property
    def labels(self) -> Tuple[int, ...]:
        return self._labels

    def label(self, i: int) -> int:
        return self._labels[i - 1]

    @property
    def num_components(self) -> int:
        return len(set(self._labels))

    def is_canonical(self) -> bool:
        return canonical_labels(self._labels) == self._labels

    def canonicalize(self) -> "Partition":
        return Partition(canonical_labels(self._labels))

    def components(self) -> Dict[int, List[int]]:
        """Map label -> sorted node list, labels in increasing order."""
        comps: Dict[int, List[int]] = {}
        for i, label in enumerate(self._labels, start=1):
            comps.setdefault(label, []).append(i)
        return dict(sorted(comps.items()))

    def blocks(self) -> List[List[int]]:
        """Node lists of the components, ordered by smallest node."""
        return sorted(self.components().values(), key=lambda b: b[0])

    def component_of(self, i: int) -> List[int]:
        return self.components()[self.label(i)]

    @classmethod
    def from_components(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        """Build a partition from its node blocks, labeled in canonical order.

        Raises:
            ValueError: If the blocks overlap or do not cover 1..n.
        """
        labels = [0] * n
        for label, block in enumerate(blocks, start=1):
            for i in block:
                if not 1 <= i <= n:
                    raise ValueError(f"Node {i} outside 1..{n}")
                if labels[i - 1]:
                    raise ValueError(f"Node {i} appears in more than one component")
                labels[i - 1] = label
        missing = [i for i, label in enumerate(labels, start=1) if not label]
        if missing:
            raise ValueError(f"Nodes {missing} are not assigned to any component")
        return cls(labels).canonicalize()

    @classmethod
    def from_mapping(cls, n: int, assignment: Mapping[int, int]) -> "Partition":
        missing = [i for i in range(1, n + 1) if i not in assignment]
        if missing:
            raise ValueError(f"Nodes {missing} are not assigned to any component")
        extra = [i for i in assignment if not 1 <= i <= n]
        if extra:
            raise ValueError(f"Nodes {extra} outside 1..{n}")
        return cls([assignment[i] for i in range(1, n + 1)])

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(range(1, n + 1))

    @classmethod
    def single_component(cls, n: int) -> "Partition":
        return cls([1] * n)


class Violation(TypedDict):
    """One violated condition of a partition.

    Fields:
    kind (str): One of "kplex", "lb", "ub", "components".
    component (int or None): Label of the offending component, None for "components".
    message (str): Human readable description.
    """

    kind: str
    component: Optional[int]
    message: str


class PartitionStats(TypedDict):
    """Summary columns of a solution.

    Fields:
    comp (int): Number of components, singletons included.
    largest (int): Cardinality of the largest component.
    singlt (float): Singletons over n, in percent.
    weight (Number): Total intra-component edge weight.
    """

    comp: int
    largest: int
    singlt: float
    weight: Number


class ComponentInfo(TypedDict):
    label: int
    weight: Number
    cardinality: int
    nodes: List[int]


def _check_nodes(g: WeightedGraph, nodes: Iterable[int]) -> None:
    for i in nodes:
        if not 1 <= i <= g.n:
            raise ValueError(f"Node {i} outside 1..{g.n}")


def _check_partition(g: WeightedGraph, pt: Partition) -> None:
    if pt.n != g.n:
        raise ValueError(f"Partition covers {pt.n} nodes but the graph has {g.n}")


def missing_counts(g: WeightedGraph, S: Iterable[int]) -> Dict[int, int]:
    """For each i in S, the number of other members of S not adjacent to i."""
    S = set(S)
    return {i: len(S) - 1 - len(g.neighbors(i) & S) for i in S}


def is_kplex(g: WeightedGraph, S: Iterable[int], k: int) -> bool:
    """Whether S is a k-plex of g: every member is adjacent to at least |S| - k members.

    Equivalently, each member misses at most k - 1 other members.

    Raises:
        ValueError: If S is empty, holds a node outside 1..n or k < 1.
    """
    S = set(S)
    if not S:
        raise ValueError("A k-plex must be a nonempty node set")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_nodes(g, S)
    if len(S) <= k:
        return True
    return all(missing <= k - 1 for missing in missing_counts(g, S).values())


def component_weight(g: WeightedGraph, nodes: Iterable[int]) -> Number:
    nodes = sorted(nodes)
    members = set(nodes)
    return sum(g.weight(i, j) for i in nodes for j in g.neighbors(i) if j > i and j in members)


def validate_partition(
    g: WeightedGraph,
    pt: Partition,
    k: int,
    cfg: SolverConfig = None,
) -> List[Violation]:
    """List every violated condition of `pt` as a Max-EkPP solution.

    The conditions are: every component is a k-plex; when `cfg` sets lb (ub),
    every component has node weight sum >= lb (<= ub); when `cfg` sets P, there
    are at most P components. An empty list means the partition is feasible.

    Args:
        g (WeightedGraph): The graph.
        pt (Partition): A total partition of the nodes of g.
        k (int): k-plex parameter.
        cfg (SolverConfig, optional): Source of the lb / ub / P side constraints. Defaults to None.

    Returns:
        List[Violation]: The violations, empty when feasible.
    """
    _check_partition(g, pt)
    lb = cfg.lb if cfg is not None else None
    ub = cfg.ub if cfg is not None else None
    P = cfg.P if cfg is not None else None

    report: List[Violation] = []
    comps = pt.components()
    for label, nodes in comps.items():
        if not is_kplex(g, nodes, k):
            worst = max(missing_counts(g, nodes).items(), key=lambda kv: kv[1])
            report.append(
                Violation(
                    kind="kplex",
                    component=label,
                    message=f"component {label} is not a {k}-plex: node {worst[0]} misses {worst[1]} members (at most {k - 1} allowed)",
                )
            )
        load = sum(g.q(i) for i in nodes)
        if lb is not None and load < lb - 1e-9:
            report.append(
                Violation(
                    kind="lb",
                    component=label,
                    message=f"component {label} has node weight {load} < lb {lb}",
                )
            )
        if ub is not None and load > ub + 1e-9:
            report.append(
                Violation(
                    kind="ub",
                    component=label,
                    message=f"component {label} has node weight {load} > ub {ub}",
                )
            )
    if P is not None and len(comps) > P:
        report.append(
            Violation(
                kind="components",
                component=None,
                message=f"partition has {len(comps)} components > P = {P}",
            )
        )
    return report


def partition_weight(g: WeightedGraph, pt: Partition) -> Number:
    """Sum of the weights of the edges whose endpoints share a component.

    Negative intra-component weights are included.
    """
    _check_partition(g, pt)
    return sum(w for (i, j), w in g.edge_weights.items() if pt.label(i) == pt.label(j))


def spurious_components(g: WeightedGraph, pt: Partition) -> List[int]:
    """Labels of the components with at least two nodes and no internal edge."""
    _check_partition(g, pt)
    spurious = []
    for label, nodes in pt.components().items():
        if len(nodes) < 2:
            continue
        members = set(nodes)
        if not any(g.neighbors(i) & members for i in nodes):
            spurious.append(label)
    return spurious


def prop1_applies(g: WeightedGraph, k: int) -> bool:
    """Whether the whole node set is known to be optimal for k.

    True iff every edge weight is nonnegative and k >= n - (minimum degree).
    """
    if g.has_negative_weights():
        return False
    return k >= g.n - min(g.degree(i) for i in g.nodes)


def partition_stats(g: WeightedGraph, pt: Partition) -> PartitionStats:
    _check_partition(g, pt)
    sizes = [len(nodes) for nodes in pt.components().values()]
    singletons = sum(1 for s in sizes if s == 1)
    return PartitionStats(
        comp=len(sizes),
        largest=max(sizes),
        singlt=100.0 * singletons / pt.n,
        weight=partition_weight(g, pt),
    )


def heaviest_components(g: WeightedGraph, pt: Partition, top: int = 3) -> List[ComponentInfo]:
    """The `top` components with the largest internal weight (ties by size, then label)."""
    _check_partition(g, pt)
    infos = [
        ComponentInfo(
            label=label,
            weight=component_weight(g, nodes),
            cardinality=len(nodes),
            nodes=nodes,
        )
        for label, nodes in pt.components().items()
    ]
    infos.sort(key=lambda c: (-c["weight"], -c["cardinality"], c["label"]))
    return infos[:top]


def cardinality_histogram(pt: Partition) -> Dict[int, int]:
    """Number of components of each cardinality, in increasing cardinality."""
    sizes = Counter(len(nodes) for nodes in pt.components().values())
    return dict(sorted(sizes.items()))


def write_partition(pt: Partition) -> str:
    """Serialize as one "<node> <label>" line per node."""
    return "".join(f"{i} {label}\n" for i, label in enumerate(pt.labels, start=1))


def parse_partition(text: Union[str, TextIO], n: int) -> Partition:
    """Parse "<node> <label>" lines ('#' comments allowed) into a partition of 1..n.

    Raises:
        ValueError: On malformed lines, nodes outside 1..n, nodes listed twice or unassigned nodes.
    """
    if hasattr(text, "read"):
        text = text.read()
    assignment: Dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ValueError(f"Line {lineno}: expected '<node> <label>', got '{line}'")
        try:
            i, label = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ValueError(f"Line {lineno}: non-numeric token in '{line}'")
        if i in assignment:
            raise ValueError(f"Line {lineno}: node {i} listed twice")
        if label < 1:
            raise ValueError(f"Line {lineno}: labels must be positive")
        assignment[i] = label
    return Partition.from_mapping(n, assignment)
