import logging
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    """Settings of a Max-EkPP solve.

    Attributes:
        k (int): k-plex parameter; every component must be a k-plex. k = 1 asks for cliques.
        time_limit (float, optional): Wall-clock limit in seconds. None means no limit.
        lb (float, optional): Lower bound on the sum of node weights q in each component.
        ub (float, optional): Upper bound on the sum of node weights q in each component.
        P (int, optional): Maximum number of components.
        deterministic (bool): Return the lexicographically smallest (restricted-growth labeling) optimal partition when worker_count is 1.
        worker_count (int): Number of processes exploring disjoint subtrees.
        verbose (bool): Log progress lines while searching.
        progress_interval (float): Seconds between progress lines.
        warm_start (bool): Seed the search with the greedy heuristic.
    """

    k: int = 1
    time_limit: Optional[float] = None
    lb: Optional[float] = None
    ub: Optional[float] = None
    P: Optional[int] = None
    deterministic: bool = False
    worker_count: int = 1
    verbose: bool = False
    progress_interval: float = 5.0
    warm_start: bool = True

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k}")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")
        for name in ("lb", "ub"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")
        if self.lb is not None and self.ub is not None and self.lb > self.ub:
            raise ValueError(f"lb ({self.lb}) is larger than ub ({self.ub})")
        if self.P is not None and (not isinstance(self.P, int) or self.P < 1):
            raise ValueError(f"P must be an integer >= 1, got {self.P}")
        if not isinstance(self.worker_count, int) or self.worker_count < 1:
            raise ValueError(f"worker_count must be an integer >= 1, got {self.worker_count}")
        if self.progress_interval <= 0:
            raise ValueError("progress_interval must be positive")

    @property
    def has_side_constraints(self) -> bool:
        return self.lb is not None or self.ub is not None or self.P is not None

    def replace(self, **changes) -> "SolverConfig":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "SolverConfig":
        """Build a config from a mapping, rejecting unknown keys."""
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"Unknown solver settings: {', '.join(sorted(unknown))}")
        return cls(**values)

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "SolverConfig":
        """Load a config from a YAML mapping, e.g.::

            k: 2
            time_limit: 600
            ub: 5
        """
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file {path} does not exist")
        with open(path, "r") as f:
            values = yaml.safe_load(f) or {}
        if not isinstance(values, dict):
            raise ValueError(f"Config file {path} must hold a mapping")
        logger.debug(f"Loaded solver settings from {path}: {values}")
        return cls.from_dict(values)
