# Copyright 2020-2023 Cambridge Quantum Computing
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Value types shared by the taxonomy pipeline."""

from collections import Counter
from dataclasses import dataclass
import math
from typing import (
    Any,
    ClassVar,
    Dict,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Type,
)

import networkx as nx  # type: ignore

SIMILARITY_RELATION = "="

# Record field names in column order, used as JSON keys and TSV header.
RECORD_FIELDS = (
    "depth",
    "children",
    "brothers",
    "brothersLeft",
    "sameLevel",
    "name",
)


class InvalidTaxonomy(ValueError):
    pass


class InvalidWeightProfile(ValueError):
    pass


@dataclass
class NotAnnotated(Exception):
    """An operation that needs filled count fields got a raw taxonomy."""

    operation: str

    def __str__(self) -> str:
        return (
            f"{self.operation} requires an annotated taxonomy; "
            "call annotate() first"
        )


@dataclass(frozen=True)
class TaxonRecord:
    """One node of the record sequence.

    :param depth: hierarchy level, the root is at 0
    :param children: number of direct sub-taxons
    :param brothers: number of sibling taxons in the same chain
    :param brothers_left: siblings occurring earlier in preorder
    :param same_level: number of other taxons anywhere at the same depth
    :param name: taxon identifier, duplicates are allowed
    """

    depth: int
    children: int = 0
    brothers: int = 0
    brothers_left: int = 0
    same_level: int = 0
    name: str = ""

    def __post_init__(self) -> None:
        for value in self.counts():
            if value < 0:
                raise InvalidTaxonomy(
                    f"Negative structural field in record {self.name!r}"
                )
        if not self.brothers_left <= self.brothers <= self.same_level:
            raise InvalidTaxonomy(
                f"Record {self.name!r} needs brothersLeft <= brothers <= "
                f"sameLevel, got {self.brothers_left}, {self.brothers}, "
                f"{self.same_level}"
            )

    def counts(self) -> Tuple[int, int, int, int, int]:
        """The five structural fields, in table order."""
        return (
            self.depth,
            self.children,
            self.brothers,
            self.brothers_left,
            self.same_level,
        )

    def to_dict(self) -> Dict[str, Any]:
        return dict(zip(RECORD_FIELDS, (*self.counts(), self.name)))

    @classmethod
    def from_dict(cls, dct: Dict[str, Any]) -> "TaxonRecord":
        try:
            return cls(
                depth=int(dct["depth"]),
                children=int(dct["children"]),
                brothers=int(dct["brothers"]),
                brothers_left=int(dct["brothersLeft"]),
                same_level=int(dct["sameLevel"]),
                name=str(dct["name"]),
            )
        except KeyError as e:
            raise InvalidTaxonomy(f"Record is missing field {e.args[0]!r}") from e


def new_record(depth: int, name: str) -> TaxonRecord:
    """Create a record that only knows its depth and name.

    All four count fields start at zero; they are filled in later by
    :py:func:`annotate`.
    """
    if depth < 0:
        raise InvalidTaxonomy(f"Depth must be non-negative, got {depth}")
    return TaxonRecord(depth=depth, name=name)


@dataclass(frozen=True)
class Taxonomy:
    """Preorder sequence of records, nesting encoded by depth.

    ``annotated`` is set only by the annotation pass (or by reading back a
    table whose counts match its depths).
    """

    records: Tuple[TaxonRecord, ...] = ()
    annotated: bool = False

    def __post_init__(self) -> None:
        # accept any sequence, store a tuple
        object.__setattr__(self, "records", tuple(self.records))
        previous: Optional[int] = None
        for index, record in enumerate(self.records):
            if previous is None:
                if record.depth != 0:
                    raise InvalidTaxonomy(
                        f"First record {record.name!r} has depth {record.depth}, "
                        "expected 0"
                    )
            elif record.depth > previous + 1:
                raise InvalidTaxonomy(
                    f"Record {index} ({record.name!r}) jumps from depth "
                    f"{previous} to {record.depth}"
                )
            previous = record.depth

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, str]]) -> "Taxonomy":
        """Build an unannotated taxonomy from (depth, name) pairs."""
        return cls(tuple(new_record(depth, name) for depth, name in pairs))

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[TaxonRecord]:
        return iter(self.records)

    def __getitem__(self, index: int) -> TaxonRecord:
        return self.records[index]

    @property
    def max_depth(self) -> int:
        return max((r.depth for r in self.records), default=0)

    def find(self, name: str) -> TaxonRecord:
        """First record with the given name, in preorder."""
        for record in self.records:
            if record.name == name:
                return record
        raise KeyError(name)

    def require_annotated(self, operation: str) -> None:
        if not self.annotated:
            raise NotAnnotated(operation)

    def labels(self) -> List[str]:
        """Unambiguous labels: repeated names get a ``#<preorder index>``
        suffix, unique names are left as they are."""
        occurrences = Counter(r.name for r in self.records)
        return [
            f"{r.name}#{i}" if occurrences[r.name] > 1 else r.name
            for i, r in enumerate(self.records)
        ]

    def to_dict(self) -> List[Dict[str, Any]]:
        return [r.to_dict() for r in self.records]


class KnowledgeGraph:
    """Named concepts with directed sub-concept edges.

    The graph may be cyclic and may consist of several components. It is
    backed by a frozen :py:class:`networkx.DiGraph`; node order is first
    appearance, duplicate edges collapse to one. Each edge keeps the source
    line it was read from (``0`` when built in memory).
    """

    def __init__(self, graph: nx.DiGraph):
        self._graph = nx.freeze(graph)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Tuple[str, str]],
        nodes: Iterable[str] = (),
    ) -> "KnowledgeGraph":
        graph = nx.DiGraph()
        for parent, child in edges:
            if not graph.has_edge(parent, child):
                graph.add_edge(parent, child, line=0)
        # isolated concepts go after the edge endpoints
        graph.add_nodes_from(nodes)
        return cls(graph)

    @property
    def graph(self) -> nx.DiGraph:
        return self._graph

    @property
    def nodes(self) -> Tuple[str, ...]:
        return tuple(self._graph.nodes)

    @property
    def edges(self) -> Tuple[Tuple[str, str], ...]:
        return tuple(self._graph.edges)

    def __contains__(self, name: object) -> bool:
        return name in self._graph

    def __len__(self) -> int:
        return int(self._graph.number_of_nodes())

    def children(self, name: str) -> List[str]:
        """Direct sub-concepts, in lexicographic order."""
        return sorted(self._graph.successors(name))

    def has_parent(self, name: str) -> bool:
        return bool(self._graph.in_degree(name) > 0)

    def edge_line(self, parent: str, child: str) -> int:
        return int(self._graph.edges[parent, child].get("line", 0))


@dataclass(frozen=True)
class Mapping:
    """A correspondence ``(c, c', n, R)`` between two taxonomies.

    ``c`` and ``c_prime`` are the unambiguous labels of the two records;
    ``source`` and ``target`` are their preorder indices.
    """

    c: str
    c_prime: str
    n: float
    relation: str = SIMILARITY_RELATION
    source: int = 0
    target: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.n <= 1.0:
            raise ValueError(f"Mapping confidence {self.n} is outside [0, 1]")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "c": self.c,
            "cPrime": self.c_prime,
            "n": self.n,
            "R": self.relation,
            "source": self.source,
            "target": self.target,
        }


@dataclass(frozen=True)
class WeightProfile:
    """Per-attribute weights for the combined matcher.

    Weights need not sum to 1; they are normalised when used. The default
    gives every attribute the same weight.
    """

    ATTRIBUTES: ClassVar[Tuple[str, ...]] = (
        "depth",
        "children",
        "brothers",
        "brothers_left",
        "same_level",
        "name",
    )

    depth: float = 1.0
    children: float = 1.0
    brothers: float = 1.0
    brothers_left: float = 1.0
    same_level: float = 1.0
    name: float = 1.0

    def __post_init__(self) -> None:
        values = self.as_tuple()
        if any(not math.isfinite(w) or w < 0 for w in values):
            raise InvalidWeightProfile(
                f"Weights must be finite and non-negative, got {list(values)}"
            )
        if not any(w > 0 for w in values):
            raise InvalidWeightProfile("At least one weight must be positive")

    def as_tuple(self) -> Tuple[float, ...]:
        return tuple(float(getattr(self, a)) for a in self.ATTRIBUTES)

    @property
    def total(self) -> float:
        return sum(self.as_tuple())

    def normalized(self) -> "WeightProfile":
        """The same profile rescaled to sum to 1.

        The weights are divided by the largest one first, so profiles near
        the limits of the float range normalise to the same values as their
        moderate multiples.
        """
        largest = max(self.as_tuple())
        scaled = [w / largest for w in self.as_tuple()]
        total = sum(scaled)
        return WeightProfile(*(w / total for w in scaled))

    @classmethod
    def uniform(cls) -> "WeightProfile":
        return cls()

    @classmethod
    def from_sequence(
        cls: Type["WeightProfile"], values: Sequence[float]
    ) -> "WeightProfile":
        if len(values) != len(cls.ATTRIBUTES):
            raise InvalidWeightProfile(
                f"Expected {len(cls.ATTRIBUTES)} weights, got {len(values)}"
            )
        return cls(*(float(v) for v in values))

    @classmethod
    def from_string(cls, text: str) -> "WeightProfile":
        """Parse six comma-separated reals, e.g. ``"1,1,1,1,1,2"``."""
        parts = [p.strip() for p in text.split(",")]
        try:
            values = [float(p) for p in parts]
        except ValueError as e:
            raise InvalidWeightProfile(f"Cannot parse weights {text!r}") from e
        return cls.from_sequence(values)
