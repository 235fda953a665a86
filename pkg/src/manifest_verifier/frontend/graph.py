from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from .constants import ResourceType
from .exceptions import DependencyCycle, MissingResource

__all__ = ["ConcreteValue", "PrimitiveResource", "ResourceGraph", "ResourceRef"]


@dataclass(frozen=True, slots=True, order=True)
class ResourceRef:
    rtype: str
    title: str

    def __str__(self) -> str:
        return f"{self.rtype.capitalize()}[{self.title}]"


type ConcreteValue = str | int | float | ResourceRef | tuple[ConcreteValue, ...]


@dataclass(frozen=True, slots=True)
class PrimitiveResource:
    """
    A resource of a built-in type with fully evaluated attributes.

    Attributes are kept as a sorted tuple of pairs so resources can be compared
    and hashed; use :meth:`get` and :attr:`attributes` to read them.
    """

    rtype: ResourceType
    title: str
    attrs: tuple[tuple[str, ConcreteValue], ...] = ()

    @classmethod
    def build(
        cls,
        rtype: ResourceType,
        title: str,
        attributes: Mapping[str, ConcreteValue] | None = None,
    ) -> PrimitiveResource:
        return cls(
            rtype=rtype, title=title, attrs=tuple(sorted((attributes or {}).items()))
        )

    @property
    def vertex_id(self) -> str:
        return f"{self.rtype.reference_name}[{self.title}]"

    @property
    def attributes(self) -> dict[str, ConcreteValue]:
        return dict(self.attrs)

    def get(self, name: str, default: ConcreteValue | None = None):
        for key, value in self.attrs:
            if key == name:
                return value
        return default

    def __str__(self) -> str:
        return self.vertex_id


def _sort_key(resource: PrimitiveResource) -> tuple[str, str]:
    return (resource.title, resource.rtype.value)


@dataclass(frozen=True, eq=False)
class ResourceGraph:
    """
    The acyclic dependency graph of primitive resources.

    An edge ``u -> v`` means ``u`` must be applied before ``v``. Vertices are
    identified by their :attr:`PrimitiveResource.vertex_id`.
    """

    _graph: nx.DiGraph = field(repr=False, compare=False)

    @classmethod
    def build(
        cls,
        resources: Iterable[PrimitiveResource],
        edges: Iterable[tuple[str, str]] = (),
    ) -> ResourceGraph:
        """
        :raises MissingResource: if an edge names an unknown vertex.
        :raises DependencyCycle: if the edges form a cycle.
        """
        graph = nx.DiGraph()
        for resource in resources:
            graph.add_node(resource.vertex_id, resource=resource)
        for source, target in edges:
            for vertex in (source, target):
                if vertex not in graph:
                    raise MissingResource(f"Dependency on undeclared {vertex}")
            graph.add_edge(source, target)

        try:
            cycle = nx.find_cycle(graph)
        except nx.NetworkXNoCycle:
            pass
        else:
            raise DependencyCycle([source for source, _ in cycle])
        return cls(nx.freeze(graph))

    # Queries

    def __len__(self) -> int:
        return self._graph.number_of_nodes()

    def __iter__(self) -> Iterator[str]:
        return iter(self.vertices)

    def __contains__(self, vertex: object) -> bool:
        return vertex in self._graph

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ResourceGraph):
            return NotImplemented
        return self.labels == other.labels and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((tuple(self.labels.items()), tuple(self.edges)))

    @cached_property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self._graph.nodes))

    @cached_property
    def edges(self) -> tuple[tuple[str, str], ...]:
        return tuple(sorted(self._graph.edges))

    @cached_property
    def labels(self) -> dict[str, PrimitiveResource]:
        return {
            vertex: self._graph.nodes[vertex]["resource"] for vertex in self.vertices
        }

    def label(self, vertex: str) -> PrimitiveResource:
        return self._graph.nodes[vertex]["resource"]

    def predecessors(self, vertex: str) -> set[str]:
        return set(self._graph.predecessors(vertex))

    def successors(self, vertex: str) -> set[str]:
        return set(self._graph.successors(vertex))

    def ancestors(self, vertex: str) -> set[str]:
        return nx.ancestors(self._graph, vertex)

    def descendants(self, vertex: str) -> set[str]:
        return nx.descendants(self._graph, vertex)

    def sinks(self) -> list[str]:
        return [v for v in self.vertices if self._graph.out_degree(v) == 0]

    def sources(self) -> list[str]:
        return [v for v in self.vertices if self._graph.in_degree(v) == 0]

    def is_ordered(self, first: str, second: str) -> bool:
        """
        Return whether a path forces ``first`` to run before ``second``.
        """
        return nx.has_path(self._graph, first, second)

    def topological_order(self) -> list[str]:
        """
        A topological order, ties broken by resource title and then type.
        """
        return list(
            nx.lexicographical_topological_sort(
                self._graph, key=lambda vertex: _sort_key(self.label(vertex))
            )
        )

    def all_topological_orders(self) -> Iterator[list[str]]:
        return nx.all_topological_sorts(self._graph)

    def is_topological_order(self, order: list[str]) -> bool:
        if sorted(order) != list(self.vertices):
            return False
        position = {vertex: index for index, vertex in enumerate(order)}
        return all(position[source] < position[target] for source, target in self.edges)

    # Derived graphs

    def subgraph(self, vertices: Iterable[str]) -> ResourceGraph:
        return ResourceGraph(nx.freeze(self._graph.subgraph(vertices).copy()))

    def without(self, vertices: Iterable[str]) -> ResourceGraph:
        removed = set(vertices)
        return self.subgraph(v for v in self.vertices if v not in removed)

    def with_edges(self, edges: Iterable[tuple[str, str]]) -> ResourceGraph:
        return ResourceGraph.build(self.labels.values(), [*self.edges, *edges])

    def to_dot(self) -> str:
        def quote(text: str) -> str:
            escaped = text.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'

        lines = ["digraph resources {"]
        for vertex in self.vertices:
            lines.append(f"  {quote(vertex)};")
        for source, target in self.edges:
            lines.append(f"  {quote(source)} -> {quote(target)};")
        lines.append("}")
        return "\n".join(lines) + "\n"
