"""
Expand a parsed manifest into a graph of primitive resources.

Define instances are inlined with their parameters bound, references to define
instances stand for every resource the instance produced, and dependency edges
are collected from chains and the ``before``/``require`` metaparameters. A file
resource implicitly requires a file resource that manages its parent directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import structlog

from manifest_verifier.fsir.exceptions import InvalidPath
from manifest_verifier.fsir.paths import Path

from .constants import (
    UNSUPPORTED_METAPARAMETERS,
    UNSUPPORTED_RESOURCE_TYPES,
    MetaParameter,
    ResourceType,
)
from .exceptions import (
    DuplicateResource,
    InvalidParameter,
    MissingResource,
    RecursiveDefine,
    UnboundVariable,
    UnknownType,
    UnsupportedFeature,
)
from .graph import ConcreteValue, PrimitiveResource, ResourceGraph, ResourceRef
from .syntax import (
    Array,
    DefineDecl,
    DependencyDecl,
    Interpolation,
    Item,
    Manifest,
    Num,
    Position,
    Ref,
    ResourceDecl,
    Str,
    Value,
    Var,
)

__all__ = ["expand"]

logger = structlog.stdlib.get_logger(__name__)

type Environment = dict[str, ConcreteValue]


@dataclass
class _Declared:
    resource: PrimitiveResource
    position: Position
    from_define: bool


@dataclass
class _PendingEdge:
    source: ResourceRef
    target: ResourceRef
    position: Position


@dataclass
class _Expander:
    defines: dict[str, DefineDecl]
    declared: dict[str, _Declared] = field(default_factory=dict)
    instances: dict[ResourceRef, list[str]] = field(default_factory=dict)
    pending: list[_PendingEdge] = field(default_factory=list)
    active_instances: list[ResourceRef] = field(default_factory=list)
    define_stack: list[str] = field(default_factory=list)

    # Values

    def evaluate(self, value: Value, env: Environment, position: Position):
        match value:
            case Str(parts=parts):
                return "".join(
                    self.interpolate(part, env, position)
                    if isinstance(part, Interpolation)
                    else part
                    for part in parts
                )
            case Num(value=number):
                return number
            case Var(name=name):
                return self.lookup(name, env, position)
            case Array(items=items):
                return tuple(self.evaluate(item, env, position) for item in items)
            case Ref(rtype=rtype, title=title):
                evaluated = self.evaluate(title, env, position)
                if isinstance(evaluated, tuple):
                    return tuple(
                        ResourceRef(rtype, self.stringify(item, position))
                        for item in evaluated
                    )
                return ResourceRef(rtype, self.stringify(evaluated, position))

    def lookup(self, name: str, env: Environment, position: Position):
        try:
            return env[name]
        except KeyError:
            raise UnboundVariable(f"Unbound variable '${name}'", position) from None

    def interpolate(
        self, part: Interpolation, env: Environment, position: Position
    ) -> str:
        return self.stringify(self.lookup(part.name, env, position), position)

    def stringify(self, value: ConcreteValue, position: Position) -> str:
        match value:
            case str():
                return value
            case int() | float():
                return str(value)
            case _:
                raise InvalidParameter(
                    f"Cannot use {value!r} where a string is expected", position
                )

    def titles(self, decl: ResourceDecl, env: Environment) -> list[str]:
        title = self.evaluate(decl.title, env, decl.position)
        items = title if isinstance(title, tuple) else (title,)
        return [self.stringify(item, decl.position) for item in items]

    def refs(
        self, value: ConcreteValue, position: Position, metaparameter: str
    ) -> list[ResourceRef]:
        items = value if isinstance(value, tuple) else (value,)
        refs = []
        for item in items:
            if not isinstance(item, ResourceRef):
                raise InvalidParameter(
                    f"'{metaparameter}' expects resource references, got {item!r}",
                    position,
                )
            refs.append(item)
        return refs

    # Items

    def expand_items(self, items: tuple[Item, ...], env: Environment) -> None:
        for item in items:
            match item:
                case DefineDecl():
                    if self.define_stack:
                        raise UnsupportedFeature(
                            "Nested define declarations are not supported",
                            item.position,
                        )
                case ResourceDecl():
                    for title in self.titles(item, env):
                        self.expand_resource(item, title, env)
                case DependencyDecl(source=source, target=target):
                    for source_ref in self.as_refs(source, env, item.position):
                        for target_ref in self.as_refs(target, env, item.position):
                            self.pending.append(
                                _PendingEdge(source_ref, target_ref, item.position)
                            )

    def as_refs(
        self, ref: Ref, env: Environment, position: Position
    ) -> list[ResourceRef]:
        return self.refs(self.evaluate(ref, env, position), position, "->")

    def expand_resource(
        self, decl: ResourceDecl, title: str, env: Environment
    ) -> None:
        rtype = self.resource_type(decl)
        attributes: dict[str, ConcreteValue] = {}
        own_ref = ResourceRef(decl.rtype, title)
        for attribute in decl.attributes:
            value = self.evaluate(attribute.value, env, attribute.position)
            if attribute.name in UNSUPPORTED_METAPARAMETERS:
                raise UnsupportedFeature(
                    f"Metaparameter '{attribute.name}' is not supported",
                    attribute.position,
                )
            match attribute.name:
                case MetaParameter.before:
                    for ref in self.refs(value, attribute.position, attribute.name):
                        self.pending.append(
                            _PendingEdge(own_ref, ref, attribute.position)
                        )
                case MetaParameter.require:
                    for ref in self.refs(value, attribute.position, attribute.name):
                        self.pending.append(
                            _PendingEdge(ref, own_ref, attribute.position)
                        )
                case _:
                    attributes[attribute.name] = value

        if rtype is None:
            self.instantiate(self.defines[decl.rtype], decl, title, attributes)
        else:
            self.declare(
                PrimitiveResource.build(rtype, title, attributes), decl.position
            )

    def resource_type(self, decl: ResourceDecl) -> ResourceType | None:
        """
        Return the built-in type of ``decl``, or ``None`` for a define instance.
        """
        if decl.rtype in self.defines:
            return None
        if decl.rtype in UNSUPPORTED_RESOURCE_TYPES:
            raise UnsupportedFeature(
                f"Unsupported resource type '{decl.rtype}'", decl.position
            )
        try:
            return ResourceType(decl.rtype)
        except ValueError:
            raise UnknownType(
                f"Unknown resource type '{decl.rtype}'", decl.position
            ) from None

    def declare(self, resource: PrimitiveResource, position: Position) -> None:
        vertex = resource.vertex_id
        from_define = bool(self.define_stack)
        existing = self.declared.get(vertex)
        if existing is None:
            self.declared[vertex] = _Declared(resource, position, from_define)
        elif existing.resource != resource or not (
            from_define and existing.from_define
        ):
            raise DuplicateResource(
                f"Duplicate declaration of {vertex}, first declared at line "
                f"{existing.position.line}",
                position,
            )
        else:
            logger.debug("duplicate_resource_merged", vertex=vertex)

        for instance in self.active_instances:
            self.instances[instance].append(vertex)

    def instantiate(
        self,
        define: DefineDecl,
        decl: ResourceDecl,
        title: str,
        attributes: dict[str, ConcreteValue],
    ) -> None:
        if define.name in self.define_stack:
            chain = " -> ".join([*self.define_stack, define.name])
            raise RecursiveDefine(f"Recursive define: {chain}", decl.position)

        instance = ResourceRef(define.name, title)
        if instance in self.instances:
            raise DuplicateResource(
                f"Duplicate declaration of {instance}", decl.position
            )

        known = {param.name for param in define.params}
        for name in attributes:
            if name not in known:
                raise InvalidParameter(
                    f"'{define.name}' has no parameter '{name}'", decl.position
                )

        env: Environment = {"title": title, "name": title}
        for param in define.params:
            if param.name in attributes:
                env[param.name] = attributes[param.name]
            elif param.name in ("title", "name"):
                continue
            elif param.default is not None:
                env[param.name] = self.evaluate(param.default, env, define.position)
            else:
                raise InvalidParameter(
                    f"Missing value for parameter '${param.name}' of '{define.name}'",
                    decl.position,
                )

        self.instances[instance] = []
        self.define_stack.append(define.name)
        self.active_instances.append(instance)
        try:
            self.expand_items(define.body.items, env)
        finally:
            self.active_instances.pop()
            self.define_stack.pop()

    # Edges

    def resolve(self, ref: ResourceRef, position: Position) -> list[str]:
        if ref in self.instances:
            return self.instances[ref]
        if ref.rtype in self.defines:
            raise MissingResource(f"Reference to undeclared {ref}", position)
        try:
            rtype = ResourceType(ref.rtype)
        except ValueError:
            raise UnknownType(
                f"Unknown resource type in reference {ref}", position
            ) from None
        vertex = f"{rtype.reference_name}[{ref.title}]"
        if vertex not in self.declared:
            raise MissingResource(f"Reference to undeclared {ref}", position)
        return [vertex]

    def edges(self) -> set[tuple[str, str]]:
        edges: set[tuple[str, str]] = set()
        for pending in self.pending:
            sources = self.resolve(pending.source, pending.position)
            targets = self.resolve(pending.target, pending.position)
            edges.update(
                (source, target)
                for source in sources
                for target in targets
                if source != target
            )
        # an explicit edge in the other direction wins over the implicit one
        edges.update(
            (parent, child)
            for parent, child in self.auto_requires()
            if (child, parent) not in edges
        )
        return edges

    def auto_requires(self) -> set[tuple[str, str]]:
        files: dict[Path, str] = {}
        for vertex, declared in self.declared.items():
            resource = declared.resource
            if resource.rtype is not ResourceType.file:
                continue
            try:
                files[Path.parse(str(resource.get("path", resource.title)))] = vertex
            except InvalidPath:
                continue

        return {
            (files[path.parent], vertex)
            for path, vertex in files.items()
            if not path.is_root and path.parent in files
        }


def expand(manifest: Manifest) -> ResourceGraph:
    """
    Expand ``manifest`` into its resource graph.

    :raises ExpansionError: on duplicate or unknown resources, unbound variables,
      bad define parameters and recursive defines.
    :raises DependencyCycle: if the dependencies are cyclic.
    """
    defines: dict[str, DefineDecl] = {}
    for define in manifest.defines:
        if define.name in defines:
            raise DuplicateResource(
                f"Duplicate define '{define.name}'", define.position
            )
        if define.name in ResourceType:
            raise InvalidParameter(
                f"Cannot redefine built-in type '{define.name}'", define.position
            )
        defines[define.name] = define

    expander = _Expander(defines=defines)
    expander.expand_items(manifest.items, env={})
    edges = expander.edges()
    graph = ResourceGraph.build(
        (declared.resource for declared in expander.declared.values()), edges
    )
    logger.info(
        "manifest_expanded", resources=len(graph), dependencies=len(graph.edges)
    )
    return graph
