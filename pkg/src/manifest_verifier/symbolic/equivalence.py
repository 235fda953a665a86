"""
Equivalence and divergence queries, and decoding of solver models into concrete
filesystems.
"""

from __future__ import annotations

from collections.abc import Collection, Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import assert_never

import structlog

from manifest_verifier.fsir.evaluation import evaluate
from manifest_verifier.fsir.exceptions import TreeClosureViolation
from manifest_verifier.fsir.filesystem import DIR, File, FileContent, FileSystem
from manifest_verifier.fsir.paths import Path
from manifest_verifier.fsir.syntax import FsExpr
from manifest_verifier.utils.sexpr import SExpr, Symbol

from .domain import content_alphabet, dom_bound
from .encoding import Encoder, LogicalState
from .exceptions import DecodingFailure
from .smtlib import NODE_SORT, Term, and_, eq, not_, or_
from .solver import Sat, Solver

__all__ = [
    "Divergence",
    "Equiv",
    "EquivResult",
    "Inequiv",
    "check_equiv",
    "check_sat_witness",
    "decode_model",
    "equivalence_query",
    "find_divergence",
]

logger = structlog.stdlib.get_logger(__name__)


@dataclass(frozen=True)
class Equiv:
    pass


@dataclass(frozen=True)
class Inequiv:
    witness: FileSystem


type EquivResult = Equiv | Inequiv


class Divergence(StrEnum):
    #: two successful runs end in different filesystems
    STATE = "state"
    #: one run succeeds and another fails
    OK = "ok"


def _unwrap(value: SExpr) -> SExpr:
    # some solvers print constructors as ``(as c_0 Content)``
    match value:
        case (Symbol("as"), inner, _):
            return _unwrap(inner)
        case _:
            return value


def _decode_node(value: SExpr, contents: Sequence[str]) -> FileContent | None:
    match _unwrap(value):
        case Symbol("dir"):
            return DIR
        case Symbol("dne"):
            return None
        case (Symbol("file"), content):
            match _unwrap(content):
                case Symbol(name) if name.startswith("c_"):
                    index = int(name.removeprefix("c_"))
                    if index < len(contents):
                        return File(contents[index])
    raise DecodingFailure(f"Unexpected value {value!r} in the solver model.")


def decode_model(values: Mapping[str, SExpr], encoder: Encoder) -> FileSystem:
    """
    Turn the model values of the input constants into a filesystem.

    :raises DecodingFailure: if a value cannot be read or the result is not a tree.
    """
    entries: dict[Path, FileContent] = {}
    for path, name in encoder.inputs.items():
        try:
            value = values[name]
        except KeyError:
            raise DecodingFailure(f"The model has no value for {name}.") from None
        if (node := _decode_node(value, encoder.contents)) is not None:
            entries[path] = node
    try:
        return FileSystem(entries)
    except TreeClosureViolation as err:
        raise DecodingFailure(
            f"The solver model is not a tree: {err.message}"
        ) from err


def check_sat_witness(
    encoder: Encoder, solver: Solver, kind: str, assertions: Iterable[Term]
) -> FileSystem | None:
    """
    Look for an input satisfying ``assertions``; ``None`` when there is none.
    """
    script = encoder.script(kind, assertions)
    result = solver.check(script, values=script.input_names)
    match result:
        case Sat(values):
            return decode_model(values, encoder)
        case _:
            return None


def _pivot_divergence(encoder: Encoder, states: Sequence[LogicalState]) -> Term:
    # some successful state equals the pivot and another successful one differs
    pivot = {path: encoder.constant(NODE_SORT, "pivot") for path in encoder.domain}
    matches, differs = [], []
    for state in states:
        matches.append(
            and_(state.ok, *(eq(pivot[path], state.fs[path]) for path in pivot))
        )
        differs.append(
            and_(
                state.ok,
                or_(*(not_(eq(pivot[path], state.fs[path])) for path in pivot)),
            )
        )
    return and_(or_(*matches), or_(*differs))


def find_divergence(
    encoder: Encoder,
    states: Sequence[LogicalState],
    solver: Solver,
    divergence: Divergence,
    kind: str = "determinism",
) -> FileSystem | None:
    """
    Look for an input on which two of ``states`` disagree in the given way.
    """
    if len(states) < 2:
        return None
    match divergence:
        case Divergence.STATE if len(states) == 2:
            formula = encoder.states_differ(*states)
        case Divergence.STATE:
            formula = _pivot_divergence(encoder, states)
        case Divergence.OK:
            formula = and_(
                or_(*(state.ok for state in states)),
                or_(*(not_(state.ok) for state in states)),
            )
        case _:  # pragma: no cover
            assert_never(divergence)
    return check_sat_witness(encoder, solver, f"{kind}-{divergence}", [formula])


def equivalence_query(
    e1: FsExpr,
    e2: FsExpr,
    *,
    domain: Collection[Path] = (),
    contents: Collection[str] = (),
) -> tuple[Encoder, Term]:
    """
    Encode "the expressions disagree": one fails and the other does not, or both
    succeed with different results.
    """
    encoder = Encoder(
        dom_bound(e1, e2, extra=domain), content_alphabet(e1, e2, extra=contents)
    )
    initial = encoder.input_state()
    first = encoder.encode_step(e1, initial)
    second = encoder.encode_step(e2, initial)
    formula = or_(
        and_(first.ok, not_(second.ok)),
        and_(second.ok, not_(first.ok)),
        encoder.states_differ(first, second),
    )
    return encoder, formula


def check_equiv(
    e1: FsExpr,
    e2: FsExpr,
    solver: Solver | None = None,
    *,
    domain: Collection[Path] = (),
    contents: Collection[str] = (),
    kind: str = "equivalence",
) -> EquivResult:
    """
    Decide whether ``e1`` and ``e2`` behave the same on every input filesystem.

    The domain and content alphabet are bounded from the expressions and can be
    extended. A witness is replayed before it is returned.

    :raises SolverFailure: if the solver gives no verdict.
    :raises DecodingFailure: if the witness does not separate the expressions.
    """
    encoder, formula = equivalence_query(e1, e2, domain=domain, contents=contents)
    witness = check_sat_witness(encoder, solver or Solver(), kind, [formula])
    if witness is None:
        return Equiv()
    if evaluate(e1, witness) == evaluate(e2, witness):
        logger.error("witness_not_reproduced", kind=kind, witness=repr(witness))
        raise DecodingFailure("The solver witness does not separate the expressions.")
    return Inequiv(witness)
