"""
The outcomes of the checks.

Counterexamples carry everything needed to replay them: the input filesystem, the
orderings and the results concrete evaluation produced for them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from pydantic import BaseModel

from manifest_verifier.frontend.graph import ResourceGraph
from manifest_verifier.fsir.filesystem import EvalResult, FileSystem

__all__ = [
    "AnalysisError",
    "Deterministic",
    "Idempotent",
    "InvariantHolds",
    "InvariantViolated",
    "NonDeterministic",
    "NonIdempotent",
    "Statistics",
    "Verdict",
]


class Statistics(BaseModel):
    """
    Counters of one check, filled in as the pipeline runs.
    """

    vertices: int = 0
    eliminated: int = 0
    pruned_paths: int = 0
    tracked_paths_before: int = 0
    tracked_paths_after: int = 0
    domain_paths: int = 0
    branches: int = 0
    final_states: int = 0
    queries: int = 0
    #: set when a counterexample only replayed with the analyses disabled
    analyses_disabled: bool = False


@dataclass(frozen=True)
class Deterministic:
    #: the graph shown to be deterministic, which may then be linearized
    graph: ResourceGraph = field(repr=False, compare=False)
    stats: Statistics = field(default_factory=Statistics, kw_only=True, compare=False)

    kind = "deterministic"


@dataclass(frozen=True)
class NonDeterministic:
    input: FileSystem
    ordering_a: tuple[str, ...]
    ordering_b: tuple[str, ...]
    result_a: EvalResult
    result_b: EvalResult
    stats: Statistics = field(default_factory=Statistics, kw_only=True, compare=False)

    kind = "non-deterministic"


@dataclass(frozen=True)
class Idempotent:
    stats: Statistics = field(default_factory=Statistics, kw_only=True, compare=False)

    kind = "idempotent"


@dataclass(frozen=True)
class NonIdempotent:
    input: FileSystem
    #: the results of applying the manifest once and twice
    first_run: EvalResult
    second_run: EvalResult
    stats: Statistics = field(default_factory=Statistics, kw_only=True, compare=False)

    kind = "non-idempotent"


@dataclass(frozen=True)
class InvariantHolds:
    stats: Statistics = field(default_factory=Statistics, kw_only=True, compare=False)

    kind = "invariant-holds"


@dataclass(frozen=True)
class InvariantViolated:
    input: FileSystem
    result: EvalResult
    stats: Statistics = field(default_factory=Statistics, kw_only=True, compare=False)

    kind = "invariant-violated"


@dataclass(frozen=True)
class AnalysisError:
    """
    No verdict: the solver failed or a budget ran out.
    """

    error: str
    detail: str
    stats: Statistics = field(default_factory=Statistics, kw_only=True, compare=False)

    kind = "analysis-error"


type Verdict = (
    Deterministic
    | NonDeterministic
    | Idempotent
    | NonIdempotent
    | InvariantHolds
    | InvariantViolated
    | AnalysisError
)
