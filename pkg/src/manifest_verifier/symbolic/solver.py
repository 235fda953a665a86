"""
Running SMT-LIB 2 queries in an external solver process.

Every query gets its own process, fed over standard input. The script is sent
in one go, followed by ``get-value`` for the requested constants when the
answer is ``sat``. A watchdog kills the process when the timeout expires.
"""

from __future__ import annotations

import shlex
import subprocess
import threading
import time
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path as FilePath

import structlog

from manifest_verifier.conf import settings
from manifest_verifier.utils.sexpr import SExpr, SExprSyntaxError, Symbol, read_one

from .exceptions import SolverFailure, SolverTimeout
from .smtlib import SmtScript

__all__ = [
    "CheckResult",
    "Sat",
    "Solver",
    "SolverConfig",
    "SolverSession",
    "Unsat",
]

logger = structlog.stdlib.get_logger(__name__)

FALLBACK_LOGIC = "ALL"


@dataclass(frozen=True)
class SolverConfig:
    path: str
    args: tuple[str, ...] = ("-in",)
    timeout: float = 300
    logic: str = "QF_DT"
    emit_dir: FilePath | None = None
    stem: str = "query"

    @classmethod
    def from_settings(cls, **overrides) -> SolverConfig:
        config = cls(
            path=settings.SOLVER_PATH,
            args=tuple(shlex.split(settings.SOLVER_ARGS)),
            timeout=settings.SOLVER_TIMEOUT,
            logic=settings.SMT_LOGIC,
        )
        return replace(config, **overrides)


@dataclass(frozen=True)
class Sat:
    values: Mapping[str, SExpr] = field(default_factory=dict)


@dataclass(frozen=True)
class Unsat:
    pass


type CheckResult = Sat | Unsat


class _ScriptRejected(SolverFailure):
    pass


def _paren_depth(text: str) -> int:
    depth, in_string = 0, False
    for char in text:
        if char == '"':
            in_string = not in_string
        elif not in_string and char == "(":
            depth += 1
        elif not in_string and char == ")":
            depth -= 1
    return depth


class SolverSession:
    """
    One solver process. Not shared between queries.
    """

    def __init__(self, config: SolverConfig):
        self.config = config
        self._timed_out = False
        try:
            self._process = subprocess.Popen(
                [config.path, *config.args],
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                encoding="utf-8",
            )
        except OSError as err:
            raise SolverFailure(
                f"Could not start the solver '{config.path}': {err.strerror}."
            ) from err
        self._watchdog = threading.Timer(config.timeout, self._expire)
        self._watchdog.daemon = True
        self._watchdog.start()

    def __enter__(self) -> SolverSession:
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _expire(self) -> None:
        self._timed_out = True
        self._process.kill()

    def send(self, text: str) -> None:
        assert self._process.stdin is not None
        try:
            self._process.stdin.write(text)
            self._process.stdin.flush()
        except OSError as err:
            raise self._failure("the solver stopped reading its input") from err

    def _failure(self, reason: str) -> SolverFailure:
        if self._timed_out:
            return SolverTimeout(self.config.timeout)
        return SolverFailure(f"Solver failure: {reason}.")

    def read_response(self) -> str:
        """
        Read one response: a bare word or a balanced parenthesized expression.
        """
        assert self._process.stdout is not None
        lines: list[str] = []
        while True:
            line = self._process.stdout.readline()
            if not line:
                raise self._failure(
                    f"the solver exited with status {self._process.poll()}"
                )
            if not line.strip() and not lines:
                continue
            lines.append(line)
            if _paren_depth("".join(lines)) <= 0:
                return "".join(lines).strip()

    def check_sat(self, script: str) -> str:
        """
        Send a script ending in ``check-sat`` and return ``sat`` or ``unsat``.

        :raises _ScriptRejected: if the solver reported errors before answering.
        """
        self.send(script)
        errors: list[str] = []
        while True:
            response = self.read_response()
            if response in ("sat", "unsat"):
                break
            if response == "unknown":
                raise self._failure("the solver answered 'unknown'")
            errors.append(response)
        if errors:
            raise _ScriptRejected(f"The solver rejected the script: {errors[0]}")
        return response

    def get_values(self, names: Sequence[str]) -> dict[str, SExpr]:
        if not names:
            return {}
        self.send(f"(get-value ({' '.join(names)}))\n")
        response = self.read_response()
        try:
            pairs = read_one(response)
        except SExprSyntaxError as err:
            raise self._failure(f"unreadable model {response!r}") from err
        if not isinstance(pairs, tuple):
            raise self._failure(f"unexpected model {response!r}")
        values: dict[str, SExpr] = {}
        for pair in pairs:
            match pair:
                case (Symbol(name), value):
                    values[name] = value
        if set(values) != set(names):
            raise self._failure(f"unexpected model {response!r}")
        return values

    def close(self) -> None:
        self._watchdog.cancel()
        if self._process.poll() is None:
            try:
                self.send("(exit)\n")
                self._process.wait(timeout=1)
            except (SolverFailure, subprocess.TimeoutExpired):
                self._process.kill()
                self._process.wait()
        for stream in (self._process.stdin, self._process.stdout):
            if stream is not None:
                stream.close()


class Solver:
    """
    Runs queries, one session each, counting them and optionally writing every
    script to ``config.emit_dir``.
    """

    def __init__(self, config: SolverConfig | None = None):
        self.config = config or SolverConfig.from_settings()
        self.queries = 0

    def _emit(self, text: str, kind: str) -> None:
        if self.config.emit_dir is None:
            return
        self.config.emit_dir.mkdir(parents=True, exist_ok=True)
        target = (
            self.config.emit_dir / f"{self.config.stem}-{kind}-{self.queries:03d}.smt2"
        )
        target.write_text(text, encoding="utf-8")
        logger.debug("smt_script_emitted", path=str(target))

    def _run(
        self, script: SmtScript, values: Sequence[str], logic: str
    ) -> tuple[CheckResult, str]:
        try:
            with SolverSession(self.config) as session:
                answer = session.check_sat(script.render(logic))
                if answer == "unsat":
                    return Unsat(), answer
                return Sat(values=session.get_values(values)), answer
        except _ScriptRejected as err:
            if logic == FALLBACK_LOGIC:
                raise SolverFailure(err.message) from err
            logger.warning("solver_script_rejected", logic=logic, reason=err.message)
            return self._run(script, values, FALLBACK_LOGIC)

    def check(self, script: SmtScript, values: Sequence[str] = ()) -> CheckResult:
        """
        Check the script, returning the values of ``values`` when it is satisfiable.
        """
        self.queries += 1
        self._emit(script.render(self.config.logic), script.kind)
        start = time.monotonic()
        result, answer = self._run(script, values, self.config.logic)
        logger.info(
            "solver_query_finished",
            kind=script.kind,
            query=self.queries,
            result=answer,
            duration=round(time.monotonic() - start, 3),
        )
        return result
