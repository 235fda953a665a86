import shutil
from unittest import skipUnless

from manifest_verifier.conf import settings

from ..solver import Solver, SolverConfig

SOLVER_BINARY = shutil.which(settings.SOLVER_PATH) or shutil.which("z3")

requires_solver = skipUnless(SOLVER_BINARY, "no SMT-LIB solver binary available")


def make_solver(**overrides) -> Solver:
    assert SOLVER_BINARY is not None
    return Solver(SolverConfig.from_settings(path=SOLVER_BINARY, **overrides))
