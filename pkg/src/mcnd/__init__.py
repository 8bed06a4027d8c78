"""Log-determinant of large dense matrices via matrix condensation, with a
block-distributed parallel runtime and exact communication accounting."""

from .condense import (
    CondenseState,
    LogDet,
    PivotChoice,
    SINGULAR,
    SingularRowError,
    condense_once_reference,
    condense_step,
    logdet_condensation,
    select_pivot,
)
from .gauss import det_cofactor, logdet_lu
from .matrix import (
    FormatError,
    GENERATOR_KINDS,
    MatrixSpec,
    as_matrix,
    generate,
    read_matrix,
    read_matrix_csv,
    swap_columns,
    write_matrix,
    write_matrix_csv,
)
from .runtime import (
    CommStats,
    RunResult,
    WorkerPlan,
    ge_parallel,
    mc_parallel,
    plan_blocks,
)

__all__ = [
    "CondenseState",
    "LogDet",
    "PivotChoice",
    "SINGULAR",
    "SingularRowError",
    "condense_once_reference",
    "condense_step",
    "logdet_condensation",
    "select_pivot",
    "det_cofactor",
    "logdet_lu",
    "FormatError",
    "GENERATOR_KINDS",
    "MatrixSpec",
    "as_matrix",
    "generate",
    "read_matrix",
    "read_matrix_csv",
    "swap_columns",
    "write_matrix",
    "write_matrix_csv",
    "CommStats",
    "RunResult",
    "WorkerPlan",
    "ge_parallel",
    "mc_parallel",
    "plan_blocks",
]
