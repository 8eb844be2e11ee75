"""A workbench for writing, simulating, and analyzing hybrid programs.

Programs mix instantaneous discrete statements with blocks of ordinary
differential equations. Array initializers expand one program into a
family of runs; histogram queries count, over time, how many runs
satisfy a predicate.
"""

from .analysis import (
    Bin,
    HistogramQuery,
    HistogramResult,
    build_histogram,
    evaluate_at,
    parse_query,
)
from .dynamics import (
    OdeSystem,
    Sample,
    Trajectory,
    integrate_for,
    integrate_until,
)
from .errors import (
    BatchCapError,
    ConfigError,
    EvalError,
    HysimError,
    LexError,
    ParseError,
    QueryParseError,
    RangeError,
    StructureError,
    TypeCheckError,
    UndefinedVariable,
    ZeroTimeProgress,
)
from .interp import COMPLETED, FAILED, HALTED, RunResult, SimConfig, run
from .lang import (
    Program,
    ast_dump,
    eval_expr,
    expand_range,
    parse,
    parse_expression,
    pretty_print,
    tokenize,
)
from .multirun import VariantSet, expand_variants, instantiate, run_all

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # language
    "Program", "tokenize", "parse", "parse_expression", "expand_range",
    "pretty_print", "ast_dump",
    # dynamics
    "OdeSystem", "Sample", "Trajectory", "integrate_for", "integrate_until",
    # interpretation
    "SimConfig", "RunResult", "run", "eval_expr",
    "COMPLETED", "HALTED", "FAILED",
    # batches
    "VariantSet", "expand_variants", "instantiate", "run_all",
    # analysis
    "HistogramQuery", "HistogramResult", "Bin", "parse_query",
    "evaluate_at", "build_histogram",
    # errors
    "HysimError", "LexError", "ParseError", "TypeCheckError",
    "StructureError", "RangeError", "EvalError", "UndefinedVariable",
    "ZeroTimeProgress", "ConfigError", "QueryParseError", "BatchCapError",
]
