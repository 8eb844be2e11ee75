"""Variant expansion and deterministic batch execution.

Array initializers at the top of a program each contribute one sweep
dimension; the batch is their Cartesian product, enumerated with the
last-declared dimension varying fastest. Results always come back in
binding order, whatever the degree of parallelism.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import BatchCapError, StructureError
from .interp import RunResult, SimConfig, run
from .lang import Assign, AssignVariants, Num, Program, Seq

__all__ = ["VariantSet", "expand_variants", "instantiate", "run_all",
           "DEFAULT_MAX_RUNS"]

DEFAULT_MAX_RUNS = 10_000


@dataclass(frozen=True)
class VariantSet:
    """All concrete bindings produced by a program's array initializers."""

    dimensions: tuple[tuple[str, tuple[float, ...]], ...]
    bindings: tuple[dict[str, float], ...]
    stmt_indices: tuple[int, ...] = field(default=(), repr=False)

    def __len__(self) -> int:
        return len(self.bindings)


def expand_variants(program: Program) -> tuple[VariantSet, Program]:
    """Split a program into its sweep dimensions and a concrete template.

    The template carries a plain assignment in place of each array
    initializer; instantiate() substitutes one binding's values into it.
    A program with no arrays yields a single empty binding.
    """
    dimensions: list[tuple[str, tuple[float, ...]]] = []
    indices: list[int] = []
    stmts = list(program.body.stmts)
    seen: set[str] = set()
    for i, stmt in enumerate(stmts):
        if isinstance(stmt, AssignVariants):
            if stmt.name in seen:
                raise StructureError(
                    f"variable '{stmt.name}' has two array initializers",
                    stmt.pos)
            seen.add(stmt.name)
            dimensions.append((stmt.name, stmt.values))
            indices.append(i)
            stmts[i] = Assign(stmt.name, Num(stmt.values[0]), stmt.pos)

    names = [name for name, _ in dimensions]
    bindings = tuple(
        dict(zip(names, combo))
        for combo in itertools.product(*(vals for _, vals in dimensions)))
    variants = VariantSet(tuple(dimensions), bindings, tuple(indices))
    template = Program(Seq(tuple(stmts), program.body.pos), program.source)
    return variants, template


def instantiate(template: Program, variants: VariantSet,
                index: int) -> Program:
    """The concrete program for binding `index`."""
    binding = variants.bindings[index]
    stmts = list(template.body.stmts)
    for stmt_index, (name, _) in zip(variants.stmt_indices,
                                     variants.dimensions):
        stmts[stmt_index] = Assign(name, Num(binding[name]),
                                   stmts[stmt_index].pos)
    return Program(Seq(tuple(stmts), template.body.pos), template.source)


def run_all(program: Program, config: SimConfig, *, workers: int = 1,
            max_runs: int = DEFAULT_MAX_RUNS,
            allow_large: bool = False) -> list[RunResult]:
    """Execute every variant; one RunResult per binding, in binding order.

    A failing run is recorded in its result and never aborts the batch.
    Exceeding max_runs raises BatchCapError unless allow_large is set.
    """
    variants, template = expand_variants(program)
    if len(variants) > max_runs and not allow_large:
        raise BatchCapError(
            f"{len(variants)} runs exceed the cap of {max_runs}; "
            f"pass allow_large to override")

    def one(index: int) -> RunResult:
        concrete = instantiate(template, variants, index)
        return run(concrete, config, variant=variants.bindings[index],
                   run_index=index)

    indices = range(len(variants))
    if workers <= 1:
        return [one(i) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, indices))
