"""Mass simulation of machine spaces into a :class:`CountsTable`.

Each ``n`` is split into work units: contiguous rank intervals in full mode,
fixed-size blocks of seeded random indices in sample mode. Units are
processed in order (in a process pool when ``workers > 1``) and folded into
the table as they complete, so the result does not depend on the worker
count and a checkpoint is just the table plus how far each ``n`` got.
"""
from __future__ import annotations

import hashlib
import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator, Optional

from ._backend import get_kernel
from .counts import Checkpoint, CountsTable, ExplorationPlan, PlanError, save_checkpoint
from .machines import machine_count

log = logging.getLogger(__name__)

CHUNK_SIZE = 1 << 16
SAMPLE_BLOCK = 1 << 14


def split_range(lo: int, hi: int, parts: int) -> list[range]:
    size, extra = divmod(hi - lo, parts)
    out = []
    start = lo
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0)
        out.append(range(start, stop))
        start = stop
    return out


def partition_ranks(n: int, workers: int) -> list[range]:
    """Split ``0..machine_count(n)-1`` into ``workers`` contiguous ranges whose sizes differ by at most one."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return split_range(0, machine_count(n), workers)


def sample_block_indices(seed: int, n: int, block: int, size: int) -> list[int]:
    """Uniform indices of ``(n,2)`` for one sample block; fixed by ``(seed, n, block)``."""
    digest = hashlib.sha256(f"ctm-sample:{seed}:{n}:{block}".encode()).digest()
    rng = random.Random(int.from_bytes(digest, "big"))
    count = machine_count(n)
    return [rng.randrange(count) for _ in range(size)]


def _run_unit(unit: tuple):
    kind, n, cutoff, blanks, prefilter, kernel_name = unit[:6]
    kernel = get_kernel(kernel_name)
    if kind == "range":
        lo, hi = unit[6:]
        return kernel.scan_range(n, lo, hi, cutoff, blanks, prefilter)
    seed, block, size = unit[6:]
    indices = sample_block_indices(seed, n, block, size)
    return kernel.scan_indices(n, indices, cutoff, blanks, prefilter)


def _units(plan: ExplorationPlan, n: int, start: int, workers: int, kernel_name: str) -> Iterator[tuple[tuple, int]]:
    """Yield ``(unit, progress_after_unit)`` for the remaining work of ``n``."""
    cutoff = plan.cutoff(n)
    if plan.mode(n) == "full":
        blanks = (0,) if plan.use_blank_symmetry else (0, 1)
        end = machine_count(n)
        remaining = end - start
        if remaining <= 0:
            return
        parts = max(workers, -(-remaining // CHUNK_SIZE))
        for r in split_range(start, end, min(parts, remaining)):
            yield ("range", n, cutoff, blanks, plan.prefilter, kernel_name, r.start, r.stop), r.stop
    else:
        total = plan.samples_for(n)
        if start >= total:
            return
        # Sample progress is always a multiple of the block size, except at the end.
        block = start // SAMPLE_BLOCK
        done = block * SAMPLE_BLOCK
        while done < total:
            size = min(SAMPLE_BLOCK, total - done)
            yield ("sample", n, cutoff, (0, 1), plan.prefilter, kernel_name, plan.seed, block, size), done + size
            done += size
            block += 1


_COMPLEMENT = str.maketrans("01", "10")


def _absorb(table: CountsTable, n: int, result, derive_blank1: bool) -> None:
    counts, examined, halted = result
    for (blank, s), c in counts.items():
        table.add(n, blank, s, c)
        if derive_blank1:
            table.add(n, 1, s.translate(_COMPLEMENT), c)
    for b in (0, 1):
        table.examined[(n, b)] += examined[b]
        table.halted[(n, b)] += halted[b]
    if derive_blank1:
        table.examined[(n, 1)] += examined[0]
        table.halted[(n, 1)] += halted[0]


def explore(
    plan: ExplorationPlan,
    workers: int = 1,
    *,
    resume: Optional[Checkpoint] = None,
    checkpoint_path: Optional[os.PathLike | str] = None,
    on_checkpoint: Optional[Callable[[Checkpoint], None]] = None,
    kernel: str = "auto",
) -> CountsTable:
    """Simulate every machine the plan asks for and tabulate the halting outputs.

    Machines that run past ``plan.cutoff(n)`` are counted as examined but
    not halted. With ``use_blank_symmetry`` full-mode spaces run only on
    blank 0 and the blank-1 rows are the complemented outputs.

    After each completed unit the partial result is written to
    ``checkpoint_path`` (if given) and passed to ``on_checkpoint``.
    """
    if workers < 1:
        raise PlanError("workers must be >= 1")
    digest = plan.digest()
    if resume is not None:
        if resume.plan_digest != digest or resume.table.plan != plan:
            raise PlanError("checkpoint was made under a different plan")
        table = resume.table.copy()
        progress = dict(resume.progress)
    else:
        table = CountsTable.empty(plan)
        progress = {}

    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for n in range(1, plan.max_states + 1):
            start = progress.get(n, 0)
            derive = plan.mode(n) == "full" and plan.use_blank_symmetry
            units = list(_units(plan, n, start, workers, kernel))
            if not units:
                progress[n] = max(start, plan.work_size(n))
                continue
            log.info("n=%d: %d units from %d", n, len(units), start)
            work = [u for u, _ in units]
            results = executor.map(_run_unit, work) if executor else map(_run_unit, work)
            for (_, after), result in zip(units, results):
                _absorb(table, n, result, derive)
                progress[n] = after
                snapshot = table.copy() if on_checkpoint is not None else table
                ck = Checkpoint(digest, dict(progress), snapshot)
                if checkpoint_path is not None:
                    save_checkpoint(ck, checkpoint_path)
                if on_checkpoint is not None:
                    on_checkpoint(ck)
    finally:
        if executor is not None:
            executor.shutdown(wait=True, cancel_futures=True)
    return table
