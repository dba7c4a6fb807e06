"""Exploration plans, output-frequency tables and their text file format.

A counts file looks like::

    ctm-counts v1
    meta max_states=2
    meta mode.1=full
    ...
    row 1 0 0 6
    row 1 0 1 6
    ...
    end sha256=<hex digest of every preceding line>

Rows are sorted by ``(n, blank, len(output), output)``. Checkpoints use the
same format with extra ``checkpoint.*`` meta keys.
"""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional

from . import __version__
from .machines import machine_count

FORMAT_HEADER = "ctm-counts v1"
U64_MAX = (1 << 64) - 1

DEFAULT_CUTOFFS = {1: 2, 2: 10, 3: 30, 4: 110, 5: 500}
FALLBACK_CUTOFF = 500
# Longest halting run in (n,2), halting transition included.
KNOWN_MAX_STEPS = {1: 1, 2: 6, 3: 21, 4: 107}
FULL_MODE_MAX_STATES = 5


class PlanError(ValueError):
    pass


class CountsFormatError(ValueError):
    pass


class IncompatiblePlansError(ValueError):
    pass


@dataclass(frozen=True)
class ExplorationPlan:
    """What to explore for each ``n`` in ``1..max_states``.

    ``modes``, ``samples`` and ``cutoffs`` are indexed by ``n - 1``;
    ``samples`` is 0 for fully enumerated ``n``.
    """

    max_states: int
    modes: tuple[str, ...]
    samples: tuple[int, ...]
    cutoffs: tuple[int, ...]
    seed: int = 0
    use_blank_symmetry: bool = True
    prefilter: bool = True

    def __post_init__(self) -> None:
        k = self.max_states
        if k < 1:
            raise PlanError("max_states must be >= 1")
        if not len(self.modes) == len(self.samples) == len(self.cutoffs) == k:
            raise PlanError("per-n settings must cover 1..max_states")
        if not 0 <= self.seed <= U64_MAX:
            raise PlanError("seed must fit in 64 bits")
        for n in range(1, k + 1):
            mode, samples, cutoff = self.mode(n), self.samples_for(n), self.cutoff(n)
            if cutoff < 1:
                raise PlanError(f"cutoff for n={n} must be >= 1")
            if mode == "full":
                if n > FULL_MODE_MAX_STATES:
                    raise PlanError(f"full enumeration of ({n},2) is not supported")
                if samples != 0:
                    raise PlanError("samples only apply to sample mode")
            elif mode == "sample":
                if samples < 1:
                    raise PlanError(f"sample mode for n={n} needs samples >= 1")
                if machine_count(n) > U64_MAX:
                    raise PlanError(f"machine indices of ({n},2) exceed 64 bits")
            else:
                raise PlanError(f"unknown mode {mode!r}")

    @classmethod
    def build(
        cls,
        max_states: int,
        mode: str | Mapping[int, str] = "full",
        samples: int | Mapping[int, int] = 0,
        cutoffs: Optional[Mapping[int, int]] = None,
        seed: int = 0,
        use_blank_symmetry: bool = True,
        prefilter: bool = True,
    ) -> "ExplorationPlan":
        ns = range(1, max_states + 1)
        modes = tuple(mode.get(n, "full") if isinstance(mode, Mapping) else mode for n in ns)
        per_samples = tuple(
            (samples.get(n, 0) if isinstance(samples, Mapping) else samples)
            if m == "sample"
            else 0
            for n, m in zip(ns, modes)
        )
        cutoffs = dict(cutoffs or {})
        cuts = tuple(cutoffs.get(n, DEFAULT_CUTOFFS.get(n, FALLBACK_CUTOFF)) for n in ns)
        return cls(max_states, modes, per_samples, cuts, seed, use_blank_symmetry, prefilter)

    def mode(self, n: int) -> str:
        return self.modes[n - 1]

    def cutoff(self, n: int) -> int:
        return self.cutoffs[n - 1]

    def samples_for(self, n: int) -> int:
        return self.samples[n - 1]

    def work_size(self, n: int) -> int:
        """Machines to examine for ``n``: the whole space or the sample count."""
        return machine_count(n) if self.mode(n) == "full" else self.samples_for(n)

    def meta(self) -> list[tuple[str, str]]:
        items = [("max_states", str(self.max_states))]
        for n in range(1, self.max_states + 1):
            items.append((f"mode.{n}", self.mode(n)))
            items.append((f"cutoff.{n}", str(self.cutoff(n))))
            items.append((f"samples.{n}", str(self.samples_for(n))))
        items.append(("seed", str(self.seed)))
        items.append(("blank_symmetry", str(int(self.use_blank_symmetry))))
        items.append(("prefilter", str(int(self.prefilter))))
        return items

    def digest(self) -> str:
        text = "\n".join(f"{k}={v}" for k, v in self.meta())
        return hashlib.sha256(text.encode()).hexdigest()

    def is_exact(self, n: int) -> bool:
        """Full enumeration whose cutoff covers every halting machine."""
        return self.mode(n) == "full" and self.cutoff(n) >= KNOWN_MAX_STEPS.get(n, float("inf"))


def _blank_keys(k: int) -> list[tuple[int, int]]:
    return [(n, b) for n in range(1, k + 1) for b in (0, 1)]


@dataclass
class CountsTable:
    """Halting-computation counts per ``(n, blank, output)`` plus per-space totals."""

    plan: ExplorationPlan
    examined: dict[tuple[int, int], int]
    halted: dict[tuple[int, int], int]
    rows: dict[tuple[int, int, str], int] = field(default_factory=dict)
    tool_version: str = __version__

    @classmethod
    def empty(cls, plan: ExplorationPlan) -> "CountsTable":
        keys = _blank_keys(plan.max_states)
        return cls(plan, dict.fromkeys(keys, 0), dict.fromkeys(keys, 0), {})

    @property
    def max_states(self) -> int:
        return self.plan.max_states

    def count(self, n: int, blank: int, output: str) -> int:
        return self.rows.get((n, blank, output), 0)

    def outputs(self, n: Optional[int] = None) -> set[str]:
        return {s for (m, _, s) in self.rows if n is None or m == n}

    def sorted_rows(self) -> list[tuple[tuple[int, int, str], int]]:
        return sorted(self.rows.items(), key=lambda kv: (kv[0][0], kv[0][1], len(kv[0][2]), kv[0][2]))

    def add(self, n: int, blank: int, output: str, count: int) -> None:
        if count:
            key = (n, blank, output)
            self.rows[key] = self.rows.get(key, 0) + count

    def copy(self) -> "CountsTable":
        return replace(self, examined=dict(self.examined), halted=dict(self.halted), rows=dict(self.rows))


def merge_counts(a: CountsTable, b: CountsTable) -> CountsTable:
    """Pointwise sum of two tables built under the same plan."""
    if a.plan != b.plan:
        raise IncompatiblePlansError("tables come from different plans")
    out = a.copy()
    for key, v in b.examined.items():
        out.examined[key] = out.examined.get(key, 0) + v
    for key, v in b.halted.items():
        out.halted[key] = out.halted.get(key, 0) + v
    for (n, blank, s), v in b.rows.items():
        out.add(n, blank, s, v)
    return out


@dataclass
class Checkpoint:
    """Partial table plus, per ``n``, the next unprocessed rank or the samples done."""

    plan_digest: str
    progress: dict[int, int]
    table: CountsTable

    def done(self, n: int) -> bool:
        return self.progress.get(n, 0) >= self.table.plan.work_size(n)


# -- text format --------------------------------------------------------------


def _render(t: CountsTable, extra: list[tuple[str, str]] = ()) -> str:
    lines = [FORMAT_HEADER]
    meta = list(t.plan.meta())
    for n, b in _blank_keys(t.max_states):
        meta.append((f"examined.{n}.{b}", str(t.examined.get((n, b), 0))))
        meta.append((f"halted.{n}.{b}", str(t.halted.get((n, b), 0))))
    meta.append(("tool_version", t.tool_version))
    meta.extend(extra)
    lines += [f"meta {k}={v}" for k, v in meta]
    for (n, blank, s), c in t.sorted_rows():
        if not 0 < c <= U64_MAX:
            raise CountsFormatError(f"count {c} does not fit an unsigned 64-bit field")
        lines.append(f"row {n} {blank} {s} {c}")
    body = "".join(line + "\n" for line in lines)
    return body + f"end sha256={hashlib.sha256(body.encode()).hexdigest()}\n"


def dumps_counts(t: CountsTable) -> str:
    return _render(t)


def _write_atomic(path: os.PathLike | str, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def save_counts(t: CountsTable, path: os.PathLike | str) -> None:
    _write_atomic(path, _render(t))


def _parse(text: str) -> tuple[CountsTable, dict[str, str]]:
    lines = text.split("\n")
    if not lines or lines[0] != FORMAT_HEADER:
        raise CountsFormatError(f"not a counts file or unsupported version: {lines[0][:40]!r}")
    if lines[-1] != "":
        raise CountsFormatError("file is truncated")
    lines.pop()
    if not lines[-1].startswith("end sha256="):
        raise CountsFormatError("missing checksum trailer")
    body = "".join(line + "\n" for line in lines[:-1])
    if hashlib.sha256(body.encode()).hexdigest() != lines[-1][len("end sha256=") :]:
        raise CountsFormatError("checksum mismatch")

    meta: dict[str, str] = {}
    raw_rows = []
    for lineno, line in enumerate(lines[1:-1], start=2):
        kind, _, rest = line.partition(" ")
        if kind == "meta":
            key, eq, value = rest.partition("=")
            if not eq:
                raise CountsFormatError(f"line {lineno}: malformed meta")
            meta[key] = value
        elif kind == "row":
            parts = rest.split(" ")
            if len(parts) != 4:
                raise CountsFormatError(f"line {lineno}: malformed row")
            raw_rows.append((lineno, parts))
        else:
            raise CountsFormatError(f"line {lineno}: unknown record {kind!r}")

    try:
        k = int(meta["max_states"])
        ns = range(1, k + 1)
        plan = ExplorationPlan(
            k,
            tuple(meta[f"mode.{n}"] for n in ns),
            tuple(int(meta[f"samples.{n}"]) for n in ns),
            tuple(int(meta[f"cutoff.{n}"]) for n in ns),
            int(meta["seed"]),
            bool(int(meta["blank_symmetry"])),
            bool(int(meta["prefilter"])),
        )
        examined = {(n, b): int(meta[f"examined.{n}.{b}"]) for n, b in _blank_keys(k)}
        halted = {(n, b): int(meta[f"halted.{n}.{b}"]) for n, b in _blank_keys(k)}
        version = meta["tool_version"]
    except KeyError as exc:
        raise CountsFormatError(f"missing meta key {exc.args[0]}") from None
    except (ValueError, PlanError) as exc:
        raise CountsFormatError(f"bad meta value: {exc}") from None

    table = CountsTable(plan, examined, halted, {}, version)
    for lineno, (n_s, b_s, s, c_s) in raw_rows:
        try:
            n, blank, c = int(n_s), int(b_s), int(c_s)
        except ValueError:
            raise CountsFormatError(f"line {lineno}: non-integer field") from None
        if not 1 <= n <= k or blank not in (0, 1) or not s or s.strip("01"):
            raise CountsFormatError(f"line {lineno}: row out of shape")
        if not 0 < c <= U64_MAX:
            raise CountsFormatError(f"line {lineno}: count out of range")
        if (n, blank, s) in table.rows:
            raise CountsFormatError(f"line {lineno}: duplicate row")
        table.rows[(n, blank, s)] = c
    return table, meta


def loads_counts(text: str) -> CountsTable:
    return _parse(text)[0]


def load_counts(path: os.PathLike | str) -> CountsTable:
    return loads_counts(Path(path).read_text(encoding="utf-8"))


def save_checkpoint(ck: Checkpoint, path: os.PathLike | str) -> None:
    extra = [("checkpoint.plan_digest", ck.plan_digest)]
    extra += [(f"checkpoint.next.{n}", str(v)) for n, v in sorted(ck.progress.items())]
    _write_atomic(path, _render(ck.table, extra))


def load_checkpoint(path: os.PathLike | str) -> Checkpoint:
    table, meta = _parse(Path(path).read_text(encoding="utf-8"))
    if "checkpoint.plan_digest" not in meta:
        raise CountsFormatError("file is a counts table, not a checkpoint")
    progress = {
        int(key.rsplit(".", 1)[1]): int(v)
        for key, v in meta.items()
        if key.startswith("checkpoint.next.")
    }
    return Checkpoint(meta["checkpoint.plan_digest"], progress, table)
