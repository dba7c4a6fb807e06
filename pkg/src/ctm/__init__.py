"""Algorithmic probability of small two-symbol Turing machines.

Enumerates and simulates the Busy Beaver machine spaces ``(n,2)``, tabulates
their outputs, and turns the tables into the measures ``m_k`` and ``D(k)``
and Coding Theorem complexity estimates ``K(s) = -log2 m_k(s)``.
"""
__version__ = "0.1.0"

from ._backend import BACKEND
from .bounds import bound_report, m_zero, refined_tail_bound, tail_bound
from .codec import Program, TrivialNonHalting, decode_program, decode_stream, encode_program, encoding_length
from .counts import CountsTable, ExplorationPlan, load_counts, merge_counts, save_counts
from .dyadic import DyadicRational
from .explorer import explore, partition_ranks
from .machines import Instruction, Machine, MachineIndex, machine_count, rank, unrank
from .measure import complexity, compute_dk, compute_mk, rank_compare
from .simulate import Exhausted, Halted, SimConfig, simulate

__all__ = [
    "BACKEND",
    "CountsTable",
    "DyadicRational",
    "Exhausted",
    "ExplorationPlan",
    "Halted",
    "Instruction",
    "Machine",
    "MachineIndex",
    "Program",
    "SimConfig",
    "TrivialNonHalting",
    "bound_report",
    "complexity",
    "compute_dk",
    "compute_mk",
    "decode_program",
    "decode_stream",
    "encode_program",
    "encoding_length",
    "explore",
    "load_counts",
    "m_zero",
    "machine_count",
    "merge_counts",
    "partition_ranks",
    "rank",
    "rank_compare",
    "refined_tail_bound",
    "save_counts",
    "simulate",
    "tail_bound",
    "unrank",
]
