"""Per-iteration solver traces and their CSV serialization.

The CSV schema is fixed: header ``k,F,gap,dist,L,alpha,gamma,lambda,
grad_calls,prox_calls,sec`` with floats printed to 17 significant digits so
a re-parse reproduces them bit-exactly.  ``sigma`` is carried in memory for
certificate checks but is not part of the wire format.
"""

import math
from dataclasses import dataclass, field
from typing import Any

CSV_HEADER = "k,F,gap,dist,L,alpha,gamma,lambda,grad_calls,prox_calls,sec"


@dataclass
class TracePoint:
    k: int
    F: float
    gap: float
    dist: float
    L: float
    alpha: float
    gamma: float
    lam: float
    grad_calls: int
    prox_calls: int
    sec: float
    sigma: float = field(default=math.nan, compare=False)


Trace = list  # list[TracePoint]


@dataclass
class SolveResult:
    """What a solver run returns: the final iterate and its trace."""

    x: Any
    trace: list
    converged: bool
    iterations: int
    counters: Any
    state: Any = None


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def emit_trace_csv(trace, path) -> None:
    """Write one CSV row per iteration; error on an empty trace."""
    if not trace:
        raise ValueError("refusing to write an empty trace")
    lines = [CSV_HEADER]
    for pt in trace:
        lines.append(",".join([
            str(pt.k), _fmt(pt.F), _fmt(pt.gap), _fmt(pt.dist), _fmt(pt.L),
            _fmt(pt.alpha), _fmt(pt.gamma), _fmt(pt.lam),
            str(pt.grad_calls), str(pt.prox_calls), _fmt(pt.sec),
        ]))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace_csv(path):
    """Parse a trace CSV back into TracePoints (sigma is not serialized)."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected trace header: {header!r}")
        out = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            c = line.split(",")
            out.append(TracePoint(
                k=int(c[0]), F=float(c[1]), gap=float(c[2]), dist=float(c[3]),
                L=float(c[4]), alpha=float(c[5]), gamma=float(c[6]),
                lam=float(c[7]), grad_calls=int(c[8]), prox_calls=int(c[9]),
                sec=float(c[10])))
    return out
