"""Downset sizes in the right weak order and the census |B(W)|.

|B(W)| = sum over x of d(x) * 2^|Pi cap x.Pi| where d(x) counts the weak
interval below x.  d is computed by a brute containment scan: elements are
id-ordered by length, so for each x only the prefix with l(u) <= l(x) is
tested, one AND-compare per pair.  The scan is compiled with numba and
partitioned by x across threads; every d(x) is written independently, so
counts do not depend on the thread count.

A definitional backend (no bitsets, pure length arithmetic) exists for
cross-checking on small groups.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass

import numba
import numpy as np

from .rootsys import CartanMatrix, build_root_system
from .weylgroup import GroupTable, enumerate_group, leq_weak_matrix, pi_cap_xpi_masks

_CHUNK = 32768


@dataclass(frozen=True)
class DownsetVector:
    """d(x) = |{u : u <=_R x}| for every element id x."""

    values: np.ndarray
    method: str

    def __getitem__(self, x: int) -> int:
        return int(self.values[x])

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class CensusRow:
    label: str
    group_order: int
    b_count: int
    elapsed_ms: int


@numba.njit(parallel=True, cache=True)
def _containment_counts(inv, hi, lo_x, hi_x, out):  # pragma: no cover - compiled
    for x in numba.prange(lo_x, hi_x):
        target = ~inv[x]
        limit = hi[x]
        cnt = 0
        for u in range(limit):
            if inv[u] & target == 0:
                cnt += 1
        out[x] = cnt


def _clamp_threads(threads) -> int:
    available = numba.config.NUMBA_NUM_THREADS
    if threads is None:
        return available
    return max(1, min(int(threads), available))


def downset_sizes(
    table: GroupTable,
    method: str = "bitset",
    threads: int | None = None,
    progress_interval: float | None = None,
) -> DownsetVector:
    """Count the weak-order downset of every element.

    method "bitset" runs the compiled containment scan; "definitional"
    recomputes every d(x) from the length identity alone and is meant for
    cross-checks on small groups.
    """
    if method == "definitional":
        values = leq_weak_matrix(table, "definitional").sum(axis=0).astype(np.int64)
        return DownsetVector(values, method)
    if method != "bitset":
        raise ValueError(f"unknown downset method {method!r}")

    n = table.size
    # ids are length-sorted, so the candidates u with l(u) <= l(x) form
    # the prefix ending at hi[x].
    hi = np.searchsorted(table.length, table.length, side="right").astype(np.int64)
    inv = np.ascontiguousarray(table.inv)
    out = np.zeros(n, dtype=np.int64)
    numba.set_num_threads(_clamp_threads(threads))
    started = time.perf_counter()
    last_report = started
    for lo_x in range(0, n, _CHUNK):
        hi_x = min(lo_x + _CHUNK, n)
        _containment_counts(inv, hi, lo_x, hi_x, out)
        now = time.perf_counter()
        if progress_interval is not None and now - last_report >= progress_interval:
            print(
                f"{table.rs.cartan.label}: scanned {hi_x}/{n} elements "
                f"({now - started:.1f}s)",
                file=sys.stderr,
                flush=True,
            )
            last_report = now
    return DownsetVector(out, method)


def count_BW(
    table: GroupTable,
    threads: int | None = None,
    progress_interval: float | None = None,
) -> int:
    """|B(W)| = sum of d(x) * 2^|Pi cap x.Pi|, 64-bit exact."""
    d = downset_sizes(table, "bitset", threads, progress_interval).values
    widths = np.bitwise_count(pi_cap_xpi_masks(table)).astype(np.int64)
    # d(x) <= |W| and widths <= rank; abort rather than wrap.
    peak = int(d.max()) << int(widths.max())
    if peak >= (1 << 62) // max(table.size, 1):
        raise OverflowError("census sum would overflow 64-bit accumulation")
    total = int(np.sum(d << widths))
    if total < table.size:
        raise AssertionError("census total fell below the group order")
    return total


def census_run(
    labels,
    threads: int | None = None,
    progress_interval: float | None = None,
    order_cap: int | None = None,
):
    """Count |B(W)| for each requested type.

    Returns (rows, failures): one CensusRow per successful label in input
    order, and (label, message) for each failure.  A failing label never
    stops the remaining ones.
    """
    rows: list[CensusRow] = []
    failures: list[tuple[str, str]] = []
    for item in labels:
        cartan = item if isinstance(item, CartanMatrix) else None
        label = item.label if cartan is not None else str(item)
        started = time.perf_counter()
        try:
            if cartan is None:
                cartan = CartanMatrix.from_label(label)
            rs = build_root_system(cartan)
            kwargs = {} if order_cap is None else {"order_cap": order_cap}
            table = enumerate_group(rs, **kwargs)
            count = count_BW(table, threads, progress_interval)
        except Exception as exc:  # keep going; report at the end
            failures.append((label, f"{type(exc).__name__}: {exc}"))
            continue
        elapsed_ms = int(round((time.perf_counter() - started) * 1000))
        rows.append(CensusRow(label, table.size, count, elapsed_ms))
    return rows, failures


CSV_HEADER = "type,group_order,b_count,elapsed_ms"


def csv_lines(rows) -> list[str]:
    """CSV payload: fixed header, exact integers, no locale formatting."""
    out = [CSV_HEADER]
    out.extend(f"{r.label},{r.group_order},{r.b_count},{r.elapsed_ms}" for r in rows)
    return out
