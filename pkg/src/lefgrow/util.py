"""Shared plumbing: deterministic work pools, budgets, small helpers."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

DEFAULT_SEED = 1729

BUDGET_ENV = "LEFGROW_BUDGET_MS"


class BudgetExceeded(RuntimeError):
    """A configured size or time budget was exhausted."""


class CertificateError(RuntimeError):
    """An internally produced certificate failed re-verification.

    This always indicates a bug in the producing code path, never bad input.
    """


@dataclass
class Budget:
    """Wall-clock budget with explicit checkpoints.

    A budget of None milliseconds never expires.  Checkpoints are cheap and
    meant to be sprinkled into long searches.
    """

    ms: int | None = None
    _t0: float = 0.0

    def __post_init__(self):
        self._t0 = time.monotonic()
        if self.ms is not None and self.ms <= 0:
            raise ValueError("budget must be positive")

    def check(self, what: str = "computation"):
        if self.ms is None:
            return
        if (time.monotonic() - self._t0) * 1000.0 > self.ms:
            raise BudgetExceeded(f"{what} exceeded {self.ms} ms budget")


def budget_from_env() -> Budget:
    raw = os.environ.get(BUDGET_ENV, "").strip()
    if not raw:
        return Budget(None)
    return Budget(int(raw))


def ordered_map(fn, items, threads: int = 1) -> list:
    """Map fn over items, preserving order.

    With threads > 1 the work fans out over a thread pool; results come back
    in submission order, so any reduction over them is schedule-independent.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
