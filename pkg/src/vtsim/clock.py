"""Virtual time and the event scheduler.

Time is integer milliseconds, advanced only by the scheduler; nothing in
the simulator reads the wall clock.  Events at equal timestamps run in
scheduling order.
"""

from __future__ import annotations

import heapq
from typing import Callable


class VirtualClock:
    """Monotonic millisecond counter owned by the scheduler."""

    def __init__(self) -> None:
        self.now_ms: int = 0

    def advance_to(self, t_ms: int) -> None:
        if t_ms < self.now_ms:
            raise ValueError(f"clock cannot move back from {self.now_ms} to {t_ms}")
        self.now_ms = t_ms


class Scheduler:
    """Priority queue of timestamped callbacks over a VirtualClock."""

    def __init__(self, clock: VirtualClock) -> None:
        self.clock = clock
        self._heap: list[tuple[int, int, Callable[[], None]]] = []
        self._seq = 0

    def at(self, t_ms: int, fn: Callable[[], None]) -> None:
        """Run fn when the clock reaches t_ms (never before now)."""
        if t_ms < self.clock.now_ms:
            t_ms = self.clock.now_ms
        heapq.heappush(self._heap, (t_ms, self._seq, fn))
        self._seq += 1

    def next_time(self) -> int | None:
        return self._heap[0][0] if self._heap else None

    def run_until(self, horizon_ms: int) -> None:
        """Process every event with timestamp <= horizon, advancing the clock."""
        while self._heap and self._heap[0][0] <= horizon_ms:
            t_ms, _, fn = heapq.heappop(self._heap)
            self.clock.advance_to(t_ms)
            fn()

    def pending(self) -> int:
        return len(self._heap)
