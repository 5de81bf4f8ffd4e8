"""High-water accounting of the smoothing working set.

The smoothing engines register every working buffer they allocate (strip
arrays, row bands, tiles, materialized grids) with a process-global meter.
The meter models the algorithmic working set deterministically: NumPy
expression temporaries and objects outside the smoothing stage (input
series, segment DFTs, the collected output store) are deliberately not
counted, so that plan-to-plan comparisons isolate the engines themselves.
OS-level peak RSS is reported separately by the benchmark harness.
"""

from __future__ import annotations

from contextlib import contextmanager


class AllocationMeter:
    """Tracks currently-registered bytes and their high-water mark."""

    __slots__ = ("current", "peak")

    def __init__(self) -> None:
        self.current = 0
        self.peak = 0

    def reset(self) -> None:
        self.current = 0
        self.peak = 0

    def note(self, *arrays) -> int:
        """Register arrays as live working memory; returns the byte total."""
        nbytes = sum(int(a.nbytes) for a in arrays)
        self.current += nbytes
        if self.current > self.peak:
            self.peak = self.current
        return nbytes

    def note_bytes(self, nbytes: int) -> int:
        self.current += int(nbytes)
        if self.current > self.peak:
            self.peak = self.current
        return int(nbytes)

    def drop(self, nbytes: int) -> None:
        self.current -= int(nbytes)

    @contextmanager
    def held(self, *arrays):
        """Scope in which the given arrays count toward the working set."""
        nbytes = self.note(*arrays)
        try:
            yield
        finally:
            self.drop(nbytes)

    def absorb_concurrent(self, peaks) -> None:
        """Fold in peaks measured by concurrent workers.

        Workers run in their own processes with their own meters; the sum of
        their individual peaks, on top of what is currently registered here,
        is the deterministic model of the joint high-water mark.
        """
        total = sum(int(p) for p in peaks)
        if self.current + total > self.peak:
            self.peak = self.current + total


#: Process-global meter used by the smoothing engines.
WORKSPACE = AllocationMeter()
