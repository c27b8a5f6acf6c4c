"""Antichain and Kleene-iteration machinery shared by the inclusion
algorithms: minors of key sets under a decidable quasiorder, and a
generic least-fixpoint driver with an abstract-equality stopping test."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable

__all__ = [
    "Antichain",
    "minor",
    "ac_below",
    "kleene",
    "KleeneResult",
    "KleeneDivergence",
]

Leq = Callable[[Any, Any], bool]


class Antichain:
    """A minor of everything ever inserted, under the quasiorder ``leq``.

    Inserting a key dominated by a present one is a no-op; inserting a key
    that dominates present ones evicts them. Ties between equivalent keys
    keep the first inserted, which makes fixpoints deterministic. Each key
    may carry a representative word; comparisons ignore it.
    """

    __slots__ = ("leq", "_entries")

    def __init__(self, leq: Leq, items: Iterable[tuple[Any, bytes | None]] = ()):
        self.leq = leq
        self._entries: list[tuple[Any, bytes | None]] = []
        for key, word in items:
            self.insert(key, word)

    def insert(self, key: Any, word: bytes | None = None) -> bool:
        leq = self.leq
        for k, _ in self._entries:
            if leq(k, key):
                return False
        self._entries = [(k, w) for k, w in self._entries if not leq(key, k)]
        self._entries.append((key, word))
        return True

    def entries(self) -> list[tuple[Any, bytes | None]]:
        return list(self._entries)

    def keys(self) -> list[Any]:
        return [k for k, _ in self._entries]

    def words(self) -> list[bytes | None]:
        return [w for _, w in self._entries]

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __repr__(self) -> str:
        return f"Antichain({self.keys()!r})"


def minor(items: Iterable[Any], leq: Leq) -> Antichain:
    """Minor of ``items``: an antichain of minimal elements that still
    dominates every input element."""
    return Antichain(leq, ((k, None) for k in items))


def ac_below(x, y, leq: Leq | None = None) -> bool:
    """The antichain order: every element of ``x`` is dominated by some
    element of ``y``."""
    if leq is None:
        leq = x.leq if isinstance(x, Antichain) else y.leq
    xs = x.keys() if isinstance(x, Antichain) else list(x)
    ys = y.keys() if isinstance(y, Antichain) else list(y)
    return all(any(leq(b, a) for b in ys) for a in xs)


@dataclass(frozen=True)
class KleeneResult:
    value: Any
    iterations: int  # number of step-function evaluations performed


class KleeneDivergence(RuntimeError):
    """Iteration cap exceeded; the supplied abstraction is not ACC (or the
    cap was set too low for the instance)."""


def kleene(
    step_fn: Callable[[Any], Any],
    bottom: Any,
    abs_eq: Callable[[Any, Any], bool],
    max_iter: int = 1 << 20,
) -> KleeneResult:
    """Iterate ``step_fn`` from ``bottom`` until the abstraction of two
    consecutive iterates coincides; returns the first stable iterate.

    ``step_fn`` must be monotone for the quasiorder underlying ``abs_eq``
    and the abstract domain must have no infinite ascending chains; the cap
    exists only to turn violations of that contract into a clean failure.
    """
    x = bottom
    calls = 0
    while True:
        fx = step_fn(x)
        calls += 1
        if abs_eq(fx, x):
            return KleeneResult(x, calls)
        x = fx
        if calls > max_iter:
            raise KleeneDivergence(f"no fixpoint after {calls} iterations")
