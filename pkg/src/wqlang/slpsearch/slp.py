"""Straight-line programs: the compressed-text representation.

Symbol ids follow the wire format: 0..255 are terminal bytes and rule i
(1-based) is 256+i. All rules except the last are binary; the last rule is
the axiom and may have any arity >= 2.
"""

from __future__ import annotations

from typing import Iterable, Sequence

__all__ = ["Slp", "repair_compress", "decompress", "DecompressionCap"]

TERMINALS = 256


def rule_id(index: int) -> int:
    """Wire id of the 0-based rule ``index``."""
    return TERMINALS + 1 + index


def id_to_rule(sym: int) -> int:
    """0-based rule index of a wire id, or -1 for a terminal."""
    return sym - TERMINALS - 1 if sym > TERMINALS else -1


class Slp:
    """A grammar with exactly one derivation: the compressed text."""

    __slots__ = ("rules",)

    def __init__(self, rules: Iterable[Sequence[int]]):
        self.rules: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in rules)
        if not self.rules:
            raise ValueError("an SLP needs at least an axiom rule")
        for i, rule in enumerate(self.rules):
            is_axiom = i == len(self.rules) - 1
            if len(rule) < 2:
                raise ValueError(f"rule {i + 1} has arity {len(rule)} < 2")
            if not is_axiom and len(rule) != 2:
                raise ValueError(f"non-axiom rule {i + 1} must be binary")
            for sym in rule:
                if sym == TERMINALS or sym < 0:
                    raise ValueError(f"invalid symbol id {sym}")
                r = id_to_rule(sym)
                if r >= i:
                    raise ValueError(
                        f"rule {i + 1} references rule {r + 1}, which is not earlier"
                    )

    @property
    def axiom(self) -> tuple[int, ...]:
        return self.rules[-1]

    @property
    def rule_count(self) -> int:
        return len(self.rules)

    @property
    def terminal_alphabet(self) -> frozenset[int]:
        return frozenset(s for r in self.rules for s in r if s < TERMINALS)

    def symbol_lengths(self) -> list[int]:
        """Expansion length of each rule, bottom-up."""
        lens: list[int] = []
        for rule in self.rules:
            total = 0
            for sym in rule:
                r = id_to_rule(sym)
                total += 1 if r < 0 else lens[r]
            lens.append(total)
        return lens

    def text_length(self) -> int:
        return self.symbol_lengths()[-1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Slp):
            return NotImplemented
        return self.rules == other.rules

    def __hash__(self) -> int:
        return hash(self.rules)

    def __repr__(self) -> str:
        return f"Slp(rules={self.rule_count}, axiom_arity={len(self.axiom)})"


class DecompressionCap(RuntimeError):
    """The expansion would exceed the configured output limit."""


def decompress(p: Slp, cap: int = 1 << 26) -> bytes:
    """The unique word the SLP generates.

    Expansion sizes are computed first, so an over-``cap`` output is refused
    before any byte is materialized.
    """
    total = p.text_length()
    if total > cap:
        raise DecompressionCap(f"expansion is {total} bytes, cap is {cap}")
    memo: list[bytes | None] = [None] * p.rule_count

    def expand(index: int) -> bytes:
        cached = memo[index]
        if cached is not None:
            return cached
        parts = []
        for sym in p.rules[index]:
            r = id_to_rule(sym)
            parts.append(bytes([sym]) if r < 0 else expand(r))
        out = b"".join(parts)
        memo[index] = out
        return out

    return expand(p.rule_count - 1)


def repair_compress(text: bytes) -> Slp:
    """Grammar compression by repeated most-frequent-pair substitution.

    Each round replaces every non-overlapping occurrence of the currently
    most frequent adjacent pair (ties broken by smallest pair) with a fresh
    rule, until no pair occurs twice; what remains becomes the axiom.
    """
    if len(text) < 2:
        raise ValueError("need at least two bytes to compress")
    seq: list[int] = list(text)
    rules: list[tuple[int, int]] = []
    while True:
        counts: dict[tuple[int, int], int] = {}
        i = 0
        while i < len(seq) - 1:
            pair = (seq[i], seq[i + 1])
            counts[pair] = counts.get(pair, 0) + 1
            # an overlapping repeat like "aaa" yields one replaceable pair
            if i + 2 < len(seq) and (seq[i + 1], seq[i + 2]) == pair:
                i += 2
            else:
                i += 1
        if not counts:
            break
        best = max(counts.items(), key=lambda kv: (kv[1], (-kv[0][0], -kv[0][1])))
        pair, freq = best
        if freq < 2:
            break
        fresh = rule_id(len(rules))
        rules.append(pair)
        out: list[int] = []
        i = 0
        while i < len(seq):
            if i + 1 < len(seq) and (seq[i], seq[i + 1]) == pair:
                out.append(fresh)
                i += 2
            else:
                out.append(seq[i])
                i += 1
        seq = out
    return Slp([*rules, tuple(seq)])
