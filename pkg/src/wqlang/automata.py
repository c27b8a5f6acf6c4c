"""Core finite-state machinery: automata, grammars, one-counter nets.

States are dense integer indices and state sets are int bitmasks, so the
hot operation of every antichain algorithm (subset tests between state
sets) compiles down to bitwise arithmetic. Symbols are bytes, 0..255.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Nfa",
    "Dfa",
    "CnfGrammar",
    "Ocn",
    "Verdict",
    "bits",
    "mask_of",
    "naive_inclusion",
    "equivalence_counterexample",
    "cfg_in_regular_oracle",
]


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(states: Iterable[int]) -> int:
    m = 0
    for q in states:
        m |= 1 << q
    return m


@dataclass(frozen=True)
class Verdict:
    """Outcome of an inclusion check.

    ``witness`` is only present when ``included`` is false and the deciding
    algorithm carries representative words; it is then a word of the left
    language that the right language rejects.
    """

    included: bool
    witness: bytes | None = None


class Nfa:
    """Nondeterministic finite automaton over byte symbols.

    Immutable after construction. ``transitions`` maps ``(state, symbol)``
    to a frozenset of successor states; ``initial``/``final`` are frozensets
    of states, with bitmask twins ``initial_mask``/``final_mask``.
    """

    __slots__ = (
        "state_count",
        "alphabet",
        "transitions",
        "initial",
        "final",
        "initial_mask",
        "final_mask",
        "_fwd",
        "_bwd",
        "_triples",
    )

    def __init__(
        self,
        state_count: int,
        transitions: Iterable[tuple[int, int, int]],
        initial: Iterable[int],
        final: Iterable[int],
    ):
        if state_count < 0:
            raise ValueError("state_count must be nonnegative")
        triples = frozenset(transitions)
        initial = frozenset(initial)
        final = frozenset(final)
        for p, sym, q in triples:
            if not (0 <= p < state_count and 0 <= q < state_count):
                raise ValueError(f"transition ({p},{sym},{q}) out of range")
            if not (0 <= sym <= 255):
                raise ValueError(f"symbol {sym} is not a byte")
        for q in initial | final:
            if not (0 <= q < state_count):
                raise ValueError(f"state {q} out of range")
        self.state_count = state_count
        self._triples = triples
        self.alphabet = frozenset(sym for _, sym, _ in triples)
        tmap: dict[tuple[int, int], set[int]] = defaultdict(set)
        fwd: dict[int, list[int]] = {}
        bwd: dict[int, list[int]] = {}
        for p, sym, q in triples:
            tmap[(p, sym)].add(q)
            if sym not in fwd:
                fwd[sym] = [0] * state_count
                bwd[sym] = [0] * state_count
            fwd[sym][p] |= 1 << q
            bwd[sym][q] |= 1 << p
        self.transitions: Mapping[tuple[int, int], frozenset[int]] = {
            k: frozenset(v) for k, v in tmap.items()
        }
        self.initial = initial
        self.final = final
        self.initial_mask = mask_of(initial)
        self.final_mask = mask_of(final)
        self._fwd = fwd
        self._bwd = bwd

    # -- structural value semantics ------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Nfa):
            return NotImplemented
        return (
            self.state_count == other.state_count
            and self._triples == other._triples
            and self.initial == other.initial
            and self.final == other.final
        )

    def __hash__(self) -> int:
        return hash((self.state_count, self._triples, self.initial, self.final))

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(states={self.state_count}, "
            f"trans={len(self._triples)}, I={sorted(self.initial)}, "
            f"F={sorted(self.final)})"
        )

    # -- basic operations ----------------------------------------------

    def step(self, s: int, sym: int, forward: bool = True) -> int:
        """One-symbol successor (or predecessor) set of the bitmask ``s``.

        A symbol outside the alphabet simply yields the empty set.
        """
        table = (self._fwd if forward else self._bwd).get(sym)
        if table is None:
            return 0
        out = 0
        for q in bits(s):
            out |= table[q]
        return out

    def run(self, word: bytes, forward: bool = True) -> int:
        """Forward: post_word of the initial set. Backward: pre_word of the
        final set. The empty word returns the initial (resp. final) mask."""
        if forward:
            s = self.initial_mask
            for sym in word:
                s = self.step(s, sym, True)
            return s
        s = self.final_mask
        for sym in reversed(word):
            s = self.step(s, sym, False)
        return s

    def member(self, word: bytes) -> bool:
        return bool(self.run(word, True) & self.final_mask)

    def reverse(self) -> "Nfa":
        return Nfa(
            self.state_count,
            ((q, sym, p) for p, sym, q in self._triples),
            self.final,
            self.initial,
        )

    def with_initial(self, initial: Iterable[int]) -> "Nfa":
        return Nfa(self.state_count, self._triples, initial, self.final)

    def with_final(self, final: Iterable[int]) -> "Nfa":
        return Nfa(self.state_count, self._triples, self.initial, final)

    def determinize(self, symbols: Iterable[int] | None = None) -> "Dfa":
        """Reachable-subset construction.

        The result is complete over ``symbols`` (default: this automaton's
        alphabet); the empty subset is materialized when reachable. Each
        output state remembers its originating subset in
        ``source_subsets``, which residualization comparisons rely on.
        """
        syms = sorted(self.alphabet if symbols is None else symbols)
        start = self.initial_mask
        index = {start: 0}
        order = [start]
        triples: list[tuple[int, int, int]] = []
        i = 0
        while i < len(order):
            m = order[i]
            for sym in syms:
                t = self.step(m, sym, True)
                j = index.get(t)
                if j is None:
                    j = len(order)
                    index[t] = j
                    order.append(t)
                triples.append((i, sym, j))
            i += 1
        final = [i for i, m in enumerate(order) if m & self.final_mask]
        return Dfa(len(order), triples, [0], final, source_subsets=tuple(order))

    def accepted_words(self, max_len: int) -> Iterator[bytes]:
        """All accepted words of length <= max_len, in shortlex order.

        Test/oracle helper; walks the subset construction breadth-first.
        """
        syms = sorted(self.alphabet)
        frontier = [(b"", self.initial_mask)]
        for _ in range(max_len + 1):
            nxt = []
            for word, m in frontier:
                if m & self.final_mask:
                    yield word
                for sym in syms:
                    t = self.step(m, sym, True)
                    if t:
                        nxt.append((word + bytes([sym]), t))
            frontier = nxt
            if not frontier:
                return


class Dfa(Nfa):
    """Deterministic automaton: one initial state, at most one successor
    per (state, symbol). May be partial; ``complete`` adds a sink."""

    __slots__ = ("source_subsets",)

    def __init__(self, state_count, transitions, initial, final, source_subsets=None):
        super().__init__(state_count, transitions, initial, final)
        if len(self.initial) != 1:
            raise ValueError("a DFA has exactly one initial state")
        for (p, sym), targets in self.transitions.items():
            if len(targets) > 1:
                raise ValueError(f"nondeterministic on state {p}, symbol {sym}")
        self.source_subsets = source_subsets

    @property
    def initial_state(self) -> int:
        return next(iter(self.initial))

    def dnext(self, p: int, sym: int) -> int | None:
        t = self.transitions.get((p, sym))
        if not t:
            return None
        return next(iter(t))

    def run_state(self, word: bytes, start: int | None = None) -> int | None:
        q = self.initial_state if start is None else start
        for sym in word:
            q = self.dnext(q, sym)
            if q is None:
                return None
        return q

    def complete(self, symbols: Iterable[int] | None = None) -> "Dfa":
        """Total transition function over ``symbols``, adding a sink state
        only when some transition is actually missing."""
        syms = sorted(self.alphabet if symbols is None else symbols)
        missing = [
            (p, sym)
            for p in range(self.state_count)
            for sym in syms
            if self.dnext(p, sym) is None
        ]
        if not missing:
            return self
        sink = self.state_count
        triples = list(self._triples)
        triples += [(p, sym, sink) for p, sym in missing]
        triples += [(sink, sym, sink) for sym in syms]
        return Dfa(sink + 1, triples, self.initial, self.final)

    def minimize(self) -> "Dfa":
        """Unique minimal complete DFA of the language, canonically numbered
        by breadth-first discovery so equal languages give equal objects."""
        syms = sorted(self.alphabet)
        d = self.complete(syms)
        # restrict to reachable states
        reach = [d.initial_state]
        seen = {d.initial_state}
        i = 0
        while i < len(reach):
            p = reach[i]
            for sym in syms:
                q = d.dnext(p, sym)
                if q is not None and q not in seen:
                    seen.add(q)
                    reach.append(q)
            i += 1
        # Moore partition refinement
        cls = {p: (1 if p in d.final else 0) for p in reach}
        while True:
            sig = {
                p: (cls[p], tuple(cls[d.dnext(p, sym)] for sym in syms)) for p in reach
            }
            renum: dict[tuple, int] = {}
            new_cls = {}
            for p in reach:
                s = sig[p]
                if s not in renum:
                    renum[s] = len(renum)
                new_cls[p] = renum[s]
            if new_cls == cls:
                break
            cls = new_cls
        # canonical numbering: BFS over classes from the initial one
        rep: dict[int, int] = {}
        for p in reach:
            rep.setdefault(cls[p], p)
        order = [cls[d.initial_state]]
        number = {order[0]: 0}
        triples = []
        i = 0
        while i < len(order):
            c = order[i]
            p = rep[c]
            for sym in syms:
                tc = cls[d.dnext(p, sym)]
                if tc not in number:
                    number[tc] = len(order)
                    order.append(tc)
                triples.append((i, sym, number[tc]))
            i += 1
        final = [number[c] for c in order if rep[c] in d.final]
        return Dfa(len(order), triples, [0], final)


def _product_search(a: Dfa, b: Dfa, syms: list[int], bad) -> bytes | None:
    """Shortest word (lex-least among them) whose product state satisfies
    ``bad``; both DFAs must be complete over ``syms``."""
    start = (a.initial_state, b.initial_state)
    parent: dict[tuple[int, int], tuple[tuple[int, int], int] | None] = {start: None}
    queue = [start]
    i = 0
    while i < len(queue):
        pair = queue[i]
        i += 1
        if bad(pair):
            out = bytearray()
            node = pair
            while parent[node] is not None:
                node, sym = parent[node]
                out.append(sym)
            return bytes(reversed(out))
        pa, pb = pair
        for sym in syms:
            nxt = (a.dnext(pa, sym), b.dnext(pb, sym))
            if nxt not in parent:
                parent[nxt] = (pair, sym)
                queue.append(nxt)
    return None


def naive_inclusion(a: Nfa, b: Nfa) -> Verdict:
    """Textbook inclusion check through determinization and complement;
    used as the ground-truth oracle for every antichain algorithm.

    Returns a shortest word of L(a) - L(b) as witness when not included.
    """
    syms = sorted(a.alphabet | b.alphabet)
    da = a.determinize(syms)
    db = b.determinize(syms)
    w = _product_search(
        da, db, syms, lambda pq: pq[0] in da.final and pq[1] not in db.final
    )
    if w is None:
        return Verdict(True)
    return Verdict(False, w)


def equivalence_counterexample(a: Nfa, b: Nfa) -> bytes | None:
    """None when L(a) = L(b); otherwise a shortest word in the symmetric
    difference (lex-least among the shortest)."""
    syms = sorted(a.alphabet | b.alphabet)
    da = a.determinize(syms)
    db = b.determinize(syms)
    return _product_search(
        da, db, syms, lambda pq: (pq[0] in da.final) != (pq[1] in db.final)
    )


class CnfGrammar:
    """Context-free grammar in Chomsky normal form.

    Variable 0 is the axiom. Every variable must carry at least one
    alternative; the empty word is admitted only through the axiom's
    ``axiom_nullable`` flag.
    """

    __slots__ = ("variable_count", "terminal_rules", "binary_rules", "axiom_nullable")

    def __init__(
        self,
        variable_count: int,
        terminal_rules: Mapping[int, Iterable[int]],
        binary_rules: Mapping[int, Iterable[tuple[int, int]]],
        axiom_nullable: bool = False,
    ):
        if variable_count < 1:
            raise ValueError("a grammar needs at least the axiom variable")
        self.variable_count = variable_count
        self.terminal_rules = {
            v: frozenset(ts) for v, ts in terminal_rules.items() if ts
        }
        self.binary_rules = {
            v: frozenset(ps) for v, ps in binary_rules.items() if ps
        }
        self.axiom_nullable = bool(axiom_nullable)
        for v, ts in self.terminal_rules.items():
            self._check_var(v)
            for t in ts:
                if not (0 <= t <= 255):
                    raise ValueError(f"terminal {t} is not a byte")
        for v, ps in self.binary_rules.items():
            self._check_var(v)
            for y, z in ps:
                self._check_var(y)
                self._check_var(z)
        for v in range(variable_count):
            if (
                v not in self.terminal_rules
                and v not in self.binary_rules
                and not (v == 0 and self.axiom_nullable)
            ):
                raise ValueError(f"variable X{v} has no rule")

    def _check_var(self, v: int) -> None:
        if not (0 <= v < self.variable_count):
            raise ValueError(f"variable X{v} out of range")

    @property
    def terminals(self) -> frozenset[int]:
        out: set[int] = set()
        for ts in self.terminal_rules.values():
            out |= ts
        return frozenset(out)

    def words_up_to(self, max_len: int) -> set[bytes]:
        """All words of the language up to the given length, by brute-force
        bottom-up derivation. Test oracle only; exponential in general.

        The axiom's empty alternative participates in compositions, matching
        the least-fixpoint reading of the equations.
        """
        by_len: list[list[set[bytes]]] = [
            [set() for _ in range(max_len + 1)] for _ in range(self.variable_count)
        ]
        if self.axiom_nullable:
            by_len[0][0].add(b"")
        for v, ts in self.terminal_rules.items():
            if max_len >= 1:
                by_len[v][1] = {bytes([t]) for t in ts}
        changed = True
        while changed:
            changed = False
            for length in range(0, max_len + 1):
                for v, ps in self.binary_rules.items():
                    acc = by_len[v][length]
                    before = len(acc)
                    for y, z in ps:
                        for l1 in range(0, length + 1):
                            for u in by_len[y][l1]:
                                for w in by_len[z][length - l1]:
                                    acc.add(u + w)
                    if len(acc) != before:
                        changed = True
        out: set[bytes] = set()
        for length in range(0, max_len + 1):
            out |= by_len[0][length]
        return out


def cfg_in_regular_oracle(g: CnfGrammar, d: Dfa) -> Verdict:
    """Decides L(g) <= L(d) by product-grammar emptiness against the
    complement of ``d``; independent oracle for the grammar antichain
    algorithms.

    The witness, when present, is the shortest (then lex-least) word
    derivable by ``g`` that ``d`` rejects.
    """
    syms = sorted(set(d.alphabet) | set(g.terminals))
    dd = d.complete(syms)
    if g.axiom_nullable and dd.initial_state not in dd.final:
        return Verdict(False, b"")
    left_of: dict[int, list[tuple[int, int]]] = defaultdict(list)
    right_of: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for v, ps in g.binary_rules.items():
        for y, z in ps:
            left_of[y].append((v, z))
            right_of[z].append((v, y))
    settled: dict[tuple[int, int, int], bytes] = {}
    by_start: dict[tuple[int, int], list[tuple[int, bytes]]] = defaultdict(list)
    by_end: dict[tuple[int, int], list[tuple[int, bytes]]] = defaultdict(list)
    heap: list[tuple[int, bytes, int, int, int]] = []
    if g.axiom_nullable:
        # the axiom's empty alternative participates in compositions
        for p in range(dd.state_count):
            heapq.heappush(heap, (0, b"", 0, p, p))
    for v, ts in g.terminal_rules.items():
        for t in sorted(ts):
            for p in range(dd.state_count):
                q = dd.dnext(p, t)
                heapq.heappush(heap, (1, bytes([t]), v, p, q))
    while heap:
        length, word, v, p, q = heapq.heappop(heap)
        if (v, p, q) in settled:
            continue
        settled[(v, p, q)] = word
        if v == 0 and p == dd.initial_state and q not in dd.final:
            return Verdict(False, word)
        by_start[(v, p)].append((q, word))
        by_end[(v, q)].append((p, word))
        for x, z in left_of[v]:
            for q2, w2 in by_start[(z, q)]:
                if (x, p, q2) not in settled:
                    heapq.heappush(heap, (length + len(w2), word + w2, x, p, q2))
        for x, y in right_of[v]:
            for p0, w0 in by_end[(y, p)]:
                if (x, p0, q) not in settled:
                    heapq.heappush(heap, (len(w0) + length, w0 + word, x, p0, q))
    return Verdict(True)


class Ocn:
    """One-counter net: an NFA whose transitions carry a counter delta in
    {-1, 0, +1}; the counter never goes below zero."""

    __slots__ = ("state_count", "alphabet", "transitions")

    def __init__(self, state_count: int, transitions: Iterable[tuple[int, int, int, int]]):
        self.state_count = state_count
        self.transitions = frozenset(transitions)
        for p, sym, d, q in self.transitions:
            if not (0 <= p < state_count and 0 <= q < state_count):
                raise ValueError(f"transition ({p},{sym},{d},{q}) out of range")
            if d not in (-1, 0, 1):
                raise ValueError("counter delta must be -1, 0 or +1")
            if not (0 <= sym <= 255):
                raise ValueError(f"symbol {sym} is not a byte")
        self.alphabet = frozenset(sym for _, sym, _, _ in self.transitions)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ocn):
            return NotImplemented
        return (
            self.state_count == other.state_count
            and self.transitions == other.transitions
        )

    def __hash__(self) -> int:
        return hash((self.state_count, self.transitions))

    def __repr__(self) -> str:
        return f"Ocn(states={self.state_count}, trans={len(self.transitions)})"
