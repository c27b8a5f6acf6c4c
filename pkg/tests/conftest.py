"""Shared fixtures: the worked-example machines, random generators, and
independent oracles (bounded enumeration, configuration search, scan)."""

from __future__ import annotations

import random

import pytest

from wqlang import CnfGrammar, Nfa, Ocn
from wqlang.automata import bits

A, B, C = ord("a"), ord("b"), ord("c")


# -- worked-example machines -------------------------------------------------


def make_fig41() -> Nfa:
    """Two states, L = (a + b+a)*: q1 loops on a, b hops to q2, a returns."""
    return Nfa(2, [(0, A, 0), (0, B, 1), (1, A, 0), (1, B, 1)], [0], [0])


def make_fig42_n1() -> Nfa:
    """L(N1) = a*(a+b+c)."""
    return Nfa(2, [(0, A, 0), (0, A, 1), (0, B, 1), (0, C, 1)], [0], [1])


def make_fig42_n2() -> Nfa:
    """L(N2) = a*(a(a+b)*a + a+c + ab + bb); states q1..q5 are 0..4."""
    return Nfa(
        5,
        [
            (0, A, 0),
            (0, A, 1),
            (0, A, 2),
            (0, A, 3),
            (0, B, 3),
            (1, A, 1),
            (1, C, 4),
            (2, A, 2),
            (2, A, 4),
            (2, B, 2),
            (3, B, 4),
        ],
        [0],
        [4],
    )


def make_fig43() -> Nfa:
    """L = (b + ab*a)(a+b)*; states q1..q3 are 0..2."""
    return Nfa(
        3,
        [(0, A, 1), (1, B, 1), (1, A, 2), (0, B, 2), (2, A, 2), (2, B, 2)],
        [0],
        [2],
    )


def make_ex451_grammar() -> CnfGrammar:
    """X0 -> X0 X1 | X1 X0 | b, X1 -> a; the language is a*ba*."""
    return CnfGrammar(2, {0: {B}, 1: {A}}, {0: {(0, 1), (1, 0)}})


def make_fig31() -> Nfa:
    """L = Sigma* a Sigma a Sigma* over {a, b}."""
    return Nfa(
        4,
        [
            (0, A, 0),
            (0, B, 0),
            (0, A, 1),
            (1, A, 2),
            (1, B, 2),
            (2, A, 3),
            (3, A, 3),
            (3, B, 3),
        ],
        [0],
        [3],
    )


def make_fig62() -> Nfa:
    """Six states where the principal of c is the union of those of a and b,
    so residualization beats plain subset-based residualization."""
    return Nfa(
        6,
        [
            (0, A, 1),
            (0, A, 2),
            (0, B, 1),
            (0, B, 3),
            (0, C, 1),
            (0, C, 2),
            (0, C, 3),
            (0, C, 4),
            (1, A, 5),
            (2, B, 5),
            (3, C, 5),
            (4, A, 5),
        ],
        [0],
        [5],
    )


def make_fig52_prime() -> Nfa:
    """L = {ab, bb} on three states."""
    return Nfa(3, [(0, A, 1), (0, B, 1), (1, B, 2)], [0], [2])


def make_counter_ocn() -> Ocn:
    """One state: a increments, b decrements."""
    return Ocn(1, [(0, A, 1, 0), (0, B, -1, 0)])


@pytest.fixture
def fig41():
    return make_fig41()


@pytest.fixture
def fig42_n1():
    return make_fig42_n1()


@pytest.fixture
def fig42_n2():
    return make_fig42_n2()


@pytest.fixture
def fig43():
    return make_fig43()


@pytest.fixture
def ex451_grammar():
    return make_ex451_grammar()


@pytest.fixture
def fig31():
    return make_fig31()


@pytest.fixture
def fig62():
    return make_fig62()


@pytest.fixture
def fig52_prime():
    return make_fig52_prime()


@pytest.fixture
def counter_ocn():
    return make_counter_ocn()


# -- random generators ---------------------------------------------------------


def rand_nfa(rng: random.Random, max_states: int = 5, n_syms: int = 2, density: float = 0.25) -> Nfa:
    count = rng.randint(1, max_states)
    syms = [A, B, C][:n_syms]
    triples = [
        (p, sym, q)
        for p in range(count)
        for sym in syms
        for q in range(count)
        if rng.random() < density
    ]
    initial = [q for q in range(count) if rng.random() < 0.4] or [rng.randrange(count)]
    final = [q for q in range(count) if rng.random() < 0.4]
    return Nfa(count, triples, initial, final)


def rand_cnf(rng: random.Random, max_vars: int = 4, n_syms: int = 2) -> CnfGrammar:
    count = rng.randint(1, max_vars)
    syms = [A, B, C][:n_syms]
    terms: dict[int, set[int]] = {}
    bins: dict[int, set[tuple[int, int]]] = {}
    for v in range(count):
        while True:
            if rng.random() < 0.8:
                terms.setdefault(v, set()).add(rng.choice(syms))
            if count > 1 and rng.random() < 0.6:
                bins.setdefault(v, set()).add(
                    (rng.randrange(count), rng.randrange(count))
                )
            if v in terms or v in bins:
                break
    return CnfGrammar(count, terms, bins, axiom_nullable=rng.random() < 0.2)


def rand_word(rng: random.Random, max_len: int, n_syms: int = 2) -> bytes:
    syms = [A, B, C][:n_syms]
    return bytes(rng.choice(syms) for _ in range(rng.randint(0, max_len)))


# -- independent oracles ---------------------------------------------------------


def ocn_trace_oracle(o: Ocn, start: tuple[int, int], word: bytes) -> bool:
    """Exact configuration search: is the word a trace from start?"""
    configs = {start}
    for sym in word:
        nxt = set()
        for q, n in configs:
            for p, s, d, q2 in o.transitions:
                if p == q and s == sym and n + d >= 0:
                    nxt.add((q2, n + d))
        configs = nxt
        if not configs:
            return False
    return True


def factor_scanner(nfa: Nfa):
    """DFA table for 'some factor of the input is accepted': determinize the
    automaton with restart-at-every-position semantics."""
    syms = sorted(nfa.alphabet)
    start = nfa.initial_mask
    index = {start: 0}
    order = [start]
    accept = [bool(start & nfa.final_mask)]
    table: list[dict[int, int]] = [{}]
    i = 0
    while i < len(order):
        m = order[i]
        for sym in syms:
            t = nfa.step(m, sym, True) | start
            j = index.get(t)
            if j is None:
                j = len(order)
                index[t] = j
                order.append(t)
                accept.append(bool(t & nfa.final_mask))
                table.append({})
            table[i][sym] = j
        i += 1

    def contains_factor(data: bytes) -> bool:
        state = 0
        if accept[0]:
            return True
        for byte in data:
            state = table[state].get(byte)
            if state is None:
                state = 0
                continue
            if accept[state]:
                return True
        return False

    return contains_factor


def count_lines_oracle(text: bytes, nfa: Nfa) -> int:
    """Decompress-free reference: split on newlines, scan each line."""
    scan = factor_scanner(nfa)
    return sum(1 for line in text.split(b"\n") if line and scan(line))


def matching_lines_oracle(text: bytes, nfa: Nfa) -> list[tuple[int, bytes]]:
    scan = factor_scanner(nfa)
    return [
        (no, line)
        for no, line in enumerate(text.split(b"\n"), start=1)
        if line and scan(line)
    ]


def set_of(mask: int) -> set[int]:
    return set(bits(mask))


# -- acceptance reporting ---------------------------------------------------------


def pytest_runtest_logreport(report):
    name = getattr(report, "nodeid", "")
    if "test_acceptance" in name and report.when == "call":
        label = name.split("::")[-1]
        print(f"\n[acceptance] {label}: {'PASS' if report.passed else 'FAIL'}")
