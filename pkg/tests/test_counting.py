import random

import pytest
from hypothesis import given, settings, strategies as st

from wqlang import (
    CountingInfo,
    Nfa,
    SearchEngine,
    combine_counting,
    compile_regex,
    count_lines,
    parse_regex,
    repair_compress,
    report_lines,
    slp_match_exists,
)
from wqlang.slpsearch import matching_line_total
from wqlang.slpsearch.slp import Slp

from conftest import (
    A,
    B,
    count_lines_oracle,
    factor_scanner,
    make_fig52_prime,
    matching_lines_oracle,
)


def pat(text: str) -> Nfa:
    return compile_regex(parse_regex(text))


def test_example_text_counts_one_line():
    slp = repair_compress(b"ab\na\nbab\n")
    assert count_lines(slp, pat("ba")) == 1


def test_no_match_counts_zero():
    slp = repair_compress(b"aa")
    assert count_lines(slp, pat("b")) == 0


def test_report_matching_line():
    slp = repair_compress(b"ab\na\nbab\n")
    assert list(report_lines(slp, pat("ba"))) == [(3, b"bab")]


def test_report_empty_when_no_match():
    slp = repair_compress(b"ab\na\nqq\n")
    assert list(report_lines(slp, pat("ba"))) == []


def test_combine_example():
    c = combine_counting(
        CountingInfo(True, True, False, 0), CountingInfo(True, False, True, 0), True
    )
    assert c == CountingInfo(True, True, True, 1)
    assert matching_line_total(c) == 3


def test_combine_trivial():
    zero = CountingInfo(False, False, False, 0)
    assert combine_counting(zero, zero, False) == zero


def line_info(text: bytes, nfa: Nfa) -> CountingInfo:
    """Counting tuple computed straight from the definition."""
    scan = factor_scanner(nfa)
    lines = text.split(b"\n")
    newline = b"\n" in text
    first = bool(lines[0]) and scan(lines[0])
    last = bool(lines[-1]) and scan(lines[-1])
    closed = sum(1 for line in lines[1:-1] if line and scan(line))
    return CountingInfo(newline, first, last, closed)


@given(st.binary(min_size=1, max_size=40), st.binary(min_size=1, max_size=40))
@settings(max_examples=150, deadline=None)
def test_combine_matches_definition_on_splits(x, y):
    nfa = pat("ba")
    m_flag = _boundary_match(x, y, nfa)
    combined = combine_counting(line_info(x, nfa), line_info(y, nfa), m_flag)
    assert combined == line_info(x + y, nfa)


def _boundary_match(x: bytes, y: bytes, nfa: Nfa) -> bool:
    scan = factor_scanner(nfa)
    tail = x.split(b"\n")[-1]
    head = y.split(b"\n")[0]
    return scan(tail + head) and not scan(tail) and not scan(head)


def test_counting_info_sound_at_every_symbol():
    rng = random.Random(61)
    nfa = pat("ba")
    from wqlang import decompress
    from wqlang.slpsearch.slp import id_to_rule

    for _ in range(25):
        text = bytes(
            rng.choice(b"ab\n") for _ in range(rng.randint(2, 300))
        )
        slp = repair_compress(text)
        engine = SearchEngine(slp, nfa)
        for index in range(slp.rule_count):
            expansion = _expand(slp, index)
            assert engine.rule_info[index] == line_info(expansion, nfa)


def _expand(slp: Slp, index: int) -> bytes:
    from wqlang.slpsearch.slp import id_to_rule

    out = []
    for sym in slp.rules[index]:
        r = id_to_rule(sym)
        out.append(bytes([sym]) if r < 0 else _expand(slp, r))
    return b"".join(out)


def test_match_exists_fig52():
    # the worked compressed-search example: text ab$a$bab$a$b, L' = {ab, bb}
    slp = Slp([(A, B), (ord("$"), A), (ord("$"), B), (257, 258), (260, 259), (261, 261)])
    engine = SearchEngine(slp, make_fig52_prime())
    assert (0, 2) in engine.rule_rel[4]  # fifth rule connects q1 to q3
    assert engine.match_exists()


def test_match_exists_single_rule():
    slp = Slp([(A, B)])
    assert slp_match_exists(slp, pat("ab"))
    assert not slp_match_exists(slp, pat("ba"))


def test_match_exists_agrees_with_scan():
    rng = random.Random(62)
    nfa = pat("ba")
    scan = factor_scanner(nfa)
    from wqlang import decompress

    for _ in range(60):
        text = bytes(rng.choice(b"ab\n") for _ in range(rng.randint(2, 200)))
        slp = repair_compress(text)
        assert slp_match_exists(slp, nfa) == scan(text)


def test_match_exists_spans_newlines_but_count_does_not():
    text = b"xb\nay"
    slp = repair_compress(text)
    nfa_with_nl = Nfa(3, [(0, B, 1), (1, 0x0A, 2)], [0], [2])  # "b\n"
    assert slp_match_exists(slp, nfa_with_nl)
    assert count_lines(slp, pat("ba")) == 0
    with pytest.raises(ValueError):
        count_lines(slp, nfa_with_nl)


def test_count_lines_matches_oracle_on_random_texts():
    rng = random.Random(63)
    patterns = [pat("ba"), pat("a+b"), pat("[ab]{3}")]
    for _ in range(40):
        text = bytes(rng.choice(b"aabb\n") for _ in range(rng.randint(2, 400)))
        slp = repair_compress(text)
        for nfa in patterns:
            assert count_lines(slp, nfa) == count_lines_oracle(text, nfa)


def test_report_matches_oracle_on_random_texts():
    rng = random.Random(64)
    nfa = pat("ba")
    for _ in range(40):
        text = bytes(rng.choice(b"ab\n") for _ in range(rng.randint(2, 300)))
        slp = repair_compress(text)
        assert list(report_lines(slp, nfa)) == matching_lines_oracle(text, nfa)


def test_report_count_consistency():
    rng = random.Random(65)
    nfa = pat("ab+a")
    for _ in range(30):
        text = bytes(rng.choice(b"aabbb\n") for _ in range(rng.randint(2, 250)))
        slp = repair_compress(text)
        assert count_lines(slp, nfa) == len(list(report_lines(slp, nfa)))


def test_relation_lists_never_contain_duplicates():
    rng = random.Random(66)
    nfa = pat("a+b")
    for _ in range(25):
        text = bytes(rng.choice(b"ab\n") for _ in range(rng.randint(2, 200)))
        engine = SearchEngine(repair_compress(text), nfa)
        for rel in engine.rule_rel:
            assert len(rel) == len(set(rel))


def test_inner_loop_bound_nfa():
    rng = random.Random(67)
    nfa = pat("a+b")  # nondeterministic after compilation
    s = nfa.state_count
    for _ in range(20):
        text = bytes(rng.choice(b"ab\n") for _ in range(rng.randint(2, 400)))
        slp = repair_compress(text)
        engine = SearchEngine(slp, nfa)
        assert engine.stats.inner_iters <= 8 * engine.stats.compose_steps * s**3


def test_long_axiom_fold():
    # axiom arity far above two exercises the left-to-right fold
    text = bytes(random.Random(68).choice(b"abcdefgh") for _ in range(64)) + b"ab"
    slp = repair_compress(text)
    assert len(slp.axiom) > 2
    assert count_lines(slp, pat("ab")) == count_lines_oracle(text, pat("ab"))
