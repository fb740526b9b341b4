import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from veritas import syntax as S
from veritas.coding import godel_decode, godel_encode
from veritas.sexpr import parse_formula, parse_term, to_sexpr


def test_godel_encode_examples():
    assert godel_encode([]) == 0
    assert godel_encode([1]) == 2
    assert godel_encode([0, 1]) == 5


def test_godel_decode_zero_is_empty_string():
    assert godel_decode(0) == ()


@given(st.lists(st.integers(0, 1), max_size=40))
def test_godel_roundtrip(bits):
    assert list(godel_decode(godel_encode(bits))) == bits


@given(st.integers(0, 10**9))
def test_every_nat_decodes_uniquely(n):
    assert godel_encode(godel_decode(n)) == n


def test_godel_length_bound():
    for L in range(12):
        for bits in ([0] * L, [1] * L):
            assert godel_encode(bits) < 2 ** (L + 1)


def test_numeral_small():
    assert S.numeral(0) == S.ZERO
    assert S.numeral(1) == S.Succ(S.ZERO)
    # 5 = S(0) + 2*(0 + 2*S(0)) with 2 = S(0)+S(0)
    two = S.Plus(S.Succ(S.ZERO), S.Succ(S.ZERO))
    want = S.Plus(S.Succ(S.ZERO), S.Times(two, S.Plus(S.ZERO, S.Times(two, S.Succ(S.ZERO)))))
    assert S.numeral(5) == want


@given(st.integers(0, 2**16))
def test_numerals_denote_their_index(n):
    assert S.eval_term(S.numeral(n), {}) == n


def test_numeral_length_logarithmic():
    lengths = [(n, S.sym_length(S.numeral(n))) for n in [1, 2, 4, 2**5, 2**10, 2**20]]
    for n, ln in lengths:
        assert ln <= 64 * (n.bit_length() + 1)


def test_eval_term_paper_example():
    t = parse_term("(+ (S 0) (+ (+ (S 0) (S 0)) 0))")  # 1+((1+1)+0)
    assert S.eval_term(t, {}) == 3


def test_eval_term_with_assignment():
    t = parse_term("(+ (v 0) (S (v 0)))")
    assert S.eval_term(t, {0: 2}) == 5


def test_eval_term_unbound_names_variable():
    with pytest.raises(S.UnboundVariable, match="v3"):
        S.eval_term(S.Var(3), {})


def test_depth_atoms_and_negations():
    assert S.depth(parse_formula("(= 0 0)")) == 0
    assert S.depth(parse_formula("(not (not (= 0 0)))")) == 2
    assert S.depth(parse_formula("(T (num 5))")) == 0
    assert S.depth(parse_formula("(exists 0 (= (v 0) 0))")) == 1


def test_substitute_basic():
    phi = parse_formula("(= (v 0) 0)")
    assert S.substitute(phi, S.Succ(S.ZERO), 0) == parse_formula("(= (S 0) 0)")


def test_substitute_under_binder():
    phi = parse_formula("(exists 0 (= (v 0) (v 1)))")
    got = S.substitute(phi, S.Succ(S.Var(1)), 1)
    assert got == parse_formula("(exists 0 (= (v 0) (S (v 1))))")


def test_substitute_capture_detected():
    phi = parse_formula("(exists 0 (= (v 0) (v 1)))")
    with pytest.raises(S.CaptureError):
        S.substitute(phi, S.Var(0), 1)


def test_apply_assignment():
    phi = parse_formula("(= (v 0) (v 0))")
    assert S.apply_assignment(phi, {0: 3}) == S.Eq(S.numeral(3), S.numeral(3))
    psi = parse_formula("(exists 1 (= (v 1) (v 0)))")
    assert S.apply_assignment(psi, {0: 2}) == S.Exists(1, S.Eq(S.Var(1), S.numeral(2)))
    closed = parse_formula("(= 0 0)")
    assert S.apply_assignment(closed, {}) == closed


def test_apply_assignment_missing_variable():
    with pytest.raises(S.UnboundVariable):
        S.apply_assignment(parse_formula("(= (v 0) 0)"), {})


def test_classify_languages():
    t_sent = S.Truth(S.numeral(S.code(parse_formula("(= 0 0)"))))
    assert S.classify(t_sent, "sent", S.L_T)
    assert not S.classify(t_sent, "sent", S.L_PA)
    nested = S.TruthK(1, S.numeral(S.code(S.TruthK(0, S.numeral(7)))))
    assert S.classify(nested, "sent", S.L_RT(2))
    assert not S.classify(nested, "sent", S.L_RT(1))
    open_atom = parse_formula("(= (v 0) 0)")
    assert S.classify(open_atom, "form1", S.L_PA)
    assert not S.classify(open_atom, "sent", S.L_PA)


def test_sent_pa_subset_of_sent_t():
    phi = parse_formula("(not (= (S 0) 0))")
    assert S.classify(phi, "sent", S.L_PA) and S.classify(phi, "sent", S.L_T)


@given(st.integers(0, 5000))
def test_assignment_coding_roundtrip(seed):
    import random
    rng = random.Random(seed)
    alpha = {rng.randrange(12): rng.randrange(50) for _ in range(rng.randrange(5))}
    assert S.decode_assignment(S.code_assignment(alpha)) == alpha


def test_formula_code_roundtrip():
    for text in ["(= 0 0)", "(or (= 0 (S 0)) (not (= (v 3) 0)))",
                 "(exists 2 (T (v 2)))", "(Tk 1 (num 9))",
                 "(rel Sat (num 3) (v 0))"]:
        phi = parse_formula(text)
        assert S.decode_formula(S.code(phi)) == phi


def test_sexpr_roundtrip_is_identity():
    texts = ["(= 0 0)", "(not (or (= 0 0) (= (S 0) 0)))", "(exists 1 (= (v 1) (num 6)))",
             "(T (num 2))", "(Tk 0 (num 2))"]
    for text in texts:
        phi = parse_formula(text)
        assert parse_formula(to_sexpr(phi)) == phi


def test_sugar_elaborates():
    assert parse_formula("(and (= 0 0) (= 0 0))").tag == "neg"
    assert parse_formula("(forall 0 (= (v 0) (v 0)))").tag == "neg"
    got = parse_formula("(imp (= 0 0) (= 0 0))")
    assert got.tag == "or" and got.args[0].tag == "neg"


def test_depth_invariant_under_substitution():
    phi = parse_formula("(or (= (v 0) 0) (not (= (v 0) (S 0))))")
    assert S.depth(S.substitute(phi, S.numeral(12), 0)) == S.depth(phi)


def test_sym_length_monotone_under_inclusion():
    a = parse_formula("(= 0 0)")
    b = S.Or(a, parse_formula("(= (S 0) 0)"))
    assert S.sym_length(b) > S.sym_length(a)


@given(st.integers(0, 200), st.integers(0, 200))
def test_apply_assignment_is_iterated_substitution(x, y):
    phi = parse_formula("(or (= (v 0) (v 1)) (= (v 1) 0))")
    both = S.apply_assignment(phi, {0: x, 1: y})
    one = S.substitute(S.substitute(phi, S.numeral(x), 0), S.numeral(y), 1)
    other = S.substitute(S.substitute(phi, S.numeral(y), 1), S.numeral(x), 0)
    assert both == one == other
