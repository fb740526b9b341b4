import pytest

from veritas import proofs as P
from veritas import syntax as S
from veritas.search import (formulas_upto, proof_search, refutable,
                            sentences_upto, terms_upto)
from veritas.sexpr import parse_formula

EQ00 = parse_formula("(= 0 0)")


def toy():
    return P.explicit_theory("toy", S.L_PA, [EQ00, parse_formula("(not (= (S 0) 0))")])


def test_enumeration_is_length_monotone():
    fs = formulas_upto(7, S.L_PA, 1)
    costs = [S.sym_length(f) for f in fs]
    assert costs == sorted(costs)
    assert len(set(fs)) == len(fs)


def test_terms_enumeration_contains_basics():
    ts = terms_upto(4, False, 1)
    assert S.ZERO in ts and S.Succ(S.ZERO) in ts and S.Var(0) in ts


def test_proof_search_finds_trivial():
    pi = proof_search(toy(), EQ00, 60, max_index=1)
    assert pi is not None
    assert P.check_proof(pi, toy()).valid
    assert S.sym_length(pi) <= 60


def test_proof_search_none_certifies_lower_bound():
    assert proof_search(toy(), parse_formula("(= 0 (S 0))"), 72, max_index=1) is None


def test_search_is_exhaustive_on_found_sizes():
    # S(0)+S(0)=S(S(0)) needs an equality chain; nothing fits in 72 bits
    target = parse_formula("(= (+ (S 0) (S 0)) (S (S 0)))")
    assert proof_search(toy(), target, 72, max_index=1) is None


def test_refutable_detects_contradiction():
    empty = P.explicit_theory("e", S.L_PA, [])
    assert refutable(empty, [EQ00, S.Neg(EQ00)], 84, max_index=1)
    assert not refutable(empty, [EQ00], 84, max_index=1)


def test_sentences_enumeration_closed_only():
    for f in sentences_upto(6, S.L_PA, 1):
        assert not S.free_vars(f)
