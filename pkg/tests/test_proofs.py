import pytest

from veritas import proofs as P
from veritas import syntax as S
from veritas.sexpr import parse_formula, parse_proof, proof_to_sexpr
from veritas.syntax import Eq, Exists, Neg, Or, Succ, Var, ZERO, numeral

EQ00 = parse_formula("(= 0 0)")
EQ10 = parse_formula("(= (S 0) 0)")


def seq(ant, suc):
    return P.Sequent(tuple(ant), tuple(suc))


def toy_theory(*axioms, rules=frozenset()):
    return P.explicit_theory("toy", S.L_T, axioms, rules=rules)


def test_identity_axiom_valid():
    pi = P.Proof("ax", seq([EQ00], [EQ00]))
    assert P.check_proof(pi, toy_theory()).valid


def test_axiom_not_in_theory():
    pi = P.Proof("thax", seq([], [EQ10]))
    rep = P.check_proof(pi, toy_theory(EQ00))
    assert not rep.valid
    assert any("axiom not in theory" in d for d in rep.diagnostics)


def test_nec_builds_truth_of_code():
    theory = toy_theory(EQ00, rules=frozenset({"nec"}))
    base = P.Proof("thax", seq([], [EQ00]))
    t = P.truth_of(EQ00)
    pi = P.Proof("nec", seq([], [t]), (base,))
    rep = P.check_proof(pi, theory)
    assert rep.valid and rep.nec_count == 1 and rep.conec_count == 0


def test_nec_rejected_without_gate():
    base = P.Proof("thax", seq([], [EQ00]))
    pi = P.Proof("nec", seq([], [P.truth_of(EQ00)]), (base,))
    rep = P.check_proof(pi, toy_theory(EQ00))
    assert not rep.valid


def test_cut_and_structural_rules():
    # from => phi and phi => phi, cut gives => phi
    theory = toy_theory(EQ00)
    ax = P.Proof("ax", seq([EQ00], [EQ00]))
    th = P.Proof("thax", seq([], [EQ00]))
    cut = P.Proof("cut", seq([], [EQ00]), (th, ax))
    assert P.check_proof(cut, theory).valid


def test_or_rules():
    phi, psi = EQ00, EQ10
    left = P.Proof("ax", seq([phi], [phi]))
    wk = P.Proof("weakr", seq([phi], [phi, psi]), (left,))
    orr = P.Proof("orr", seq([phi], [Or(phi, psi)]), (wk,))
    assert P.check_proof(orr, toy_theory()).valid

    right = P.Proof("ax", seq([psi], [psi]))
    wk2 = P.Proof("weakr", seq([psi], [psi, phi]), (right,))
    # or-left needs both branches to share the succedent
    b1 = P.Proof("orr", seq([phi], [Or(psi, phi)]),
                 (P.Proof("weakr", seq([phi], [psi, phi]),
                          (P.Proof("ax", seq([phi], [phi])),)),))
    b2 = P.Proof("orr", seq([psi], [Or(psi, phi)]), (wk2,))
    orl = P.Proof("orl", seq([Or(phi, psi)], [Or(psi, phi)]), (b1, b2))
    assert P.check_proof(orl, toy_theory()).valid


def test_neg_rules():
    phi = EQ00
    ax = P.Proof("ax", seq([phi], [phi]))
    negr = P.Proof("negr", seq([], [phi, Neg(phi)]),
                   (P.Proof("weakr", seq([phi], [phi, phi]), (ax,)),))
    assert not P.check_proof(negr, toy_theory()).valid  # wrong premise shape
    negl = P.Proof("negl", seq([Neg(phi), phi], []), (ax,))
    assert P.check_proof(negl, toy_theory()).valid


def test_excluded_middle_derivation():
    phi = EQ10
    ax = P.Proof("ax", seq([phi], [phi]))
    negr = P.Proof("negr", seq([], [phi, Neg(phi)]), (ax,))
    orr = P.Proof("orr", seq([], [Or(phi, Neg(phi)), Neg(phi)]),
                  (P.Proof("weakr", seq([], [phi, Neg(phi), Neg(phi)]), (negr,)),))
    assert P.check_proof(orr, toy_theory()).valid
    # the direct route: both disjuncts already in the succedent
    orr2 = P.Proof("orr", seq([], [Or(phi, Neg(phi))]), (negr,))
    assert P.check_proof(orr2, toy_theory()).valid
    # wrong principal formula is rejected
    bad = P.Proof("orr", seq([], [Or(phi, phi)]), (negr,))
    assert not P.check_proof(bad, toy_theory()).valid


def test_exists_right():
    inst = Eq(numeral(0), ZERO)
    goal = Exists(0, Eq(Var(0), ZERO))
    base = P.Proof("eqrefl", seq([], [inst]))
    pi = P.Proof("exr", seq([], [goal]), (base,))
    assert P.check_proof(pi, toy_theory()).valid


def test_exists_left_eigenvariable():
    phi = Exists(0, Eq(Var(0), Var(1)))
    inst = Eq(Var(2), Var(1))
    ax = P.Proof("ax", seq([inst], [inst]))
    exr = P.Proof("exr", seq([inst], [phi]), (ax,))
    exl = P.Proof("exl", seq([phi], [phi]), (exr,))
    assert P.check_proof(exl, toy_theory()).valid
    # eigenvariable occurring in the conclusion is rejected
    bad_inst = Eq(Var(1), Var(1))
    bad = P.Proof("exl", seq([phi], [phi]),
                  (P.Proof("exr", seq([bad_inst], [phi]),
                           (P.Proof("ax", seq([bad_inst], [bad_inst])),)),))
    assert not P.check_proof(bad, toy_theory()).valid


def test_eqrepl_replacement():
    s, t = Succ(ZERO), numeral(1)
    chi = Eq(Plus := S.Plus(s, ZERO), s)
    chi2 = Eq(S.Plus(t, ZERO), s)
    pi = P.Proof("eqrepl", seq([Eq(s, t), chi], [chi2]))
    assert P.check_proof(pi, toy_theory()).valid
    bad = P.Proof("eqrepl", seq([Eq(s, t), chi], [Eq(S.Plus(t, ZERO), t)]))
    assert P.check_proof(bad, toy_theory()).valid  # replaced both occurrences
    worse = P.Proof("eqrepl", seq([Eq(s, t), chi], [Eq(ZERO, s)]))
    assert not P.check_proof(worse, toy_theory()).valid


def test_eqrepl_requires_closed_equation():
    s, t = Var(0), ZERO
    pi = P.Proof("eqrepl", seq([Eq(s, t), Eq(s, s)], [Eq(ZERO, ZERO)]))
    assert not P.check_proof(pi, toy_theory()).valid


def test_proof_sexpr_roundtrip():
    base = P.Proof("thax", seq([], [EQ00]))
    pi = P.Proof("nec", seq([], [P.truth_of(EQ00)]), (base,))
    assert parse_proof(proof_to_sexpr(pi)) == pi


def test_proof_code_roundtrip_through_codecheck():
    from veritas import codecheck as C
    base = P.Proof("thax", seq([], [EQ00]))
    code = S.code(base)
    tup = C.decode_proof_code(code)
    assert tup[0] == "thax" and tup[2][0] == ("=", ("0",), ("0",))


def test_restrict_theory_monotone_idempotent():
    theory = toy_theory(EQ00, Neg(EQ10))
    r8 = P.restrict_theory(theory, 48)
    r8b = P.restrict_theory(r8, 48)
    assert [f for f in r8.axioms_upto(1000)] == [f for f in r8b.axioms_upto(1000)]
    small = P.restrict_theory(theory, 10)
    assert set(small.axioms_upto(1000)) <= set(r8.axioms_upto(1000))


def test_diagnostics_name_node_path():
    bad = P.Proof("ax", seq([EQ00], [EQ10]))
    outer = P.Proof("weakl", seq([EQ00, EQ10], [EQ10]),
                    (P.Proof("ax", seq([EQ10], [EQ10])),))
    rep = P.check_proof(P.Proof("cut", seq([EQ00, EQ00], [EQ10]), (bad, outer)),
                        toy_theory())
    assert not rep.valid
    assert any(d.startswith("node 0:") for d in rep.diagnostics)
