"""Canonical enumeration of terms, formulas and valid proofs by size.

Enumeration is ordered by (token count, token sequence), so it is
length-monotone and deterministic.  `proof_search` saturates the space of
kernel-valid proofs up to a token budget, keeping one minimal proof per
sequent; a None answer therefore certifies that no proof of the target fits
the budget.
"""

from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache
from typing import Iterator, Optional

from . import proofs as P
from .coding import TOKEN_BITS
from .syntax import (Eq, Exists, Formula, HConst, Lang, Neg, Or, Plus, Succ,
                     Term, Times, Truth, TruthK, Var, ZERO, code,
                     formula_tokens, free_vars, sym_length, term_tokens)

_VAR_COST = {i: 2 + max(i.bit_length(), 0) if i else 2 for i in range(0)}


def _index_cost(i: int) -> int:
    return 1 + (i.bit_length() if i else 0)  # digits + ')'


def term_cost(t: Term) -> int:
    return len(term_tokens(t))


def formula_cost(f: Formula) -> int:
    return len(formula_tokens(f))


@lru_cache(maxsize=None)
def terms_upto(max_tokens: int, henkin: bool = False,
               max_index: int = 3) -> tuple[Term, ...]:
    by_cost: dict[int, list[Term]] = {k: [] for k in range(max_tokens + 1)}
    if max_tokens >= 1:
        by_cost[1].append(ZERO)
    for i in range(max_index + 1):
        c = 1 + _index_cost(i)
        if c <= max_tokens:
            by_cost[c].append(Var(i))
            if henkin:
                by_cost[c].append(HConst(i))
    for k in range(2, max_tokens + 1):
        for t in by_cost[k - 1]:
            by_cost[k].append(Succ(t))
        for k1 in range(1, k - 1):
            k2 = k - 1 - k1
            for a in by_cost[k1]:
                for b in by_cost[k2]:
                    by_cost[k].append(Plus(a, b))
                    by_cost[k].append(Times(a, b))
    out = [t for k in range(1, max_tokens + 1) for t in
           sorted(by_cost[k], key=term_tokens)]
    return tuple(out)


@lru_cache(maxsize=None)
def formulas_upto(max_tokens: int, lang: Lang, max_index: int = 3) -> tuple[Formula, ...]:
    """All formulas of the language with at most max_tokens tokens."""
    terms = terms_upto(max_tokens - 2, lang.henkin, max_index) if max_tokens >= 3 else ()
    tby: dict[int, list[Term]] = {}
    for t in terms:
        tby.setdefault(term_cost(t), []).append(t)
    by_cost: dict[int, list[Formula]] = {k: [] for k in range(max_tokens + 1)}
    # atoms
    for k1, ts1 in tby.items():
        for k2, ts2 in tby.items():
            if 1 + k1 + k2 > max_tokens:
                continue
            for a in ts1:
                for b in ts2:
                    by_cost[1 + k1 + k2].append(Eq(a, b))
    if lang.kind == "t":
        for k1, ts1 in tby.items():
            if 1 + k1 <= max_tokens:
                for a in ts1:
                    by_cost[1 + k1].append(Truth(a))
    if lang.kind == "rt":
        for lvl in range(lang.level):
            over = 2 + _index_cost(lvl)
            for k1, ts1 in tby.items():
                if over + k1 <= max_tokens:
                    for a in ts1:
                        by_cost[over + k1].append(TruthK(lvl, a))
    # compounds
    for k in range(2, max_tokens + 1):
        for f in by_cost[k - 1]:
            by_cost[k].append(Neg(f))
        for k1 in range(1, k - 1):
            k2 = k - 1 - k1
            for a in by_cost[k1]:
                for b in by_cost[k2]:
                    by_cost[k].append(Or(a, b))
        for v in range(max_index + 1):
            sub = k - 1 - _index_cost(v)
            if sub >= 1:
                for f in by_cost[sub]:
                    by_cost[k].append(Exists(v, f))
    out = [f for k in range(1, max_tokens + 1) for f in
           sorted(set(by_cost[k]), key=formula_tokens)]
    return tuple(out)


def sentences_upto(max_tokens: int, lang: Lang, max_index: int = 3) -> list[Formula]:
    return [f for f in formulas_upto(max_tokens, lang, max_index) if not free_vars(f)]


def iter_sentences(lang: Lang, max_index: int = 3,
                   step: int = 4, limit: int = 60) -> Iterator[Formula]:
    """Sentences of the language in (length, serialization) order."""
    seen: set[Formula] = set()
    budget = 3
    while budget <= limit:
        for f in sentences_upto(budget, lang, max_index):
            if f not in seen:
                seen.add(f)
                yield f
        budget += step
    raise RuntimeError("sentence enumeration limit reached")


# Exhaustive bounded proof search

def _proof_cost(rule: str, seq: P.Sequent, premise_costs: int) -> int:
    own = 1 + sum(formula_cost(f) for f in seq.ant) + 1 + \
        sum(formula_cost(f) for f in seq.suc) + 1
    return own + premise_costs


def _seq_key(seq: P.Sequent):
    return (tuple(sorted(tuple(formula_tokens(f)) for f in seq.ant)),
            tuple(sorted(tuple(formula_tokens(f)) for f in seq.suc)))


def _proof_order_key(pi: P.Proof):
    return (len(P.proof_tokens(pi)), tuple(P.proof_tokens(pi)))


def saturate_proofs(theory: P.Theory, budget_bits: int,
                    max_index: int = 2) -> dict:
    """All kernel-valid proofs within the bit budget, one minimal per sequent.

    Returns a map from sequent key to (cost, Proof).  Exhaustive relative to
    the budget: every sequent provable within it appears, with a smallest
    proof (worklist saturation over minimal per-sequent proofs).
    """
    budget = budget_bits // TOKEN_BITS
    lang = theory.lang
    pool = formulas_upto(max(budget - 5, 0), lang, max_index)
    fcost = {f: formula_cost(f) for f in pool}
    pool_by_cost: dict[int, list[Formula]] = {}
    for f in pool:
        pool_by_cost.setdefault(fcost[f], []).append(f)

    def pool_upto(k: int):
        for c, fs in pool_by_cost.items():
            if c <= k:
                yield from fs

    terms = terms_upto(max(budget - 7, 0), lang.henkin, max_index)
    closed_terms = [t for t in terms if not free_vars(t)]

    best: dict = {}
    costs: dict = {}          # id(proof) -> token count
    work: list = []

    def seq_cost(seq: P.Sequent) -> int:
        return 3 + sum(fcost.get(f) or formula_cost(f) for f in seq.ant) + \
            sum(fcost.get(f) or formula_cost(f) for f in seq.suc)

    def consider(rule: str, seq: P.Sequent, premises: tuple) -> None:
        cost = seq_cost(seq) + sum(costs[id(p)] for p in premises)
        if cost > budget:
            return
        key = _seq_key(seq)
        old = best.get(key)
        if old is not None and old[0] < cost:
            return
        node = P.Proof(rule, seq, premises)
        if P._rule_ok(node, theory) is not None:
            return
        if old is not None:
            okey = _proof_order_key(old[1])
            nkey = (cost, tuple(P.proof_tokens(node)))
            if okey <= nkey:
                return
        best[key] = (cost, node)
        costs[id(node)] = cost
        work.append(node)

    # leaves
    for f in pool:
        if fcost[f] * 2 + 3 <= budget:
            consider("ax", P.Sequent((f,), (f,)), ())
    for ax in theory.axioms_upto(budget_bits - 3 * TOKEN_BITS):
        consider("thax", P.Sequent((), (ax,)), ())
    for t in terms:
        if 4 + 2 * len(term_tokens(t)) <= budget:
            consider("eqrefl", P.Sequent((), (Eq(t, t),)), ())
    for s in closed_terms:
        cs = len(term_tokens(s))
        for t in closed_terms:
            if s == t:
                continue
            ct = len(term_tokens(t))
            room_chi = budget - 4 - cs - ct - 3
            if room_chi < 3:
                continue
            for chi in pool_upto(room_chi):
                for chi2 in _replacements(chi, s, t):
                    consider("eqrepl", P.Sequent((Eq(s, t), chi), (chi2,)), ())

    processed: list = []
    while work:
        p = work.pop()
        seq = p.sequent
        ant, suc = seq.ant, seq.suc
        pcost = costs[id(p)]
        room = budget - pcost - seq_cost(seq)
        # weakening
        for f in pool_upto(room):
            consider("weakl", P.Sequent(ant + (f,), suc), (p,))
            consider("weakr", P.Sequent(ant, suc + (f,)), (p,))
        # contraction
        for f, cnt in Counter(ant).items():
            if cnt >= 2:
                consider("contrl", P.Sequent(_remove_one(ant, f), suc), (p,))
        for f, cnt in Counter(suc).items():
            if cnt >= 2:
                consider("contrr", P.Sequent(ant, _remove_one(suc, f)), (p,))
        # negation
        for f in set(suc):
            consider("negl", P.Sequent(ant + (Neg(f),), _remove_one(suc, f)), (p,))
        for f in set(ant):
            consider("negr", P.Sequent(_remove_one(ant, f), suc + (Neg(f),)), (p,))
        # or-right
        for i, a in enumerate(suc):
            for j, b in enumerate(suc):
                if i == j:
                    continue
                s2 = tuple(x for k, x in enumerate(suc) if k not in (i, j))
                consider("orr", P.Sequent(ant, s2 + (Or(a, b),)), (p,))
        # quantifiers
        for f in set(ant):
            for q in pool_upto(room + (fcost.get(f) or formula_cost(f))):
                if q.tag == "exists" and \
                        P.match_substitution(q.args[0], q.var, f) is not None:
                    consider("exl", P.Sequent(_remove_one(ant, f) + (q,), suc), (p,))
        for f in set(suc):
            for q in pool_upto(room + (fcost.get(f) or formula_cost(f))):
                if q.tag == "exists" and \
                        P.match_substitution(q.args[0], q.var, f) is not None:
                    consider("exr", P.Sequent(ant, _remove_one(suc, f) + (q,)), (p,))
        # truth rules
        if "nec" in theory.rules and not ant and len(suc) == 1:
            consider("nec", P.Sequent((), (P.truth_of(suc[0]),)), (p,))
        if "conec" in theory.rules and not ant and len(suc) == 1:
            f = suc[0]
            if f.tag == "truth" and f.level == -1:
                from .syntax import try_decode_formula, eval_term
                try:
                    dec = try_decode_formula(eval_term(f.args[0], {}))
                except Exception:
                    dec = None
                if dec is not None:
                    consider("conec", P.Sequent((), (dec,)), (p,))
        # binary rules against everything already processed (and self)
        others = processed + [p]
        for p2 in others:
            for p1, pr2 in ((p, p2), (p2, p)):
                for f in set(p1.sequent.suc):
                    if f in pr2.sequent.ant:
                        cseq = P.Sequent(
                            p1.sequent.ant + _remove_one(pr2.sequent.ant, f),
                            _remove_one(p1.sequent.suc, f) + pr2.sequent.suc)
                        consider("cut", cseq, (p1, pr2))
                if Counter(p1.sequent.suc) == Counter(pr2.sequent.suc):
                    for i, a in enumerate(p1.sequent.ant):
                        base = _drop_index(p1.sequent.ant, i)
                        for j, b in enumerate(pr2.sequent.ant):
                            if Counter(_drop_index(pr2.sequent.ant, j)) == Counter(base):
                                cseq = P.Sequent(base + (Or(a, b),), p1.sequent.suc)
                                consider("orl", cseq, (p1, pr2))
        processed.append(p)
    return best


def _remove_one(items: tuple, f) -> tuple:
    out = list(items)
    out.remove(f)
    return tuple(out)


def _drop_index(items: tuple, i: int) -> tuple:
    return items[:i] + items[i + 1:]


def _replacements(chi: Formula, s: Term, t: Term) -> list[Formula]:
    """All formulas arising from chi by replacing some occurrences of s by t."""
    def rec_term(u: Term) -> list[Term]:
        opts = [u] if u != s else [u, t]
        if u.args and u != s:
            child_opts = [rec_term(a) for a in u.args]
            opts = [Term(u.tag, combo, u.index)
                    for combo in itertools.product(*child_opts)]
        elif u == s and u.args:
            child_opts = [rec_term(a) for a in u.args]
            opts = [Term(u.tag, combo, u.index)
                    for combo in itertools.product(*child_opts)] + [t]
        return list(dict.fromkeys(opts))

    def rec(f: Formula) -> list[Formula]:
        if f.tag in ("eq", "rel", "truth"):
            child_opts = [rec_term(a) for a in f.args]
            return [Formula(f.tag, combo, var=f.var, level=f.level, rel=f.rel)
                    for combo in itertools.product(*child_opts)]
        child_opts = [rec(a) for a in f.args]
        return [Formula(f.tag, combo, var=f.var, level=f.level, rel=f.rel)
                for combo in itertools.product(*child_opts)]

    return [g for g in rec(chi) if g != chi]


def proof_search(theory: P.Theory, phi: Formula, budget_bits: int,
                 max_index: int = 2) -> Optional[P.Proof]:
    """Smallest kernel proof of the sequent => phi within the budget, if any.

    Exhaustive: a None answer certifies that every proof of phi is longer
    than budget_bits in the canonical serialization.
    """
    best = saturate_proofs(theory, budget_bits, max_index)
    hit = best.get(_seq_key(P.Sequent((), (phi,))))
    return hit[1] if hit else None


def refutable(theory: P.Theory, sentences, budget_bits: int,
              max_index: int = 2) -> bool:
    """True when a sequent Gamma => (empty) with Gamma drawn from the given
    sentences is derivable within the budget."""
    sentences = tuple(sentences)
    ext = P.extend_theory(theory, sentences, name=f"{theory.name}+ctx")
    best = saturate_proofs(ext, budget_bits, max_index)
    for (ant_key, suc_key), (_, pi) in best.items():
        if suc_key:
            continue
        if all(f in sentences or theory.contains(f) for f in pi.sequent.ant):
            return True
    return False
