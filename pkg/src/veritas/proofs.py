"""Sequent-calculus proof objects and the checking kernel.

Two-sided Gentzen calculus with explicit structural rules, an equality leaf
family (reflexivity, closed-term replacement), theory axioms as initial
sequents, and the whole-sequent truth rules NEC / CONEC gated by the theory.
Antecedents and succedents are compared as multisets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .syntax import (CaptureError, Eq, Exists, Formula, Lang, Neg, Or, Term,
                     Truth, UNTYPED, Var, code, depth, free_vars,
                     free_vars_term, numeral, substitute, formula_tokens)

RULES = {
    "ax": 0, "thax": 0, "eqrefl": 0, "eqrepl": 0,
    "cut": 2, "negl": 1, "negr": 1, "orl": 2, "orr": 1,
    "exl": 1, "exr": 1,
    "weakl": 1, "weakr": 1, "contrl": 1, "contrr": 1,
    "nec": 1, "conec": 1,
}


@dataclass(frozen=True)
class Sequent:
    ant: tuple[Formula, ...]
    suc: tuple[Formula, ...]

    def __repr__(self):
        from .sexpr import sequent_to_sexpr
        return f"Sequent({sequent_to_sexpr(self)})"


@dataclass(frozen=True)
class Proof:
    rule: str
    sequent: Sequent
    premises: tuple["Proof", ...] = ()

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if len(self.premises) != RULES[self.rule]:
            raise ValueError(f"{self.rule} takes {RULES[self.rule]} premises")


@dataclass(frozen=True)
class Theory:
    """A definable set of axiom sentences plus optional extra rules.

    `contains` decides membership; `axioms_upto(n)` lists exactly the axioms
    of sym_length <= n in (length, code) order, so enumeration is
    length-monotone and agrees with membership on every listed axiom.
    """
    name: str
    lang: Lang
    contains: Callable[[Formula], bool]
    axioms_upto: Callable[[int], list[Formula]]
    rules: frozenset = frozenset()

    def __repr__(self):
        return f"Theory({self.name})"


@dataclass
class CheckReport:
    valid: bool
    nec_count: int = 0
    conec_count: int = 0
    max_depth: int = 0
    diagnostics: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "nec_count": self.nec_count,
            "conec_count": self.conec_count,
            "max_depth": self.max_depth,
            "diagnostics": list(self.diagnostics),
        }


def truth_of(phi: Formula) -> Formula:
    """The sentence T(num(code(phi))) introduced by NEC."""
    return Truth(numeral(code(phi)))


def _match_subst_term(pattern: Term, target: Term, v: int, hits: list) -> bool:
    if pattern.tag == "var" and pattern.index == v:
        hits.append(target)
        return True
    if pattern.tag != target.tag or pattern.index != target.index:
        return False
    return all(_match_subst_term(a, b, v, hits)
               for a, b in zip(pattern.args, target.args))


def _match_subst(pattern: Formula, target: Formula, v: int, hits: list) -> bool:
    if pattern.tag != target.tag:
        return False
    if pattern.tag in ("eq", "rel", "truth"):
        if pattern.rel != target.rel or pattern.level != target.level \
                or len(pattern.args) != len(target.args):
            return False
        return all(_match_subst_term(a, b, v, hits)
                   for a, b in zip(pattern.args, target.args))
    if pattern.tag == "exists":
        if pattern.var != target.var:
            return False
        if pattern.var == v:
            return pattern == target
        return _match_subst(pattern.args[0], target.args[0], v, hits)
    return all(_match_subst(a, b, v, hits)
               for a, b in zip(pattern.args, target.args))


def match_substitution(pattern: Formula, v: int, target: Formula) -> Optional[Term]:
    """A term t with pattern[t/v] == target, if one exists.

    When v is not free in pattern, returns Var(v) as a harmless witness.
    """
    hits: list[Term] = []
    if not _match_subst(pattern, target, v, hits):
        return None
    if not hits:
        return Var(v) if pattern == target else None
    t = hits[0]
    if any(h != t for h in hits[1:]):
        return None
    try:
        if substitute(pattern, t, v) != target:
            return None
    except CaptureError:
        return None
    return t


def _replaced_term(u: Term, u2: Term, s: Term, t: Term) -> bool:
    if u == u2:
        return True
    if u == s and u2 == t:
        return True
    if u.tag != u2.tag or u.index != u2.index:
        return False
    return all(_replaced_term(a, b, s, t) for a, b in zip(u.args, u2.args))


def replaced(chi: Formula, chi2: Formula, s: Term, t: Term) -> bool:
    """chi2 arises from chi by replacing some occurrences of s by t."""
    if chi.tag != chi2.tag or chi.var != chi2.var or chi.level != chi2.level \
            or chi.rel != chi2.rel or len(chi.args) != len(chi2.args):
        return False
    if chi.tag in ("eq", "rel", "truth"):
        return all(_replaced_term(a, b, s, t) for a, b in zip(chi.args, chi2.args))
    return all(replaced(a, b, s, t) for a, b in zip(chi.args, chi2.args))


def _rule_ok(node: Proof, theory: Theory) -> Optional[str]:
    """None if the node is locally valid, else a diagnostic string."""
    rule, seq, prem = node.rule, node.sequent, node.premises
    ant, suc = Counter(seq.ant), Counter(seq.suc)

    if rule == "ax":
        if len(seq.ant) == 1 and seq.ant == seq.suc:
            return None
        return "axiom must be phi => phi"

    if rule == "thax":
        if seq.ant or len(seq.suc) != 1:
            return "theory axiom must be => phi"
        if not theory.contains(seq.suc[0]):
            return "axiom not in theory"
        return None

    if rule == "eqrefl":
        if seq.ant or len(seq.suc) != 1:
            return "reflexivity must be => t=t"
        phi = seq.suc[0]
        if phi.tag == "eq" and phi.args[0] == phi.args[1]:
            return None
        return "reflexivity must conclude t=t"

    if rule == "eqrepl":
        if len(seq.ant) != 2 or len(seq.suc) != 1:
            return "replacement must be s=t, chi => chi'"
        eqf, chi = seq.ant
        if eqf.tag != "eq":
            eqf, chi = chi, eqf
        if eqf.tag != "eq":
            return "replacement needs an equation in the antecedent"
        s, t = eqf.args
        if free_vars_term(s) or free_vars_term(t):
            return "replacement equation must be closed"
        if replaced(chi, seq.suc[0], s, t):
            return None
        return "succedent is not a replacement instance of the antecedent"

    if rule == "weakl":
        p = prem[0].sequent
        if Counter(p.suc) == suc and _is_sub(Counter(p.ant), ant, 1):
            return None
        return "weakening-left mismatch"

    if rule == "weakr":
        p = prem[0].sequent
        if Counter(p.ant) == ant and _is_sub(Counter(p.suc), suc, 1):
            return None
        return "weakening-right mismatch"

    if rule == "contrl":
        p = prem[0].sequent
        if Counter(p.suc) != suc:
            return "contraction-left changes the succedent"
        diff = Counter(p.ant) - ant
        if sum(diff.values()) == 1 and Counter(p.ant) == ant + diff \
                and ant[next(iter(diff))] >= 1:
            return None
        return "contraction-left mismatch"

    if rule == "contrr":
        p = prem[0].sequent
        if Counter(p.ant) != ant:
            return "contraction-right changes the antecedent"
        diff = Counter(p.suc) - suc
        if sum(diff.values()) == 1 and Counter(p.suc) == suc + diff \
                and suc[next(iter(diff))] >= 1:
            return None
        return "contraction-right mismatch"

    if rule == "negl":
        p = prem[0].sequent
        for phi in set(seq.ant):
            if phi.tag != "neg":
                continue
            want_ant = ant - Counter([phi])
            want_suc = suc + Counter([phi.args[0]])
            if Counter(p.ant) == want_ant and Counter(p.suc) == want_suc:
                return None
        return "negation-left mismatch"

    if rule == "negr":
        p = prem[0].sequent
        for phi in set(seq.suc):
            if phi.tag != "neg":
                continue
            if Counter(p.ant) == ant + Counter([phi.args[0]]) \
                    and Counter(p.suc) == suc - Counter([phi]):
                return None
        return "negation-right mismatch"

    if rule == "orl":
        p1, p2 = prem[0].sequent, prem[1].sequent
        for phi in set(seq.ant):
            if phi.tag != "or":
                continue
            base = ant - Counter([phi])
            a, b = phi.args
            if Counter(p1.ant) == base + Counter([a]) and Counter(p1.suc) == suc \
                    and Counter(p2.ant) == base + Counter([b]) and Counter(p2.suc) == suc:
                return None
        return "or-left mismatch"

    if rule == "orr":
        p = prem[0].sequent
        for phi in set(seq.suc):
            if phi.tag != "or":
                continue
            a, b = phi.args
            if Counter(p.ant) == ant \
                    and Counter(p.suc) == suc - Counter([phi]) + Counter([a, b]):
                return None
        return "or-right mismatch"

    if rule == "exl":
        p = prem[0].sequent
        if Counter(p.suc) != suc:
            return "exists-left changes the succedent"
        for phi in set(seq.ant):
            if phi.tag != "exists":
                continue
            base = ant - Counter([phi])
            diff = Counter(p.ant) - base
            if sum(diff.values()) != 1 or Counter(p.ant) - diff != base:
                continue
            inst = next(iter(diff))
            t = match_substitution(phi.args[0], phi.var, inst)
            if t is None or t.tag != "var":
                continue
            w = t.index
            side = set().union(*(free_vars(f) for f in seq.ant + seq.suc)) \
                if seq.ant + seq.suc else set()
            if w in side:
                return f"eigenvariable v{w} occurs free in the conclusion"
            return None
        return "exists-left mismatch"

    if rule == "exr":
        p = prem[0].sequent
        if Counter(p.ant) != ant:
            return "exists-right changes the antecedent"
        for phi in set(seq.suc):
            if phi.tag != "exists":
                continue
            base = suc - Counter([phi])
            diff = Counter(p.suc) - base
            if sum(diff.values()) != 1 or Counter(p.suc) - diff != base:
                continue
            inst = next(iter(diff))
            if match_substitution(phi.args[0], phi.var, inst) is not None:
                return None
        return "exists-right mismatch"

    if rule == "cut":
        p1, p2 = prem[0].sequent, prem[1].sequent
        for phi in set(p1.suc):
            if Counter(p2.ant)[phi] < 1:
                continue
            want_ant = Counter(p1.ant) + Counter(p2.ant) - Counter([phi])
            want_suc = Counter(p1.suc) - Counter([phi]) + Counter(p2.suc)
            if ant == want_ant and suc == want_suc:
                return None
        return "cut mismatch"

    if rule in ("nec", "conec"):
        if rule not in theory.rules:
            return f"rule {rule} not enabled by theory {theory.name}"
        p = prem[0].sequent
        if seq.ant or p.ant or len(seq.suc) != 1 or len(p.suc) != 1:
            return f"{rule} applies only to sequents => phi"
        if rule == "nec":
            want = truth_of(p.suc[0])
            return None if seq.suc[0] == want else "conclusion is not T(num(code(premise)))"
        want = truth_of(seq.suc[0])
        return None if p.suc[0] == want else "premise is not T(num(code(conclusion)))"

    return f"unknown rule {rule}"


def _is_sub(small: Counter, big: Counter, extra: int) -> bool:
    """big == small plus exactly `extra` additional formula occurrences."""
    diff = big - small
    return big - diff == small and sum(diff.values()) == extra


def iter_nodes(pi: Proof) -> Iterator[tuple[str, Proof]]:
    """(path, node) pairs in preorder; paths are premise-index strings."""
    stack = [("", pi)]
    while stack:
        path, node = stack.pop()
        yield path, node
        for i, p in enumerate(reversed(node.premises)):
            j = len(node.premises) - 1 - i
            stack.append((f"{path}.{j}" if path else str(j), p))


def check_proof(pi: Proof, theory: Theory) -> CheckReport:
    report = CheckReport(valid=True)
    seen_depth = 0
    for path, node in iter_nodes(pi):
        for phi in node.sequent.ant + node.sequent.suc:
            seen_depth = max(seen_depth, depth(phi))
        if node.rule == "nec":
            report.nec_count += 1
        elif node.rule == "conec":
            report.conec_count += 1
        err = _rule_ok(node, theory)
        if err is not None:
            report.valid = False
            report.diagnostics.append(f"node {path or 'root'}: {err}")
    report.max_depth = seen_depth
    return report


def proof_tokens(pi: Proof) -> list[str]:
    out: list[str] = []
    stack: list[Proof] = [pi]
    while stack:
        node = stack.pop()
        out.append(node.rule)
        for phi in node.sequent.ant:
            out.extend(formula_tokens(phi))
        out.append(".")
        for phi in node.sequent.suc:
            out.extend(formula_tokens(phi))
        out.append(".")
        stack.extend(reversed(node.premises))
    return out


def node_count(pi: Proof) -> int:
    return sum(1 for _ in iter_nodes(pi))


def endsequent(pi: Proof) -> Sequent:
    return pi.sequent


def conclusion_formula(pi: Proof) -> Optional[Formula]:
    """The proved sentence when the endsequent has shape => phi."""
    if not pi.sequent.ant and len(pi.sequent.suc) == 1:
        return pi.sequent.suc[0]
    return None


# Theory combinators

def restrict_theory(theory: Theory, n: int) -> Theory:
    """T restricted to axioms of sym_length <= n (Def. of the length filter)."""
    from .syntax import sym_length

    def contains(phi: Formula) -> bool:
        return sym_length(phi) <= n and theory.contains(phi)

    def axioms_upto(m: int) -> list[Formula]:
        return theory.axioms_upto(min(n, m))

    return Theory(f"{theory.name}|{n}", theory.lang, contains, axioms_upto,
                  theory.rules)


def extend_theory(theory: Theory, extra: Iterable[Formula], name: Optional[str] = None,
                  rules: Optional[frozenset] = None) -> Theory:
    from .syntax import sym_length
    extra = tuple(extra)
    extra_set = set(extra)

    def contains(phi: Formula) -> bool:
        return phi in extra_set or theory.contains(phi)

    def axioms_upto(m: int) -> list[Formula]:
        out = list(theory.axioms_upto(m))
        out.extend(phi for phi in extra if sym_length(phi) <= m)
        out.sort(key=lambda f: (sym_length(f), code(f)))
        return _dedup(out)

    return Theory(name or f"{theory.name}+", theory.lang, contains, axioms_upto,
                  theory.rules if rules is None else rules)


def explicit_theory(name: str, lang: Lang, axioms: Iterable[Formula],
                    rules: frozenset = frozenset()) -> Theory:
    from .syntax import sym_length
    axioms = tuple(axioms)
    axiom_set = set(axioms)
    ordered = sorted(axiom_set, key=lambda f: (sym_length(f), code(f)))

    def axioms_upto(m: int) -> list[Formula]:
        return [phi for phi in ordered if sym_length(phi) <= m]

    return Theory(name, lang, lambda phi: phi in axiom_set, axioms_upto, rules)


def _dedup(formulas: list[Formula]) -> list[Formula]:
    seen = set()
    out = []
    for f in formulas:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out
