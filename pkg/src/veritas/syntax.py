"""Arithmetized syntax: terms, formulas, numerals, substitution and metrics.

Terms are built from {0, S, +, *} plus variables (and, for the Henkin
constructor, witness constants).  Formulas use the primitive basis
{=, rel, not, or, exists, truth}; conjunction, implication and universal
quantification are parser-level sugar elaborated here.  Depth and length are
computed on the elaborated tree.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union

from .coding import godel_encode, index_bits, read_index, tokens_to_bits, TOKEN_BITS

sys.setrecursionlimit(100_000)

# Relation symbols used by fixtures get stable ids for serialization.
REL_REGISTRY: dict[str, int] = {"Sat": 0, "S": 1, "P": 2}
_REL_BY_ID = {v: k for k, v in REL_REGISTRY.items()}

UNTYPED = -1  # level tag of the single self-applicable truth predicate


def register_relation(name: str) -> int:
    if name not in REL_REGISTRY:
        REL_REGISTRY[name] = max(REL_REGISTRY.values(), default=-1) + 1
        _REL_BY_ID[REL_REGISTRY[name]] = name
    return REL_REGISTRY[name]


class SyntaxError_(ValueError):
    pass


@dataclass(frozen=True)
class Term:
    tag: str                       # zero | succ | plus | times | var | hconst
    args: tuple["Term", ...] = ()
    index: int = 0                 # var / hconst index

    _ARITY = {"zero": 0, "succ": 1, "plus": 2, "times": 2, "var": 0, "hconst": 0}

    def __post_init__(self):
        if self.tag not in self._ARITY:
            raise SyntaxError_(f"unknown term tag {self.tag!r}")
        if len(self.args) != self._ARITY[self.tag]:
            raise SyntaxError_(f"{self.tag} expects {self._ARITY[self.tag]} children")
        if self.tag in ("var", "hconst") and self.index < 0:
            raise SyntaxError_("indices are natural numbers")

    def __repr__(self):
        from .sexpr import term_to_sexpr
        return f"Term({term_to_sexpr(self)})"


@dataclass(frozen=True)
class Formula:
    tag: str                       # eq | rel | neg | or | exists | truth
    args: tuple = ()               # Terms (eq, rel, truth) or Formulas (neg, or, exists)
    var: int = 0                   # bound variable for exists
    level: int = UNTYPED           # truth level; UNTYPED for the self-applicable T
    rel: str = ""                  # relation symbol for rel atoms

    def __post_init__(self):
        t = self.tag
        if t == "eq":
            ok = len(self.args) == 2 and all(isinstance(a, Term) for a in self.args)
        elif t == "rel":
            ok = bool(self.rel) and all(isinstance(a, Term) for a in self.args)
        elif t == "neg":
            ok = len(self.args) == 1 and isinstance(self.args[0], Formula)
        elif t == "or":
            ok = len(self.args) == 2 and all(isinstance(a, Formula) for a in self.args)
        elif t == "exists":
            ok = len(self.args) == 1 and isinstance(self.args[0], Formula) and self.var >= 0
        elif t == "truth":
            ok = len(self.args) == 1 and isinstance(self.args[0], Term)
        else:
            raise SyntaxError_(f"unknown formula tag {t!r}")
        if not ok:
            raise SyntaxError_(f"malformed {t} node")

    def __repr__(self):
        from .sexpr import formula_to_sexpr
        return f"Formula({formula_to_sexpr(self)})"


# Constructors

ZERO = Term("zero")


def Var(i: int) -> Term:
    return Term("var", index=i)


def HConst(i: int) -> Term:
    return Term("hconst", index=i)


def Succ(t: Term) -> Term:
    return Term("succ", (t,))


def Plus(t: Term, u: Term) -> Term:
    return Term("plus", (t, u))


def Times(t: Term, u: Term) -> Term:
    return Term("times", (t, u))


def Eq(s: Term, t: Term) -> Formula:
    return Formula("eq", (s, t))


def Rel(name: str, *args: Term) -> Formula:
    register_relation(name)
    return Formula("rel", tuple(args), rel=name)


def Neg(f: Formula) -> Formula:
    return Formula("neg", (f,))


def Or(f: Formula, g: Formula) -> Formula:
    return Formula("or", (f, g))


def Exists(v: int, f: Formula) -> Formula:
    return Formula("exists", (f,), var=v)


def Truth(t: Term) -> Formula:
    return Formula("truth", (t,))


def TruthK(k: int, t: Term) -> Formula:
    if k < 0:
        raise SyntaxError_("truth levels are natural numbers")
    return Formula("truth", (t,), level=k)


# Derived connectives (single primitive basis; see README)

def And(f: Formula, g: Formula) -> Formula:
    return Neg(Or(Neg(f), Neg(g)))


def Implies(f: Formula, g: Formula) -> Formula:
    return Or(Neg(f), g)


def Iff(f: Formula, g: Formula) -> Formula:
    return And(Implies(f, g), Implies(g, f))


def Forall(v: int, f: Formula) -> Formula:
    return Neg(Exists(v, Neg(f)))


def LessEq(s: Term, t: Term, scratch: Optional[int] = None) -> Formula:
    """s <= t  :=  exists w (w + s = t), w fresh."""
    if scratch is None:
        scratch = max(list(free_vars_term(s)) + list(free_vars_term(t)) + [-1]) + 1
    return Exists(scratch, Eq(Plus(Var(scratch), s), t))


def ExistsLe(v: int, bound: Term, f: Formula) -> Formula:
    return Exists(v, And(LessEq(Var(v), bound), f))


def ForallLe(v: int, bound: Term, f: Formula) -> Formula:
    return Forall(v, Implies(LessEq(Var(v), bound), f))


# Numerals (binary expansion; num 0 = 0, num 1 = S(0), num 2 = S(0)+S(0))

ONE = Succ(ZERO)
TWO = Plus(ONE, ONE)


def numeral(n: int) -> Term:
    if n < 0:
        raise ValueError("numerals denote natural numbers")
    if n == 0:
        return ZERO

    def build(bits: list[int]) -> Term:
        if len(bits) == 1:
            return ONE if bits[0] else ZERO
        return Plus(ONE if bits[0] else ZERO, Times(TWO, build(bits[1:])))

    bits = [int(b) for b in bin(n)[:1:-1]]  # LSB first
    return build(bits)


# Free variables, evaluation, depth, substitution

def free_vars_term(t: Term) -> frozenset[int]:
    if t.tag == "var":
        return frozenset((t.index,))
    out: frozenset[int] = frozenset()
    for a in t.args:
        out |= free_vars_term(a)
    return out


def free_vars(x: Union[Term, Formula]) -> frozenset[int]:
    if isinstance(x, Term):
        return free_vars_term(x)
    if x.tag in ("eq", "rel", "truth"):
        out: frozenset[int] = frozenset()
        for a in x.args:
            out |= free_vars_term(a)
        return out
    if x.tag == "exists":
        return free_vars(x.args[0]) - {x.var}
    out = frozenset()
    for a in x.args:
        out |= free_vars(a)
    return out


def henkin_consts(x: Union[Term, Formula]) -> frozenset[int]:
    if isinstance(x, Term):
        if x.tag == "hconst":
            return frozenset((x.index,))
        out: frozenset[int] = frozenset()
        for a in x.args:
            out |= henkin_consts(a)
        return out
    out = frozenset()
    for a in x.args:
        out |= henkin_consts(a)
    return out


Assignment = Mapping[int, int]


class UnboundVariable(SyntaxError_):
    pass


def eval_term(t: Term, alpha: Assignment, hvals: Optional[Mapping[int, int]] = None) -> int:
    """Standard-model value of t under alpha; hvals interprets Henkin constants."""
    if t.tag == "zero":
        return 0
    if t.tag == "var":
        try:
            return alpha[t.index]
        except KeyError:
            raise UnboundVariable(f"variable v{t.index} is unbound") from None
    if t.tag == "hconst":
        if hvals is None or t.index not in hvals:
            raise UnboundVariable(f"henkin constant c{t.index} has no value")
        return hvals[t.index]
    if t.tag == "succ":
        return eval_term(t.args[0], alpha, hvals) + 1
    if t.tag == "plus":
        return eval_term(t.args[0], alpha, hvals) + eval_term(t.args[1], alpha, hvals)
    return eval_term(t.args[0], alpha, hvals) * eval_term(t.args[1], alpha, hvals)


def depth(x: Union[Term, Formula]) -> int:
    """Longest path in the syntactic tree; whole terms are leaves, atoms have depth 0."""
    if isinstance(x, Term):
        return 0
    if x.tag in ("eq", "rel", "truth"):
        return 0
    return 1 + max(depth(a) for a in x.args)


def subst_term(t: Term, replacement: Term, v: int) -> Term:
    if t.tag == "var":
        return replacement if t.index == v else t
    if not t.args:
        return t
    return Term(t.tag, tuple(subst_term(a, replacement, v) for a in t.args), t.index)


class CaptureError(SyntaxError_):
    pass


def substitute(phi: Formula, t: Term, v: int) -> Formula:
    """Replace every free occurrence of v in phi by t; raises on capture."""
    if phi.tag in ("eq", "rel", "truth"):
        return Formula(phi.tag, tuple(subst_term(a, t, v) for a in phi.args),
                       var=phi.var, level=phi.level, rel=phi.rel)
    if phi.tag == "exists":
        if phi.var == v:
            return phi
        if v in free_vars(phi.args[0]) and phi.var in free_vars_term(t):
            raise CaptureError(
                f"substituting for v{v} would capture v{phi.var}")
        return Exists(phi.var, substitute(phi.args[0], t, v))
    return Formula(phi.tag, tuple(substitute(a, t, v) for a in phi.args),
                   var=phi.var, level=phi.level, rel=phi.rel)


def apply_assignment(phi: Formula, alpha: Assignment) -> Formula:
    """Substitute numeral(alpha(v)) for each free v; alpha must cover FV(phi)."""
    fv = free_vars(phi)
    missing = fv - set(alpha)
    if missing:
        raise UnboundVariable(f"assignment misses variables {sorted(missing)}")
    out = phi
    for v in sorted(fv):
        out = substitute(out, numeral(alpha[v]), v)
    return out


def apply_assignment_term(t: Term, alpha: Assignment) -> Term:
    out = t
    for v in sorted(free_vars_term(t)):
        if v not in alpha:
            raise UnboundVariable(f"assignment misses variable v{v}")
        out = subst_term(out, numeral(alpha[v]), v)
    return out


# Language classification

@dataclass(frozen=True)
class Lang:
    """Language tag: L_PA, L_T (one self-applicable T) or L_{<k} (typed T_0..T_{k-1})."""
    kind: str                      # 'pa' | 't' | 'rt'
    level: int = 0                 # for 'rt': number of typed predicates
    rels: frozenset = frozenset()  # extra relation symbols admitted
    henkin: bool = False

    def __post_init__(self):
        if self.kind not in ("pa", "t", "rt"):
            raise SyntaxError_(f"unknown language kind {self.kind!r}")


L_PA = Lang("pa")
L_T = Lang("t")


def L_RT(k: int) -> Lang:
    return Lang("rt", level=k)


def _truth_profile(phi: Formula) -> tuple[bool, int]:
    """(uses untyped T, max typed level + 1) over the whole tree."""
    untyped = False
    max_level = 0
    stack = [phi]
    while stack:
        x = stack.pop()
        if isinstance(x, Formula):
            if x.tag == "truth":
                if x.level == UNTYPED:
                    untyped = True
                else:
                    max_level = max(max_level, x.level + 1)
            stack.extend(a for a in x.args if isinstance(a, Formula))
    return untyped, max_level


def _rels_used(phi: Formula) -> frozenset[str]:
    out = set()
    stack = [phi]
    while stack:
        x = stack.pop()
        if isinstance(x, Formula):
            if x.tag == "rel":
                out.add(x.rel)
            stack.extend(a for a in x.args if isinstance(a, Formula))
    return frozenset(out)


def in_language(phi: Formula, lang: Lang) -> bool:
    untyped, max_level = _truth_profile(phi)
    if untyped and lang.kind != "t":
        return False
    if max_level > 0 and (lang.kind != "rt" or max_level > lang.level):
        return False
    if not (_rels_used(phi) <= lang.rels):
        return False
    if not lang.henkin and henkin_consts(phi):
        return False
    return True


def term_in_language(t: Term, lang: Lang) -> bool:
    return lang.henkin or not henkin_consts(t)


def classify(x: Union[Term, Formula], kind: str, lang: Lang) -> bool:
    """Decide 'term', 'clterm', 'form', 'sent' or 'form1' for x in lang."""
    if kind in ("term", "clterm"):
        if not isinstance(x, Term):
            return False
        if not term_in_language(x, lang):
            return False
        return kind == "term" or not free_vars_term(x)
    if not isinstance(x, Formula) or not in_language(x, lang):
        return False
    if kind == "form":
        return True
    if kind == "sent":
        return not free_vars(x)
    if kind == "form1":
        return len(free_vars(x)) == 1
    raise ValueError(f"unknown classification kind {kind!r}")


# Serialization and Goedel codes

def term_tokens(t: Term) -> list[str]:
    out: list[str] = []
    stack: list = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, str):
            out.append(x)
            continue
        if x.tag == "zero":
            out.append("0")
        elif x.tag == "var":
            out.append("v")
            out.extend(index_bits(x.index))
            out.append(")")
        elif x.tag == "hconst":
            out.append("c")
            out.extend(index_bits(x.index))
            out.append(")")
        elif x.tag == "succ":
            out.append("S")
            stack.append(x.args[0])
        elif x.tag == "plus":
            out.append("+")
            stack.append(x.args[1])
            stack.append(x.args[0])
        else:
            out.append("*")
            stack.append(x.args[1])
            stack.append(x.args[0])
    return out


def formula_tokens(phi: Formula) -> list[str]:
    out: list[str] = []
    stack: list = [phi]
    while stack:
        x = stack.pop()
        if isinstance(x, str):
            out.append(x)
            continue
        if isinstance(x, Term):
            out.extend(term_tokens(x))
            continue
        if x.tag == "eq":
            out.append("=")
            stack.append(x.args[1])
            stack.append(x.args[0])
        elif x.tag == "rel":
            out.append("R")
            out.extend(index_bits(REL_REGISTRY[x.rel]))
            out.append(")")
            out.extend(index_bits(len(x.args)))
            out.append(")")
            for a in reversed(x.args):
                stack.append(a)
        elif x.tag == "neg":
            out.append("~")
            stack.append(x.args[0])
        elif x.tag == "or":
            out.append("|")
            stack.append(x.args[1])
            stack.append(x.args[0])
        elif x.tag == "exists":
            out.append("E")
            out.extend(index_bits(x.var))
            out.append(")")
            stack.append(x.args[0])
        else:  # truth
            if x.level == UNTYPED:
                out.append("T")
            else:
                out.append("T")
                out.append("(")
                out.extend(index_bits(x.level))
                out.append(")")
            stack.append(x.args[0])
    return out


def parse_term_tokens(tokens, pos: int) -> tuple[Term, int]:
    tok = tokens[pos]
    pos += 1
    if tok == "0":
        return ZERO, pos
    if tok == "v":
        i, pos = read_index(tokens, pos)
        return Var(i), pos
    if tok == "c":
        i, pos = read_index(tokens, pos)
        return HConst(i), pos
    if tok == "S":
        a, pos = parse_term_tokens(tokens, pos)
        return Succ(a), pos
    if tok == "+":
        a, pos = parse_term_tokens(tokens, pos)
        b, pos = parse_term_tokens(tokens, pos)
        return Plus(a, b), pos
    if tok == "*":
        a, pos = parse_term_tokens(tokens, pos)
        b, pos = parse_term_tokens(tokens, pos)
        return Times(a, b), pos
    raise SyntaxError_(f"unexpected token {tok!r} in term")


def parse_formula_tokens(tokens, pos: int) -> tuple[Formula, int]:
    tok = tokens[pos]
    pos += 1
    if tok == "=":
        a, pos = parse_term_tokens(tokens, pos)
        b, pos = parse_term_tokens(tokens, pos)
        return Eq(a, b), pos
    if tok == "R":
        rid, pos = read_index(tokens, pos)
        arity, pos = read_index(tokens, pos)
        if rid not in _REL_BY_ID:
            raise SyntaxError_(f"unregistered relation id {rid}")
        args = []
        for _ in range(arity):
            a, pos = parse_term_tokens(tokens, pos)
            args.append(a)
        return Rel(_REL_BY_ID[rid], *args), pos
    if tok == "~":
        f, pos = parse_formula_tokens(tokens, pos)
        return Neg(f), pos
    if tok == "|":
        f, pos = parse_formula_tokens(tokens, pos)
        g, pos = parse_formula_tokens(tokens, pos)
        return Or(f, g), pos
    if tok == "E":
        v, pos = read_index(tokens, pos)
        f, pos = parse_formula_tokens(tokens, pos)
        return Exists(v, f), pos
    if tok == "T":
        if pos < len(tokens) and tokens[pos] == "(":
            k, pos = read_index(tokens, pos + 1)
            t, pos = parse_term_tokens(tokens, pos)
            return TruthK(k, t), pos
        t, pos = parse_term_tokens(tokens, pos)
        return Truth(t), pos
    raise SyntaxError_(f"unexpected token {tok!r} in formula")


def sym_length(x) -> int:
    """Length in bits of the canonical serialization."""
    from . import proofs  # local import to avoid a cycle
    if isinstance(x, Term):
        return TOKEN_BITS * len(term_tokens(x))
    if isinstance(x, Formula):
        return TOKEN_BITS * len(formula_tokens(x))
    if isinstance(x, proofs.Proof):
        return TOKEN_BITS * len(proofs.proof_tokens(x))
    raise TypeError(f"cannot measure {type(x).__name__}")


def code(x) -> int:
    """Goedel code: the section-2.1 number of the bit serialization."""
    from . import proofs
    if isinstance(x, Term):
        toks = term_tokens(x)
    elif isinstance(x, Formula):
        toks = formula_tokens(x)
    elif isinstance(x, proofs.Proof):
        toks = proofs.proof_tokens(x)
    else:
        raise TypeError(f"cannot code {type(x).__name__}")
    return godel_encode(tokens_to_bits(toks))


def decode_formula(n: int) -> Formula:
    from .coding import bits_to_tokens, godel_decode
    toks = bits_to_tokens(godel_decode(n))
    phi, pos = parse_formula_tokens(toks, 0)
    if pos != len(toks):
        raise SyntaxError_("trailing tokens after formula")
    return phi


def decode_term(n: int) -> Term:
    from .coding import bits_to_tokens, godel_decode
    toks = bits_to_tokens(godel_decode(n))
    t, pos = parse_term_tokens(toks, 0)
    if pos != len(toks):
        raise SyntaxError_("trailing tokens after term")
    return t


def try_decode_formula(n: int) -> Optional[Formula]:
    try:
        return decode_formula(n)
    except (ValueError, SyntaxError_, IndexError):
        return None


def try_decode_term(n: int) -> Optional[Term]:
    try:
        return decode_term(n)
    except (ValueError, SyntaxError_, IndexError):
        return None


# Assignment coding: nil = 0, cons(pair(var, val), rest) = cantor(head, rest) + 1,
# entries sorted by variable index.  Independent of the token serialization.

def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(c: int) -> tuple[int, int]:
    import math
    w = (math.isqrt(8 * c + 1) - 1) // 2
    b = c - w * (w + 1) // 2
    return w - b, b


def code_assignment(alpha: Assignment) -> int:
    out = 0
    for v in sorted(alpha, reverse=True):
        out = cantor_pair(cantor_pair(v, alpha[v]), out) + 1
    return out


def decode_assignment(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    while n:
        head, n = cantor_unpair(n - 1)
        v, val = cantor_unpair(head)
        if v in out:
            raise ValueError("duplicate variable in assignment code")
        out[v] = val
    return out
