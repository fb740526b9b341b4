"""S-expression text format for terms, formulas, sequents and proofs.

Core grammar (one form per constructor):

    0  (S t)  (+ t t)  (* t t)  (v i)  (c i)
    (= t t)  (not f)  (or f f)  (exists i f)  (T t)  (Tk k t)  (rel NAME t ...)

Sugar elaborated at parse time: (num n), (and f f), (imp f f), (iff f f),
(forall i f), (le t t), (existsle i t f), (foralle i t f).
Proofs: (RULE (seq (f ...) (f ...)) premise ...).
"""

from __future__ import annotations

from typing import Union

from . import syntax as S
from .syntax import Formula, Term


class ParseError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    out = []
    cur = ""
    for ch in text:
        if ch in "()":
            if cur:
                out.append(cur)
                cur = ""
            out.append(ch)
        elif ch.isspace():
            if cur:
                out.append(cur)
                cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def read_sexpr(tokens: list[str], pos: int = 0):
    if pos >= len(tokens):
        raise ParseError("unexpected end of input")
    tok = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            item, pos = read_sexpr(tokens, pos)
            items.append(item)
        if pos >= len(tokens):
            raise ParseError("missing ')'")
        return items, pos + 1
    if tok == ")":
        raise ParseError("unexpected ')'")
    return tok, pos + 1


def _nat(x, what: str) -> int:
    if not isinstance(x, str) or not x.isdigit():
        raise ParseError(f"{what} must be a natural number, got {x!r}")
    return int(x)


def term_from_ast(ast) -> Term:
    if ast == "0":
        return S.ZERO
    if isinstance(ast, str):
        raise ParseError(f"unknown term atom {ast!r}")
    if not ast:
        raise ParseError("empty term form")
    head = ast[0]
    if head == "S" and len(ast) == 2:
        return S.Succ(term_from_ast(ast[1]))
    if head == "+" and len(ast) == 3:
        return S.Plus(term_from_ast(ast[1]), term_from_ast(ast[2]))
    if head == "*" and len(ast) == 3:
        return S.Times(term_from_ast(ast[1]), term_from_ast(ast[2]))
    if head == "v" and len(ast) == 2:
        return S.Var(_nat(ast[1], "variable index"))
    if head == "c" and len(ast) == 2:
        return S.HConst(_nat(ast[1], "constant index"))
    if head == "num" and len(ast) == 2:
        return S.numeral(_nat(ast[1], "numeral value"))
    raise ParseError(f"bad term form {ast!r}")


def formula_from_ast(ast) -> Formula:
    if isinstance(ast, str) or not ast:
        raise ParseError(f"bad formula form {ast!r}")
    head = ast[0]
    if head == "=" and len(ast) == 3:
        return S.Eq(term_from_ast(ast[1]), term_from_ast(ast[2]))
    if head == "rel" and len(ast) >= 2:
        return S.Rel(ast[1], *[term_from_ast(a) for a in ast[2:]])
    if head == "not" and len(ast) == 2:
        return S.Neg(formula_from_ast(ast[1]))
    if head == "or" and len(ast) == 3:
        return S.Or(formula_from_ast(ast[1]), formula_from_ast(ast[2]))
    if head == "exists" and len(ast) == 3:
        return S.Exists(_nat(ast[1], "variable index"), formula_from_ast(ast[2]))
    if head == "T" and len(ast) == 2:
        return S.Truth(term_from_ast(ast[1]))
    if head == "Tk" and len(ast) == 3:
        return S.TruthK(_nat(ast[1], "truth level"), term_from_ast(ast[2]))
    # sugar
    if head == "and" and len(ast) == 3:
        return S.And(formula_from_ast(ast[1]), formula_from_ast(ast[2]))
    if head == "imp" and len(ast) == 3:
        return S.Implies(formula_from_ast(ast[1]), formula_from_ast(ast[2]))
    if head == "iff" and len(ast) == 3:
        return S.Iff(formula_from_ast(ast[1]), formula_from_ast(ast[2]))
    if head == "forall" and len(ast) == 3:
        return S.Forall(_nat(ast[1], "variable index"), formula_from_ast(ast[2]))
    if head == "le" and len(ast) == 3:
        return S.LessEq(term_from_ast(ast[1]), term_from_ast(ast[2]))
    if head == "existsle" and len(ast) == 4:
        return S.ExistsLe(_nat(ast[1], "variable index"), term_from_ast(ast[2]),
                          formula_from_ast(ast[3]))
    if head == "foralle" and len(ast) == 4:
        return S.ForallLe(_nat(ast[1], "variable index"), term_from_ast(ast[2]),
                          formula_from_ast(ast[3]))
    raise ParseError(f"bad formula form {ast!r}")


def parse_term(text: str) -> Term:
    ast, pos = read_sexpr(tokenize(text))
    return term_from_ast(ast)


def parse_formula(text: str) -> Formula:
    ast, pos = read_sexpr(tokenize(text))
    return formula_from_ast(ast)


def term_to_sexpr(t: Term) -> str:
    if t.tag == "zero":
        return "0"
    if t.tag == "var":
        return f"(v {t.index})"
    if t.tag == "hconst":
        return f"(c {t.index})"
    if t.tag == "succ":
        return f"(S {term_to_sexpr(t.args[0])})"
    op = "+" if t.tag == "plus" else "*"
    return f"({op} {term_to_sexpr(t.args[0])} {term_to_sexpr(t.args[1])})"


def formula_to_sexpr(phi: Formula) -> str:
    if phi.tag == "eq":
        return f"(= {term_to_sexpr(phi.args[0])} {term_to_sexpr(phi.args[1])})"
    if phi.tag == "rel":
        inner = " ".join(term_to_sexpr(a) for a in phi.args)
        return f"(rel {phi.rel}{' ' + inner if inner else ''})"
    if phi.tag == "neg":
        return f"(not {formula_to_sexpr(phi.args[0])})"
    if phi.tag == "or":
        return f"(or {formula_to_sexpr(phi.args[0])} {formula_to_sexpr(phi.args[1])})"
    if phi.tag == "exists":
        return f"(exists {phi.var} {formula_to_sexpr(phi.args[0])})"
    if phi.level == S.UNTYPED:
        return f"(T {term_to_sexpr(phi.args[0])})"
    return f"(Tk {phi.level} {term_to_sexpr(phi.args[0])})"


def to_sexpr(x: Union[Term, Formula]) -> str:
    return term_to_sexpr(x) if isinstance(x, Term) else formula_to_sexpr(x)


# Proof forms

def proof_from_ast(ast):
    from . import proofs as P
    if isinstance(ast, str) or len(ast) < 2:
        raise ParseError(f"bad proof form {ast!r}")
    rule = ast[0]
    if rule not in P.RULES:
        raise ParseError(f"unknown rule {rule!r}")
    seq_ast = ast[1]
    if isinstance(seq_ast, str) or not seq_ast or seq_ast[0] != "seq" or len(seq_ast) != 3:
        raise ParseError("proof node needs (seq (ant...) (suc...))")
    ant = tuple(formula_from_ast(a) for a in seq_ast[1])
    suc = tuple(formula_from_ast(a) for a in seq_ast[2])
    premises = tuple(proof_from_ast(p) for p in ast[2:])
    return P.Proof(rule, P.Sequent(ant, suc), premises)


def parse_proof(text: str):
    ast, pos = read_sexpr(tokenize(text))
    return proof_from_ast(ast)


def sequent_to_sexpr(seq) -> str:
    ant = " ".join(formula_to_sexpr(f) for f in seq.ant)
    suc = " ".join(formula_to_sexpr(f) for f in seq.suc)
    return f"(seq ({ant}) ({suc}))"


def proof_to_sexpr(pi, indent: int = 0) -> str:
    pad = "  " * indent
    head = f"{pad}({pi.rule} {sequent_to_sexpr(pi.sequent)}"
    if not pi.premises:
        return head + ")"
    body = "\n".join(proof_to_sexpr(p, indent + 1) for p in pi.premises)
    return f"{head}\n{body})"
