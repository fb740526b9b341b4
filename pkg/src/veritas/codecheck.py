"""Integer-level proof checking: the executable meaning of Proof_T(x, y).

This module re-implements decoding, formula manipulation and rule checking
directly over Goedel codes and plain tuples.  It shares only the token table
with the rest of the package (that table *is* the serialization format) and
deliberately never constructs kernel Proof/Formula objects, so it can serve
as an independent oracle against `proofs.check_proof`.

Tuple shapes:  terms ('0',) ('v',i) ('c',i) ('S',t) ('+',t,u) ('*',t,u);
formulas ('=',s,t) ('R',rid,args) ('~',f) ('|',f,g) ('E',v,f) ('T',lvl,t)
with lvl = -1 for the untyped predicate; proofs (rule, ant, suc, premises).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Optional

from .coding import TOKENS, TOKEN_BITS

_TOK = {name: i for i, name in enumerate(TOKENS)}
_RULE_ARITY = {
    "ax": 0, "thax": 0, "eqrefl": 0, "eqrepl": 0,
    "cut": 2, "negl": 1, "negr": 1, "orl": 2, "orr": 1,
    "exl": 1, "exr": 1, "weakl": 1, "weakr": 1,
    "contrl": 1, "contrr": 1, "nec": 1, "conec": 1,
}
_RULE_IDS = {name: _TOK[name] for name in _RULE_ARITY}
UNTYPED = -1


class DecodeFailure(ValueError):
    pass


def bits_of(m: int) -> list[int]:
    if m < 0:
        raise DecodeFailure("negative code")
    length = (m + 1).bit_length() - 1
    rest = m - ((1 << length) - 1)
    return [(rest >> i) & 1 for i in range(length)]


def code_of_bits(bits: list[int]) -> int:
    return sum((1 << i) * (b + 1) for i, b in enumerate(bits))


def toks_of(m: int) -> list[int]:
    bits = bits_of(m)
    if len(bits) % TOKEN_BITS:
        raise DecodeFailure("ragged token stream")
    out = []
    for i in range(0, len(bits), TOKEN_BITS):
        idx = 0
        for b in bits[i:i + TOKEN_BITS]:
            idx = (idx << 1) | b
        if idx >= len(TOKENS):
            raise DecodeFailure("invalid token")
        out.append(idx)
    return out


def code_of_toks(toks: list[int]) -> int:
    bits: list[int] = []
    for idx in toks:
        for j in range(TOKEN_BITS - 1, -1, -1):
            bits.append((idx >> j) & 1)
    return code_of_bits(bits)


def _read_index(toks, pos):
    n = 0
    while True:
        if pos >= len(toks):
            raise DecodeFailure("unterminated index")
        t = toks[pos]
        pos += 1
        if t == _TOK[")"]:
            return n, pos
        if t == _TOK["b0"]:
            n *= 2
        elif t == _TOK["b1"]:
            n = n * 2 + 1
        else:
            raise DecodeFailure("bad index digit")


def _index_toks(n: int) -> list[int]:
    out = [] if n else []
    if n:
        out = [_TOK["b1"] if ch == "1" else _TOK["b0"] for ch in bin(n)[2:]]
    out.append(_TOK[")"])
    return out


def parse_term(toks, pos):
    t = toks[pos]
    pos += 1
    if t == _TOK["0"]:
        return ("0",), pos
    if t == _TOK["v"]:
        i, pos = _read_index(toks, pos)
        return ("v", i), pos
    if t == _TOK["c"]:
        i, pos = _read_index(toks, pos)
        return ("c", i), pos
    if t == _TOK["S"]:
        a, pos = parse_term(toks, pos)
        return ("S", a), pos
    if t == _TOK["+"]:
        a, pos = parse_term(toks, pos)
        b, pos = parse_term(toks, pos)
        return ("+", a, b), pos
    if t == _TOK["*"]:
        a, pos = parse_term(toks, pos)
        b, pos = parse_term(toks, pos)
        return ("*", a, b), pos
    raise DecodeFailure("expected term")


def parse_formula(toks, pos):
    t = toks[pos]
    pos += 1
    if t == _TOK["="]:
        a, pos = parse_term(toks, pos)
        b, pos = parse_term(toks, pos)
        return ("=", a, b), pos
    if t == _TOK["R"]:
        rid, pos = _read_index(toks, pos)
        arity, pos = _read_index(toks, pos)
        args = []
        for _ in range(arity):
            a, pos = parse_term(toks, pos)
            args.append(a)
        return ("R", rid, tuple(args)), pos
    if t == _TOK["~"]:
        f, pos = parse_formula(toks, pos)
        return ("~", f), pos
    if t == _TOK["|"]:
        f, pos = parse_formula(toks, pos)
        g, pos = parse_formula(toks, pos)
        return ("|", f, g), pos
    if t == _TOK["E"]:
        v, pos = _read_index(toks, pos)
        f, pos = parse_formula(toks, pos)
        return ("E", v, f), pos
    if t == _TOK["T"]:
        if pos < len(toks) and toks[pos] == _TOK["("]:
            k, pos = _read_index(toks, pos + 1)
            a, pos = parse_term(toks, pos)
            return ("T", k, a), pos
        a, pos = parse_term(toks, pos)
        return ("T", UNTYPED, a), pos
    raise DecodeFailure("expected formula")


def term_toks(t) -> list[int]:
    tag = t[0]
    if tag == "0":
        return [_TOK["0"]]
    if tag == "v":
        return [_TOK["v"]] + _index_toks(t[1])
    if tag == "c":
        return [_TOK["c"]] + _index_toks(t[1])
    if tag == "S":
        return [_TOK["S"]] + term_toks(t[1])
    return [_TOK[{"+": "+", "*": "*"}[tag]]] + term_toks(t[1]) + term_toks(t[2])


def formula_toks(f) -> list[int]:
    tag = f[0]
    if tag == "=":
        return [_TOK["="]] + term_toks(f[1]) + term_toks(f[2])
    if tag == "R":
        return [_TOK["R"]] + _index_toks(f[1]) + _index_toks(len(f[2])) + \
            [t for a in f[2] for t in term_toks(a)]
    if tag == "~":
        return [_TOK["~"]] + formula_toks(f[1])
    if tag == "|":
        return [_TOK["|"]] + formula_toks(f[1]) + formula_toks(f[2])
    if tag == "E":
        return [_TOK["E"]] + _index_toks(f[1]) + formula_toks(f[2])
    lvl, arg = f[1], f[2]
    if lvl == UNTYPED:
        return [_TOK["T"]] + term_toks(arg)
    return [_TOK["T"], _TOK["("]] + _index_toks(lvl) + term_toks(arg)


def formula_code(f) -> int:
    return code_of_toks(formula_toks(f))


def decode_formula_code(m: int):
    toks = toks_of(m)
    f, pos = parse_formula(toks, 0)
    if pos != len(toks):
        raise DecodeFailure("trailing tokens")
    return f


def parse_proof(toks, pos):
    if pos >= len(toks):
        raise DecodeFailure("expected proof node")
    rule = None
    for name, rid in _RULE_IDS.items():
        if toks[pos] == rid:
            rule = name
            break
    if rule is None:
        raise DecodeFailure("expected rule token")
    pos += 1
    ant = []
    while pos < len(toks) and toks[pos] != _TOK["."]:
        f, pos = parse_formula(toks, pos)
        ant.append(f)
    if pos >= len(toks):
        raise DecodeFailure("missing antecedent terminator")
    pos += 1
    suc = []
    while pos < len(toks) and toks[pos] != _TOK["."]:
        f, pos = parse_formula(toks, pos)
        suc.append(f)
    if pos >= len(toks):
        raise DecodeFailure("missing succedent terminator")
    pos += 1
    prems = []
    for _ in range(_RULE_ARITY[rule]):
        p, pos = parse_proof(toks, pos)
        prems.append(p)
    return (rule, tuple(ant), tuple(suc), tuple(prems)), pos


def decode_proof_code(m: int):
    toks = toks_of(m)
    p, pos = parse_proof(toks, 0)
    if pos != len(toks):
        raise DecodeFailure("trailing tokens")
    return p


# Formula-level helpers on tuples

def term_free(t, acc):
    if t[0] == "v":
        acc.add(t[1])
    elif t[0] in ("S",):
        term_free(t[1], acc)
    elif t[0] in ("+", "*"):
        term_free(t[1], acc)
        term_free(t[2], acc)


def free_vars(f, bound=frozenset()):
    tag = f[0]
    acc: set[int] = set()
    if tag in ("=",):
        term_free(f[1], acc)
        term_free(f[2], acc)
        return acc - bound
    if tag == "R":
        for a in f[2]:
            term_free(a, acc)
        return acc - bound
    if tag == "T":
        term_free(f[2], acc)
        return acc - bound
    if tag == "~":
        return free_vars(f[1], bound)
    if tag == "|":
        return free_vars(f[1], bound) | free_vars(f[2], bound)
    return free_vars(f[2], bound | {f[1]})


def term_subst(t, repl, v):
    if t[0] == "v":
        return repl if t[1] == v else t
    if t[0] == "S":
        return ("S", term_subst(t[1], repl, v))
    if t[0] in ("+", "*"):
        return (t[0], term_subst(t[1], repl, v), term_subst(t[2], repl, v))
    return t


def subst(f, repl, v):
    """f[repl/v]; returns None if a capture would occur."""
    tag = f[0]
    if tag == "=":
        return ("=", term_subst(f[1], repl, v), term_subst(f[2], repl, v))
    if tag == "R":
        return ("R", f[1], tuple(term_subst(a, repl, v) for a in f[2]))
    if tag == "T":
        return ("T", f[1], term_subst(f[2], repl, v))
    if tag == "~":
        s = subst(f[1], repl, v)
        return None if s is None else ("~", s)
    if tag == "|":
        a = subst(f[1], repl, v)
        b = subst(f[2], repl, v)
        return None if a is None or b is None else ("|", a, b)
    # exists
    if f[1] == v:
        return f
    if v in free_vars(f[2]):
        racc: set[int] = set()
        term_free(repl, racc)
        if f[1] in racc:
            return None
    s = subst(f[2], repl, v)
    return None if s is None else ("E", f[1], s)


def eval_closed_term(t) -> int:
    if t[0] == "0":
        return 0
    if t[0] == "S":
        return eval_closed_term(t[1]) + 1
    if t[0] == "+":
        return eval_closed_term(t[1]) + eval_closed_term(t[2])
    if t[0] == "*":
        return eval_closed_term(t[1]) * eval_closed_term(t[2])
    raise DecodeFailure("term is not closed")


def numeral_tuple(n: int):
    if n == 0:
        return ("0",)
    one = ("S", ("0",))
    two = ("+", one, one)

    def build(bits):
        if len(bits) == 1:
            return one if bits[0] else ("0",)
        return ("+", one if bits[0] else ("0",), ("*", two, build(bits[1:])))

    return build([int(b) for b in bin(n)[:1:-1]])


# Axiom schemas at the code level

@dataclass(frozen=True)
class TheorySchema:
    """Code-level description of a schema-presented axiom set."""
    name: str
    kind: str                       # 'explicit' | 'q' | 'pa' | 'union'
    axiom_codes: tuple = ()
    parts: tuple = ()               # for 'union'
    length_bound: Optional[int] = None   # sym_length cap in bits
    rules: frozenset = frozenset()

    def member(self, f) -> bool:
        if self.length_bound is not None:
            if TOKEN_BITS * len(formula_toks(f)) > self.length_bound:
                return False
        if self.kind == "explicit":
            return formula_code(f) in self.axiom_codes
        if self.kind == "q":
            return formula_code(f) in _q_codes()
        if self.kind == "pa":
            return formula_code(f) in _q_codes() or is_induction(f)
        if self.kind == "union":
            return any(p.member(f) for p in self.parts)
        raise ValueError(f"unknown schema kind {self.kind}")


def _forall(v, f):
    return ("~", ("E", v, ("~", f)))


def _imp(a, b):
    return ("|", ("~", a), b)


def _and(a, b):
    return ("~", ("|", ("~", a), ("~", b)))


def _q_axiom_tuples():
    v0, v1 = ("v", 0), ("v", 1)
    z = ("0",)
    return (
        _forall(0, ("~", ("=", ("S", v0), z))),
        _forall(0, _forall(1, _imp(("=", ("S", v0), ("S", v1)), ("=", v0, v1)))),
        _forall(0, ("|", ("=", v0, z), ("E", 1, ("=", v0, ("S", v1))))),
        _forall(0, ("=", ("+", v0, z), v0)),
        _forall(0, _forall(1, ("=", ("+", v0, ("S", v1)), ("S", ("+", v0, v1))))),
        _forall(0, ("=", ("*", v0, z), z)),
        _forall(0, _forall(1, ("=", ("*", v0, ("S", v1)), ("+", ("*", v0, v1), v0)))),
    )


_Q_CODES_CACHE: Optional[frozenset] = None


def _q_codes() -> frozenset:
    global _Q_CODES_CACHE
    if _Q_CODES_CACHE is None:
        _Q_CODES_CACHE = frozenset(formula_code(f) for f in _q_axiom_tuples())
    return _Q_CODES_CACHE


def induction_tuple(y, v):
    """(y[0/v] & forall v (y -> y[S(v)/v])) -> forall v y, elaborated."""
    y0 = subst(y, ("0",), v)
    ys = subst(y, ("S", ("v", v)), v)
    if y0 is None or ys is None:
        return None
    return _imp(_and(y0, _forall(v, _imp(y, ys))), _forall(v, y))


def is_induction(f) -> bool:
    # shape: (~ X) | (~ (E v (~ y)))
    if f[0] != "|" or f[1][0] != "~" or f[2][0] != "~":
        return False
    tail = f[2][1]
    if tail[0] != "E" or tail[2][0] != "~":
        return False
    v, y = tail[1], tail[2][1]
    return induction_tuple(y, v) == f


# Rule checking over tuples

def _replaced_term(u, u2, s, t):
    if u == u2 or (u == s and u2 == t):
        return True
    if u[0] != u2[0] or len(u) != len(u2):
        return False
    if u[0] in ("0", "v", "c"):
        return False
    return all(_replaced_term(a, b, s, t) for a, b in zip(u[1:], u2[1:]))


def _replaced(f, f2, s, t):
    if f[0] != f2[0]:
        return False
    tag = f[0]
    if tag == "=":
        return _replaced_term(f[1], f2[1], s, t) and _replaced_term(f[2], f2[2], s, t)
    if tag == "R":
        return f[1] == f2[1] and len(f[2]) == len(f2[2]) and \
            all(_replaced_term(a, b, s, t) for a, b in zip(f[2], f2[2]))
    if tag == "T":
        return f[1] == f2[1] and _replaced_term(f[2], f2[2], s, t)
    if tag == "~":
        return _replaced(f[1], f2[1], s, t)
    if tag == "|":
        return _replaced(f[1], f2[1], s, t) and _replaced(f[2], f2[2], s, t)
    return f[1] == f2[1] and _replaced(f[2], f2[2], s, t)


def _match_term(pat, tgt, v, hits):
    if pat[0] == "v" and pat[1] == v:
        hits.append(tgt)
        return True
    if pat[0] != tgt[0] or len(pat) != len(tgt):
        return False
    if pat[0] in ("0",):
        return True
    if pat[0] in ("v", "c"):
        return pat[1] == tgt[1]
    return all(_match_term(a, b, v, hits) for a, b in zip(pat[1:], tgt[1:]))


def _match_formula(pat, tgt, v, hits):
    if pat[0] != tgt[0]:
        return False
    tag = pat[0]
    if tag == "=":
        return _match_term(pat[1], tgt[1], v, hits) and _match_term(pat[2], tgt[2], v, hits)
    if tag == "R":
        return pat[1] == tgt[1] and len(pat[2]) == len(tgt[2]) and \
            all(_match_term(a, b, v, hits) for a, b in zip(pat[2], tgt[2]))
    if tag == "T":
        return pat[1] == tgt[1] and _match_term(pat[2], tgt[2], v, hits)
    if tag == "~":
        return _match_formula(pat[1], tgt[1], v, hits)
    if tag == "|":
        return _match_formula(pat[1], tgt[1], v, hits) and \
            _match_formula(pat[2], tgt[2], v, hits)
    if pat[1] != tgt[1]:
        return False
    if pat[1] == v:
        return pat == tgt
    return _match_formula(pat[2], tgt[2], v, hits)


def match_substitution(pattern, v, target):
    hits: list = []
    if not _match_formula(pattern, target, v, hits):
        return None
    if not hits:
        return ("v", v) if pattern == target else None
    t = hits[0]
    if any(h != t for h in hits[1:]):
        return None
    if subst(pattern, t, v) != target:
        return None
    return t


def _node_ok(node, schema: TheorySchema) -> bool:
    rule, ant, suc, prems = node
    antc, succ = Counter(ant), Counter(suc)

    if rule == "ax":
        return len(ant) == 1 and ant == suc
    if rule == "thax":
        return not ant and len(suc) == 1 and schema.member(suc[0])
    if rule == "eqrefl":
        return not ant and len(suc) == 1 and suc[0][0] == "=" and suc[0][1] == suc[0][2]
    if rule == "eqrepl":
        if len(ant) != 2 or len(suc) != 1:
            return False
        eqf, chi = ant
        if eqf[0] != "=":
            eqf, chi = chi, eqf
        if eqf[0] != "=":
            return False
        s, t = eqf[1], eqf[2]
        sacc: set[int] = set()
        term_free(s, sacc)
        term_free(t, sacc)
        if sacc:
            return False
        return _replaced(chi, suc[0], s, t)
    if rule == "weakl":
        _, pant, psuc, _ = prems[0]
        d = antc - Counter(pant)
        return Counter(psuc) == succ and sum(d.values()) == 1 \
            and antc == Counter(pant) + d
    if rule == "weakr":
        _, pant, psuc, _ = prems[0]
        d = succ - Counter(psuc)
        return Counter(pant) == antc and sum(d.values()) == 1 \
            and succ == Counter(psuc) + d
    if rule == "contrl":
        _, pant, psuc, _ = prems[0]
        d = Counter(pant) - antc
        if Counter(psuc) != succ or sum(d.values()) != 1 or Counter(pant) != antc + d:
            return False
        return antc[next(iter(d))] >= 1
    if rule == "contrr":
        _, pant, psuc, _ = prems[0]
        d = Counter(psuc) - succ
        if Counter(pant) != antc or sum(d.values()) != 1 or Counter(psuc) != succ + d:
            return False
        return succ[next(iter(d))] >= 1
    if rule == "negl":
        _, pant, psuc, _ = prems[0]
        for phi in set(ant):
            if phi[0] != "~":
                continue
            if Counter(pant) == antc - Counter([phi]) and \
                    Counter(psuc) == succ + Counter([phi[1]]):
                return True
        return False
    if rule == "negr":
        _, pant, psuc, _ = prems[0]
        for phi in set(suc):
            if phi[0] != "~":
                continue
            if Counter(pant) == antc + Counter([phi[1]]) and \
                    Counter(psuc) == succ - Counter([phi]):
                return True
        return False
    if rule == "orl":
        _, a1, s1, _ = prems[0]
        _, a2, s2, _ = prems[1]
        for phi in set(ant):
            if phi[0] != "|":
                continue
            base = antc - Counter([phi])
            if Counter(a1) == base + Counter([phi[1]]) and Counter(s1) == succ and \
                    Counter(a2) == base + Counter([phi[2]]) and Counter(s2) == succ:
                return True
        return False
    if rule == "orr":
        _, pant, psuc, _ = prems[0]
        for phi in set(suc):
            if phi[0] != "|":
                continue
            if Counter(pant) == antc and \
                    Counter(psuc) == succ - Counter([phi]) + Counter([phi[1], phi[2]]):
                return True
        return False
    if rule == "exl":
        _, pant, psuc, _ = prems[0]
        if Counter(psuc) != succ:
            return False
        for phi in set(ant):
            if phi[0] != "E":
                continue
            base = antc - Counter([phi])
            d = Counter(pant) - base
            if sum(d.values()) != 1 or Counter(pant) - d != base:
                continue
            inst = next(iter(d))
            t = match_substitution(phi[2], phi[1], inst)
            if t is None or t[0] != "v":
                continue
            side: set[int] = set()
            for g in ant + suc:
                side |= free_vars(g)
            if t[1] not in side:
                return True
        return False
    if rule == "exr":
        _, pant, psuc, _ = prems[0]
        if Counter(pant) != antc:
            return False
        for phi in set(suc):
            if phi[0] != "E":
                continue
            base = succ - Counter([phi])
            d = Counter(psuc) - base
            if sum(d.values()) != 1 or Counter(psuc) - d != base:
                continue
            if match_substitution(phi[2], phi[1], next(iter(d))) is not None:
                return True
        return False
    if rule in ("nec", "conec"):
        if rule not in schema.rules:
            return False
        _, pant, psuc, _ = prems[0]
        if ant or pant or len(suc) != 1 or len(psuc) != 1:
            return False
        if rule == "nec":
            want = ("T", UNTYPED, numeral_tuple(formula_code(psuc[0])))
            return suc[0] == want
        want = ("T", UNTYPED, numeral_tuple(formula_code(suc[0])))
        return psuc[0] == want
    return False


def proof_valid(p, schema: TheorySchema) -> bool:
    stack = [p]
    while stack:
        node = stack.pop()
        if not _node_ok(node, schema):
            return False
        stack.extend(node[3])
    return True


def proof_of(schema: TheorySchema, proof_code: int, formula_code_: int) -> bool:
    """x is a proof of the sentence y from the axioms: the dual-route checker."""
    try:
        p = decode_proof_code(proof_code)
        f = decode_formula_code(formula_code_)
    except DecodeFailure:
        return False
    if free_vars(f):
        return False
    rule, ant, suc, _ = p
    if ant or len(suc) != 1 or suc[0] != f:
        return False
    return proof_valid(p, schema)
