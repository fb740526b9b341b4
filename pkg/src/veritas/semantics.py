"""Bounded three-valued evaluation over the standard model.

Verdicts are True, False or None (unknown).  Unbounded existentials search
witnesses up to the cutoff and answer None when no witness is found;
quantifiers bounded by a closed term (the canonical `(existsle ...)` /
`(foralle ...)` elaborations) are decided definitely as long as the bound
stays below `max_enum`.  Every definite verdict is sound for the standard
model and never flips as the cutoff grows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from .syntax import (Formula, Term, UNTYPED, Var, classify, eval_term,
                     free_vars, free_vars_term, L_RT, try_decode_formula)

Tri = Optional[bool]


def not3(v: Tri) -> Tri:
    return None if v is None else (not v)


def or3(a: Tri, b: Tri) -> Tri:
    if a is True or b is True:
        return True
    if a is False and b is False:
        return False
    return None


class OracleMissing(ValueError):
    pass


def _match_bounded_exists(phi: Formula):
    """Recognize Exists(v, And(v <= t, psi)) in its canonical elaboration.

    Returns (v, bound_term, psi) or None.  The `le` sugar elaborates to
    Exists(w, w + v = t), and `and` to ~(~a | ~b).
    """
    if phi.tag != "exists":
        return None
    v, body = phi.var, phi.args[0]
    if body.tag != "neg" or body.args[0].tag != "or":
        return None
    left, right = body.args[0].args
    if left.tag != "neg" or right.tag != "neg":
        return None
    le, psi = left.args[0], right.args[0]
    if le.tag != "exists":
        return None
    w, eq = le.var, le.args[0]
    if eq.tag != "eq" or w == v:
        return None
    lhs, bound = eq.args
    if lhs.tag != "plus":
        return None
    a, b = lhs.args
    if a != Var(w) or b != Var(v):
        return None
    if w in free_vars_term(bound) or v in free_vars_term(bound):
        return None
    return v, bound, psi


@dataclass
class Evaluator:
    cutoff: int
    truth_oracles: dict = field(default_factory=dict)   # level -> code -> bool
    rel_interp: dict = field(default_factory=dict)      # name -> callable
    hvals: dict = field(default_factory=dict)           # henkin constant values
    max_enum: int = 10 ** 6
    _cache: dict = field(default_factory=dict, repr=False)

    def eval(self, phi: Formula, alpha: Mapping[int, int]) -> Tri:
        key = (phi, tuple(sorted((v, alpha[v]) for v in free_vars(phi))))
        hit = self._cache.get(key, "miss")
        if hit != "miss":
            return hit
        out = self._eval(phi, dict(key[1]))
        self._cache[key] = out
        return out

    def _eval(self, phi: Formula, alpha: dict) -> Tri:
        tag = phi.tag
        if tag == "eq":
            return eval_term(phi.args[0], alpha, self.hvals) == \
                eval_term(phi.args[1], alpha, self.hvals)
        if tag == "rel":
            try:
                fn = self.rel_interp[phi.rel]
            except KeyError:
                raise OracleMissing(f"no interpretation for relation {phi.rel!r}") from None
            return fn(*(eval_term(a, alpha, self.hvals) for a in phi.args))
        if tag == "truth":
            try:
                oracle = self.truth_oracles[phi.level]
            except KeyError:
                name = "T" if phi.level == UNTYPED else f"T_{phi.level}"
                raise OracleMissing(f"no oracle installed for {name}") from None
            return oracle(eval_term(phi.args[0], alpha, self.hvals))
        if tag == "neg":
            return not3(self.eval(phi.args[0], alpha))
        if tag == "or":
            return or3(self.eval(phi.args[0], alpha), self.eval(phi.args[1], alpha))

        # exists
        bounded = _match_bounded_exists(phi)
        if bounded is not None:
            v, bound_term, psi = bounded
            bound = eval_term(bound_term, alpha, self.hvals)
            if bound <= self.max_enum:
                verdict: Tri = False
                for x in range(bound + 1):
                    sub = self.eval(psi, {**alpha, v: x})
                    if sub is True:
                        return True
                    if sub is None:
                        verdict = None
                return verdict
            # bound too large to sweep; fall through to cutoff search
        v, body = phi.var, phi.args[0]
        saw_unknown = False
        for x in range(min(self.cutoff, self.max_enum) + 1):
            sub = self.eval(body, {**alpha, v: x})
            if sub is True:
                return True
            if sub is None:
                saw_unknown = True
        del saw_unknown
        return None


def eval3(phi: Formula, alpha: Mapping[int, int], cutoff: int,
          truth_oracles: Optional[dict] = None,
          rel_interp: Optional[dict] = None,
          hvals: Optional[dict] = None) -> Tri:
    ev = Evaluator(cutoff, dict(truth_oracles or {}), dict(rel_interp or {}),
                   dict(hvals or {}))
    return ev.eval(phi, alpha)


def rt_semantics(n: int, cutoff: int) -> Evaluator:
    """Evaluator with staged oracles T_0 .. T_{n-1} (iterated Tarski levels).

    T_k holds of exactly the codes of L_{<k} sentences that come out true
    under the level-k evaluator at this cutoff.
    """
    if n > 8:
        raise ValueError("staged semantics is desk-scale; n <= 8")
    oracles: dict[int, Callable[[int], bool]] = {}
    memo: dict[tuple[int, int], bool] = {}

    def make_oracle(k: int) -> Callable[[int], bool]:
        def oracle(code_val: int) -> bool:
            key = (k, code_val)
            if key in memo:
                return memo[key]
            phi = try_decode_formula(code_val)
            ok = False
            if phi is not None and classify(phi, "sent", L_RT(k)):
                sub = Evaluator(cutoff, {i: oracles[i] for i in range(k)})
                ok = sub.eval(phi, {}) is True
            memo[key] = ok
            return ok
        return oracle

    for k in range(n):
        oracles[k] = make_oracle(k)
    return Evaluator(cutoff, dict(oracles))
