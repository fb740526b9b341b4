"""Desk-scale toolkit for truth theories over arithmetic.

Arithmetized syntax, a sequent-calculus kernel with cut elimination, axiom
catalogs for compositional / Kripke-Feferman / Friedman-Sheard / ramified
truth, feasible partial satisfaction predicates, translation and
satisfaction-class machinery, bounded semantics, and a proof-length
benchmark harness.
"""

__version__ = "0.1.0"
