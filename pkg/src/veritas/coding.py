"""Bit-string coding and the fixed token alphabet.

Every syntactic object (term, formula, proof) serializes to a stream of
tokens from one fixed finite alphabet; each token occupies TOKEN_BITS bits.
A bit string (w_0, ..., w_n) is represented by the number

    m = sum_i 2^i * (w_i + 1)

so that codes of strings of length L occupy exactly [2^L - 1, 2^(L+1) - 2]
and every natural number decodes to a unique string (0 is the empty string).
"""

from __future__ import annotations

from typing import Sequence

# Tokens of the serialization alphabet.  Order is load-bearing: the index of
# a token is its 6-bit code.  Do not reorder without bumping FORMAT_VERSION.
TOKENS = (
    "0", "S", "+", "*", "=",          # arithmetic
    "~", "|", "E",                    # neg, or, exists
    "(", ")",                         # grouping for subscripts
    "T", "v", "R", "b0", "b1", "c",   # truth, variable, relation, index bits, henkin const
    ".",                              # end-of-list marker in sequents
    "ax", "thax", "eqrefl", "eqrepl",
    "cut", "negl", "negr", "orl", "orr", "exl", "exr",
    "weakl", "weakr", "contrl", "contrr", "nec", "conec",
)

TOKEN_BITS = 6
FORMAT_VERSION = 1

_TOKEN_INDEX = {tok: i for i, tok in enumerate(TOKENS)}

assert len(TOKENS) <= 2 ** TOKEN_BITS


def godel_encode(bits: Sequence[int]) -> int:
    """Encode a bit string as a number via m = sum 2^i (w_i + 1)."""
    m = 0
    for i, w in enumerate(bits):
        if w not in (0, 1):
            raise ValueError(f"bit string may contain only 0 and 1, got {w!r}")
        m += (1 << i) * (w + 1)
    return m


def godel_decode(m: int) -> tuple[int, ...]:
    """Inverse of godel_encode.  Every natural number decodes; 0 is ''."""
    if m < 0:
        raise ValueError("codes are natural numbers")
    length = (m + 1).bit_length() - 1
    rest = m - ((1 << length) - 1)
    return tuple((rest >> i) & 1 for i in range(length))


def tokens_to_bits(tokens: Sequence[str]) -> tuple[int, ...]:
    bits: list[int] = []
    for tok in tokens:
        try:
            idx = _TOKEN_INDEX[tok]
        except KeyError:
            raise ValueError(f"unknown token {tok!r}") from None
        for j in range(TOKEN_BITS - 1, -1, -1):
            bits.append((idx >> j) & 1)
    return tuple(bits)


def bits_to_tokens(bits: Sequence[int]) -> tuple[str, ...]:
    if len(bits) % TOKEN_BITS != 0:
        raise ValueError("bit length is not a multiple of the token width")
    toks: list[str] = []
    for i in range(0, len(bits), TOKEN_BITS):
        idx = 0
        for b in bits[i:i + TOKEN_BITS]:
            idx = (idx << 1) | b
        if idx >= len(TOKENS):
            raise ValueError(f"bit group {idx} is not a token")
        toks.append(TOKENS[idx])
    return tuple(toks)


def index_bits(n: int) -> tuple[str, ...]:
    """Binary index digits (MSB first, empty for 0) used after 'v', 'c', 'E', 'T('."""
    if n < 0:
        raise ValueError("indices are natural numbers")
    if n == 0:
        return ()
    out = []
    for ch in bin(n)[2:]:
        out.append("b1" if ch == "1" else "b0")
    return tuple(out)


def read_index(tokens: Sequence[str], pos: int) -> tuple[int, int]:
    """Read index digits terminated by ')' starting at pos; return (value, new pos)."""
    n = 0
    while True:
        if pos >= len(tokens):
            raise ValueError("unterminated index")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            return n, pos
        if tok == "b0":
            n = n * 2
        elif tok == "b1":
            n = n * 2 + 1
        else:
            raise ValueError(f"bad index digit {tok!r}")
