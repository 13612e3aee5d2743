"""Decoder specification grammar, validation, and execution plans.

The textual grammar mirrors the simulation labels::

    bws | rec | fht
    pbws(l=<int>,p=<int>)
    autbws(p=<int>)
    autrec(p=<int>)
    chase(t=<int>)
    gbws(p=<int>,u=<spec>,v=<spec>)
    rgbws(p=<int>,u=<spec>,v=<spec>)

Whitespace is ignored; unknown names or keys are rejected with the
offending position. A parsed tree can be validated against a concrete
R(r, m), compiled to the flat node table the jitted interpreter runs,
or turned into a plain-python closure for the numpy backend.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _numpy_impl as npk
from .rm_core import CodeParams
from .streams import derive


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class CodeMismatchError(ValueError):
    """Decoder tree does not fit the code it was asked to decode."""


_INT_KEYS = {"l", "p", "t"}
_SPEC_KEYS = {"u", "v"}
_REQUIRED = {
    "bws": (),
    "rec": (),
    "fht": (),
    "pbws": ("l", "p"),
    "autbws": ("p",),
    "autrec": ("p",),
    "chase": ("t",),
    "gbws": ("p", "u", "v"),
    "rgbws": ("p", "u", "v"),
}


@dataclass(frozen=True)
class DecoderSpec:
    name: str
    l: Optional[int] = None
    p: Optional[int] = None
    t: Optional[int] = None
    u: Optional["DecoderSpec"] = None
    v: Optional["DecoderSpec"] = None

    def render(self) -> str:
        if self.name in ("bws", "rec", "fht"):
            return self.name
        if self.name == "pbws":
            return f"pbws(l={self.l},p={self.p})"
        if self.name in ("autbws", "autrec"):
            return f"{self.name}(p={self.p})"
        if self.name == "chase":
            return f"chase(t={self.t})"
        return f"{self.name}(p={self.p},u={self.u.render()},v={self.v.render()})"

    def __str__(self) -> str:
        return self.render()


_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|\d+|[(),=]")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((match.group(), pos))
        pos = match.end()
    tokens.append(("", len(text)))  # end marker
    return tokens


def parse_decoder_spec(text: str) -> DecoderSpec:
    """Parse the decoder grammar; raises ParseError with position on failure."""
    tokens = _tokenize(text)
    cursor = 0

    def peek():
        return tokens[cursor]

    def advance():
        nonlocal cursor
        tok = tokens[cursor]
        cursor += 1
        return tok

    def expect(symbol: str):
        tok, pos = advance()
        if tok != symbol:
            shown = tok if tok else "end of input"
            raise ParseError(f"expected {symbol!r}, found {shown!r}", pos)

    def parse_spec() -> DecoderSpec:
        tok, pos = advance()
        if not tok or not tok[0].isalpha():
            shown = tok if tok else "end of input"
            raise ParseError(f"expected a decoder name, found {shown!r}", pos)
        name = tok.lower()
        if name not in _REQUIRED:
            raise ParseError(f"unknown decoder {name!r}", pos)
        fields: dict[str, object] = {}
        if peek()[0] == "(":
            advance()
            while True:
                key_tok, key_pos = advance()
                key = key_tok.lower()
                if key not in _INT_KEYS | _SPEC_KEYS:
                    shown = key_tok if key_tok else "end of input"
                    raise ParseError(f"unknown key {shown!r}", key_pos)
                if key in fields:
                    raise ParseError(f"duplicate key {key!r}", key_pos)
                expect("=")
                if key in _INT_KEYS:
                    val_tok, val_pos = advance()
                    if not val_tok.isdigit():
                        shown = val_tok if val_tok else "end of input"
                        raise ParseError(f"expected an integer, found {shown!r}", val_pos)
                    fields[key] = int(val_tok)
                else:
                    fields[key] = parse_spec()
                tok, pos = advance()
                if tok == ")":
                    break
                if tok != ",":
                    shown = tok if tok else "end of input"
                    raise ParseError(f"expected ',' or ')', found {shown!r}", pos)
        required = _REQUIRED[name]
        for key in required:
            if key not in fields:
                raise ParseError(f"{name} requires key {key!r}", pos)
        for key in fields:
            if key not in required:
                raise ParseError(f"{name} does not take key {key!r}", pos)
        return DecoderSpec(name=name, **fields)

    spec = parse_spec()
    tok, pos = advance()
    if tok:
        raise ParseError(f"unexpected trailing input {tok!r}", pos)
    return spec


def validate_decoder(spec: DecoderSpec, code: CodeParams) -> None:
    """Check that every leaf fits the constituent code implied by its position."""

    def visit(node: DecoderSpec, r: int, m: int) -> None:
        n = 1 << m
        where = f"{node.name} at R({r},{m})"
        if not 0 <= r <= m:
            raise CodeMismatchError(f"{where}: no such Reed-Muller code")
        if node.name in ("bws", "pbws", "autbws"):
            if m < 4 or r != m - 3:
                raise CodeMismatchError(f"{where}: blockwise successive decoding needs R(m-3, m), m >= 4")
            if node.name == "pbws" and not 1 <= node.l < n:
                raise CodeMismatchError(f"{where}: need 1 <= l < {n}")
        elif node.name == "chase":
            if m < 3 or r != m - 2:
                raise CodeMismatchError(f"{where}: Chase decoding needs the extended Hamming code R(m-2, m), m >= 3")
            if not 1 <= node.t <= min(n, npk._MAX_CHASE_BITS):
                raise CodeMismatchError(f"{where}: need 1 <= t <= {min(n, npk._MAX_CHASE_BITS)}")
        elif node.name == "fht":
            if r != 1 or m < 1:
                raise CodeMismatchError(f"{where}: FHT decoding needs R(1, m)")
        elif node.name in ("gbws", "rgbws"):
            if not 1 <= r <= m - 1:
                raise CodeMismatchError(f"{where}: decomposition needs 1 <= r <= m-1")
            if not 1 <= node.p <= 2 * n - 2:
                raise CodeMismatchError(f"{where}: need 1 <= p <= {2 * n - 2}")
            visit(node.u, r, m - 1)
            visit(node.v, r - 1, m - 1)
        if node.name in ("autbws", "autrec", "gbws", "rgbws") and node.p < 1:
            raise CodeMismatchError(f"{where}: need p >= 1")
        if node.name == "pbws" and node.p < 1:
            raise CodeMismatchError(f"{where}: need p >= 1")

    visit(spec, code.r, code.m)


# node-kind codes shared with the jitted interpreter
_KIND = {
    "bws": 0,
    "pbws": 1,
    "autbws": 2,
    "gbws": 3,
    "rgbws": 4,
    "autrec": 5,
    "rec": 6,
    "chase": 7,
    "fht": 8,
}


@dataclass(frozen=True)
class NodeTable:
    """Flat decoder tree: p1 holds l/p/t per kind, p2 the pbws branch count."""

    kind: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    cap: np.ndarray
    uch: np.ndarray
    vch: np.ndarray


def build_node_table(spec: DecoderSpec, code: CodeParams, chase_cap: int = 7) -> NodeTable:
    validate_decoder(spec, code)
    rows: list[list[int]] = []

    def visit(node: DecoderSpec) -> int:
        idx = len(rows)
        rows.append([_KIND[node.name], 0, 0, chase_cap, -1, -1])
        if node.name == "pbws":
            rows[idx][1] = node.l
            rows[idx][2] = node.p
        elif node.name == "chase":
            rows[idx][1] = node.t
        elif node.name in ("autbws", "autrec", "gbws", "rgbws"):
            rows[idx][1] = node.p
        if node.u is not None:
            rows[idx][4] = visit(node.u)
        if node.v is not None:
            rows[idx][5] = visit(node.v)
        return idx

    visit(spec)
    cols = np.array(rows, dtype=np.int64).T.copy()
    return NodeTable(kind=cols[0], p1=cols[1], p2=cols[2], cap=cols[3],
                     uch=cols[4], vch=cols[5])


PyDecoder = Callable[[np.ndarray, int, np.ndarray], tuple[np.ndarray, float]]


def build_python_decoder(spec: DecoderSpec, code: CodeParams, chase_cap: int = 7) -> PyDecoder:
    """Closure mirror of the jitted interpreter: f(y, state, ops) -> (bits, disc)."""
    validate_decoder(spec, code)

    def make(node: DecoderSpec, r: int, m: int) -> PyDecoder:
        if node.name == "chase":
            t = node.t

            def chase_fn(y, state, ops):
                return npk.chase2(y, t, ops)

            return chase_fn
        if node.name == "fht":

            def fht_fn(y, state, ops):
                bits = npk.fht_order1_bits(y, ops)
                return bits, npk.disc_count(y, bits, ops)

            return fht_fn
        if node.name == "bws":

            def bws_fn(y, state, ops):
                bits = npk.bws(y, chase_cap, ops)
                return bits, npk.disc_count(y, bits, ops)

            return bws_fn
        if node.name == "rec":

            def rec_fn(y, state, ops):
                bits = npk.recursive(y, r, m, ops)
                return bits, npk.disc_count(y, bits, ops)

            return rec_fn
        if node.name == "autrec":
            p = node.p

            def autrec_fn(y, state, ops):
                return npk.autrec(y, r, m, p, state, ops)

            return autrec_fn
        if node.name in ("pbws", "autbws"):
            random_mode = node.name == "autbws"
            l = node.l if node.l is not None else 0
            p = node.p

            def pbws_fn(y, state, ops):
                return npk.pbws(y, l, p, chase_cap, random_mode, state, ops)

            return pbws_fn
        # gbws / rgbws
        random_mode = node.name == "rgbws"
        p = node.p
        u_fn = make(node.u, r, m - 1)
        v_fn = make(node.v, r - 1, m - 1)

        def u_bits(y, state, ops):
            return u_fn(y, state, ops)[0]

        def v_bits(y, state, ops):
            return v_fn(y, state, ops)[0]

        def gbws_fn(y, state, ops):
            return npk.gbws(y, p, u_bits, v_bits, random_mode, state, ops)

        return gbws_fn

    return make(spec, code.r, code.m)


#: deepest gbws-in-gbws nesting the jitted interpreter supports
ENGINE_GBWS_DEPTH = 3


def gbws_depth(spec: DecoderSpec) -> int:
    """Nesting depth of composite (gbws/rgbws) nodes in the tree."""
    if spec.name in ("gbws", "rgbws"):
        return 1 + max(gbws_depth(spec.u), gbws_depth(spec.v))
    return 0


def engine_supported(spec: DecoderSpec) -> bool:
    return gbws_depth(spec) <= ENGINE_GBWS_DEPTH


def as_decoder_spec(decoder) -> Optional[DecoderSpec]:
    """Parse strings, pass specs through, return None for callables."""
    if isinstance(decoder, DecoderSpec):
        return decoder
    if isinstance(decoder, str):
        return parse_decoder_spec(decoder)
    if callable(decoder):
        return None
    raise TypeError(f"decoder must be a spec string, DecoderSpec, or callable, got {type(decoder).__name__}")
