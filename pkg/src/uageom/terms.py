"""Signatures, absolutely free terms, and the text DSL.

Grammar (whitespace insignificant)::

    signature := entry (',' entry)*        entry := name '/' arity
    term      := var | name '(' [term (',' term)*] ')' | name
    var       := 'x' positive-integer

A bare name is accepted as sugar for a constant (``e`` parses as ``e()``);
the canonical printed form always writes the parentheses.

Terms are immutable values with structural equality.  Variables and
constants have depth 0; an application has depth 1 + max depth of its
children.  The enumeration order produced by :func:`enumerate_terms` is
part of the public contract (certificates refer to "the first system
found"): terms are listed by depth, and inside one depth level variables
come first (by index), then applications ordered by signature symbol
order and then lexicographically by their argument lists.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .errors import ParseError, TermError

__all__ = [
    "Signature",
    "Var",
    "App",
    "Term",
    "parse_signature",
    "parse_term",
    "format_term",
    "format_signature",
    "term_depth",
    "term_vars",
    "substitute",
    "replace_symbols",
    "enumerate_terms",
    "term_sort_key",
]

_VAR_RE = re.compile(r"^x([1-9][0-9]*)$")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_*']*")
_INT_RE = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Var:
    """Variable x<index>, 1-based."""

    index: int

    def __repr__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class App:
    """Application of an operation symbol to exactly arity-many children."""

    symbol: str
    args: tuple

    def __repr__(self):
        return format_term(self)


Term = Union[Var, App]


class Signature:
    """Ordered list of (name, arity) pairs; the order is fixed at parse
    time and used for every deterministic enumeration tie-break."""

    def __init__(self, symbols):
        symbols = tuple((str(n), int(a)) for n, a in symbols)
        seen = set()
        for name, arity in symbols:
            if name in seen:
                raise ParseError(f"duplicate symbol name {name!r}")
            if arity < 0:
                raise ParseError(f"negative arity for symbol {name!r}")
            if _VAR_RE.match(name):
                raise ParseError(f"symbol name {name!r} collides with variable syntax")
            seen.add(name)
        self.symbols = symbols
        self._arity = dict(symbols)
        self._index = {name: i for i, (name, _) in enumerate(symbols)}

    def arity(self, name: str) -> int:
        try:
            return self._arity[name]
        except KeyError:
            raise ParseError(f"unknown symbol {name!r}") from None

    def index(self, name: str) -> int:
        return self._index[name]

    def __contains__(self, name):
        return name in self._arity

    def names(self):
        return [name for name, _ in self.symbols]

    def max_arity(self) -> int:
        return max((a for _, a in self.symbols), default=0)

    def constants(self):
        return [name for name, a in self.symbols if a == 0]

    def __eq__(self, other):
        return isinstance(other, Signature) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Signature({format_signature(self)!r})"


# ---------------------------------------------------------------------------
# tokenizing / parsing


def _tokenize(text):
    """Yield (kind, value, line, col) with kind in NAME/INT/PUNCT."""
    toks = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            col += 1
            i += 1
            continue
        m = _NAME_RE.match(text, i)
        if m:
            toks.append(("NAME", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        m = _INT_RE.match(text, i)
        if m:
            toks.append(("INT", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        if c in "(),/":
            toks.append(("PUNCT", c, line, col))
            col += 1
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    return toks


class _TokenStream:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self, expect=None):
        tok = self.peek()
        if tok is None:
            if self.toks:
                _, val, line, col = self.toks[-1]
                raise ParseError("unexpected end of input", line, col + len(val))
            raise ParseError("unexpected end of input", 1, 1)
        if expect is not None and tok[1] != expect:
            raise ParseError(f"expected {expect!r}, found {tok[1]!r}", tok[2], tok[3])
        self.pos += 1
        return tok

    def done(self):
        return self.pos >= len(self.toks)


def parse_signature(text: str) -> Signature:
    """Parse ``name/arity`` entries separated by commas, in textual order."""
    ts = _TokenStream(text)
    symbols = []
    seen = set()
    while True:
        kind, name, line, col = ts.next()
        if kind != "NAME":
            raise ParseError(f"expected symbol name, found {name!r}", line, col)
        if _VAR_RE.match(name):
            raise ParseError(f"symbol name {name!r} collides with variable syntax", line, col)
        if name in seen:
            raise ParseError(f"duplicate symbol name {name!r}", line, col)
        seen.add(name)
        ts.next("/")
        kind, arity, line, col = ts.next()
        if kind != "INT":
            raise ParseError(f"expected arity, found {arity!r}", line, col)
        symbols.append((name, int(arity)))
        if ts.done():
            break
        ts.next(",")
    return Signature(symbols)


def _parse_term(ts: _TokenStream, sig: Signature, nvars: int) -> Term:
    kind, name, line, col = ts.next()
    if kind != "NAME":
        raise ParseError(f"expected term, found {name!r}", line, col)
    m = _VAR_RE.match(name)
    if m:
        index = int(m.group(1))
        if index > nvars:
            raise ParseError(
                f"variable x{index} exceeds the variable set x1..x{nvars}", line, col
            )
        return Var(index)
    if name not in sig:
        raise ParseError(f"unknown symbol {name!r}", line, col)
    arity = sig.arity(name)
    nxt = ts.peek()
    if nxt is None or nxt[1] != "(":
        # bare name: sugar for a constant
        if arity != 0:
            raise ParseError(f"symbol {name!r} expects {arity} arguments", line, col)
        return App(name, ())
    ts.next("(")
    args = []
    nxt = ts.peek()
    if nxt is not None and nxt[1] == ")":
        ts.next(")")
    else:
        while True:
            args.append(_parse_term(ts, sig, nvars))
            kind2, val2, line2, col2 = ts.next()
            if val2 == ")":
                break
            if val2 != ",":
                raise ParseError(f"expected ',' or ')', found {val2!r}", line2, col2)
    if len(args) != arity:
        raise ParseError(
            f"symbol {name!r} expects {arity} arguments, found {len(args)}", line, col
        )
    return App(name, tuple(args))


def parse_term(text: str, sig: Signature, nvars: int) -> Term:
    """Parse a prefix-syntax term; checks symbols, arities, variable range."""
    ts = _TokenStream(text)
    term = _parse_term(ts, sig, nvars)
    if not ts.done():
        tok = ts.peek()
        raise ParseError(f"trailing input {tok[1]!r}", tok[2], tok[3])
    return term


def format_term(t: Term) -> str:
    """Canonical DSL string; constants are printed with parentheses."""
    if isinstance(t, Var):
        return f"x{t.index}"
    if not t.args:
        return f"{t.symbol}()"
    return f"{t.symbol}({','.join(format_term(a) for a in t.args)})"


def format_signature(sig: Signature) -> str:
    return ", ".join(f"{name}/{arity}" for name, arity in sig.symbols)


# ---------------------------------------------------------------------------
# structural operations


def term_depth(t: Term) -> int:
    if isinstance(t, Var):
        return 0
    if not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)


def term_vars(t: Term) -> set:
    """Exact set of variable indices occurring in t."""
    if isinstance(t, Var):
        return {t.index}
    out = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def substitute(t: Term, assignment: Mapping[int, Term]) -> Term:
    """Simultaneous substitution of variables by terms.

    Every variable of t must be in the assignment's domain; operation
    symbols are untouched.
    """
    if isinstance(t, Var):
        try:
            return assignment[t.index]
        except KeyError:
            raise TermError(f"unmapped variable x{t.index}") from None
    if not t.args:
        return t
    return App(t.symbol, tuple(substitute(a, assignment) for a in t.args))


def replace_symbols(t: Term, mapping: Mapping[str, object]) -> Term:
    """Bottom-up symbol replacement.

    Mapping values are either a symbol name (rename, same arity) or a
    template Term whose variables x1..x_arity stand for the children.
    Symbols absent from the mapping are left unchanged.
    """
    if isinstance(t, Var):
        return t
    args = tuple(replace_symbols(a, mapping) for a in t.args)
    target = mapping.get(t.symbol)
    if target is None:
        return App(t.symbol, args)
    if isinstance(target, str):
        return App(target, args)
    free = term_vars(target)
    if any(i > len(args) for i in free):
        raise TermError(
            f"template for {t.symbol!r} uses x{max(free)} but only "
            f"{len(args)} children are available"
        )
    return substitute(target, {i + 1: arg for i, arg in enumerate(args)})


def term_sort_key(t: Term, sig: Signature):
    """Total order key realizing the enumeration order: depth first, then
    variables before applications, then symbol order, then arguments."""
    if isinstance(t, Var):
        return (0, 0, t.index, ())
    return (
        term_depth(t),
        1,
        sig.index(t.symbol),
        tuple(term_sort_key(a, sig) for a in t.args),
    )


def enumerate_terms(sig: Signature, nvars: int, max_depth: int) -> Iterator[Term]:
    """Every term of depth <= max_depth exactly once, in the documented
    deterministic order.  The stream is independently restartable (each
    call returns a fresh generator)."""
    if max_depth < 0:
        raise TermError("max_depth must be >= 0")

    def gen():
        pool = []  # terms of depth < current level, in enumeration order
        depths = []
        level0 = [Var(i) for i in range(1, nvars + 1)]
        level0 += [App(name, ()) for name, arity in sig.symbols if arity == 0]
        yield from level0
        pool.extend(level0)
        depths.extend([0] * len(level0))
        for d in range(1, max_depth + 1):
            frozen = len(pool)  # argument pool for this level is fixed
            produced = []
            for name, arity in sig.symbols:
                if arity == 0:
                    continue
                for combo in itertools.product(range(frozen), repeat=arity):
                    if max(depths[i] for i in combo) == d - 1:
                        t = App(name, tuple(pool[i] for i in combo))
                        produced.append(t)
                        yield t
            pool.extend(produced)
            depths.extend([d] * len(produced))

    return gen()
