"""Signatures, terms, identities and variety descriptors.

Terms are finite trees whose leaves are projections ``(p i)`` and whose
internal nodes are applications of signature symbols.  A term is always
read in an explicit arity context, so an identity carries the number of
variables it is stated in.

The text syntax is a small s-expression language::

    (beta (p 0) (beta (p 1) (p 2)))
    (= (beta (p 0) (p 1)) (beta (p 1) (p 0)) :arity 2)
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from typing import Iterator, Union


class ParseError(ValueError):
    """Raised for malformed term, identity, word or descriptor text."""


class CapabilityError(RuntimeError):
    """Raised when a requested combination of varieties is not implemented."""


@dataclass(frozen=True)
class Signature:
    ops: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [s for s, _ in self.ops]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate operation symbols in {names}")
        for s, a in self.ops:
            if not isinstance(a, int) or a < 0:
                raise ValueError(f"arity of {s!r} must be a natural number, got {a!r}")

    def arity(self, symbol: str) -> int:
        for s, a in self.ops:
            if s == symbol:
                return a
        raise KeyError(symbol)

    def __contains__(self, symbol: object) -> bool:
        return any(s == symbol for s, _ in self.ops)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.ops)

    def to_json(self) -> dict:
        return {"ops": [{"symbol": s, "arity": a} for s, a in self.ops]}

    @classmethod
    def from_json(cls, doc: dict) -> "Signature":
        try:
            return cls(tuple((o["symbol"], int(o["arity"])) for o in doc["ops"]))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad signature document: {exc}") from exc


@dataclass(frozen=True)
class Proj:
    index: int

    def __str__(self) -> str:
        return f"(p {self.index})"


@dataclass(frozen=True)
class App:
    symbol: str
    children: tuple["Term", ...] = ()

    def __str__(self) -> str:
        if not self.children:
            return f"({self.symbol})"
        return f"({self.symbol} " + " ".join(str(c) for c in self.children) + ")"


Term = Union[Proj, App]


def term_depth(t: Term) -> int:
    if isinstance(t, Proj):
        return 0
    return 1 + max((term_depth(c) for c in t.children), default=0)


def instance_exists(s: Term, j: int, k: int) -> bool:
    if j > k:
        raise ValueError(f"need j <= k, got j={j}, k={k}")
    return k >= j + term_depth(s)


def max_projection(t: Term) -> int:
    """Largest projection index in ``t``, or -1 if it has none."""
    if isinstance(t, Proj):
        return t.index
    return max((max_projection(c) for c in t.children), default=-1)


def check_term(t: Term, sig: Signature, arity: int) -> None:
    if isinstance(t, Proj):
        if not 0 <= t.index < arity:
            raise ValueError(f"projection {t.index} outside arity context {arity}")
        return
    if t.symbol not in sig:
        raise ValueError(f"unknown symbol {t.symbol!r}")
    if sig.arity(t.symbol) != len(t.children):
        raise ValueError(
            f"{t.symbol!r} has arity {sig.arity(t.symbol)} but got {len(t.children)} children"
        )
    for c in t.children:
        check_term(c, sig, arity)


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term
    arity: int
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        need = max(max_projection(self.lhs), max_projection(self.rhs)) + 1
        if self.arity < need:
            raise ValueError(f"identity uses {need} variables but arity is {self.arity}")

    @property
    def depth(self) -> int:
        return max(term_depth(self.lhs), term_depth(self.rhs))

    def __str__(self) -> str:
        return f"(= {self.lhs} {self.rhs} :arity {self.arity})"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"cannot tokenize at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def _read(tokens: list[str], i: int):
    if i >= len(tokens):
        raise ParseError("unexpected end of input")
    tok = tokens[i]
    if tok == ")":
        raise ParseError("unexpected ')'")
    if tok != "(":
        return tok, i + 1
    items, i = [], i + 1
    while True:
        if i >= len(tokens):
            raise ParseError("missing ')'")
        if tokens[i] == ")":
            return items, i + 1
        item, i = _read(tokens, i)
        items.append(item)


def _sexpr(text: str):
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input")
    tree, end = _read(tokens, 0)
    if end != len(tokens):
        raise ParseError(f"trailing input after expression: {tokens[end:]}")
    return tree


def _to_term(tree) -> Term:
    if not isinstance(tree, list) or not tree:
        raise ParseError(f"expected a parenthesised term, got {tree!r}")
    head = tree[0]
    if not isinstance(head, str):
        raise ParseError("operator position must be a symbol")
    if head == "p":
        if len(tree) != 2 or not isinstance(tree[1], str) or not tree[1].isdigit():
            raise ParseError(f"bad projection {tree!r}")
        return Proj(int(tree[1]))
    return App(head, tuple(_to_term(c) for c in tree[1:]))


def parse_term(text: str) -> Term:
    return _to_term(_sexpr(text))


def parse_identity(text: str) -> Identity:
    tree = _sexpr(text)
    if not isinstance(tree, list) or len(tree) not in (3, 5) or tree[0] != "=":
        raise ParseError(f"expected (= lhs rhs :arity n), got {text!r}")
    lhs, rhs = _to_term(tree[1]), _to_term(tree[2])
    if len(tree) == 5:
        if tree[3] != ":arity" or not isinstance(tree[4], str) or not tree[4].isdigit():
            raise ParseError("expected ':arity n'")
        arity = int(tree[4])
    else:
        arity = max(max_projection(lhs), max_projection(rhs)) + 1
    try:
        return Identity(lhs, rhs, arity)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for c in t.children:
            yield from subterms(c)


# ------------------------------------------------------- variety catalog


class Catalog(str, enum.Enum):
    SET = "set"
    BI = "bi"
    SE = "se"
    MONOID = "monoid"
    GROUP = "group"
    FG_AB = "fgab"
    ZEROARY_UNARY = "zeroary_unary"


BETA = "beta"

CATALOG_SIGNATURES: dict[Catalog, Signature] = {
    Catalog.SET: Signature(()),
    Catalog.BI: Signature(((BETA, 2),)),
    Catalog.SE: Signature(((BETA, 2),)),
    Catalog.MONOID: Signature((("mul", 2), ("e", 0))),
    Catalog.GROUP: Signature((("mul", 2), ("inv", 1), ("e", 0))),
    Catalog.FG_AB: Signature((("add", 2), ("neg", 1), ("zero", 0))),
}


def _ident(text: str, name: str) -> Identity:
    i = parse_identity(text)
    return Identity(i.lhs, i.rhs, i.arity, name=name)


# Named identities over one binary operation.  The keys are the short
# names accepted on the command line.
NAMED_IDENTITIES: dict[str, Identity] = {
    "assoc": _ident("(= (beta (beta (p 0) (p 1)) (p 2)) (beta (p 0) (beta (p 1) (p 2))) :arity 3)", "assoc"),
    "comm": _ident("(= (beta (p 0) (p 1)) (beta (p 1) (p 0)) :arity 2)", "comm"),
    "no11": _ident("(= (beta (p 0) (beta (p 1) (p 2))) (beta (p 0) (beta (p 1) (p 3))) :arity 4)", "no11"),
    "no10": _ident("(= (beta (p 0) (beta (p 1) (p 3))) (beta (p 0) (beta (p 2) (p 3))) :arity 4)", "no10"),
    "bb=b": _ident("(= (beta (p 0) (beta (p 1) (p 2))) (beta (p 0) (p 2)) :arity 3)", "bb=b"),
}


@dataclass(frozen=True)
class VarietyDescriptor:
    """A catalog variety, optionally with extra identities on the D side.

    For ``ZEROARY_UNARY`` the signature must be supplied explicitly; every
    other catalog entry has a fixed signature.
    """

    catalog: Catalog
    identities: tuple[Identity, ...] = ()
    signature: Signature | None = None

    def __post_init__(self) -> None:
        if self.catalog is Catalog.ZEROARY_UNARY:
            if self.signature is None:
                raise ValueError("ZEROARY_UNARY needs an explicit signature")
            if any(a > 1 for _, a in self.signature.ops):
                raise ValueError("ZEROARY_UNARY signatures only allow arities 0 and 1")
        for ident in self.identities:
            check_term(ident.lhs, self.sig, ident.arity)
            check_term(ident.rhs, self.sig, ident.arity)

    @property
    def sig(self) -> Signature:
        if self.signature is not None:
            return self.signature
        return CATALOG_SIGNATURES[self.catalog]

    @property
    def all_identities(self) -> tuple[Identity, ...]:
        """Declared identities; SE adds associativity implicitly."""
        if self.catalog is Catalog.SE and NAMED_IDENTITIES["assoc"] not in self.identities:
            return (NAMED_IDENTITIES["assoc"],) + self.identities
        return self.identities

    def to_json(self) -> dict:
        doc = {
            "catalog": self.catalog.value,
            "identities": [str(i) for i in self.identities],
        }
        doc.update(self.sig.to_json())
        return doc

    @classmethod
    def from_json(cls, doc: dict | str) -> "VarietyDescriptor":
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            cat = Catalog(doc["catalog"])
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad catalog in descriptor: {exc}") from exc
        sig = Signature.from_json(doc) if cat is Catalog.ZEROARY_UNARY else None
        for o in doc.get("ops", []):
            if not isinstance(o.get("arity"), int):
                raise ParseError("infinite or non-integer arities are not supported")
        idents = tuple(parse_identity(t) for t in doc.get("identities", []))
        return cls(cat, idents, sig)


# ------------------------------------------------------------ classifier


class Zeroary(str, enum.Enum):
    NONE = "none"
    ONE = "one"
    MANY = "many"


class InitialFunctor(str, enum.Enum):
    STAR = "*"
    I_BANG = "I!"
    IF = "IF"
    IF_BANG = "IF!"
    F = "F"
    I = "I"  # noqa: E741


_CHART = {
    Zeroary.NONE: {Zeroary.NONE: InitialFunctor.STAR, Zeroary.ONE: InitialFunctor.I_BANG, Zeroary.MANY: InitialFunctor.I_BANG},
    Zeroary.ONE: {Zeroary.NONE: InitialFunctor.IF, Zeroary.ONE: InitialFunctor.IF, Zeroary.MANY: InitialFunctor.IF_BANG},
    Zeroary.MANY: {Zeroary.NONE: InitialFunctor.F, Zeroary.ONE: InitialFunctor.I, Zeroary.MANY: InitialFunctor.STAR},
}


def classify_initial_functor(c_zeroary: Zeroary | str, d_zeroary: Zeroary | str) -> InitialFunctor:
    """Shape of the initial representable functor C -> D.

    Rows are indexed by the derived zeroary operations of C, columns by
    those of D.
    """
    return _CHART[Zeroary(c_zeroary)][Zeroary(d_zeroary)]


_CATALOG_ZEROARY = {
    Catalog.SET: Zeroary.NONE,
    Catalog.BI: Zeroary.NONE,
    Catalog.SE: Zeroary.NONE,
    Catalog.MONOID: Zeroary.ONE,
    Catalog.GROUP: Zeroary.ONE,
    Catalog.FG_AB: Zeroary.ONE,
}


def derived_zeroary(v: VarietyDescriptor) -> Zeroary:
    """Count of derived zeroary operations for catalog varieties.

    For a free zeroary+unary signature the closed terms are all distinct,
    so any constant together with any unary operation gives infinitely many.
    """
    if v.catalog in _CATALOG_ZEROARY:
        return _CATALOG_ZEROARY[v.catalog]
    consts = [s for s, a in v.sig.ops if a == 0]
    unary = [s for s, a in v.sig.ops if a == 1]
    if v.identities:
        raise CapabilityError("derived zeroary count with identities is not implemented")
    if not consts:
        return Zeroary.NONE
    if len(consts) == 1 and not unary:
        return Zeroary.ONE
    return Zeroary.MANY
