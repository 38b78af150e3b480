"""Normal forms for free algebras in the catalog varieties.

Every generator is a :class:`GenId`.  Copowers are modelled by tagging:
the ``i``-th coprojection prepends ``i`` to the tag tuple of each generator,
so a word in a copower of copowers carries its outermost copy index first.
Idempotence is a flag on the generator, not an identity of the variety.

Payloads per variety:

* SET: a single ``GenId``
* BI: a ``GenId`` leaf or a pair ``(left, right)``
* SE and MONOID: a tuple of ``GenId`` (MONOID allows the empty tuple)
* GROUP: a tuple of ``(GenId, +1 | -1)``
* FG_AB: a sorted tuple of ``(GenId, coefficient)`` with nonzero coefficients
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence, Union

from .sig_core import Catalog, ParseError


@dataclass(frozen=True, order=True)
class GenId:
    name: str
    tags: tuple[int, ...] = ()
    idempotent: bool = False
    torsion: int = 0

    def tagged(self, i: int) -> "GenId":
        return replace(self, tags=(i,) + self.tags)

    def untagged(self) -> tuple[int, "GenId"]:
        if not self.tags:
            raise ValueError(f"generator {self} carries no copy tag")
        return self.tags[0], replace(self, tags=self.tags[1:])

    def __str__(self) -> str:
        return format_gen(self)


ONE = None  # raw identity letter for MONOID words


@dataclass(frozen=True)
class Word:
    variety: Catalog
    payload: Any

    def __str__(self) -> str:
        return format_word(self)

    def __len__(self) -> int:
        return word_length(self)

    def __lt__(self, other: "Word") -> bool:
        return sort_key(self) < sort_key(other)


Assignment = Union[Mapping[GenId, Word], Callable[[GenId], Word]]


# ------------------------------------------------------------ normalising


def _norm_seq(seq: Iterable[Any], allow_empty: bool) -> tuple[GenId, ...]:
    out: list[GenId] = []
    for g in seq:
        if g is ONE:
            continue
        if not isinstance(g, GenId):
            raise TypeError(f"expected GenId, got {g!r}")
        if out and out[-1] == g and g.idempotent:
            continue
        out.append(g)
    if not out and not allow_empty:
        raise ValueError("semigroups have no empty word")
    return tuple(out)


def _norm_group(seq: Iterable[tuple[GenId, int]]) -> tuple[tuple[GenId, int], ...]:
    out: list[tuple[GenId, int]] = []
    for g, e in seq:
        if e not in (1, -1):
            raise ValueError(f"group letters carry exponent +1 or -1, got {e}")
        if g.idempotent:
            # an idempotent element of a group is the identity
            continue
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def _norm_bi(t: Any) -> Any:
    if isinstance(t, GenId):
        return t
    left, right = t
    left, right = _norm_bi(left), _norm_bi(right)
    if left == right and isinstance(left, GenId) and left.idempotent:
        return left
    return (left, right)


def _norm_ab(items: Iterable[tuple[GenId, int]]) -> tuple[tuple[GenId, int], ...]:
    acc: dict[GenId, int] = {}
    for g, c in items:
        if g.idempotent:
            continue
        acc[g] = acc.get(g, 0) + c
    out = []
    for g in sorted(acc):
        c = acc[g] % g.torsion if g.torsion else acc[g]
        if c:
            out.append((g, c))
    return tuple(out)


def normal_form(variety: Catalog, raw: Any) -> Word:
    """Canonical representative of a raw word."""
    variety = Catalog(variety)
    if variety is Catalog.SET:
        if not isinstance(raw, GenId):
            raise TypeError("SET words are single generators")
        return Word(variety, raw)
    if variety is Catalog.SE:
        return Word(variety, _norm_seq(raw, allow_empty=False))
    if variety is Catalog.MONOID:
        return Word(variety, _norm_seq(raw, allow_empty=True))
    if variety is Catalog.GROUP:
        return Word(variety, _norm_group(raw))
    if variety is Catalog.BI:
        return Word(variety, _norm_bi(raw))
    if variety is Catalog.FG_AB:
        if isinstance(raw, Mapping):
            raw = raw.items()
        return Word(variety, _norm_ab(raw))
    raise ValueError(f"no free normal form for {variety}")


# small constructors used throughout the package


def se(*gens: GenId) -> Word:
    return normal_form(Catalog.SE, gens)


def mon(*gens: GenId) -> Word:
    return normal_form(Catalog.MONOID, gens)


def grp(*letters: tuple[GenId, int] | GenId) -> Word:
    return normal_form(Catalog.GROUP, [(x, 1) if isinstance(x, GenId) else x for x in letters])


def bi(tree: Any) -> Word:
    return normal_form(Catalog.BI, tree)


def gen_word(variety: Catalog, g: GenId) -> Word:
    """The word consisting of a single generator."""
    variety = Catalog(variety)
    if variety is Catalog.SET or variety is Catalog.BI:
        return Word(variety, g)
    if variety in (Catalog.SE, Catalog.MONOID):
        return Word(variety, (g,))
    if variety is Catalog.GROUP:
        return normal_form(variety, [(g, 1)])
    if variety is Catalog.FG_AB:
        return normal_form(variety, [(g, 1)])
    raise ValueError(variety)


def multiply(u: Word, v: Word) -> Word:
    """The variety's binary operation on two words of the same variety."""
    if u.variety is not v.variety:
        raise ValueError("cannot multiply words of different varieties")
    var = u.variety
    if var in (Catalog.SE, Catalog.MONOID, Catalog.GROUP):
        return normal_form(var, u.payload + v.payload)
    if var is Catalog.BI:
        return normal_form(var, (u.payload, v.payload))
    if var is Catalog.FG_AB:
        return normal_form(var, u.payload + v.payload)
    raise ValueError(f"{var} has no binary operation")


def inverse(u: Word) -> Word:
    if u.variety is Catalog.GROUP:
        return Word(u.variety, tuple((g, -e) for g, e in reversed(u.payload)))
    if u.variety is Catalog.FG_AB:
        return normal_form(u.variety, [(g, -c) for g, c in u.payload])
    raise ValueError(f"{u.variety} has no inverses")


# ------------------------------------------------------------- traversal


def _bi_leaves(t: Any) -> Iterator[GenId]:
    if isinstance(t, GenId):
        yield t
    else:
        yield from _bi_leaves(t[0])
        yield from _bi_leaves(t[1])


def generators(w: Word) -> Iterator[GenId]:
    """Generator occurrences of ``w`` in reading order."""
    var = w.variety
    if var is Catalog.SET:
        yield w.payload
    elif var is Catalog.BI:
        yield from _bi_leaves(w.payload)
    elif var in (Catalog.SE, Catalog.MONOID):
        yield from w.payload
    else:
        for g, _ in w.payload:
            yield g


def word_length(w: Word) -> int:
    if w.variety is Catalog.FG_AB:
        return sum(abs(c) for _, c in w.payload)
    return sum(1 for _ in generators(w))


def bi_height(t: Any) -> int:
    if isinstance(t, Word):
        t = t.payload
    if isinstance(t, GenId):
        return 0
    return 1 + max(bi_height(t[0]), bi_height(t[1]))


def map_generators(w: Word, f: Callable[[GenId], GenId]) -> Word:
    """Rename every generator by ``f`` and renormalise."""
    var = w.variety
    if var is Catalog.SET:
        return Word(var, f(w.payload))
    if var is Catalog.BI:
        def walk(t):
            return f(t) if isinstance(t, GenId) else (walk(t[0]), walk(t[1]))
        return normal_form(var, walk(w.payload))
    if var in (Catalog.SE, Catalog.MONOID):
        return normal_form(var, [f(g) for g in w.payload])
    return normal_form(var, [(f(g), e) for g, e in w.payload])


def coprojection(iota: int, kappa: int, w: Word) -> Word:
    """Image of ``w`` under the ``iota``-th coprojection into the ``kappa``-fold copower."""
    if not 0 <= iota < kappa:
        raise ValueError(f"coprojection index {iota} out of range for {kappa} copies")
    if kappa == 1:
        return w
    return map_generators(w, lambda g: g.tagged(iota))


def _lookup(assignment: Assignment, g: GenId) -> Word:
    if callable(assignment) and not isinstance(assignment, Mapping):
        return assignment(g)
    try:
        return assignment[g]
    except KeyError:
        raise KeyError(f"assignment is not defined on generator {g}") from None


def apply_hom(assignment: Assignment, w: Word) -> Word:
    """Substitute generator images into ``w`` and renormalise.

    Images must live in a single variety; the result lives there too.
    """
    var = w.variety
    if var is Catalog.SET:
        return _lookup(assignment, w.payload)
    if var is Catalog.BI:
        cache: dict[GenId, Word] = {}

        def walk(t):
            if isinstance(t, GenId):
                if t not in cache:
                    cache[t] = _lookup(assignment, t)
                return cache[t]
            return multiply(walk(t[0]), walk(t[1]))

        return walk(w.payload)
    if var in (Catalog.SE, Catalog.MONOID):
        images = [_lookup(assignment, g) for g in w.payload]
        if not images:
            return Word(Catalog.MONOID, ())
        target = images[0].variety
        if target is Catalog.FG_AB:
            return normal_form(target, [x for im in images for x in im.payload])
        return normal_form(target, [x for im in images for x in im.payload])
    if var is Catalog.GROUP:
        parts: list = []
        target = Catalog.GROUP
        for g, e in w.payload:
            im = _lookup(assignment, g)
            target = im.variety
            parts.extend((im if e == 1 else inverse(im)).payload)
        return normal_form(target, parts)
    if var is Catalog.FG_AB:
        parts = []
        target = Catalog.FG_AB
        for g, c in w.payload:
            im = _lookup(assignment, g)
            target = im.variety
            parts.extend((h, c * d) for h, d in im.payload)
        return normal_form(target, parts)
    raise ValueError(var)


def cotuple(maps: Sequence[Assignment], w: Word) -> Word:
    """Apply ``maps[i]`` to the generators of ``w`` carrying outer tag ``i``."""

    def route(g: GenId) -> Word:
        i, inner = g.untagged()
        if not 0 <= i < len(maps):
            raise KeyError(f"copy tag {i} has no component map (have {len(maps)})")
        return _lookup(maps[i], inner)

    return apply_hom(route, w)


# ---------------------------------------------------------------- text form

_NAME = re.compile(r"[A-Za-z_]+")


def format_gen(g: GenId) -> str:
    if all(0 <= t < 10 for t in g.tags):
        return g.name + "".join(str(t) for t in g.tags)
    return g.name + "{" + ",".join(str(t) for t in g.tags) + "}"


IdemSpec = Union[bool, Callable[[str], bool]]


def _is_idem(spec: IdemSpec, name: str) -> bool:
    return spec(name) if callable(spec) else bool(spec)


_GEN = re.compile(r"([A-Za-z_]+)(?:\{([0-9,]*)\}|([0-9]*))")


def _parse_gen_at(text: str, pos: int, idem: IdemSpec, torsion: Mapping[str, int]) -> tuple[GenId, int]:
    m = _GEN.match(text, pos)
    if not m:
        raise ParseError(f"expected a generator at {text[pos:]!r}")
    name, braced, digits = m.group(1), m.group(2), m.group(3)
    if braced is not None:
        tags = tuple(int(t) for t in braced.split(",")) if braced else ()
    else:
        tags = tuple(int(c) for c in digits)
    return GenId(name, tags, _is_idem(idem, name), torsion.get(name, 0)), m.end()


def parse_gen(text: str, idempotent: IdemSpec = False, torsion: Mapping[str, int] | None = None) -> GenId:
    g, end = _parse_gen_at(text.strip(), 0, idempotent, torsion or {})
    if end != len(text.strip()):
        raise ParseError(f"trailing characters in generator {text!r}")
    return g


def format_word(w: Word) -> str:
    var = w.variety
    if var is Catalog.SET:
        return format_gen(w.payload)
    if var is Catalog.BI:
        def walk(t):
            if isinstance(t, GenId):
                return format_gen(t)
            return "(" + walk(t[0]) + "." + walk(t[1]) + ")"
        return walk(w.payload)
    if var in (Catalog.SE, Catalog.MONOID):
        return ".".join(format_gen(g) for g in w.payload) if w.payload else "1"
    if var is Catalog.GROUP:
        if not w.payload:
            return "1"
        return ".".join(format_gen(g) + ("~" if e < 0 else "") for g, e in w.payload)
    if var is Catalog.FG_AB:
        if not w.payload:
            return "0"
        return "+".join(f"{c}*{format_gen(g)}" for g, c in w.payload)
    raise ValueError(var)


def parse_word(
    text: str,
    variety: Catalog | str,
    idempotent: IdemSpec = False,
    torsion: Mapping[str, int] | None = None,
) -> Word:
    """Inverse of :func:`format_word` (idempotence and torsion are supplied by the caller)."""
    var = Catalog(variety)
    text = text.strip()
    torsion = torsion or {}
    try:
        if var is Catalog.SET:
            return normal_form(var, parse_gen(text, idempotent, torsion))
        if var is Catalog.BI:
            tree, end = _parse_bi(text, 0, idempotent, torsion)
            if end != len(text):
                raise ParseError(f"trailing characters in {text!r}")
            return normal_form(var, tree)
        if var in (Catalog.SE, Catalog.MONOID):
            if text == "1" and var is Catalog.MONOID:
                return Word(var, ())
            return normal_form(var, [parse_gen(p, idempotent, torsion) for p in text.split(".")])
        if var is Catalog.GROUP:
            if text == "1":
                return Word(var, ())
            letters = []
            for p in text.split("."):
                e = -1 if p.endswith("~") else 1
                letters.append((parse_gen(p.rstrip("~"), idempotent, torsion), e))
            return normal_form(var, letters)
        if var is Catalog.FG_AB:
            if text == "0":
                return Word(var, ())
            items = []
            for p in text.split("+"):
                coeff, _, g = p.partition("*")
                items.append((parse_gen(g, idempotent, torsion), int(coeff)))
            return normal_form(var, items)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
    raise ParseError(f"no text form for {var}")


def _parse_bi(text: str, pos: int, idem: IdemSpec, torsion: Mapping[str, int]):
    if pos < len(text) and text[pos] == "(":
        left, pos = _parse_bi(text, pos + 1, idem, torsion)
        if pos >= len(text) or text[pos] != ".":
            raise ParseError(f"expected '.' at position {pos} in {text!r}")
        right, pos = _parse_bi(text, pos + 1, idem, torsion)
        if pos >= len(text) or text[pos] != ")":
            raise ParseError(f"expected ')' at position {pos} in {text!r}")
        return (left, right), pos + 1
    return _parse_gen_at(text, pos, idem, torsion)


def sort_key(w: Word) -> tuple:
    """Deterministic order: by length, then lexicographically on generator keys."""
    gens = [(g.name, g.tags) for g in generators(w)]
    shape = format_word(w) if w.variety is Catalog.BI else ""
    return (word_length(w), gens, shape)
