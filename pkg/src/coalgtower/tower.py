"""Finite levels of the universal precoalgebra over a pseudocoalgebra.

The implemented family has D given by a single binary operation ``beta``
plus identities.  Over the trivial pseudocoalgebra, level ``k`` of the
tower is (a subalgebra of) the C-algebra freely generated by idempotents
``x_a`` for bit strings ``a`` of length ``k``:

* the connecting map to level ``j`` truncates every subscript to ``j`` bits,
* the pseudo-co-operation reads the first bit of a subscript as a copy
  index, so on the word level it is the identity.

Over a finite Set-based pseudocoalgebra ``S`` (only for C = SET) a level-k
element is a path ``s0 -b0-> s1 -b1-> ... sk`` through the transition
relation ``beta^S(s) = c_b(s')``.  The trivial case is the special case of a
one-point ``S``.

Membership of an element ``w`` of level ``k`` requires

(a) its image under the connecting map lies in level ``k-1``;
(b) every identity whose instances exist is cosatisfied at ``w``;
(c) its pseudo-co-operation image lies in the copower generated by level ``k-1``.

Words longer than the length bound ``L`` are outside the known region.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path as FsPath
from typing import Any, Callable, Hashable, Iterator, Mapping, Sequence

from .sig_core import (
    BETA,
    App,
    CapabilityError,
    Catalog,
    Identity,
    Proj,
    Term,
    VarietyDescriptor,
    instance_exists,
    term_depth,
)
from .words import (
    GenId,
    Word,
    apply_hom,
    cotuple,
    format_word,
    gen_word,
    map_generators,
    normal_form,
    parse_word,
    sort_key,
)

SUPPORTED_C = (Catalog.SET, Catalog.BI, Catalog.SE)


# ------------------------------------------------------- pseudocoalgebras


@dataclass(frozen=True, eq=False)
class PseudoCoalgebra:
    """Finite Set-based pseudocoalgebra for a signature.

    ``coprojections[alpha][i]`` maps base elements into ``spaces[alpha]`` and
    ``coops[alpha]`` is the pseudo-co-operation.
    """

    base: tuple[Hashable, ...]
    ops: tuple[tuple[str, int], ...]
    spaces: Mapping[str, tuple[Hashable, ...]]
    coprojections: Mapping[str, tuple[Mapping[Hashable, Hashable], ...]]
    coops: Mapping[str, Mapping[Hashable, Hashable]]
    label: str = ""

    def __post_init__(self) -> None:
        for alpha, ar in self.ops:
            space = set(self.spaces[alpha])
            if len(self.coprojections[alpha]) != ar:
                raise ValueError(f"{alpha} needs {ar} pseudocoprojections")
            for c in self.coprojections[alpha]:
                if set(c) != set(self.base) or not set(c.values()) <= space:
                    raise ValueError(f"pseudocoprojection for {alpha} is not a total map into S_{alpha}")
            if set(self.coops[alpha]) != set(self.base) or not set(self.coops[alpha].values()) <= space:
                raise ValueError(f"pseudo-co-operation for {alpha} is not total")

    @classmethod
    def trivial(cls, ops: Sequence[tuple[str, int]] = ((BETA, 2),)) -> "PseudoCoalgebra":
        ops = tuple(ops)
        return cls(
            base=("*",),
            ops=ops,
            spaces={a: ("*",) for a, _ in ops},
            coprojections={a: tuple({"*": "*"} for _ in range(n)) for a, n in ops},
            coops={a: {"*": "*"} for a, _ in ops},
            label="TRIVIAL",
        )

    @property
    def is_trivial(self) -> bool:
        return len(self.base) == 1 and all(len(self.spaces[a]) == 1 for a, _ in self.ops)

    def transitions(self, alpha: str, x: Hashable) -> list[tuple[int, Hashable]]:
        """All ``(i, y)`` with ``c_{alpha,i}(y) == alpha^S(x)``."""
        target = self.coops[alpha][x]
        out = []
        for i, c in enumerate(self.coprojections[alpha]):
            for y in self.base:
                if c[y] == target:
                    out.append((i, y))
        return out

    def key(self) -> str:
        doc = {
            "base": [repr(b) for b in self.base],
            "ops": list(self.ops),
            "coprojections": {a: [[repr(c[b]) for b in self.base] for c in cs] for a, cs in self.coprojections.items()},
            "coops": {a: [repr(m[b]) for b in self.base] for a, m in self.coops.items()},
        }
        if self.is_trivial:
            doc = {"trivial": list(self.ops)}
        return json.dumps(doc, sort_keys=True)


def psi(R) -> PseudoCoalgebra:
    """Pseudocoalgebra associated with a finite Set-based coalgebra."""
    spaces, coprojs, coops = {}, {}, {}
    for alpha, ar in R.sig.ops:
        spaces[alpha] = tuple((i, x) for i in range(ar) for x in R.carrier)
        coprojs[alpha] = tuple({x: (i, x) for x in R.carrier} for i in range(ar))
        coops[alpha] = {x: tuple(R.coops[alpha][x]) for x in R.carrier}
    return PseudoCoalgebra(tuple(R.carrier), tuple(R.sig.ops), spaces, coprojs, coops, label=f"psi({R.label})")


def product_pseudo(S1: PseudoCoalgebra, S2: PseudoCoalgebra) -> PseudoCoalgebra:
    if S1.ops != S2.ops:
        raise ValueError("pseudocoalgebras over different signatures")
    base = tuple(itertools.product(S1.base, S2.base))
    spaces, coprojs, coops = {}, {}, {}
    for alpha, ar in S1.ops:
        spaces[alpha] = tuple(itertools.product(S1.spaces[alpha], S2.spaces[alpha]))
        coprojs[alpha] = tuple(
            {(a, b): (S1.coprojections[alpha][i][a], S2.coprojections[alpha][i][b]) for a, b in base}
            for i in range(ar)
        )
        coops[alpha] = {(a, b): (S1.coops[alpha][a], S2.coops[alpha][b]) for a, b in base}
    return PseudoCoalgebra(base, S1.ops, spaces, coprojs, coops, label=f"({S1.label} x {S2.label})")


# ------------------------------------------------------------ elements


@dataclass(frozen=True, order=True)
class Path:
    """Level-k element over a finite Set-based pseudocoalgebra."""

    states: tuple[Hashable, ...]
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.states) != len(self.bits) + 1:
            raise ValueError("a path has one more state than bits")

    def __str__(self) -> str:
        return ",".join(str(s) for s in self.states) + "|" + "".join(str(b) for b in self.bits)

    def __len__(self) -> int:
        return 1

    def truncate(self, j: int) -> "Path":
        return Path(self.states[: j + 1], self.bits[:j])

    def drop(self, d: int) -> "Path":
        return Path(self.states[d:], self.bits[d:])


def x_gen(bits: Sequence[int]) -> GenId:
    return GenId("x", tuple(bits), idempotent=True)


def _walk(s: Term, bits: Sequence[int], pos: int = 0) -> tuple[int, int]:
    """Follow ``s`` down the bits of a subscript; return (projection index, bits consumed)."""
    while isinstance(s, App):
        if len(s.children) != 2:
            raise CapabilityError("towers support a single binary operation only")
        s = s.children[bits[pos]]
        pos += 1
    return s.index, pos


# ---------------------------------------------------------------- models


class _FreeModel:
    """Levels are subalgebras of free C-algebras on idempotents x_a."""

    def __init__(self, c: Catalog):
        self.c = c

    def level0(self) -> list[Word]:
        return [gen_word(self.c, x_gen(()))]

    def connect(self, w: Word, j: int) -> Word:
        return map_generators(w, lambda g: replace(g, tags=g.tags[:j]))

    def instance(self, s: Term, j: int, w: Word, memo: dict) -> Word:
        def image(g: GenId) -> Word:
            key = (s, j, g)
            hit = memo.get(key)
            if hit is None:
                iota, d = _walk(s, g.tags)
                hit = gen_word(self.c, x_gen((iota,) + g.tags[d : d + j]))
                memo[key] = hit
            return hit

        return apply_hom(image, w)

    def tail_parts(self, w: Word) -> list[tuple[int, Word]] | None:
        """Pieces of the pseudo-co-op image, each a coprojection of a lower word.

        Returns ``None`` when the image is not generated by coprojection images
        (only possible for BI, where leaves under one node may mix copies).
        """
        if self.c is Catalog.SET:
            i, inner = w.payload.untagged()
            return [(i, Word(self.c, inner))]
        if self.c is Catalog.SE:
            parts: list[tuple[int, list[GenId]]] = []
            for g in w.payload:
                i, inner = g.untagged()
                if parts and parts[-1][0] == i:
                    parts[-1][1].append(inner)
                else:
                    parts.append((i, [inner]))
            return [(i, normal_form(self.c, gs)) for i, gs in parts]
        raise AssertionError("BI handled by _bi_subalg")


class _PathModel:
    def __init__(self, S: PseudoCoalgebra):
        self.S = S
        self.trans = {x: S.transitions(BETA, x) for x in S.base}

    def level0(self) -> list[Path]:
        return [Path((x,), ()) for x in self.S.base]

    def connect(self, w: Path, j: int) -> Path:
        return w.truncate(j)

    def instance(self, s: Term, j: int, w: Path, memo: dict) -> tuple[int, Path]:
        iota, d = _walk(s, w.bits)
        return (iota, w.drop(d).truncate(j))

    def tail_parts(self, w: Path) -> list[tuple[int, Path]]:
        return [(w.bits[0], w.drop(1))]

    def extend(self, p: Path) -> Iterator[Path]:
        for i, y in self.trans[p.states[-1]]:
            yield Path(p.states + (y,), p.bits + (i,))


# ----------------------------------------------------------------- cache


class TowerCache:
    """On-disk store for level carriers; publication is write-then-rename."""

    def __init__(self, directory: str | os.PathLike | None = None):
        if directory is None:
            directory = os.environ.get("COALG_CACHE", "cache")
        self.dir = FsPath(directory)

    def path(self, c: Catalog, key: str, k: int, L: int) -> FsPath:
        h = hashlib.sha256(key.encode()).hexdigest()[:16]
        return self.dir / f"{c.value}__{h}__k{k}__L{L}.words"

    def load(self, c: Catalog, key: str, k: int, L: int) -> list[str] | None:
        p = self.path(c, key, k, L)
        if not p.exists():
            return None
        meta_p = p.with_suffix(".meta")
        if meta_p.exists():
            meta = json.loads(meta_p.read_text())
            if meta.get("key") != key:
                return None
        return [line for line in p.read_text().splitlines() if line]

    def store(self, c: Catalog, key: str, k: int, L: int, lines: list[str]) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        p = self.path(c, key, k, L)
        meta = {"c": c.value, "key": key, "k": k, "L": L, "count": len(lines)}
        for target, text in ((p, "\n".join(lines) + "\n"), (p.with_suffix(".meta"), json.dumps(meta, indent=1))):
            fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-")
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, target)


# ----------------------------------------------------------------- tower


@dataclass
class TowerLevel:
    k: int
    L: int
    carrier: frozenset
    tower: "Tower" = field(repr=False)

    def sorted(self) -> list:
        return sorted(self.carrier, key=_elem_key)

    def __contains__(self, w: object) -> bool:
        return w in self.carrier

    def __len__(self) -> int:
        return len(self.carrier)

    def connecting(self, w, j: int | None = None):
        return self.tower.model.connect(w, self.k - 1 if j is None else j)

    def pseudo_coop(self, w):
        """Image in the 2-copower of level ``k-1``.

        For free algebras the copower of level ``k-1`` is presented on the
        tagged generators, which is literally the representation of ``w``.
        """
        if self.k == 0:
            raise ValueError("level 0 carries no pseudo-co-operation into a lower level")
        if isinstance(w, Path):
            return (w.bits[0], w.drop(1))
        return w


def _elem_key(w) -> tuple:
    if isinstance(w, Word):
        return (0,) + sort_key(w)
    return (1, str(w))


def identity_pairs(d: VarietyDescriptor) -> tuple[Identity, ...]:
    return d.all_identities


class Tower:
    """Universal D-precoalgebra over ``S`` in C, truncated to words of length at most L."""

    def __init__(
        self,
        c: Catalog | str,
        d: VarietyDescriptor,
        S: PseudoCoalgebra | None = None,
        L: int = 12,
        cache: TowerCache | None = None,
        max_words: int = 3_000_000,
        bi_strategy: str = "closure",
    ):
        self.c = Catalog(c)
        self.d = d
        self.S = S if S is not None else PseudoCoalgebra.trivial()
        self.L = L
        self.cache = cache
        self.max_words = max_words
        self.bi_strategy = bi_strategy
        if self.c not in SUPPORTED_C:
            raise CapabilityError(f"C = {self.c.value} is not supported by the tower (need set, bi or se)")
        if d.catalog not in (Catalog.BI, Catalog.SE) or tuple(d.sig.ops) != ((BETA, 2),):
            raise CapabilityError("D must be given by one binary operation 'beta' plus identities")
        if L < 1:
            raise ValueError("length bound must be positive")
        if self.S.is_trivial:
            self.model: Any = _FreeModel(self.c)
        elif self.c is Catalog.SET:
            self.model = _PathModel(self.S)
        else:
            raise CapabilityError("non-trivial pseudocoalgebras are only supported for C = set")
        self.identities = identity_pairs(d)
        self._levels: dict[int, TowerLevel] = {}
        self._memo: dict = {}

    # -- keys ---------------------------------------------------------

    def key(self) -> str:
        return json.dumps(
            {"d": [str(i) for i in self.identities], "s": self.S.key(), "c": self.c.value},
            sort_keys=True,
        )

    # -- instance maps ------------------------------------------------

    def instance(self, s: Term, j: int, k: int, w):
        if not instance_exists(s, j, k):
            raise ValueError(
                f"no ({j},{k})-instance: term has depth {term_depth(s)}, needs k >= {j + term_depth(s)}"
            )
        return self.model.instance(s, j, w, self._memo)

    def instance_recursive(self, s: Term, j: int, k: int, w, choose: Callable[[Term, int, int], int] | None = None):
        """Instance computed by the textbook recursion with a chosen intermediate level.

        ``choose(s, j, k)`` returns the level ``m`` with ``j + depth(s) - 1 <= m < k`` at which
        the pseudo-co-operation is applied; the default is ``k - 1``.
        """
        if not instance_exists(s, j, k):
            raise ValueError(f"no ({j},{k})-instance for depth {term_depth(s)}")
        model = self.model
        if isinstance(s, Proj):
            low = model.connect(w, j)
            if isinstance(low, Path):
                return (s.index, low)
            return map_generators(low, lambda g: g.tagged(s.index))
        m = k - 1 if choose is None else choose(s, j, k)
        if not (j + term_depth(s) - 1 <= m < k):
            raise ValueError(f"intermediate level {m} out of range")
        top = model.connect(w, m + 1)
        if isinstance(top, Path):
            i, rest = top.bits[0], top.drop(1)
            return self.instance_recursive(s.children[i], j, m, rest, choose)
        maps = [
            (lambda g, child=child: self.instance_recursive(child, j, m, gen_word(self.c, g), choose))
            for child in s.children
        ]
        return cotuple(maps, top)

    def cosatisfied_at(self, w, ident: Identity, k: int) -> bool:
        for j in range(k):
            if instance_exists(ident.lhs, j, k) and instance_exists(ident.rhs, j, k):
                if self.instance(ident.lhs, j, k, w) != self.instance(ident.rhs, j, k, w):
                    return False
        return True

    def failing_instance(self, w, k: int) -> tuple[Identity, int] | None:
        for ident in self.identities:
            for j in range(k):
                if instance_exists(ident.lhs, j, k) and instance_exists(ident.rhs, j, k):
                    if self.instance(ident.lhs, j, k, w) != self.instance(ident.rhs, j, k, w):
                        return ident, j
        return None

    def _active(self, k: int) -> list[tuple[Term, Term, int]]:
        """Identity pairs checked at level k, each at its largest j.

        Agreement at the largest j implies agreement at every smaller j, since
        the smaller instances factor through the copower of a connecting map.
        """
        out = []
        for ident in self.identities:
            j = k - ident.depth
            if j >= 0:
                out.append((ident.lhs, ident.rhs, j))
        return out

    # -- membership ---------------------------------------------------

    def level(self, k: int) -> TowerLevel:
        if k in self._levels:
            return self._levels[k]
        if k < 0:
            raise ValueError("levels are indexed by naturals")
        carrier = self._load(k)
        if carrier is None:
            carrier = frozenset(self._build(k))
            self._store(k, carrier)
        lvl = TowerLevel(k, self.L, carrier, self)
        self._levels[k] = lvl
        return lvl

    def _load(self, k: int):
        if self.cache is None:
            return None
        lines = self.cache.load(self.c, self.key(), k, self.L)
        if lines is None:
            return None
        return frozenset(self.parse_element(t) for t in lines)

    def _store(self, k: int, carrier: frozenset) -> None:
        if self.cache is None:
            return
        lines = [self.format_element(w) for w in sorted(carrier, key=_elem_key)]
        self.cache.store(self.c, self.key(), k, self.L, lines)

    def format_element(self, w) -> str:
        return format_word(w) if isinstance(w, Word) else str(w)

    def parse_element(self, text: str):
        if isinstance(self.model, _PathModel):
            states_txt, bits_txt = text.split("|")
            lookup = {str(s): s for s in self.S.base}
            states = tuple(lookup[s] for s in states_txt.split(","))
            return Path(states, tuple(int(b) for b in bits_txt))
        return parse_word(text, self.c, idempotent=True)

    def contains(self, w, k: int) -> bool:
        return not self.violations(w, k)

    def violations(self, w, k: int) -> list[str]:
        """Reasons why ``w`` fails membership at level ``k``; empty when it is a member."""
        if isinstance(w, Word) and len(w) > self.L:
            raise ValueError(f"word of length {len(w)} is outside the known region L={self.L}")
        if k == 0:
            return [] if w in set(self.model.level0()) else ["not an element of the base"]
        lower = self.level(k - 1).carrier
        out = []
        if self.model.connect(w, k - 1) not in lower:
            out.append("(a) connecting image not in level k-1")
        bad = self.failing_instance(w, k)
        if bad is not None:
            ident, j = bad
            out.append(f"(b) identity {ident.name or ident} not cosatisfied at ({j},{k})")
        if not self._cond_c(w, lower):
            out.append("(c) pseudo-co-operation image leaves the copower of level k-1")
        return out

    def _cond_c(self, w, lower) -> bool:
        if isinstance(w, Word) and w.variety is Catalog.BI:
            return self._bi_subalg(w.payload, lower)
        return all(part in lower for _, part in self.model.tail_parts(w))

    def _bi_subalg(self, t, lower) -> bool:
        tags = {g.tags[0] for g in _leaves(t)}
        if len(tags) == 1:
            stripped = normal_form(Catalog.BI, _strip(t))
            if stripped in lower:
                return True
        if isinstance(t, GenId):
            return False
        return self._bi_subalg(t[0], lower) and self._bi_subalg(t[1], lower)

    # -- enumeration --------------------------------------------------

    def _build(self, k: int) -> set:
        if k == 0:
            return set(self.model.level0())
        lower = self.level(k - 1).carrier
        if isinstance(self.model, _PathModel):
            return {p for q in lower for p in self.model.extend(q) if self.contains(p, k)}
        if self.c is Catalog.SET:
            return {
                Word(Catalog.SET, x_gen(w.payload.tags + (b,)))
                for w in lower
                for b in (0, 1)
                if self.contains(Word(Catalog.SET, x_gen(w.payload.tags + (b,))), k)
            }
        if self.c is Catalog.SE:
            return self._build_se(k, lower)
        return self._build_bi(k, lower)

    def _build_se(self, k: int, lower) -> set:
        gens = [x_gen(a) for a in itertools.product((0, 1), repeat=k)]
        active = self._active(k)

        def img(s: Term, j: int, g: GenId) -> tuple:
            return self.model.instance(s, j, Word(Catalog.SE, (g,)), self._memo).payload

        tables = [({g: img(l, j, g) for g in gens}, {g: img(r, j, g) for g in gens}) for l, r, j in active]
        out: set = set()
        visited = 0

        def extend(image: tuple, piece: tuple) -> tuple:
            if image and image[-1] == piece[0]:
                return image + piece[1:]
            return image + piece

        def compatible(a: tuple, b: tuple) -> bool:
            n = min(len(a), len(b))
            return a[:n] == b[:n]

        # DFS over prefixes; state carries the images under every active pair
        stack: list[tuple[tuple, list]] = [((g,), [(lt[g], rt[g]) for lt, rt in tables]) for g in reversed(gens)]
        while stack:
            prefix, images = stack.pop()
            visited += 1
            if visited > self.max_words:
                raise CapabilityError(f"more than {self.max_words} candidate words at level {k}; lower L")
            if any(not compatible(a, b) for a, b in images):
                continue
            if not self._runs_ok(prefix[:-1], prefix[-1], lower):
                continue
            if all(a == b for a, b in images):
                w = Word(Catalog.SE, prefix)
                if self.contains(w, k):
                    out.add(w)
            if len(prefix) < self.L:
                for g in reversed(gens):
                    if g != prefix[-1]:
                        nxt = [(extend(a, lt[g]), extend(b, rt[g])) for (a, b), (lt, rt) in zip(images, tables)]
                        stack.append((prefix + (g,), nxt))
        return out

    def _runs_ok(self, body: tuple, last: GenId, lower) -> bool:
        """Every completed first-bit run of the prefix strips to a lower-level word."""
        if not body or body[-1].tags[0] == last.tags[0]:
            return True
        i = body[-1].tags[0]
        start = len(body) - 1
        while start > 0 and body[start - 1].tags[0] == i:
            start -= 1
        run = normal_form(Catalog.SE, [replace(g, tags=g.tags[1:]) for g in body[start:]])
        return run in lower

    def _build_bi(self, k: int, lower) -> set:
        gens = [x_gen(a) for a in itertools.product((0, 1), repeat=k)]
        by_size: dict[int, list] = {1: [g for g in gens]}
        if self.bi_strategy == "closure":
            # members are closed under subtrees, so only combine members
            by_size[1] = [g for g in gens if self.contains(Word(Catalog.BI, g), k)]
        count = 0
        for n in range(2, self.L + 1):
            layer = []
            for n1 in range(1, n):
                for t1 in by_size[n1]:
                    for t2 in by_size[n - n1]:
                        if t1 == t2 and isinstance(t1, GenId):
                            continue
                        count += 1
                        if count > self.max_words:
                            raise CapabilityError(f"more than {self.max_words} trees at level {k}; lower L")
                        t = (t1, t2)
                        if self.bi_strategy == "closure":
                            if self.contains(Word(Catalog.BI, t), k):
                                layer.append(t)
                        else:
                            layer.append(t)
            by_size[n] = layer
        trees = [t for layer in by_size.values() for t in layer]
        if self.bi_strategy == "closure":
            return {Word(Catalog.BI, t) for t in trees}
        return {Word(Catalog.BI, t) for t in trees if self.contains(Word(Catalog.BI, t), k)}


def _leaves(t) -> Iterator[GenId]:
    if isinstance(t, GenId):
        yield t
    else:
        yield from _leaves(t[0])
        yield from _leaves(t[1])


def _strip(t):
    if isinstance(t, GenId):
        return replace(t, tags=t.tags[1:])
    return (_strip(t[0]), _strip(t[1]))


# -------------------------------------------------------- public helpers


def build_level(
    c: Catalog | str,
    d: VarietyDescriptor,
    S: PseudoCoalgebra | None,
    k: int,
    L: int = 12,
    cache: TowerCache | None = None,
) -> TowerLevel:
    return Tower(c, d, S, L=L, cache=cache).level(k)


def instance_eval(s: Term, j: int, k: int, w: Word) -> Word:
    """Instance map on a word of a free tower level (trivial pseudocoalgebra)."""
    if not instance_exists(s, j, k):
        raise ValueError(
            f"no ({j},{k})-instance: term has depth {term_depth(s)}, needs k >= {j + term_depth(s)}"
        )
    return _FreeModel(w.variety).instance(s, j, w, {})


def cosatisfied_at(w: Word, ident: Identity, k: int) -> bool:
    model = _FreeModel(w.variety)
    memo: dict = {}
    for j in range(k):
        if instance_exists(ident.lhs, j, k) and instance_exists(ident.rhs, j, k):
            if model.instance(ident.lhs, j, w, memo) != model.instance(ident.rhs, j, w, memo):
                return False
    return True


def connecting(w: Word, j: int) -> Word:
    return _FreeModel(w.variety).connect(w, j)


# ------------------------------------------------------- extraction


@dataclass
class FinalApprox:
    counts: list[int]
    bijective_from: int | None
    carrier: list
    coop: dict
    report: str
    coalgebra: Any = None


def extract_final(tower: Tower, bound: int) -> FinalApprox:
    """Inverse-limit truncation of the tower up to level ``bound``.

    Reports the least level from which every connecting map between known
    carriers is a bijection.  When that happens for C = SET the stable
    level is returned as a finite coalgebra.
    """
    from .oracle import FiniteCoalgebra

    levels = [tower.level(k) for k in range(bound + 1)]
    counts = [len(l) for l in levels]
    bij = [False] * bound
    for k in range(bound):
        upper, lower = levels[k + 1], levels[k]
        image = [upper.connecting(w) for w in upper.carrier]
        bij[k] = len(set(image)) == len(image) and set(image) == set(lower.carrier)
    start = None
    for k in range(bound - 1, -1, -1):
        if bij[k]:
            start = k
        else:
            break
    top = levels[-1]
    coop: dict = {}
    coalg = None
    if start is not None and tower.c is Catalog.SET:
        stable, above = levels[start], levels[start + 1]
        inverse = {above.connecting(w): w for w in above.carrier}
        for x in stable.carrier:
            i, tail = split_element(inverse[x])
            coop[x] = (i, tail)
        names = {x: tower.format_element(x) for x in stable.carrier}
        carrier = sorted(names.values())
        coalg = FiniteCoalgebra(
            carrier=tuple(carrier),
            coops={BETA: {names[x]: (i, names[t]) for x, (i, t) in coop.items()}},
            label=f"stable level {start}",
        )
        report = f"connecting maps bijective from level {start} to {bound}; carrier size {len(stable)}"
        elems = stable.sorted()
    else:
        for w in top.carrier:
            if top.k:
                coop[w] = top.pseudo_coop(w)
        report = "not stabilized within bound" if start is None else (
            f"connecting maps bijective on the known region from level {start}"
        )
        elems = top.sorted()
    return FinalApprox(counts, start, elems, coop, report, coalg)


def split_element(w):
    if isinstance(w, Path):
        return w.bits[0], w.drop(1)
    g = w.payload
    i, inner = g.untagged()
    return i, Word(Catalog.SET, inner)
