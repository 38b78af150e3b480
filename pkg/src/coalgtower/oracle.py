"""Brute-force ground truth for small Set-based coalgebras.

Carriers are tuples of names.  A co-operation for an operation of arity
``n`` sends every element to a pair ``(copy, element)`` with ``copy < n``.
Everything here is exhaustive and only meant for carriers of size at most 4.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Hashable, Iterator, Mapping, Sequence

import numpy as np

from .sig_core import (
    BETA,
    App,
    CATALOG_SIGNATURES,
    Catalog,
    Identity,
    ParseError,
    Proj,
    Signature,
    Term,
    VarietyDescriptor,
)

MAX_SIZE = 4

BI_SIG = CATALOG_SIGNATURES[Catalog.BI]


@dataclass(frozen=True, eq=False)
class FiniteCoalgebra:
    carrier: tuple[str, ...]
    coops: Mapping[str, Mapping[str, tuple[int, str]]]
    sig: Signature = BI_SIG
    anchor: Mapping[str, Hashable] | None = None
    over: object = None  # PseudoCoalgebra the anchor points into
    label: str = ""

    def __post_init__(self) -> None:
        elems = set(self.carrier)
        if len(elems) != len(self.carrier):
            raise ValueError("duplicate carrier names")
        for alpha, ar in self.sig.ops:
            m = self.coops.get(alpha, {})
            if set(m) != elems:
                raise ValueError(f"co-operation {alpha} is not total")
            for x, (i, y) in m.items():
                if not 0 <= i < ar or y not in elems:
                    raise ValueError(f"co-operation {alpha} sends {x} outside the {ar}-fold copower")
        if self.anchor is not None and self.over is not None:
            S = self.over
            for alpha, _ in self.sig.ops:
                for x, (i, y) in self.coops[alpha].items():
                    if S.coprojections[alpha][i][self.anchor[y]] != S.coops[alpha][self.anchor[x]]:
                        raise ValueError(f"anchor does not commute at {x} for {alpha}")

    def __len__(self) -> int:
        return len(self.carrier)

    def step(self, alpha: str, x: str) -> tuple[int, str]:
        return self.coops[alpha][x]

    def encoding(self) -> tuple:
        return tuple(
            tuple(self.coops[a][x] for x in self.carrier) for a, _ in self.sig.ops
        ) + ((tuple(self.anchor[x] for x in self.carrier),) if self.anchor is not None else ())

    def to_json(self) -> dict:
        doc: dict = {
            "carrier": list(self.carrier),
            "coops": {a: [list(self.coops[a][x]) for x in self.carrier] for a, _ in self.sig.ops},
        }
        doc.update(self.sig.to_json())
        if self.anchor is not None:
            doc["anchor"] = [str(self.anchor[x]) for x in self.carrier]
        return doc

    @classmethod
    def from_json(cls, doc: dict | str) -> "FiniteCoalgebra":
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            carrier = tuple(str(x) for x in doc["carrier"])
            sig = Signature.from_json(doc) if "ops" in doc else BI_SIG
            coops = {
                a: {x: (int(c), str(y)) for x, (c, y) in zip(carrier, doc["coops"][a])}
                for a, _ in sig.ops
            }
            anchor = dict(zip(carrier, doc["anchor"])) if "anchor" in doc else None
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad coalgebra document: {exc}") from exc
        return cls(carrier, coops, sig, anchor)


# --------------------------------------------------------- derived co-ops


def derived_coop(R: FiniteCoalgebra, t: Term) -> dict[str, tuple[int, str]]:
    """Composite co-operation of a term: carrier into the ``arity``-fold copower."""

    def run(s: Term, x: str) -> tuple[int, str]:
        while isinstance(s, App):
            i, x = R.coops[s.symbol][x]
            s = s.children[i]
        return s.index, x

    return {x: run(t, x) for x in R.carrier}


def cosatisfies(R: FiniteCoalgebra, ident: Identity) -> bool:
    return derived_coop(R, ident.lhs) == derived_coop(R, ident.rhs)


def cosatisfies_all(R: FiniteCoalgebra, idents: Sequence[Identity]) -> bool:
    return all(cosatisfies(R, i) for i in idents)


# ------------------------------------------------------------ enumeration


def _names(m: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(m))


def _canonical(R: FiniteCoalgebra) -> tuple:
    best = None
    idx = {x: n for n, x in enumerate(R.carrier)}
    for perm in itertools.permutations(range(len(R))):
        # perm[n] is the new position of element n
        enc = []
        inv = sorted(range(len(R)), key=lambda n: perm[n])
        for alpha, _ in R.sig.ops:
            enc.append(tuple((R.coops[alpha][R.carrier[n]][0], perm[idx[R.coops[alpha][R.carrier[n]][1]]]) for n in inv))
        if R.anchor is not None:
            enc.append(tuple(repr(R.anchor[R.carrier[n]]) for n in inv))
        enc = tuple(enc)
        if best is None or enc < best:
            best = enc
    return best if best is not None else ()


def enumerate_coalgebras(d: VarietyDescriptor, m: int, S=None) -> list[FiniteCoalgebra]:
    """All D-coalgebras on ``m`` points (over ``S`` when given), up to isomorphism."""
    if m > MAX_SIZE:
        raise ValueError(f"size {m} exceeds the oracle cap {MAX_SIZE}")
    carrier = _names(m)
    ops = d.sig.ops
    idents = d.all_identities
    per_op = [list(itertools.product([(i, y) for i in range(ar) for y in carrier], repeat=m)) for _, ar in ops]
    anchors: list = [None]
    if S is not None:
        anchors = [dict(zip(carrier, a)) for a in itertools.product(S.base, repeat=m)]
    seen: set = set()
    out = []
    for choice in itertools.product(*per_op):
        coops = {alpha: dict(zip(carrier, c)) for (alpha, _), c in zip(ops, choice)}
        for anchor in anchors:
            if anchor is not None and not _anchor_ok(coops, anchor, S, ops):
                continue
            R = FiniteCoalgebra(carrier, coops, d.sig, anchor, S)
            if not cosatisfies_all(R, idents):
                continue
            key = _canonical(R)
            if key in seen:
                continue
            seen.add(key)
            out.append(R)
    return out


def _anchor_ok(coops, anchor, S, ops) -> bool:
    for alpha, _ in ops:
        for x, (i, y) in coops[alpha].items():
            if S.coprojections[alpha][i][anchor[y]] != S.coops[alpha][anchor[x]]:
                return False
    return True


# -------------------------------------------------------------- morphisms


def morphisms(R1: FiniteCoalgebra, R2: FiniteCoalgebra) -> list[dict[str, str]]:
    out = []
    for image in itertools.product(R2.carrier, repeat=len(R1)):
        f = dict(zip(R1.carrier, image))
        if _is_morphism(f, R1, R2):
            out.append(f)
    return out


def _is_morphism(f: Mapping[str, str], R1: FiniteCoalgebra, R2: FiniteCoalgebra) -> bool:
    for alpha, _ in R1.sig.ops:
        for x, (i, y) in R1.coops[alpha].items():
            if R2.coops[alpha][f[x]] != (i, f[y]):
                return False
    if R1.anchor is not None and R2.anchor is not None:
        if any(R2.anchor[f[x]] != R1.anchor[x] for x in R1.carrier):
            return False
    return True


def morphisms_into_level(R: FiniteCoalgebra, tower, n: int) -> list[dict]:
    """Maps from a Set-based coalgebra into level ``n`` of a Set tower that commute
    with splitting: ``f(x)`` splits as ``(i, f(y))`` truncated, whenever ``x -> (i, y)``.

    At level 0 the only requirement is the anchor.
    """
    from .tower import Path, split_element

    level = tower.level(n)
    cands = level.sorted()
    order = list(R.carrier)
    out: list[dict] = []

    def anchored(x: str, w) -> bool:
        if R.anchor is None or not isinstance(w, Path):
            return True
        return w.states[0] == R.anchor[x]

    def consistent(f: dict) -> bool:
        if n == 0:
            return True
        for x, (i, y) in R.coops[BETA].items():
            if x in f and y in f:
                j, tail = split_element(f[x])
                if j != i or tail != level.connecting(f[y]):
                    return False
        return True

    def go(pos: int, f: dict) -> None:
        if pos == len(order):
            out.append(dict(f))
            return
        x = order[pos]
        for w in cands:
            if not anchored(x, w):
                continue
            f[x] = w
            if consistent(f):
                go(pos + 1, f)
            del f[x]

    go(0, {})
    return out


# ---------------------------------------------------------- standard images


def _partitions(items: Sequence[str]) -> Iterator[list[list[str]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1 :]
        yield [[first]] + part


Partition = frozenset  # of frozensets


def induces_image(R: FiniteCoalgebra, part: Partition) -> bool:
    """Whether the quotient by ``part`` carries a coalgebra structure over the same S."""
    block = {x: b for b in part for x in b}
    for b in part:
        xs = sorted(b)
        for alpha, _ in R.sig.ops:
            imgs = {(R.coops[alpha][x][0], block[R.coops[alpha][x][1]]) for x in xs}
            if len(imgs) > 1:
                return False
        if R.anchor is not None and len({R.anchor[x] for x in xs}) > 1:
            return False
    return True


def quotient(R: FiniteCoalgebra, part: Partition) -> FiniteCoalgebra:
    if not induces_image(R, part):
        raise ValueError("partition does not induce a coalgebra image")
    blocks = sorted(part, key=lambda b: sorted(b))
    name = {x: "+".join(sorted(b)) for b in blocks for x in b}
    carrier = tuple(name[min(b)] for b in blocks)
    coops = {
        alpha: {name[min(b)]: (R.coops[alpha][min(b)][0], name[R.coops[alpha][min(b)][1]]) for b in blocks}
        for alpha, _ in R.sig.ops
    }
    anchor = {name[min(b)]: R.anchor[min(b)] for b in blocks} if R.anchor is not None else None
    return FiniteCoalgebra(carrier, coops, R.sig, anchor, R.over, label=f"{R.label}/~")


def join(p: Partition, q: Partition) -> Partition:
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    for part in (p, q):
        for b in part:
            xs = sorted(b)
            for x in xs[1:]:
                parent[find(x)] = find(xs[0])
    groups: dict[str, set] = {}
    for b in p:
        for x in b:
            groups.setdefault(find(x), set()).add(x)
    return frozenset(frozenset(g) for g in groups.values())


def refines(p: Partition, q: Partition) -> bool:
    return all(any(b <= c for c in q) for b in p)


@dataclass
class ImageLattice:
    partitions: list[Partition]
    join_closed: bool

    @property
    def discrete_only(self) -> bool:
        return len(self.partitions) == 1 and all(len(b) == 1 for b in self.partitions[0])


def standard_images(R: FiniteCoalgebra) -> ImageLattice:
    parts = [
        frozenset(frozenset(b) for b in p)
        for p in _partitions(list(R.carrier))
        if induces_image(R, frozenset(frozenset(b) for b in p))
    ]
    if not R.carrier:
        parts = [frozenset()]
    pset = set(parts)
    closed = all(join(a, b) in pset for a in parts for b in parts)
    return ImageLattice(parts, closed)


def strongly_quasifinal(R: FiniteCoalgebra) -> bool:
    return all(all(len(b) == 1 for b in p) for p in standard_images(R).partitions)


@dataclass
class FinalCertificate:
    coalgebra: FiniteCoalgebra | None
    checked: int
    note: str = ""


def final_over_S(d: VarietyDescriptor, m: int, S=None) -> FinalCertificate:
    """Search the enumerated coalgebras of size at most ``m`` for a final one among them."""
    pool = [R for size in range(m + 1) for R in enumerate_coalgebras(d, size, S)]
    for F in pool:
        if all(len(morphisms(R, F)) == 1 for R in pool):
            return FinalCertificate(F, len(pool), f"unique morphism from each of {len(pool)} coalgebras")
    return FinalCertificate(None, len(pool), f"none of size <= {m}")


# ---------------------------------------------------- largest subcoalgebra


@dataclass
class DescentTrace:
    steps: list[frozenset] = field(default_factory=list)

    @property
    def fixed_point(self) -> frozenset:
        return self.steps[-1]


def largest_subcoalgebra(R: FiniteCoalgebra, idents: Sequence[Identity]) -> tuple[FiniteCoalgebra, DescentTrace]:
    """Largest subcoalgebra cosatisfying ``idents``, by descending iteration.

    Start from the points where every identity holds and repeatedly discard
    points whose co-operation images leave the current set.
    """
    good = {x for x in R.carrier if all(derived_coop(R, i.lhs)[x] == derived_coop(R, i.rhs)[x] for i in idents)}
    trace = DescentTrace([frozenset(good)])
    while True:
        nxt = {x for x in good if all(R.coops[a][x][1] in good for a, _ in R.sig.ops)}
        if nxt == good:
            break
        good = nxt
        trace.steps.append(frozenset(good))
    carrier = tuple(x for x in R.carrier if x in good)
    coops = {a: {x: R.coops[a][x] for x in carrier} for a, _ in R.sig.ops}
    anchor = {x: R.anchor[x] for x in carrier} if R.anchor is not None else None
    return FiniteCoalgebra(carrier, coops, R.sig, anchor, R.over, label=f"sub({R.label})"), trace


def hom_algebra(R: FiniteCoalgebra, A_size: int) -> tuple[list[tuple[int, ...]], dict]:
    """Functions |R| -> A with the operations induced by the co-operations.

    ``alpha(f_0, ..., f_{n-1})(x) = f_i(y)`` where ``alpha^R(x) = (i, y)``.
    """
    funcs = list(itertools.product(range(A_size), repeat=len(R)))
    pos = {x: n for n, x in enumerate(R.carrier)}

    def make(alpha: str):
        route = [(R.coops[alpha][x][0], pos[R.coops[alpha][x][1]]) for x in R.carrier]
        return lambda *fs: tuple(fs[i][n] for i, n in route)

    return funcs, {alpha: make(alpha) for alpha, _ in R.sig.ops}


def evaluate(t: Term, ops: Mapping, env: Sequence):
    if isinstance(t, Proj):
        return env[t.index]
    return ops[t.symbol](*(evaluate(c, ops, env) for c in t.children))


def algebra_satisfies(elements: Sequence, ops: Mapping, ident: Identity) -> bool:
    for env in itertools.product(elements, repeat=ident.arity):
        if evaluate(ident.lhs, ops, env) != evaluate(ident.rhs, ops, env):
            return False
    return True


def hom_algebra_satisfies(R: FiniteCoalgebra, A_size: int, ident: Identity) -> bool:
    """Exhaustive check of ``ident`` on ``hom_algebra(R, A_size)``, vectorised.

    Each induced operation only routes coordinates, so a term evaluates to
    an array gather.  The first variable is looped over to bound memory.
    """
    funcs = np.array(list(itertools.product(range(A_size), repeat=len(R))), dtype=np.int8).reshape(-1, len(R))
    K, r = len(funcs), ident.arity
    pos = {x: n for n, x in enumerate(R.carrier)}
    routes = {alpha: [(R.coops[alpha][x][0], pos[R.coops[alpha][x][1]]) for x in R.carrier] for alpha, _ in R.sig.ops}

    def ev(t: Term, env: list) -> np.ndarray:
        if isinstance(t, Proj):
            return env[t.index]
        kids = np.broadcast_arrays(*(ev(c, env) for c in t.children))
        return np.stack([kids[i][..., y] for i, y in routes[t.symbol]], axis=-1)

    rest = [funcs.reshape((1,) * k + (K,) + (1,) * (r - 2 - k) + (len(R),)) for k in range(r - 1)]
    for v0 in range(K):
        env = [funcs[v0].reshape((1,) * (r - 1) + (len(R),))] + rest
        lhs, rhs = np.broadcast_arrays(ev(ident.lhs, env), ev(ident.rhs, env))
        if not np.array_equal(lhs, rhs):
            return False
    return True
