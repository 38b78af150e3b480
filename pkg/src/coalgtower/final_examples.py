"""Closed-form final coalgebras and the functors they represent.

Bit strings are Python strings over ``"01"``.  Infinite objects are kept at
an explicit finite resolution; each function says how resolution changes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

from .oracle import FiniteCoalgebra, algebra_satisfies, final_over_S, hom_algebra
from .sig_core import (
    BETA,
    NAMED_IDENTITIES,
    Catalog,
    Identity,
    Signature,
    VarietyDescriptor,
)
from .tower import Tower
from .words import GenId, Word, bi

# ------------------------------------------------------------------ Set / Bi


def cantor_coop(b: str) -> tuple[int, str]:
    if not b:
        raise ValueError("the empty string has no head")
    if set(b) - {"0", "1"}:
        raise ValueError(f"not a bit string: {b!r}")
    return int(b[0]), b[1:]


def unfold(R: FiniteCoalgebra, x: str, n: int) -> str:
    """First ``n`` copy indices visited from ``x`` under the binary co-operation."""
    out = []
    for _ in range(n):
        i, x = R.coops[BETA][x]
        out.append(str(i))
    return "".join(out)


def xy_coalgebra() -> FiniteCoalgebra:
    return FiniteCoalgebra(("x", "y"), {BETA: {"x": (1, "y"), "y": (1, "x")}}, label="x,y")


def bi_descriptor(*names: str) -> VarietyDescriptor:
    return VarietyDescriptor(Catalog.BI, tuple(NAMED_IDENTITIES[n] for n in names))


def subvariety_language(ids: Sequence[Identity], n: int) -> set[str]:
    """Level-``n`` carrier of the Set tower for the binar variety cut out by ``ids``."""
    t = Tower(Catalog.SET, VarietyDescriptor(Catalog.BI, tuple(ids)), L=max(n, 1))
    return {"".join(map(str, w.payload.tags)) for w in t.level(n).carrier}


def all_strings(n: int) -> Iterator[str]:
    return ("".join(p) for p in itertools.product("01", repeat=n))


RECOGNIZERS: dict[str, Callable[[str], bool]] = {
    "full": lambda s: True,
    "no11": lambda s: "11" not in s,
    "no10": lambda s: "10" not in s,
    "assoc": lambda s: len(set(s)) <= 1,
}


def fibonacci(k: int) -> int:
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


# ------------------------------------------------------ functor values on Set


def no10_model(m: int) -> FiniteCoalgebra:
    """The subcoalgebra ``{x_0, ..., x_m, x_w}`` of the final object for the no-10 identity.

    ``x_i`` is ``0^i`` followed by ones, ``x_w`` is all zeros.
    """
    names = tuple(f"x{i}" for i in range(m + 1)) + ("xw",)
    coop = {"x0": (1, "x0"), "xw": (0, "xw")}
    for i in range(1, m + 1):
        coop[f"x{i}"] = (0, f"x{i - 1}")
    return FiniteCoalgebra(names, {BETA: coop}, label=f"no10[{m}]")


def constants_model() -> FiniteCoalgebra:
    return FiniteCoalgebra(("x0", "x1"), {BETA: {"x0": (0, "x0"), "x1": (1, "x1")}}, label="constants")


@dataclass
class FiniteAlgebra:
    elements: list
    ops: dict

    def beta(self, u, v):
        return self.ops[BETA](u, v)

    def satisfies(self, ident: Identity) -> bool:
        return algebra_satisfies(self.elements, self.ops, ident)


def functor_value_set(kind: str, A_size: int, m: int = 3) -> FiniteAlgebra:
    """Value at an ``A_size``-element set of the functor represented by a Set model.

    ``kind`` is ``"assoc"`` (two constants), ``"no10"`` (exact model truncated at
    ``m``) or ``"xy"`` (the two-element coalgebra swapping x and y).
    """
    model = {"assoc": constants_model, "no10": lambda: no10_model(m), "xy": xy_coalgebra}[kind]()
    elements, ops = hom_algebra(model, A_size)
    return FiniteAlgebra(elements, ops)


def rectangular_band(A_size: int) -> FiniteAlgebra:
    els = list(itertools.product(range(A_size), repeat=2))
    return FiniteAlgebra(els, {BETA: lambda u, v: (u[0], v[1])})


def no10_formula(a: tuple, b: tuple) -> tuple:
    """``beta(a, b) = (b_0, a_0, ..., a_{m-1}, a_w)`` on tuples ``(a_0..a_m, a_w)``."""
    return (b[0],) + a[:-2] + (a[-1],)


def find_violation(alg: FiniteAlgebra, ident: Identity) -> tuple | None:
    from .oracle import evaluate

    for env in itertools.product(alg.elements, repeat=ident.arity):
        if evaluate(ident.lhs, alg.ops, env) != evaluate(ident.rhs, alg.ops, env):
            return env
    return None


# -------------------------------------------------------------- Bi / Bi


@dataclass(frozen=True)
class ResFunction:
    """Map from ``n``-bit inputs to ``m``-bit outputs; ``table[k]`` is the output at input ``k``.

    Inputs are read most significant bit first, so the first input bit
    selects the half.
    """

    n: int
    m: int
    table: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.table) != 2 ** self.n:
            raise ValueError("table size must be 2**n")
        if any(len(o) != self.m or set(o) - {"0", "1"} for o in self.table):
            raise ValueError(f"outputs must be {self.m}-bit strings")

    def __call__(self, a: str) -> str:
        return self.table[int(a, 2)] if a else self.table[0]

    @classmethod
    def constant(cls, out: str, n: int = 0) -> "ResFunction":
        return cls(n, len(out), (out,) * 2 ** n)

    def refine(self, n: int) -> "ResFunction":
        if n < self.n:
            raise ValueError("cannot lower resolution by refining")
        shift = n - self.n
        return ResFunction(n, self.m, tuple(self.table[k >> shift] for k in range(2 ** n)))

    def canonical(self) -> "ResFunction":
        """Coarsest resolution representing the same function."""
        f = self
        while f.n > 0 and all(f.table[2 * k] == f.table[2 * k + 1] for k in range(2 ** (f.n - 1))):
            f = ResFunction(f.n - 1, f.m, f.table[::2])
        return f

    def halves(self) -> tuple["ResFunction", "ResFunction"]:
        if self.n == 0:
            return self, self
        h = 2 ** (self.n - 1)
        return ResFunction(self.n - 1, self.m, self.table[:h]), ResFunction(self.n - 1, self.m, self.table[h:])

    def drop_last_output(self) -> "ResFunction":
        return ResFunction(self.n, self.m - 1, tuple(o[:-1] for o in self.table))

    def is_constant(self) -> bool:
        return len(set(self.table)) == 1

    def to_json(self) -> dict:
        fmt = lambda k: format(k, f"0{self.n}b") if self.n else ""
        return {"n": self.n, "m": self.m, "table": {fmt(k): o for k, o in enumerate(self.table)}}

    @classmethod
    def from_json(cls, doc: dict) -> "ResFunction":
        n, m = int(doc["n"]), int(doc["m"])
        tab = doc["table"]
        return cls(n, m, tuple(tab[format(k, f"0{n}b") if n else ""] for k in range(2 ** n)))


def same_function(f: ResFunction, g: ResFunction) -> bool:
    n = max(f.n, g.n)
    return f.m == g.m and f.refine(n) == g.refine(n)


def all_resfunctions(n: int, m: int) -> Iterator[ResFunction]:
    outs = ["".join(p) for p in itertools.product("01", repeat=m)]
    for table in itertools.product(outs, repeat=2 ** n):
        yield ResFunction(n, m, table)


def bibi_beta(f: ResFunction, g: ResFunction) -> ResFunction:
    """Left half from ``f``, right half from ``g``; resolution ``(n, m) -> (n + 1, m)``."""
    if f.m != g.m:
        raise ValueError("output resolutions differ")
    n = max(f.n, g.n)
    return ResFunction(n + 1, f.m, f.refine(n).table + g.refine(n).table)


def bibi_unbeta(h: ResFunction) -> tuple[ResFunction, ResFunction]:
    if h.n == 0:
        raise ValueError("a resolution-0 table has no halves")
    return h.halves()


def bibi_encode(w: Word, n: int | None = None) -> ResFunction:
    """Function of a level-k binar word; output bits are the generator subscripts."""
    if w.variety is not Catalog.BI:
        raise ValueError("expects a binar word")

    def enc(t) -> ResFunction:
        if isinstance(t, GenId):
            return ResFunction.constant("".join(map(str, t.tags)))
        return bibi_beta(enc(t[0]), enc(t[1]))

    f = enc(w.payload)
    return f if n is None else f.refine(n)


def bibi_decode(f: ResFunction) -> Word:
    def dec(g: ResFunction):
        if g.is_constant():
            return GenId("x", tuple(int(c) for c in g.table[0]), idempotent=True)
        a, b = g.halves()
        return (dec(a), dec(b))

    return bi(dec(f))


@dataclass(frozen=True)
class CoopLeaf:
    copy: int
    tail: ResFunction


def bibi_coop(f: ResFunction):
    """Split by the first output bit into maximal cylinders.

    Returns a nested pair tree whose leaves are ``CoopLeaf(i, g)``: on that
    cylinder the first output bit is ``i`` and ``g`` gives the remaining bits.
    """
    if f.m == 0:
        raise ValueError("no output bit to split on")
    firsts = {o[0] for o in f.table}
    if len(firsts) == 1:
        return CoopLeaf(int(firsts.pop()), ResFunction(f.n, f.m - 1, tuple(o[1:] for o in f.table)).canonical())
    a, b = f.halves()
    return (bibi_coop(a), bibi_coop(b))


def eval_coop(t) -> ResFunction:
    """Rebuild a function from a co-operation tree by prefixing each leaf's copy bit."""
    if isinstance(t, CoopLeaf):
        g = t.tail
        return ResFunction(g.n, g.m + 1, tuple(str(t.copy) + o for o in g.table))
    return bibi_beta(eval_coop(t[0]), eval_coop(t[1]))


def normal_trees(gens: Sequence[GenId], height: int) -> list:
    """All normal binar trees over idempotent ``gens`` of height at most ``height``."""
    if height == 0:
        return list(gens)
    lower = normal_trees(gens, height - 1)
    out = list(gens)
    for a in lower:
        for b in lower:
            if a == b and isinstance(a, GenId):
                continue
            out.append((a, b))
    return out


# ------------------------------------------------------------- Bi / Se


@dataclass
class BiSeFinal:
    generators: tuple[GenId, GenId]
    coop: dict

    def functor_value(self, table: Sequence[Sequence[int]]) -> tuple[list[tuple[int, int]], Callable]:
        """Value at a finite binar: idempotent pairs with ``(a, b)(c, d) = (a, d)``."""
        n = len(table)
        idem = [a for a in range(n) if table[a][a] == a]
        return [(a, b) for a in idem for b in idem], lambda u, v: (u[0], v[1])

    def functor_value_via_homs(self, table: Sequence[Sequence[int]]) -> tuple[list[tuple[int, int]], Callable]:
        """Homs from the binar freely generated by two idempotents, with the
        product read off the co-operation: each generator goes to its copy."""
        n = len(table)
        homs = [(a, b) for a in range(n) for b in range(n) if table[a][a] == a and table[b][b] == b]
        g0, g1 = self.generators

        def prod(h, k):
            vals = []
            for g in (g0, g1):
                copy, inner = self.coop[g]
                vals.append((h, k)[copy][(g0, g1).index(inner)])
            return tuple(vals)

        return homs, prod


def bise_final() -> BiSeFinal:
    g0 = GenId("x", (0,), idempotent=True)  # stands for x_{0^infinity}
    g1 = GenId("x", (1,), idempotent=True)
    return BiSeFinal((g0, g1), {g0: (0, g0), g1: (1, g1)})


def bise_level_closure(k: int, L: int) -> set[Word]:
    """Words of the binar generated by ``x_{0^k}`` and ``x_{1^k}`` with at most ``L`` leaves."""
    gens = [GenId("x", (0,) * k, idempotent=True), GenId("x", (1,) * k, idempotent=True)]
    by = {1: list(gens)}
    for n in range(2, L + 1):
        by[n] = [(a, b) for n1 in range(1, n) for a in by[n1] for b in by[n - n1] if not (a == b and isinstance(a, GenId))]
    return {bi(t) for layer in by.values() for t in layer}


def bise_product_images(levels: int) -> list[Word]:
    """Level-k images of ``beta(x_{0^inf}, x_{1^inf})``: the word ``(x_{0^k} . x_{1^k})``.

    Level 0 collapses to ``x`` because the single generator is idempotent.
    """
    out = []
    for k in range(levels + 1):
        g0 = GenId("x", (0,) * k, idempotent=True)
        g1 = GenId("x", (1,) * k, idempotent=True)
        out.append(bi((g0, g1)))
    return out


# ------------------------------------------------------- zeroary + unary


ALPHA0, ALPHA1 = "a0", "a1"
ZU_SIG = Signature(((ALPHA0, 0), (ALPHA1, 1)))


@dataclass
class UnaryFinal:
    """Truncation at ``m`` of ``I^omega`` with projection and left shift.

    ``base`` lists the elements of the initial C-algebra that are used
    (a depth-bounded piece when it is infinite).
    """

    c: str
    m: int
    base: tuple
    carrier: list[tuple] = field(default_factory=list)

    def alpha0(self, r: tuple):
        return r[0]

    def alpha1(self, r: tuple) -> tuple:
        return r[1:]


def unary_final(c: str, m: int, depth: int = 3) -> UnaryFinal:
    """``c`` is ``"set"`` (no constants), ``"pointed_endo"`` or ``"fgab_point"``."""
    if c == "set":
        base: tuple = ()
    elif c == "pointed_endo":
        base = tuple(range(depth))  # alpha1^i(alpha0) for i < depth
    elif c == "fgab_point":
        base = tuple(range(-depth, depth + 1))  # multiples of the point
    else:
        raise ValueError(f"unknown C {c!r}")
    carrier = [tuple(t) for t in itertools.product(base, repeat=m)]
    return UnaryFinal(c, m, base, carrier)


def truncate(r: tuple, m: int) -> tuple:
    return r[:m]


@dataclass
class PointedZValue:
    """Pointed-group homs from truncated ``Z^m`` (point all ones) to ``(Z, n)``."""

    m: int
    n: int
    coefficients: list[tuple[int, ...]]

    def point(self) -> tuple[int, ...]:
        return (self.n,) + (0,) * (self.m - 1)

    def endo(self, c: tuple[int, ...]) -> tuple[int, ...]:
        return (0,) + c[:-1]


def unary_functor_value_fgab(m: int, n: int, bound: int) -> PointedZValue:
    """Integer row vectors ``c`` with ``|c_i| <= bound`` whose map sends the point to ``n``."""
    ones = (1,) * m
    coeffs = [c for c in itertools.product(range(-bound, bound + 1), repeat=m) if dot(c, ones) == n]
    return PointedZValue(m, n, coeffs)


def unary_functor_value(uf: UnaryFinal, n: int, bound: int = 2) -> PointedZValue:
    """Functor value at the pointed group ``(Z, n)``; only the pointed abelian group case is finite-describable here."""
    if uf.c != "fgab_point":
        raise NotImplementedError("functor values are computed for the pointed abelian group case only")
    return unary_functor_value_fgab(uf.m, n, bound)


def dot(c: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(c, v))


def induced_point(m: int, n: int) -> tuple[int, ...]:
    """Coefficients of ``h o alpha0`` where ``h: Z -> Z`` sends 1 to n."""
    return tuple(n * e for e in basis(m, 0))


def induced_endo(c: Sequence[int], m: int) -> tuple[int, ...]:
    """Coefficients of ``h o shift`` evaluated on basis vectors."""
    out = []
    for k in range(m):
        v = basis(m, k)
        shifted = v[1:] + (0,)
        out.append(dot(c, shifted))
    return tuple(out)


def basis(m: int, k: int) -> tuple[int, ...]:
    return tuple(1 if i == k else 0 for i in range(m))


def polyunary_functor_value(elements: Sequence, ops: Mapping[str, Callable], arities: Mapping[str, int]) -> list:
    """Elements ``x`` with ``{x}`` a subalgebra: every operation fixes ``(x, ..., x)``."""
    return [x for x in elements if all(ops[o](*([x] * arities[o])) == x for o in ops)]


def polyunary_final(n_ops: int, max_size: int = 3) -> FiniteCoalgebra | None:
    """Final coalgebra over Set for ``n_ops`` unary co-operations, found by oracle search."""
    sig = Signature(tuple((f"u{i}", 1) for i in range(n_ops)))
    d = VarietyDescriptor(Catalog.ZEROARY_UNARY, (), sig)
    return final_over_S(d, max_size).coalgebra
