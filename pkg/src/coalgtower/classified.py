"""Cogroups in groups, three comonoids in monoids, and a tensor-product witness.

Group and monoid words reuse :mod:`coalgtower.words`; the ``i``-th copy of a
generator in a copower is the generator tagged with ``i``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Mapping, Sequence

import sympy
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.polys.domains import ZZ

from .sig_core import Catalog
from .words import GenId, Word, apply_hom, cotuple, gen_word, grp, mon, multiply, normal_form

E_GROUP = Word(Catalog.GROUP, ())
E_MONOID = Word(Catalog.MONOID, ())

# ------------------------------------------------------------ pointed sets


@dataclass(frozen=True)
class PointedSet:
    elements: tuple
    basepoint: Hashable = "e"

    def __post_init__(self) -> None:
        if self.basepoint not in self.elements:
            raise ValueError("basepoint must be an element")

    @classmethod
    def of_size(cls, n: int, stem: str = "p") -> "PointedSet":
        return cls(("e",) + tuple(f"{stem}{i}" for i in range(1, n)), "e")

    @property
    def others(self) -> tuple:
        return tuple(x for x in self.elements if x != self.basepoint)

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "basepoint": self.basepoint}

    @classmethod
    def from_json(cls, doc: dict) -> "PointedSet":
        return cls(tuple(doc["elements"]), doc["basepoint"])


def pointed_maps(X: PointedSet, Y: PointedSet) -> Iterator[dict]:
    for image in itertools.product(Y.elements, repeat=len(X.others)):
        f = dict(zip(X.others, image))
        f[X.basepoint] = Y.basepoint
        yield f


def pointed_product(X: PointedSet, Y: PointedSet) -> PointedSet:
    return PointedSet(tuple(itertools.product(X.elements, Y.elements)), (X.basepoint, Y.basepoint))


# ---------------------------------------------------------------- cogroups


def _gen_name(label) -> str:
    if isinstance(label, tuple):
        return "g_" + "_".join(_gen_name(p) if isinstance(p, tuple) else str(p) for p in label)
    return f"g_{label}"


@dataclass
class Cogroup:
    """Cogroup on the free group over ``points.others``, each generator group-like."""

    points: PointedSet
    gens: dict = field(init=False)

    def __post_init__(self) -> None:
        self.gens = {x: GenId(_gen_name(x)) for x in self.points.others}

    @property
    def rank(self) -> int:
        return len(self.gens)

    def word(self, x) -> Word:
        """Generator for a non-base point; the identity for the basepoint."""
        if x == self.points.basepoint:
            return E_GROUP
        return gen_word(Catalog.GROUP, self.gens[x])

    def comult(self, w: Word) -> Word:
        return apply_hom(lambda g: grp(g.tagged(0), g.tagged(1)), w)

    def counit(self, w: Word) -> Word:
        return apply_hom(lambda g: E_GROUP, w)

    def coinverse(self, w: Word) -> Word:
        return apply_hom(lambda g: grp((g, -1)), w)

    def is_grouplike(self, w: Word) -> bool:
        return self.comult(w) == multiply(_tag(w, 0), _tag(w, 1))


def _tag(w: Word, i: int) -> Word:
    return apply_hom(lambda g: gen_word(w.variety, g.tagged(i)), w)


def coassociative(C: Cogroup) -> bool:
    """``(beta + id) beta = (id + beta) beta`` on each generator, in the 3-fold copower."""
    for g in C.gens.values():
        w = gen_word(Catalog.GROUP, g)
        b = C.comult(w)
        into3 = lambda shift: (lambda h: gen_word(Catalog.GROUP, h.tagged(shift)))
        left = cotuple([lambda h: _retag(C.comult(gen_word(Catalog.GROUP, h)), {0: 0, 1: 1}), into3(2)], b)
        right = cotuple([into3(0), lambda h: _retag(C.comult(gen_word(Catalog.GROUP, h)), {0: 1, 1: 2})], b)
        if left != right:
            return False
    return True


def counital(C: Cogroup) -> bool:
    for g in C.gens.values():
        w = gen_word(Catalog.GROUP, g)
        b = C.comult(w)
        ident = lambda h: gen_word(Catalog.GROUP, h)
        if cotuple([lambda h: E_GROUP, ident], b) != w or cotuple([ident, lambda h: E_GROUP], b) != w:
            return False
    return True


def coinverse_ok(C: Cogroup) -> bool:
    """Folding ``beta`` with the co-inverse on one side gives the identity element."""
    for g in C.gens.values():
        b = C.comult(gen_word(Catalog.GROUP, g))
        ident = lambda h: gen_word(Catalog.GROUP, h)
        inv = lambda h: C.coinverse(gen_word(Catalog.GROUP, h))
        if cotuple([inv, ident], b) != E_GROUP or cotuple([ident, inv], b) != E_GROUP:
            return False
    return True


def _retag(w: Word, table: Mapping[int, int]) -> Word:
    def f(g: GenId) -> Word:
        i, inner = g.untagged()
        return gen_word(w.variety, inner.tagged(table[i]))

    return apply_hom(f, w)


@dataclass
class CogroupMorphism:
    source: Cogroup
    target: Cogroup
    images: dict  # source generator -> target word

    def __call__(self, w: Word) -> Word:
        return apply_hom(self.images, w)

    def is_morphism(self) -> bool:
        T = self.target
        for g, im in self.images.items():
            lhs = T.comult(im)
            rhs = cotuple([lambda h: _tag(self(gen_word(Catalog.GROUP, h)), 0), lambda h: _tag(self(gen_word(Catalog.GROUP, h)), 1)], self.source.comult(gen_word(Catalog.GROUP, g)))
            if lhs != rhs:
                return False
        return True


def from_pointed_map(R: Cogroup, S: Cogroup, f: Mapping) -> CogroupMorphism:
    return CogroupMorphism(R, S, {R.gens[x]: S.word(f[x]) for x in R.points.others})


def reduced_words(C: Cogroup, max_len: int) -> list[Word]:
    letters = [(g, s) for g in C.gens.values() for s in (1, -1)]
    out = {E_GROUP}
    for n in range(1, max_len + 1):
        for seq in itertools.product(letters, repeat=n):
            out.add(normal_form(Catalog.GROUP, list(seq)))
    return sorted(out, key=lambda w: (len(w.payload), str(w)))


def grouplike_elements(C: Cogroup, max_len: int) -> list[Word]:
    """Group-like elements among words of length at most ``max_len``."""
    return [w for w in reduced_words(C, max_len) if C.is_grouplike(w)]


def cogroup_morphisms(R: Cogroup, S: Cogroup, max_len: int = 2) -> list[CogroupMorphism]:
    """Morphisms whose generator images have length at most ``max_len``.

    The morphism condition is checked one generator at a time, so the set
    is a product of per-generator candidate sets.
    """
    candidates = grouplike_elements(S, max_len)
    out = []
    for choice in itertools.product(candidates, repeat=R.rank):
        h = CogroupMorphism(R, S, dict(zip(R.gens.values(), choice)))
        if h.is_morphism():
            out.append(h)
    return out


@dataclass
class CogroupProduct:
    product: Cogroup
    proj: tuple[CogroupMorphism, CogroupMorphism]
    factors: tuple[Cogroup, Cogroup]


def cogroup_product(X: PointedSet, Y: PointedSet) -> CogroupProduct:
    P = pointed_product(X, Y)
    C = Cogroup(P)
    RX, RY = Cogroup(X), Cogroup(Y)
    p1 = CogroupMorphism(C, RX, {C.gens[xy]: RX.word(xy[0]) for xy in P.others})
    p2 = CogroupMorphism(C, RY, {C.gens[xy]: RY.word(xy[1]) for xy in P.others})
    return CogroupProduct(C, (p1, p2), (RX, RY))


def pairing(prod: CogroupProduct, Z: Cogroup, f: CogroupMorphism, g: CogroupMorphism) -> CogroupMorphism:
    """The unique map into the product with the given components."""
    RX, RY = prod.factors
    back_x = {w: x for x in RX.points.elements for w in [RX.word(x)]}
    back_y = {w: y for y in RY.points.elements for w in [RY.word(y)]}
    images = {}
    for z, gz in Z.gens.items():
        pt = (back_x[f.images[gz]], back_y[g.images[gz]])
        images[gz] = prod.product.word(pt)
    return CogroupMorphism(Z, prod.product, images)


def product_universal(prod: CogroupProduct, Z: Cogroup, max_len: int = 2) -> bool:
    """Maps ``Z -> X x Y`` biject with pairs of maps ``Z -> X``, ``Z -> Y`` under composition."""
    RX, RY = prod.factors
    into = cogroup_morphisms(Z, prod.product, max_len)
    pairs = {
        (_key(Z, _compose(h, prod.proj[0])), _key(Z, _compose(h, prod.proj[1])))
        for h in into
    }
    fx = cogroup_morphisms(Z, RX, max_len)
    fy = cogroup_morphisms(Z, RY, max_len)
    if len(pairs) != len(into) or len(into) != len(fx) * len(fy):
        return False
    return all(_key(Z, _compose(pairing(prod, Z, f, g), prod.proj[0])) == _key(Z, f) for f in fx for g in fy)


def _compose(h: CogroupMorphism, k: CogroupMorphism) -> CogroupMorphism:
    return CogroupMorphism(h.source, k.target, {g: k(im) for g, im in h.images.items()})


def _key(Z: Cogroup, h: CogroupMorphism) -> tuple:
    return tuple(str(h.images[g]) for g in Z.gens.values())


@dataclass
class NonseparationWitness:
    w1: Word
    w2: Word
    images: tuple[tuple[Word, Word], tuple[Word, Word]]

    @property
    def holds(self) -> bool:
        (a1, a2), (b1, b2) = self.images
        return self.w1 != self.w2 and a1 == a2 and b1 == b2


def nonseparation_witness() -> NonseparationWitness:
    X = PointedSet(("e", "x"), "e")
    prod = cogroup_product(X, X)
    C = prod.product
    gxe, gex = C.word(("x", "e")), C.word(("e", "x"))
    w1, w2 = multiply(gxe, gex), multiply(gex, gxe)
    p1, p2 = prod.proj
    return NonseparationWitness(w1, w2, ((p1(w1), p1(w2)), (p2(w1), p2(w2))))


# ----------------------------------------------------------- finite groups


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @property
    def identity(self) -> int:
        return next(e for e in range(self.order) if all(self.table[e][a] == a for a in range(self.order)))

    def inv(self, a: int) -> int:
        e = self.identity
        return next(b for b in range(self.order) if self.table[a][b] == e)


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)), f"Z/{n}")


def klein_group() -> FiniteGroup:
    return FiniteGroup(tuple(tuple(a ^ b for b in range(4)) for a in range(4)), "V4")


def small_groups(max_order: int = 4) -> list[FiniteGroup]:
    out = [cyclic_group(n) for n in range(1, max_order + 1)]
    if max_order >= 4:
        out.append(klein_group())
    return out


def eval_group_word(w: Word, G: FiniteGroup, assignment: Mapping[GenId, int]) -> int:
    acc = G.identity
    for g, s in w.payload:
        v = assignment[g]
        acc = G.mul(acc, v if s == 1 else G.inv(v))
    return acc


@dataclass
class CofreeCogroup:
    group: FiniteGroup
    cogroup: Cogroup
    universal: dict  # generator -> group element

    def counit_of(self, h: CogroupMorphism) -> dict:
        """Composite with the universal map, as values on the source generators."""
        return {g: eval_group_word(im, self.group, self.universal) for g, im in h.images.items()}


def cofree_cogroup(A: FiniteGroup) -> CofreeCogroup:
    e = A.identity
    pts = PointedSet(tuple(range(A.order)), e)
    C = Cogroup(pts)
    return CofreeCogroup(A, C, {C.gens[a]: a for a in pts.others})


def cofree_bijection(cf: CofreeCogroup, Z: Cogroup) -> bool:
    """Cogroup maps ``Z -> cofree`` correspond to group homs ``|Z| -> A`` via the universal map."""
    maps = [from_pointed_map(Z, cf.cogroup, f) for f in pointed_maps(Z.points, cf.cogroup.points)]
    if not all(h.is_morphism() for h in maps):
        return False
    values = [tuple(sorted((str(g), v) for g, v in cf.counit_of(h).items())) for h in maps]
    homs = cf.group.order ** Z.rank  # homs out of a free group: any values on generators
    return len(set(values)) == len(values) == homs


# ---------------------------------------------------------- monoid comonoids

MX, MY = GenId("x"), GenId("y")


@dataclass
class MonoidModel:
    """Monoid on ``x, y`` presented by length-two cancellation rules ``uv -> e``."""

    name: str
    cancel: tuple[tuple[str, str], ...]

    def reduce(self, seq: Sequence[GenId]) -> Word:
        """Stack reduction; rules only delete adjacent same-copy pairs, so this is confluent."""
        stack: list[GenId] = []
        for g in seq:
            if stack and stack[-1].tags == g.tags and (stack[-1].name, g.name) in self.cancel:
                stack.pop()
            else:
                stack.append(g)
        return Word(Catalog.MONOID, tuple(stack))

    def mul(self, u: Word, v: Word) -> Word:
        return self.reduce(u.payload + v.payload)

    def comult(self, w: Word) -> Word:
        out: list[GenId] = []
        for g in w.payload:
            if g.name == "x":
                out += [g.tagged(0), g.tagged(1)]
            else:
                out += [g.tagged(1), g.tagged(0)]
        return self.reduce(out)

    def relations_respected(self) -> bool:
        """Every rule ``uv -> e`` still holds after applying the comultiplication."""
        gen = {"x": MX, "y": MY}
        return all(self.comult(mon(gen[u], gen[v])) == E_MONOID for u, v in self.cancel)

    def words(self, max_len: int) -> set[Word]:
        return {self.reduce(s) for n in range(max_len + 1) for s in itertools.product((MX, MY), repeat=n)}

    def special_elements(self, max_len: int) -> set[Word]:
        """Words ``z`` with ``beta(z)`` equal to ``z0 z1`` or ``z1 z0``."""
        out = set()
        for z in self.words(max_len):
            t0, t1 = _tag(z, 0), _tag(z, 1)
            b = self.comult(z)
            if b in (self.mul(t0, t1), self.mul(t1, t0)):
                out.add(z)
        return out

    def functor_formula(self, A) -> list[tuple[int, int]]:
        e = monoid_identity(A)
        pairs = [(a, b) for a in range(len(A)) for b in range(len(A))]
        if ("x", "y") in self.cancel:
            pairs = [(a, b) for a, b in pairs if A[a][b] == e]
        if ("y", "x") in self.cancel:
            pairs = [(a, b) for a, b in pairs if A[b][a] == e]
        return pairs

    def functor_via_homs(self, A) -> tuple[list[tuple[int, int]], Callable]:
        """Homs to ``A`` found by checking the defining rules, with the product read off ``comult``."""
        e = monoid_identity(A)
        homs = []
        for a, b in itertools.product(range(len(A)), repeat=2):
            val = {"x": a, "y": b}
            if all(A[val[u]][val[v]] == e for u, v in self.cancel):
                homs.append((a, b))

        def prod(h, k):
            out = []
            for g in (MX, MY):
                acc = e
                for t in self.comult(mon(g)).payload:
                    i, inner = t.untagged()
                    acc = A[acc][(h, k)[i][0 if inner.name == "x" else 1]]
                out.append(acc)
            return tuple(out)

        return homs, prod


def monoid_identity(A) -> int:
    n = len(A)
    for e in range(n):
        if all(A[e][a] == a and A[a][e] == a for a in range(n)):
            return e
    raise ValueError("not a monoid")


def monoid_models() -> tuple[MonoidModel, MonoidModel, MonoidModel]:
    return (
        MonoidModel("free", ()),
        MonoidModel("bicyclic", (("x", "y"),)),
        MonoidModel("integers", (("x", "y"), ("y", "x"))),
    )


def surject(src: MonoidModel, dst: MonoidModel, w: Word) -> Word:
    return dst.reduce(w.payload)


# ---------------------------------------------------- abelian groups, SNF


def _as_int_matrix(M) -> sympy.Matrix:
    rows = [list(r) for r in M]
    for r in rows:
        for v in r:
            if isinstance(v, bool) or not isinstance(v, (int, sympy.Integer)):
                if not (isinstance(v, sympy.Rational) and v.q == 1):
                    raise TypeError(f"non-integer entry {v!r}")
    return sympy.Matrix(rows) if rows else sympy.zeros(0, 0)


def smith_normal_form(M) -> tuple[sympy.Matrix, sympy.Matrix, sympy.Matrix]:
    """``(U, D, V)`` with ``U * M * V == D``, unimodular ``U, V`` and a divisibility chain on ``D``."""
    A = _as_int_matrix(M)
    if A.rows == 0 or A.cols == 0:
        return sympy.eye(A.rows), A, sympy.eye(A.cols)
    D, U, V = smith_normal_decomp(A, domain=ZZ)
    # normalise signs so the diagonal is non-negative
    for i in range(min(D.shape)):
        if D[i, i] < 0:
            D[i, :] = -D[i, :]
            U[i, :] = -U[i, :]
    return U, D, V


def diagonal(D: sympy.Matrix) -> list[int]:
    return [int(D[i, i]) for i in range(min(D.shape))]


def determinantal_invariants(M) -> list[int]:
    """Invariant factors from gcds of ``k``-minors; an independent check on the SNF."""
    A = _as_int_matrix(M)
    divs = [1]
    for k in range(1, min(A.shape) + 1):
        g = 0
        for rows in itertools.combinations(range(A.rows), k):
            for cols in itertools.combinations(range(A.cols), k):
                g = math.gcd(g, int(A.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        divs.append(g)
    return [divs[i] // divs[i - 1] for i in range(1, len(divs))]


@dataclass
class FgAbGroup:
    """``Z^n`` modulo the row space of ``relations`` (an ``r x n`` integer matrix)."""

    n: int
    relations: list[list[int]]
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if any(len(r) != self.n for r in self.relations):
            raise ValueError("relation rows must have one entry per generator")
        if not self.names:
            self.names = tuple(f"g{i}" for i in range(self.n))

    def _snf(self):
        if not self.relations:
            return None, [], sympy.eye(self.n)
        U, D, V = smith_normal_form(self.relations)
        return U, diagonal(D), V

    def invariants(self) -> tuple[int, tuple[int, ...]]:
        """``(free rank, torsion invariants)`` with ``d_1 | d_2 | ...`` and each ``d_i > 1``."""
        _, d, _ = self._snf()
        nonzero = [abs(x) for x in d if x != 0]
        return self.n - len(nonzero), tuple(x for x in nonzero if x > 1)

    def order_of(self, v: Sequence[int]) -> int | float:
        """Order of the class of ``v``; ``math.inf`` when it has infinite order."""
        _, d, V = self._snf()
        w = sympy.Matrix([list(v)]) * V
        order = 1
        for i in range(self.n):
            c = int(w[0, i])
            di = abs(d[i]) if i < len(d) else 0
            if di == 0:
                if c != 0:
                    return math.inf
                continue
            order = math.lcm(order, di // math.gcd(di, c))
        return order

    def is_zero(self, v: Sequence[int]) -> bool:
        return self.order_of(v) == 1

    def to_json(self) -> dict:
        return {"n": self.n, "relations": self.relations}


def cyclic(n: int) -> FgAbGroup:
    return FgAbGroup(1, [[n]] if n else [])


def direct_sum(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    rows = [r + [0] * B.n for r in A.relations] + [[0] * A.n + r for r in B.relations]
    return FgAbGroup(A.n + B.n, rows, A.names + B.names)


def tensor_fg_ab(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    """Generators ``a_i (x) b_j`` at index ``i * B.n + j``; relations from each side."""
    rows = []
    for r in A.relations:
        for j in range(B.n):
            row = [0] * (A.n * B.n)
            for i, c in enumerate(r):
                row[i * B.n + j] = c
            rows.append(row)
    for r in B.relations:
        for i in range(A.n):
            row = [0] * (A.n * B.n)
            for j, c in enumerate(r):
                row[i * B.n + j] = c
            rows.append(row)
    names = tuple(f"{a}*{b}" for a in A.names for b in B.names)
    return FgAbGroup(A.n * B.n, rows, names)


def pure_tensor(A: FgAbGroup, B: FgAbGroup, u: Sequence[int], v: Sequence[int]) -> list[int]:
    """Coordinates of ``u (x) v`` on the generators of ``tensor_fg_ab(A, B)``."""
    return [u[i] * v[j] for i in range(A.n) for j in range(B.n)]


def tensor_map(f: Sequence[Sequence[int]], g: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    """Apply ``f (x) g`` where ``f[i]`` is the image of the ``i``-th source generator."""
    out = [0] * (len(f[0]) * len(g[0]))
    nb = len(g)
    for idx, c in enumerate(v):
        if c == 0:
            continue
        i, j = divmod(idx, nb)
        for k, fk in enumerate(f[i]):
            for l, gl in enumerate(g[j]):
                out[k * len(g[0]) + l] += c * fk * gl
    return out


@dataclass
class WitnessReport:
    p: int
    order_in_BB: int | float
    image_in_AA: list[int]
    image_is_zero: bool

    @property
    def holds(self) -> bool:
        return self.order_in_BB == self.p and self.image_is_zero


def ringab_witness(p: int) -> WitnessReport:
    """``A = Z a + Z/p b`` and ``B = <pa, b>``; ``(pa) (x) b`` survives in ``B (x) B`` but dies in ``A (x) A``."""
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    A = FgAbGroup(2, [[0, p]], ("a", "b"))
    B = FgAbGroup(2, [[0, p]], ("pa", "b"))
    inc = [[p, 0], [0, 1]]  # pa -> p*a, b -> b
    BB, AA = tensor_fg_ab(B, B), tensor_fg_ab(A, A)
    t = pure_tensor(B, B, [1, 0], [0, 1])
    img = tensor_map(inc, inc, t)
    return WitnessReport(p, BB.order_of(t), img, AA.is_zero(img))
