"""``coalg`` command line.

Exit codes: 0 success, 1 a verify-all criterion failed, 2 membership is
false, 3 capability error, 4 parse error.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import click

from . import acceptance, oracle, sese
from .sig_core import (
    NAMED_IDENTITIES,
    Catalog,
    CapabilityError,
    ParseError,
    VarietyDescriptor,
    parse_identity,
    parse_term,
)
from .tower import Tower, TowerCache
from .words import format_word

SCHEMA = 1
EXIT_FALSE, EXIT_CAPABILITY, EXIT_PARSE = 2, 3, 4


@dataclass
class RunConfig:
    command: str
    c: str = "set"
    d: str = "bi"
    idents: tuple[str, ...] = ()
    k: int = 2
    L: int = 12
    N: int = 3
    cache_dir: str | None = None
    fmt: str = "text"
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.k < 0 or self.L < 1 or self.N < 1:
            raise click.BadParameter("k must be >= 0, L and N must be positive")

    def descriptor(self) -> VarietyDescriptor:
        ids = []
        for text in self.idents:
            ids.append(NAMED_IDENTITIES[text] if text in NAMED_IDENTITIES else parse_identity(text))
        return VarietyDescriptor(Catalog(self.d), tuple(ids))

    def cache(self) -> TowerCache | None:
        directory = self.cache_dir or os.environ.get("COALG_CACHE")
        return TowerCache(directory) if directory else None

    def tower(self) -> Tower:
        return Tower(self.c, self.descriptor(), L=self.L, cache=self.cache())


def emit(cfg: RunConfig, doc: dict, text: str) -> None:
    if cfg.fmt == "json":
        click.echo(json.dumps({"schema": SCHEMA, "command": cfg.command, **doc}, sort_keys=True))
    else:
        click.echo(text)


def fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    """Map library errors to the documented exit codes."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParseError as exc:
            fail(EXIT_PARSE, str(exc))
        except CapabilityError as exc:
            fail(EXIT_CAPABILITY, str(exc))

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


variety_choice = click.Choice([c.value for c in Catalog])
common = [
    click.option("--c", "c", type=variety_choice, default="set", show_default=True, help="variety C"),
    click.option("--d", "d", type=variety_choice, default="bi", show_default=True, help="variety D"),
    click.option("--ident", "idents", multiple=True, help="identity name or s-expression; repeatable"),
    click.option("--L", "L", type=int, default=12, show_default=True, help="word length bound"),
    click.option("--cache", "cache_dir", default=None, help="cache directory (default: $COALG_CACHE)"),
    click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text"),
]


def with_common(fn):
    for opt in reversed(common):
        fn = opt(fn)
    return fn


@click.group()
def main() -> None:
    """Towers of precoalgebras and the coalgebras they approximate."""


@main.command()
@with_common
@click.option("--k", type=int, default=3, show_default=True)
@click.option("--list", "show", is_flag=True, help="print the level-k words")
@_guarded
def tower(c, d, idents, L, cache_dir, fmt, k, show):
    """Level counts 0..k of the tower."""
    cfg = RunConfig("tower", c, d, idents, k, L, cache_dir=cache_dir, fmt=fmt)
    T = cfg.tower()
    counts = [len(T.level(j)) for j in range(k + 1)]
    words = [T.format_element(w) for w in T.level(k).sorted()] if show else []
    text = "\n".join([f"level {j}: {n}" for j, n in enumerate(counts)] + words)
    emit(cfg, {"counts": counts, "count": counts[-1], "words": words}, text)


def _level_of(w) -> int:
    tags = {len(g.tags) for g in _gens(w)}
    if len(tags) != 1:
        raise ParseError("all generators of a word must carry the same number of subscripts")
    return tags.pop()


def _gens(w):
    from .words import generators

    return list(generators(w))


@main.command()
@with_common
@click.option("--word", required=True)
@click.option("--k", type=int, default=None, help="level; defaults to the subscript length")
@_guarded
def member(c, d, idents, L, cache_dir, fmt, word, k):
    """Is WORD an element of the tower at level k?"""
    cfg = RunConfig("member", c, d, idents, 0, L, cache_dir=cache_dir, fmt=fmt)
    T = cfg.tower()
    w = T.parse_element(word)
    k = _level_of(w) if k is None else k
    if len(w) > T.L:
        T = Tower(c, cfg.descriptor(), L=len(w), cache=cfg.cache())
    reasons = T.violations(w, k)
    if not reasons and Catalog(c) is Catalog.SE and Catalog(d) is Catalog.SE and k == 2 and not sese.r_member(w):
        images = dict(zip(("lmr_r", "lmr_l", "lmr_m"), (format_word(x) for x in sese.lmr_images(w))))
        reasons.append(
            f"lmr_m image {images['lmr_m']} differs from lmr_l/lmr_r image {images['lmr_l']}"
        )
    verdict = not reasons
    text = "yes" if verdict else "no\n" + "\n".join(reasons)
    emit(cfg, {"word": word, "k": k, "member": verdict, "reasons": reasons}, text)
    if not verdict:
        sys.exit(EXIT_FALSE)


@main.command()
@with_common
@click.option("--term", required=True, help="s-expression over beta, e.g. '(beta (p 0) (p 1))'")
@click.option("--j", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--word", required=True)
@_guarded
def instance(c, d, idents, L, cache_dir, fmt, term, j, k, word):
    """The (j,k)-instance of TERM applied to WORD."""
    cfg = RunConfig("instance", c, d, idents, k, L, cache_dir=cache_dir, fmt=fmt)
    T = cfg.tower()
    s = parse_term(term)
    w = T.parse_element(word)
    try:
        img = T.instance(s, j, k, w)
    except ValueError as exc:
        fail(EXIT_CAPABILITY, str(exc))
    out = T.format_element(img) if not isinstance(img, tuple) else f"{img[0]}:{T.format_element(img[1])}"
    emit(cfg, {"term": term, "j": j, "k": k, "word": word, "image": out}, out)


@main.command()
@click.option("--sese", "use_sese", is_flag=True, required=True, help="the Se->Se final object's functor")
@click.option("--n", "N", type=int, default=3, show_default=True, help="index cutoff")
@click.option("--algebra", type=click.Path(exists=True, dir_okay=False), required=True, help="semigroup JSON")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_guarded
def functor(use_sese, N, algebra, fmt):
    """Cayley table of the represented functor at a finite semigroup."""
    cfg = RunConfig("functor", N=N, fmt=fmt)
    try:
        A = sese.FiniteSemigroup.from_json(json.loads(Path(algebra).read_text()))
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise ParseError(f"bad semigroup file: {exc}") from None
    E = sese.e_value(A, N)
    report = sese.compare_e_with_homs(A, N)
    idx = {e: i for i, e in enumerate(E.elements)}
    table = [[idx[E.product(u, v)] for v in E.elements] for u in E.elements]
    rows = [" ".join(map(str, r)) for r in table]
    text = f"|E| = {len(E)}; matches hom-set oracle: {report.ok}\n" + "\n".join(rows)
    emit(cfg, {"size": len(E), "elements": [list(e) for e in E.elements], "table": table, "oracle_match": report.ok}, text)


@main.command(name="oracle")
@click.option("--d", "d", type=variety_choice, default="bi", show_default=True)
@click.option("--ident", "idents", multiple=True)
@click.option("--size", type=int, required=True)
@click.option("--final", "final", is_flag=True, help="search for a final object among sizes <= SIZE")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_guarded
def oracle_cmd(d, idents, size, final, fmt):
    """Enumerate small Set-based coalgebras up to isomorphism."""
    cfg = RunConfig("oracle", d=d, idents=idents, fmt=fmt)
    try:
        desc = cfg.descriptor()
        found = oracle.enumerate_coalgebras(desc, size)
    except ValueError as exc:
        fail(EXIT_CAPABILITY, str(exc))
    doc: dict = {"size": size, "count": len(found), "coalgebras": [R.to_json() for R in found]}
    lines = [f"{len(found)} coalgebras of size {size}"]
    if final:
        cert = oracle.final_over_S(desc, size)
        doc["final"] = cert.coalgebra.to_json() if cert.coalgebra is not None else None
        doc["certificate"] = cert.note
        lines.append(f"final: {json.dumps(doc['final'])} ({cert.note})")
    else:
        lines += [json.dumps(R.to_json(), sort_keys=True) for R in found]
    emit(cfg, doc, "\n".join(lines))


@main.command(name="verify-all")
@click.option("--only", default=None, help="comma-separated criterion numbers")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def verify_all(only, fmt):
    """Run every reproduction check and print a pass/fail table."""
    cfg = RunConfig("verify-all", fmt=fmt)
    numbers = [int(x) for x in only.split(",")] if only else None
    results = acceptance.run_all(numbers)
    emit(cfg, {"results": [asdict(r) for r in results]}, "\n".join(r.line() for r in results))
    failed = [r for r in results if not r.ok]
    if failed:
        fail(1, f"criterion {failed[0].number} ({failed[0].name}) failed")


if __name__ == "__main__":
    main()
