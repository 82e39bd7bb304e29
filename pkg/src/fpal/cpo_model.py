"""Finite pointed posets as models: morphism terms are interpreted as
monotone functions and ``dagger`` as the least fixed point, computed by
iterating from the bottom element.

A function with k inputs and t outputs is stored as a flat table indexed
by the mixed-radix encoding of its input tuple (first input most
significant); the entry is the encoding of the output tuple.  Composition
is then a single table gather.  Checking an equation means enumerating or
sampling interpretations of its symbols and comparing the two evaluated
tables; a counterexample refutes the equation, but a completed check only
reports that none was found.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct

from .errors import ThresholdExceededError
from .term import Comp, Dagger, Equation, Morphism, Proj, Sym, Tup

DEFAULT_EXHAUSTIVE_THRESHOLD = 100_000
DEFAULT_SAMPLES = 10_000
DEFAULT_SEED = 1729


@dataclass(frozen=True)
class PosetModel:
    """A finite poset with a least element.  ``leq[x][y]`` says x <= y."""

    size: int
    leq: tuple
    bottom: int
    name: str = "poset"

    def __post_init__(self):
        object.__setattr__(self, "leq", tuple(tuple(bool(v) for v in row) for row in self.leq))
        n, leq = self.size, self.leq
        if n < 1 or len(leq) != n or any(len(row) != n for row in leq):
            raise ValueError("order relation shape does not match carrier size")
        for x in range(n):
            if not leq[x][x]:
                raise ValueError("order must be reflexive")
            for y in range(n):
                if leq[x][y] and leq[y][x] and x != y:
                    raise ValueError("order must be antisymmetric")
                for z in range(n):
                    if leq[x][y] and leq[y][z] and not leq[x][z]:
                        raise ValueError("order must be transitive")
        if not all(leq[self.bottom][x] for x in range(n)):
            raise ValueError("bottom element must be below everything")

    def covers_below(self, x: int) -> list:
        """Immediate predecessors of x."""
        below = [y for y in range(self.size) if y != x and self.leq[y][x]]
        return [
            y for y in below
            if not any(z != y and z != x and self.leq[y][z] and self.leq[z][x] for z in below)
        ]

    def height(self) -> int:
        """Length of a longest chain (number of elements)."""
        rank = self.ranks()
        return max(rank) + 1

    def ranks(self) -> tuple:
        rank = [0] * self.size
        changed = True
        while changed:
            changed = False
            for x in range(self.size):
                for y in self.covers_below(x):
                    if rank[x] < rank[y] + 1:
                        rank[x] = rank[y] + 1
                        changed = True
        return tuple(rank)


def chain(k: int) -> PosetModel:
    """The k-element chain 0 < 1 < ... < k-1."""
    if k < 1:
        raise ValueError(f"chain needs at least one element, got {k}")
    leq = tuple(tuple(x <= y for y in range(k)) for x in range(k))
    return PosetModel(k, leq, 0, name=f"chain({k})")


class TableFn:
    """A function P^k -> P^t as a flat table of encoded outputs."""

    __slots__ = ("poset", "in_arity", "out_arity", "table")

    def __init__(self, poset: PosetModel, in_arity: int, out_arity: int, table):
        self.poset = poset
        self.in_arity = in_arity
        self.out_arity = out_arity
        self.table = list(table)
        if len(self.table) != poset.size ** in_arity:
            raise ValueError(
                f"table length {len(self.table)} does not match arity {in_arity}"
            )

    def __eq__(self, other):
        return (
            isinstance(other, TableFn)
            and self.poset == other.poset
            and self.in_arity == other.in_arity
            and self.out_arity == other.out_arity
            and self.table == other.table
        )

    def __repr__(self):
        return f"TableFn(in={self.in_arity}, out={self.out_arity}, table={self.table})"

    def encode(self, tup) -> int:
        code = 0
        for v in tup:
            code = code * self.poset.size + v
        return code

    def decode_out(self, code: int) -> tuple:
        return _decode(code, self.poset.size, self.out_arity)

    def __call__(self, args) -> tuple:
        args = tuple(args)
        if len(args) != self.in_arity:
            raise ValueError(f"expected {self.in_arity} arguments, got {len(args)}")
        return self.decode_out(self.table[self.encode(args)])

    def is_monotone(self) -> bool:
        size = self.poset.size
        leq = self.poset.leq
        for idx, preds in enumerate(_cover_preds(self.poset, self.in_arity)):
            out_x = _decode(self.table[idx], size, self.out_arity)
            for p in preds:
                out_p = _decode(self.table[p], size, self.out_arity)
                if not all(leq[a][b] for a, b in zip(out_p, out_x)):
                    return False
        return True


def _decode(code: int, size: int, width: int) -> tuple:
    out = [0] * width
    for k in range(width - 1, -1, -1):
        out[k] = code % size
        code //= size
    return tuple(out)


@lru_cache(maxsize=None)
def _cover_preds(poset: PosetModel, arity: int) -> tuple:
    """For every point of P^arity, the indices of its immediate
    predecessors (one coordinate lowered to a cover)."""
    size = poset.size
    covers = [poset.covers_below(x) for x in range(size)]
    total = size ** arity
    out = []
    for idx in range(total):
        digits = _decode(idx, size, arity)
        preds = []
        stride = total // size if arity else 1
        s = total
        for pos in range(arity):
            s //= size
            for y in covers[digits[pos]]:
                preds.append(idx + (y - digits[pos]) * s)
        out.append(tuple(preds))
    return tuple(out)


@lru_cache(maxsize=None)
def _topo_order(poset: PosetModel, arity: int) -> tuple:
    """A linear extension of P^arity: sort by total rank, then by index."""
    ranks = poset.ranks()
    size = poset.size
    total = size ** arity

    def key(idx):
        return (sum(ranks[d] for d in _decode(idx, size, arity)), idx)

    return tuple(sorted(range(total), key=key))


def enumerate_monotone(poset: PosetModel, in_arity: int, limit: int | None = None):
    """Yield every monotone function P^in_arity -> P as a TableFn, in a
    fixed deterministic order.  With ``limit``, raise once more than that
    many functions exist."""
    order = _topo_order(poset, in_arity)
    preds = _cover_preds(poset, in_arity)
    size = poset.size
    leq = poset.leq
    total = size ** in_arity
    table = [0] * total
    count = 0

    def candidates(idx):
        lower = [table[p] for p in preds[idx]]
        return [v for v in range(size) if all(leq[lo][v] for lo in lower)]

    def rec(k):
        nonlocal count
        if k == len(order):
            count += 1
            if limit is not None and count > limit:
                raise ThresholdExceededError(
                    f"more than {limit} monotone functions; sample instead"
                )
            yield TableFn(poset, in_arity, 1, table)
            return
        idx = order[k]
        for v in candidates(idx):
            table[idx] = v
            yield from rec(k + 1)
        table[idx] = 0

    yield from rec(0)


def count_monotone(poset: PosetModel, in_arity: int, cap: int) -> int:
    """Number of monotone functions, counting no further than cap + 1."""
    count = 0
    for _ in enumerate_monotone(poset, in_arity):
        count += 1
        if count > cap:
            return count
    return count


def random_monotone(poset: PosetModel, in_arity: int, rng: random.Random) -> TableFn:
    """A random monotone function, filled greedily along a linear
    extension.  Every monotone function has positive probability."""
    order = _topo_order(poset, in_arity)
    preds = _cover_preds(poset, in_arity)
    size = poset.size
    leq = poset.leq
    while True:
        table = [0] * (size ** in_arity)
        ok = True
        for idx in order:
            lower = [table[p] for p in preds[idx]]
            cand = [v for v in range(size) if all(leq[lo][v] for lo in lower)]
            if not cand:
                ok = False
                break
            table[idx] = cand[rng.randrange(len(cand))]
        if ok:
            return TableFn(poset, in_arity, 1, table)


# ---------------------------------------------------------------------------
# evaluation


class Interpretation:
    """Assignment of a monotone TableFn to every symbol name."""

    def __init__(self, poset: PosetModel, by_name: dict):
        self.poset = poset
        self.by_name = dict(by_name)
        for name, fn in self.by_name.items():
            if fn.poset != poset:
                raise ValueError(f"symbol {name!r} interpreted over a different poset")
            if fn.out_arity != 1:
                raise ValueError(f"symbol {name!r} must have one output")


def _bottom_code(poset: PosetModel, width: int) -> int:
    code = 0
    for _ in range(width):
        code = code * poset.size + poset.bottom
    return code


def lfp(fn: TableFn, params=()) -> int:
    """Least fixed point of ``fn: P x P^p -> P`` at the given parameters,
    by iteration from bottom."""
    if fn.out_arity != 1 or fn.in_arity < 1:
        raise ValueError("least fixed point needs a function P x P^p -> P")
    poset = fn.poset
    c = 0
    params = tuple(params)
    if len(params) != fn.in_arity - 1:
        raise ValueError(f"expected {fn.in_arity - 1} parameters, got {len(params)}")
    for v in params:
        c = c * poset.size + v
    return _iterate_dagger(fn, 1, c)


def _iterate_dagger(body: TableFn, m: int, param_code: int) -> int:
    poset = body.poset
    size = poset.size
    span = size ** (body.in_arity - m)
    x = _bottom_code(poset, m)
    for _ in range(m * (poset.height() - 1) + 2):
        nxt = body.table[x * span + param_code]
        if nxt == x:
            return x
        x = nxt
    raise RuntimeError(
        "fixed-point iteration failed to stabilize; interpretation not monotone"
    )


def eval_morphism(m: Morphism, interp: Interpretation) -> TableFn:
    """Interpret a term as a TableFn over the interpretation's poset."""
    poset = interp.poset
    size = poset.size
    if isinstance(m, Proj):
        span = size ** (m.n - m.i)
        table = [(idx // span) % size for idx in range(size ** m.n)]
        return TableFn(poset, m.n, 1, table)
    if isinstance(m, Sym):
        fn = interp.by_name.get(m.symbol.name)
        if fn is None:
            raise ValueError(f"no interpretation for symbol {m.symbol.name!r}")
        if fn.in_arity != m.symbol.in_arity:
            raise ValueError(
                f"symbol {m.symbol.name!r} has arity {m.symbol.in_arity}, "
                f"interpreted with {fn.in_arity}"
            )
        return fn
    if isinstance(m, Tup):
        parts = [eval_morphism(p, interp) for p in m.parts]
        total = size ** m.source
        table = [0] * total
        for part in parts:
            scale = size ** part.out_arity
            ptab = part.table
            for idx in range(total):
                table[idx] = table[idx] * scale + ptab[idx]
        return TableFn(poset, m.source, m.target, table)
    if isinstance(m, Comp):
        inner = eval_morphism(m.f, interp)
        outer = eval_morphism(m.g, interp)
        return TableFn(
            poset, inner.in_arity, outer.out_arity,
            [outer.table[v] for v in inner.table],
        )
    if isinstance(m, Dagger):
        body = eval_morphism(m.body, interp)
        p = body.in_arity - m.m
        table = [
            _iterate_dagger(body, m.m, c) for c in range(size ** p)
        ]
        return TableFn(poset, p, m.m, table)
    raise ValueError(f"cannot evaluate {m!r}")


# ---------------------------------------------------------------------------
# equation checking


@dataclass
class CheckResult:
    """Outcome of one model check.  A recorded counterexample refutes the
    equation; ``holds`` only means no counterexample was found, which is
    why every result carries ``refutation_only``."""

    equation: str
    poset: str
    strategy: str
    seed: int | None
    interpretations_checked: int
    holds: bool
    counterexample: dict | None
    refutation_only: bool = True

    def to_json(self) -> dict:
        out = {
            "equation": self.equation,
            "poset": self.poset,
            "strategy": self.strategy,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        out["interpretations_checked"] = self.interpretations_checked
        out["holds"] = self.holds
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        out["refutation_only"] = self.refutation_only
        return out


def _counterexample(eq: Equation, poset: PosetModel, interp: Interpretation,
                    lhs: TableFn, rhs: TableFn) -> dict:
    size = poset.size
    for idx in range(len(lhs.table)):
        if lhs.table[idx] != rhs.table[idx]:
            return {
                "symbols": {
                    name: list(fn.table) for name, fn in sorted(interp.by_name.items())
                },
                "input": list(_decode(idx, size, lhs.in_arity)),
                "lhs": list(lhs.decode_out(lhs.table[idx])),
                "rhs": list(rhs.decode_out(rhs.table[idx])),
            }
    raise AssertionError("tables differ but no differing entry found")


def interpretation_count(eq: Equation, poset: PosetModel, cap: int) -> int:
    """Product over symbols of the number of monotone interpretations,
    counted no further than cap + 1."""
    total = 1
    for s in eq.symbols:
        total *= count_monotone(poset, s.in_arity, cap)
        if total > cap:
            return total
    return total


def check_equation(
    eq: Equation,
    poset: PosetModel,
    mode: str = "auto",
    seed: int | None = None,
    samples: int | None = None,
    threshold: int = DEFAULT_EXHAUSTIVE_THRESHOLD,
) -> CheckResult:
    """Check an equation over all (or sampled) monotone interpretations.

    ``mode`` is "exhaustive", "sampled", or "auto" (exhaustive when the
    interpretation count fits under ``threshold``).  Sampling uses ``seed``
    (default fixed) and ``samples`` draws.
    """
    if mode not in ("auto", "exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode in ("auto", "exhaustive"):
        total = interpretation_count(eq, poset, threshold)
        if total > threshold:
            if mode == "exhaustive":
                raise ThresholdExceededError(
                    f"about {total} interpretations exceed the exhaustive "
                    f"threshold {threshold}; sample instead"
                )
            mode = "sampled"
        else:
            mode = "exhaustive"
    else:
        total = None

    names = [s.name for s in eq.symbols]
    if mode == "exhaustive":
        pools = [list(enumerate_monotone(poset, s.in_arity)) for s in eq.symbols]
        checked = 0
        for combo in iproduct(*pools):
            interp = Interpretation(poset, dict(zip(names, combo)))
            lhs = eval_morphism(eq.lhs, interp)
            rhs = eval_morphism(eq.rhs, interp)
            checked += 1
            if lhs.table != rhs.table:
                return CheckResult(
                    eq.name, poset.name, "exhaustive", None, checked, False,
                    _counterexample(eq, poset, interp, lhs, rhs),
                )
        return CheckResult(eq.name, poset.name, "exhaustive", None, checked, True, None)

    seed = DEFAULT_SEED if seed is None else seed
    samples = DEFAULT_SAMPLES if samples is None else samples
    rng = random.Random(seed)
    checked = 0
    for _ in range(samples):
        interp = Interpretation(
            poset,
            {s.name: random_monotone(poset, s.in_arity, rng) for s in eq.symbols},
        )
        lhs = eval_morphism(eq.lhs, interp)
        rhs = eval_morphism(eq.rhs, interp)
        checked += 1
        if lhs.table != rhs.table:
            return CheckResult(
                eq.name, poset.name, "sampled", seed, checked, False,
                _counterexample(eq, poset, interp, lhs, rhs),
            )
    return CheckResult(eq.name, poset.name, "sampled", seed, checked, True, None)
