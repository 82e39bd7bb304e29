"""Transition monoids and enough finite group theory to identify their
simple divisors.

The monoid of an automaton is the set of word-induced state maps, with
``x * y`` meaning "apply x, then y".  A simple group S divides a monoid M
when S is a quotient of some subsemigroup of M that happens to be a group;
equivalently, S is a composition factor of a subgroup of one of the
maximal subgroups sitting at the idempotents of M.  Everything here is
brute force over explicit tables, guarded by size caps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .automaton import DEFAULT_MONOID_CAP, Automaton, Transformation
from .errors import CapExceededError

DEFAULT_SUBGROUP_CAP = 1024


class TransformationMonoid:
    """All transformations induced by words of an automaton.

    Elements are sorted by their state maps; each carries a shortest
    witness word (ties broken toward earlier letters).  The product table
    is built lazily.
    """

    def __init__(self, elements, witnesses, letters):
        self.elements = tuple(elements)
        self.witnesses = tuple(witnesses)
        self.letters = tuple(letters)
        self._index = {t.map: i for i, t in enumerate(self.elements)}
        ident = Transformation.identity(self.elements[0].n)
        if ident.map not in self._index:
            raise ValueError("transformation monoid must contain the identity")
        self.identity_index = self._index[ident.map]
        self._table = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def n_states(self) -> int:
        return self.elements[0].n

    def index_of(self, t: Transformation) -> int:
        try:
            return self._index[t.map]
        except KeyError:
            raise ValueError(f"{t.map} is not an element of this monoid") from None

    def product(self, i: int, j: int) -> int:
        """Index of element i followed by element j."""
        return int(self.table[i, j])

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            n = self.n_states
            maps = np.array([t.map for t in self.elements], dtype=np.int64) - 1
            powers = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
            keys = maps @ powers
            sort = np.argsort(keys)
            sorted_keys = keys[sort]
            table = np.empty((self.order, self.order), dtype=np.int32)
            for i in range(self.order):
                composed = maps[:, maps[i]]  # row j is "element i, then element j"
                pos = np.searchsorted(sorted_keys, composed @ powers)
                table[i] = sort[pos]
            self._table = table
        return self._table

    def element_key(self) -> tuple:
        return tuple(t.map for t in self.elements)


def transition_monoid(q: Automaton, cap: int = DEFAULT_MONOID_CAP) -> TransformationMonoid:
    """Breadth-first closure of the letter actions under composition."""
    start = Transformation.identity(q.n_states)
    gens = q.letter_transformations()
    witness = {start: ()}
    frontier = deque([start])
    while frontier:
        t = frontier.popleft()
        base = witness[t]
        for j, g in enumerate(gens):
            nxt = t.then(g)
            if nxt not in witness:
                witness[nxt] = base + (q.letters[j],)
                frontier.append(nxt)
                if len(witness) > cap:
                    raise CapExceededError(
                        f"transition monoid exceeds cap {cap}"
                    )
    elements = sorted(witness, key=lambda t: t.map)
    return TransformationMonoid(elements, [witness[t] for t in elements], q.letters)


def idempotents(m: TransformationMonoid) -> list:
    return [i for i in range(m.order) if m.product(i, i) == i]


# ---------------------------------------------------------------------------
# finite groups as explicit tables


class FiniteGroup:
    """A finite group given by its multiplication table (index based).

    ``labels`` names the elements; subgroups of a monoid's maximal
    subgroups carry monoid element indices, quotients carry coset labels.
    """

    def __init__(self, table, labels=None, check: bool = True):
        self.table = np.asarray(table, dtype=np.int32)
        if self.table.ndim != 2 or self.table.shape[0] != self.table.shape[1]:
            raise ValueError("group table must be square")
        self.order = int(self.table.shape[0])
        if self.order < 1:
            raise ValueError("group must have at least one element")
        self.labels = tuple(labels) if labels is not None else tuple(range(self.order))
        if len(self.labels) != self.order:
            raise ValueError("label count differs from group order")
        idx = np.arange(self.order)
        ident = [e for e in range(self.order)
                 if np.array_equal(self.table[e], idx) and np.array_equal(self.table[:, e], idx)]
        if len(ident) != 1:
            raise ValueError("table has no two-sided identity")
        self.identity = ident[0]
        if check:
            self._check_basic()
        self._inverse = None

    def _check_basic(self):
        if self.table.min() < 0 or self.table.max() >= self.order:
            raise ValueError("table entries out of range")
        # Latin square: every row and column is a permutation.
        idx = np.arange(self.order)
        if not (np.array_equal(np.sort(self.table, axis=1), np.broadcast_to(idx, self.table.shape))
                and np.array_equal(np.sort(self.table, axis=0), np.broadcast_to(idx[:, None], self.table.shape))):
            raise ValueError("table rows and columns must be permutations")
        if not np.all(np.any(self.table == self.identity, axis=1)):
            raise ValueError("some element has no inverse")

    def check_associative(self) -> bool:
        """Full associativity check; cubic, so only sensible for small
        orders."""
        t = self.table
        return bool(np.array_equal(t[t, :], t[:, t]))

    @property
    def inverse(self) -> np.ndarray:
        if self._inverse is None:
            rows, cols = np.nonzero(self.table == self.identity)
            inv = np.empty(self.order, dtype=np.int32)
            inv[rows] = cols
            self._inverse = inv
        return self._inverse

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = int(self.table[x, i])
            k += 1
        return k

    def element_orders(self) -> tuple:
        return tuple(sorted(self.element_order(i) for i in range(self.order)))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))


def cyclic_group(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n)


def group_from_permutations(perms) -> FiniteGroup:
    """Close a set of permutations (1-based image tuples) under
    composition and present the result as a FiniteGroup.  Labels are the
    permutations themselves, sorted."""
    gens = [tuple(p) for p in perms]
    if not gens:
        raise ValueError("need at least one permutation")
    n = len(gens[0])
    ident = tuple(range(1, n + 1))
    for p in gens:
        if sorted(p) != list(ident):
            raise ValueError(f"{p} is not a permutation of [1..{n}]")
    seen = {ident}
    frontier = deque([ident])
    while frontier:
        p = frontier.popleft()
        for g in gens:
            q = tuple(g[v - 1] for v in p)
            if q not in seen:
                seen.add(q)
                frontier.append(q)
    elements = sorted(seen)
    index = {p: i for i, p in enumerate(elements)}
    table = np.empty((len(elements), len(elements)), dtype=np.int32)
    for i, p in enumerate(elements):
        for j, q in enumerate(elements):
            table[i, j] = index[tuple(q[v - 1] for v in p)]
    return FiniteGroup(table, labels=elements)


def symmetric_group(n: int) -> FiniteGroup:
    if n == 1:
        return cyclic_group(1)
    cycle = tuple(list(range(2, n + 1)) + [1])
    swap = tuple([2, 1] + list(range(3, n + 1)))
    return group_from_permutations([cycle, swap])


def maximal_subgroup_at(m: TransformationMonoid, e: int) -> FiniteGroup:
    """The group of invertible elements of e M e, the largest group inside
    the monoid whose unit is the idempotent e."""
    if m.product(e, e) != e:
        raise ValueError(f"element {e} is not idempotent")
    local = sorted({m.product(m.product(e, x), e) for x in range(m.order)})
    local_set = set(local)
    units = []
    for x in local:
        if any(m.product(x, y) == e and m.product(y, x) == e for y in local_set):
            units.append(x)
    pos = {x: i for i, x in enumerate(units)}
    table = np.array(
        [[pos[m.product(x, y)] for y in units] for x in units], dtype=np.int32
    )
    return FiniteGroup(table, labels=units)


# ---------------------------------------------------------------------------
# subgroup enumeration

_subgroup_cache: dict = {}


def _closure(table: np.ndarray, seed: np.ndarray) -> np.ndarray:
    """Smallest set containing ``seed`` and closed under the table.  Inside
    a finite group this is the generated subgroup."""
    cur = np.unique(seed)
    while True:
        prods = np.unique(table[np.ix_(cur, cur)])
        merged = np.union1d(cur, prods)
        if merged.size == cur.size:
            return cur
        cur = merged


def all_subgroup_sets(g: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> list:
    """Every subgroup, as a sorted tuple of element indices.  Subgroups are
    generated by repeatedly joining with cyclic subgroups, which reaches
    everything because each subgroup is reachable from a maximal chain."""
    if g.order > cap:
        raise CapExceededError(
            f"subgroup enumeration cap {cap} exceeded by group of order {g.order}"
        )
    key = g.table.tobytes()
    cached = _subgroup_cache.get(key)
    if cached is not None:
        return cached
    table = g.table
    cyclics = {}
    for x in range(g.order):
        orbit = [g.identity]
        y = x
        while y != g.identity:
            orbit.append(y)
            y = int(table[y, x])
        arr = np.unique(np.array(orbit, dtype=np.int64))
        cyclics[arr.tobytes()] = arr
    cyclic_list = list(cyclics.values())
    found = dict(cyclics)
    queue = deque(cyclic_list)
    while queue:
        h = queue.popleft()
        h_set = set(h.tolist())
        for c in cyclic_list:
            if all(v in h_set for v in c.tolist()):
                continue
            k = _closure(table, np.concatenate([h, c]))
            kb = k.tobytes()
            if kb not in found:
                found[kb] = k
                queue.append(k)
    out = sorted((tuple(int(v) for v in arr) for arr in found.values()), key=lambda t: (len(t), t))
    _subgroup_cache[key] = out
    return out


def _conjugacy_classes(g: FiniteGroup, subgroup_sets) -> list:
    """Partition subgroup index-sets into conjugacy classes."""
    table, inv = g.table, g.inverse
    by_key = {}
    for sub in subgroup_sets:
        arr = np.array(sub, dtype=np.int64)
        seenclass = set()
        for x in range(g.order):
            conj = np.sort(table[table[x, arr], inv[x]])
            seenclass.add(tuple(int(v) for v in conj))
        rep = min(seenclass)
        by_key.setdefault(rep, seenclass)
    return [sorted(cls) for _, cls in sorted(by_key.items())]


def subgroup_from_indices(g: FiniteGroup, indices) -> FiniteGroup:
    """Present a subset of ``g`` closed under multiplication as its own
    group, with the parent's labels carried over."""
    indices = sorted(indices)
    pos = {x: i for i, x in enumerate(indices)}
    try:
        table = [[pos[int(g.table[x, y])] for y in indices] for x in indices]
    except KeyError:
        raise ValueError("index set is not closed under multiplication") from None
    return FiniteGroup(table, labels=[g.labels[x] for x in indices])


def subgroups(g: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> list:
    """One representative subgroup per conjugacy class, ordered by size
    then by element set."""
    classes = _conjugacy_classes(g, all_subgroup_sets(g, cap))
    reps = sorted((cls[0] for cls in classes), key=lambda t: (len(t), t))
    return [subgroup_from_indices(g, rep) for rep in reps]


def normal_subgroup_sets(g: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> list:
    """Index-sets of normal subgroups: the conjugacy classes of size 1."""
    classes = _conjugacy_classes(g, all_subgroup_sets(g, cap))
    return sorted((cls[0] for cls in classes if len(cls) == 1), key=lambda t: (len(t), t))


def normal_subgroups(g: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> list:
    return [subgroup_from_indices(g, s) for s in normal_subgroup_sets(g, cap)]


def quotient(g: FiniteGroup, n: FiniteGroup) -> FiniteGroup:
    """The quotient of ``g`` by a normal subgroup given as a FiniteGroup
    whose labels identify elements of ``g``."""
    label_pos = {lab: i for i, lab in enumerate(g.labels)}
    try:
        n_idx = sorted(label_pos[lab] for lab in n.labels)
    except KeyError:
        raise ValueError("subgroup labels do not identify elements of the parent") from None
    return _quotient_by_indices(g, n_idx)


def _quotient_by_indices(g: FiniteGroup, n_idx) -> FiniteGroup:
    arr = np.array(sorted(n_idx), dtype=np.int64)
    table, inv = g.table, g.inverse
    for x in range(g.order):
        if not np.array_equal(np.sort(table[table[x, arr], inv[x]]), arr):
            raise ValueError("subgroup is not normal in the parent")
    coset_of = {}
    cosets = []
    for x in range(g.order):
        if x in coset_of:
            continue
        members = tuple(int(v) for v in np.sort(table[x, arr]))
        for v in members:
            coset_of[v] = len(cosets)
        cosets.append(members)
    k = len(cosets)
    qtable = np.empty((k, k), dtype=np.int32)
    for a, mem_a in enumerate(cosets):
        for b, mem_b in enumerate(cosets):
            qtable[a, b] = coset_of[int(table[mem_a[0], mem_b[0]])]
    labels = [tuple(g.labels[v] for v in mem) for mem in cosets]
    return FiniteGroup(qtable, labels=labels)


def is_simple(g: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> bool:
    """Nontrivial with no proper nontrivial normal subgroup.  The trivial
    group is not simple."""
    if g.order < 2:
        return False
    return len(normal_subgroup_sets(g, cap)) == 2


# ---------------------------------------------------------------------------
# simple groups and composition factors


@dataclass(frozen=True, order=True)
class SimpleGroupId:
    """Identity of a simple group: its order together with the multiset of
    element orders.  This pair separates all simple groups of order up to
    20160, where the classical order collision is split by element orders.
    The name is display only."""

    order: int
    element_orders: tuple
    name: str | None = field(default=None, compare=False)

    def __str__(self) -> str:
        if self.name:
            return self.name
        eo = ",".join(map(str, self.element_orders))
        return f"simple_{self.order}[{eo}]"

    def to_json(self) -> dict:
        out = {"order": self.order}
        if self.name:
            out["name"] = self.name
        out["element_orders"] = list(self.element_orders)
        return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


_NONABELIAN_SIMPLE_NAMES = {
    60: "A_5",
    168: "PSL(2,7)",
    360: "A_6",
    504: "PSL(2,8)",
    660: "PSL(2,11)",
    1092: "PSL(2,13)",
    2448: "PSL(2,17)",
    2520: "A_7",
    3420: "PSL(2,19)",
    4080: "PSL(2,16)",
    5616: "PSL(3,3)",
    6048: "PSU(3,3)",
    6072: "PSL(2,23)",
    7800: "PSL(2,25)",
    7920: "M_11",
    9828: "PSL(2,27)",
    12180: "PSL(2,29)",
    14880: "PSL(2,31)",
}


def _simple_name(order: int, element_orders: tuple) -> str | None:
    if _is_prime(order):
        return f"C_{order}"
    if order == 20160:
        # The one order below 20161 shared by two simple groups; the
        # alternating one has elements of order 15, the linear one does not.
        return "A_8" if 15 in element_orders else "PSL(3,4)"
    return _NONABELIAN_SIMPLE_NAMES.get(order)


def _fingerprint_unchecked(g: FiniteGroup) -> SimpleGroupId:
    orders = g.element_orders()
    return SimpleGroupId(g.order, orders, _simple_name(g.order, orders))


def fingerprint(g: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> SimpleGroupId:
    """Fingerprint of a simple group; rejects non-simple input."""
    if not is_simple(g, cap):
        raise ValueError(f"group of order {g.order} is not simple")
    return _fingerprint_unchecked(g)


def _maximal_proper_normals(g: FiniteGroup, cap: int) -> list:
    """Proper normal subgroups maximal under inclusion; quotients by these
    are exactly the simple quotients."""
    normals = [s for s in normal_subgroup_sets(g, cap) if len(s) < g.order]
    sets = [set(s) for s in normals]
    out = []
    for i, s in enumerate(normals):
        if any(j != i and sets[i] < sets[j] for j in range(len(normals))):
            continue
        out.append(s)
    return out


def composition_factors(g: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP, rng=None) -> tuple:
    """Multiset (sorted tuple) of simple factor fingerprints of any maximal
    normal series.  The default tie-break takes the largest maximal normal
    subgroup, then the least element set; pass ``rng`` to randomize the
    choice (the result is the same multiset either way)."""
    if g.order == 1:
        return ()
    candidates = sorted(_maximal_proper_normals(g, cap), key=lambda s: (-len(s), s))
    chosen = candidates[0] if rng is None else candidates[rng.randrange(len(candidates))]
    top = _fingerprint_unchecked(_quotient_by_indices(g, chosen))
    rest = composition_factors(subgroup_from_indices(g, chosen), cap, rng)
    return tuple(sorted(rest + (top,)))


@dataclass(frozen=True)
class DivisorWitness:
    """Where a simple divisor was found: a subgroup K and a normal subgroup
    N of K with K/N of the right fingerprint.  Indices refer to monoid
    elements when the search started from a monoid (then ``idempotent`` is
    the unit of the maximal subgroup searched), otherwise to group
    elements."""

    subgroup: tuple
    normal: tuple
    idempotent: int | None = None
    idempotent_word: tuple | None = None

    def to_json(self) -> dict:
        out = {"subgroup": list(self.subgroup), "normal": list(self.normal)}
        if self.idempotent is not None:
            out["idempotent"] = self.idempotent
            out["idempotent_word"] = list(self.idempotent_word or ())
        return out


def _group_divisors_with_witnesses(g: FiniteGroup, cap: int) -> dict:
    """Simple divisors of a group: every composition factor of every
    subgroup.  Witnesses come from scanning (subgroup, maximal normal)
    pairs, which produce the same set; both routes are computed and
    compared as an internal consistency check."""
    reps = subgroups(g, cap)
    from_factors = set()
    for k in reps:
        from_factors.update(composition_factors(k, cap))
    witnesses: dict = {}
    for k in reps:
        k_indices = {i: lab for i, lab in enumerate(k.labels)}
        for n_set in sorted(_maximal_proper_normals(k, cap), key=lambda s: (len(s), s)):
            fp = _fingerprint_unchecked(_quotient_by_indices(k, n_set))
            if fp not in witnesses:
                witnesses[fp] = DivisorWitness(
                    subgroup=tuple(k_indices[i] for i in range(k.order)),
                    normal=tuple(k_indices[i] for i in n_set),
                )
    if set(witnesses) != from_factors:
        raise AssertionError("divisor witness scan disagrees with factor union")
    return witnesses


def simple_divisors_group(g: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> set:
    """All simple groups dividing ``g``: quotients of subgroups of ``g``."""
    return set(_group_divisors_with_witnesses(g, cap))


_monoid_divisor_cache: dict = {}


def divisor_witnesses_monoid(
    m: TransformationMonoid, cap: int = DEFAULT_SUBGROUP_CAP
) -> dict:
    """Simple divisors of a monoid with witnesses.  Every group inside a
    monoid sits in the maximal subgroup at its unit, so the union over
    idempotents of the group divisors is the whole divisor set."""
    key = (m.element_key(), cap)
    cached = _monoid_divisor_cache.get(key)
    if cached is not None:
        return cached
    out: dict = {}
    for e in idempotents(m):
        h = maximal_subgroup_at(m, e)
        for fp, w in sorted(
            _group_divisors_with_witnesses(h, cap).items(), key=lambda kv: kv[0]
        ):
            if fp not in out:
                out[fp] = DivisorWitness(
                    subgroup=w.subgroup,
                    normal=w.normal,
                    idempotent=e,
                    idempotent_word=m.witnesses[e],
                )
    out = dict(sorted(out.items()))
    _monoid_divisor_cache[key] = out
    return out


def simple_divisors_monoid(
    m: TransformationMonoid, cap: int = DEFAULT_SUBGROUP_CAP
) -> set:
    return set(divisor_witnesses_monoid(m, cap))


def divides(s: SimpleGroupId, m: TransformationMonoid,
            cap: int = DEFAULT_SUBGROUP_CAP) -> tuple:
    """Whether the simple group ``s`` divides the monoid, with a witness."""
    w = divisor_witnesses_monoid(m, cap).get(s)
    return (w is not None, w)


# ---------------------------------------------------------------------------
# brute-force oracle route

def group_subsemigroups(m: TransformationMonoid, max_order: int = 64) -> list:
    """Every subset of the monoid that is closed under the product and
    forms a group, as sorted index tuples.  Grown from idempotent
    singletons one generator at a time; used as an independent oracle for
    the divisor computation."""
    if m.order > max_order:
        raise CapExceededError(
            f"group subsemigroup enumeration capped at monoid order {max_order}"
        )
    table = m.table

    def is_group(indices) -> bool:
        members = list(indices)
        member_set = set(members)
        units = [u for u in members
                 if all(int(table[u, x]) == x and int(table[x, u]) == x for x in members)]
        if len(units) != 1:
            return False
        u = units[0]
        return all(
            any(int(table[x, y]) == u and int(table[y, x]) == u for y in members)
            for x in members
        )

    seeds = [(e,) for e in idempotents(m)]
    found = {s: True for s in seeds}
    queue = deque(seeds)
    while queue:
        h = queue.popleft()
        h_set = set(h)
        for x in range(m.order):
            if x in h_set:
                continue
            k = _closure(table, np.array(sorted(h_set | {x}), dtype=np.int64))
            kt = tuple(int(v) for v in k)
            if kt in found:
                continue
            if is_group(kt):
                found[kt] = True
                queue.append(kt)
    return sorted(found, key=lambda t: (len(t), t))


def group_from_monoid_indices(m: TransformationMonoid, indices) -> FiniteGroup:
    """Present a group subsemigroup of the monoid as a FiniteGroup with
    monoid element indices as labels."""
    indices = sorted(indices)
    pos = {x: i for i, x in enumerate(indices)}
    try:
        table = [[pos[m.product(x, y)] for y in indices] for x in indices]
    except KeyError:
        raise ValueError("index set is not closed under the monoid product") from None
    return FiniteGroup(table, labels=indices)


def simple_divisors_monoid_bruteforce(m: TransformationMonoid) -> set:
    """Oracle: fingerprints of all simple quotients of all group
    subsemigroups, enumerated directly rather than through maximal
    subgroups."""
    out = set()
    for indices in group_subsemigroups(m):
        k = group_from_monoid_indices(m, indices)
        for n_set in normal_subgroup_sets(k):
            q = _quotient_by_indices(k, n_set)
            if q.order >= 2 and len(normal_subgroup_sets(q)) == 2:
                out.add(_fingerprint_unchecked(q))
    return out


# ---------------------------------------------------------------------------
# report


def algebra_report(m: TransformationMonoid, cap: int = DEFAULT_SUBGROUP_CAP) -> dict:
    """JSON-ready summary: order, idempotents, maximal subgroup orders and
    the sorted simple divisors."""
    idem = idempotents(m)
    return {
        "order": m.order,
        "idempotents": len(idem),
        "maximal_subgroup_orders": [maximal_subgroup_at(m, e).order for e in idem],
        "simple_divisors": [
            fp.to_json() for fp in sorted(simple_divisors_monoid(m, cap))
        ],
    }
