import itertools
import random

import pytest

from fpal.cpo_model import (
    Interpretation,
    PosetModel,
    TableFn,
    chain,
    check_equation,
    count_monotone,
    enumerate_monotone,
    eval_morphism,
    interpretation_count,
    lfp,
    random_monotone,
)
from fpal.errors import ThresholdExceededError
from fpal.identities import power_identity
from fpal.term import (
    Comp,
    Dagger,
    Equation,
    Proj,
    Sym,
    Symbol,
    Tup,
    base_from_function,
    dagger,
    identity,
    power,
    tup,
)

C2 = chain(2)
C3 = chain(3)


def brute_force_monotone_count(poset: PosetModel, arity: int) -> int:
    """Oracle: try every table and keep the monotone ones."""
    size = poset.size
    total = size ** arity
    points = list(itertools.product(range(size), repeat=arity))
    le = [
        [all(poset.leq[a][b] for a, b in zip(x, y)) for y in points]
        for x in points
    ]
    count = 0
    for table in itertools.product(range(size), repeat=total):
        if all(
            poset.leq[table[i]][table[j]]
            for i in range(total)
            for j in range(total)
            if le[i][j]
        ):
            count += 1
    return count


def test_chain_structure():
    assert C2.size == 2
    assert C2.bottom == 0
    assert C2.height() == 2
    assert C3.leq[0][2] and not C3.leq[2][0]
    with pytest.raises(ValueError):
        chain(0)


def test_poset_validation():
    with pytest.raises(ValueError):
        PosetModel(2, ((True, False), (False, True)), 0, "antichain")  # no bottom


def test_monotone_counts_on_chain2():
    assert count_monotone(C2, 1, 10**6) == 3
    assert count_monotone(C2, 2, 10**6) == 6
    assert count_monotone(C2, 3, 10**6) == 20
    assert count_monotone(C2, 4, 10**6) == 168


def test_monotone_counts_match_bruteforce():
    for poset, arity in [(C2, 1), (C2, 2), (C3, 1), (C2, 3)]:
        expected = brute_force_monotone_count(poset, arity)
        assert count_monotone(poset, arity, 10**6) == expected


def test_enumerate_monotone_yields_monotone_unique():
    seen = set()
    for fn in enumerate_monotone(C3, 2):
        assert fn.is_monotone()
        key = tuple(fn.table)
        assert key not in seen
        seen.add(key)
    assert len(seen) == count_monotone(C3, 2, 10**6)


def test_enumerate_monotone_limit():
    with pytest.raises(ThresholdExceededError):
        list(enumerate_monotone(C2, 3, limit=5))


def test_random_monotone_is_monotone():
    rng = random.Random(99)
    for _ in range(40):
        arity = rng.randint(1, 4)
        assert random_monotone(C3, arity, rng).is_monotone()


def test_tablefn_call_and_encoding():
    # binary meet on the 2-chain
    meet = TableFn(C2, 2, 1, [0, 0, 0, 1])
    assert meet((0, 1)) == (0,)
    assert meet((1, 1)) == (1,)
    assert meet.is_monotone()
    not_mono = TableFn(C2, 1, 1, [1, 0])
    assert not not_mono.is_monotone()


def test_lfp_is_least_fixed_point():
    for fn in enumerate_monotone(C3, 1):
        x = lfp(fn)
        assert fn((x,)) == (x,)
        fixed = [v for v in range(C3.size) if fn((v,)) == (v,)]
        assert x == min(fixed)


def test_lfp_with_parameters():
    # f(x, y) = y has least fixed point y
    f = TableFn(C3, 2, 1, [c for _ in range(3) for c in range(3)])
    for y in range(3):
        assert lfp(f, (y,)) == y


def test_eval_projection_and_tuple():
    interp = Interpretation(C2, {})
    swap = eval_morphism(base_from_function([2, 1], 2), interp)
    assert swap((0, 1)) == (1, 0)
    assert swap((1, 0)) == (0, 1)
    ident = eval_morphism(identity(3), interp)
    assert ident((1, 0, 1)) == (1, 0, 1)


def test_eval_of_bang_is_empty_output():
    interp = Interpretation(C2, {})
    fn = eval_morphism(Tup((), 2), interp)
    assert fn.out_arity == 0
    assert fn((1, 1)) == ()


def test_eval_composition_associates():
    interp = Interpretation(C3, {})
    rho = base_from_function([2, 1], 2)
    sigma = base_from_function([1, 1], 2)
    lhs = eval_morphism(Comp(sigma, rho), interp)
    for args in itertools.product(range(3), repeat=2):
        step = eval_morphism(rho, interp)(args)
        assert lhs(args) == eval_morphism(sigma, interp)(step)


def test_eval_requires_matching_symbol_arity():
    f = TableFn(C2, 1, 1, [0, 1])
    interp = Interpretation(C2, {"f": f})
    with pytest.raises(ValueError):
        eval_morphism(Sym(Symbol("f", 2)), interp)
    with pytest.raises(ValueError):
        eval_morphism(Sym(Symbol("g", 1)), interp)


def test_eval_monotone_closure():
    # composite terms evaluated over monotone symbols stay monotone
    rng = random.Random(5)
    f = random_monotone(C3, 2, rng)
    g = random_monotone(C3, 1, rng)
    interp = Interpretation(C3, {"f": f, "g": g})
    term = Comp(
        Sym(Symbol("g", 1)),
        Tup((Dagger(Sym(Symbol("f", 2)), 1),), 1),
    )
    assert eval_morphism(term, interp).is_monotone()


def test_dagger_eval_matches_pointwise_lfp():
    fsym = Symbol("f", 2)
    for table in enumerate_monotone(C3, 2):
        interp = Interpretation(C3, {"f": table})
        fn = eval_morphism(Dagger(Sym(fsym), 1), interp)
        for y in range(3):
            assert fn((y,)) == (lfp_scan(table, y),)


def lfp_scan(table: TableFn, y: int) -> int:
    x = 0
    for _ in range(10):
        nxt = table((x, y))[0]
        if nxt == x:
            return x
        x = nxt
    raise AssertionError("no fixed point reached")


def test_power_eval_iterates_body():
    fsym = Symbol("f", 2)
    # f ignores its parameter and bumps x by one (clamped at the top)
    f = TableFn(C3, 2, 1, [min(x + 1, 2) for x in range(3) for _ in range(3)])
    interp = Interpretation(C3, {"f": f})
    p2 = eval_morphism(power(Sym(fsym), 2), interp)
    for x in range(3):
        assert p2((x, 0)) == (min(x + 2, 2),)


def test_interpretation_count_multiplies_symbol_pools():
    f = Sym(Symbol("f", 1))
    g = Sym(Symbol("g", 1))
    eq = Equation.of("two", Comp(f, Tup((g,), 1)), Comp(g, Tup((f,), 1)))
    assert interpretation_count(eq, C2, 10**6) == 9


def test_check_modes_and_determinism():
    eq = power_identity(2, 1)
    r1 = check_equation(eq, C2, mode="exhaustive")
    assert r1.holds and r1.strategy == "exhaustive" and r1.seed is None
    r2 = check_equation(eq, C2, mode="sampled", seed=5, samples=50)
    r3 = check_equation(eq, C2, mode="sampled", seed=5, samples=50)
    assert r2.to_json() == r3.to_json()
    assert r2.seed == 5
    assert r2.refutation_only and r1.refutation_only


def test_check_auto_respects_threshold():
    eq = power_identity(2, 1)
    r = check_equation(eq, C2, mode="auto", threshold=2)
    assert r.strategy == "sampled"
    with pytest.raises(ThresholdExceededError):
        check_equation(eq, C2, mode="exhaustive", threshold=2)
    with pytest.raises(ValueError):
        check_equation(eq, C2, mode="telepathy")


# -- fault injections: corrupted equations must be refuted ---------------------


def corrupted_fixed_point() -> Equation:
    f = Sym(Symbol("f", 2))
    good_lhs = dagger(f, 1)
    swapped = Comp(f, Tup((Proj(1, 1), dagger(f, 1)), 1))
    return Equation.of("corrupt: swapped recursion args", good_lhs, swapped)


def corrupted_left_zero() -> Equation:
    f = Sym(Symbol("f", 1))
    lhs = dagger(Comp(f, Tup((Proj(1, 2),), 2)), 1)  # reads the state slot
    return Equation.of("corrupt: feedback on the wrong slot", lhs, f)


def corrupted_drop_params() -> Equation:
    f = Sym(Symbol("f", 2))
    lhs = dagger(Comp(f, base_from_function([1, 2], 3)), 1)
    rhs = Comp(dagger(f, 1), Proj(2, 2))  # projects the wrong parameter
    return Equation.of("corrupt: wrong parameter kept", lhs, rhs)


def corrupted_double_dagger() -> Equation:
    f = Sym(Symbol("f", 3))
    lhs = dagger(dagger(f, 1), 1)
    rhs = dagger(Comp(f, base_from_function([1, 2, 2], 2)), 1)
    return Equation.of("corrupt: diagonal folds the parameter", lhs, rhs)


CORRUPTED = [
    corrupted_fixed_point,
    corrupted_left_zero,
    corrupted_drop_params,
    corrupted_double_dagger,
]


@pytest.mark.parametrize("make", CORRUPTED)
def test_fault_injection_produces_counterexample(make):
    eq = make()
    r = check_equation(eq, C2, mode="exhaustive")
    assert not r.holds
    cex = r.counterexample
    assert cex is not None
    assert cex["lhs"] != cex["rhs"]
    assert set(cex["symbols"]) == {s.name for s in eq.symbols}


def test_counterexample_is_replayable():
    eq = corrupted_left_zero()
    r = check_equation(eq, C2, mode="exhaustive")
    tables = {
        name: TableFn(C2, next(s.in_arity for s in eq.symbols if s.name == name),
                      1, values)
        for name, values in r.counterexample["symbols"].items()
    }
    interp = Interpretation(C2, tables)
    lhs = eval_morphism(eq.lhs, interp)
    rhs = eval_morphism(eq.rhs, interp)
    args = tuple(r.counterexample["input"])
    assert lhs(args) == tuple(r.counterexample["lhs"])
    assert rhs(args) == tuple(r.counterexample["rhs"])
    assert lhs(args) != rhs(args)


def test_sampled_check_finds_injected_fault():
    eq = corrupted_fixed_point()
    r = check_equation(eq, C2, mode="sampled", seed=11, samples=400)
    assert not r.holds
    assert r.counterexample is not None
