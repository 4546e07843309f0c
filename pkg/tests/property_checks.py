"""Property checks shared by the hypothesis suite and the acceptance run.

Each check raises AssertionError on violation.
"""
from itertools import permutations

from treeshift.core import Signature, make_basic_set, relabel, swap_children
from treeshift.counting import count_blocks
from treeshift.snre import derive_snre, log_context, snre_to_basic_set

SIGNATURES = [Signature(2, 2), Signature(2, 3), Signature(3, 2)]
# heights kept small enough for exact integers on every signature
N_MAX = {(2, 2): 8, (2, 3): 7, (3, 2): 6}


def subset(sig, bits):
    blocks = sig.all_two_blocks()
    return make_basic_set(sig, [b for j, b in enumerate(blocks) if bits >> j & 1])


def monomial_system(sig, choice):
    """Per symbol, a realizable {multiset: coefficient} built from ``choice(n) -> int in [0, n)``."""
    multisets = sorted({tuple(sorted(t)) for t in sig.child_tuples()})
    system = {}
    for s in sig.symbols:
        mons = {}
        for m in multisets:
            n_orders = len(set(permutations(m)))
            c = choice(n_orders + 1)
            if c:
                mons[m] = c
        system[s] = mons
    return system


def check_round_trip(sig, system):
    b = snre_to_basic_set(system, sig)
    got = derive_snre(b).monomials()
    assert got == [dict(sorted(system[s].items())) for s in sig.symbols]
    # and from the basic-set side: convert(derive(b)) has the same monomials
    assert derive_snre(snre_to_basic_set(derive_snre(b))).monomials() == got


def check_monotone(small, large, essential):
    n_max = N_MAX[(small.d, small.k)]
    a = count_blocks(small, n_max, essential=essential)
    b = count_blocks(large, n_max, essential=essential)
    for n in a.heights():
        assert all(x <= y for x, y in zip(a[n], b[n])), n


def check_symmetry(b, perm, child_order):
    n_max = N_MAX[(b.d, b.k)]
    base = count_blocks(b, n_max)
    image = count_blocks(relabel(b, perm), n_max)
    for n in base.heights():
        for i, c in enumerate(base[n], start=1):
            assert image[n][perm[i - 1] - 1] == c
    swapped = count_blocks(swap_children(b, child_order), n_max)
    assert swapped.values == base.values


def check_exact_vs_log(b, rel=1e-9):
    n_max = N_MAX[(b.d, b.k)] + 2
    exact = count_blocks(b, n_max)
    logs = count_blocks(b, n_max, backend="log")
    ctx = log_context(logs.precision)
    for n in exact.heights():
        for c, lc in zip(exact[n], logs[n]):
            if c == 0:
                assert lc == ctx.ninf
            else:
                # |c_log / c - 1| <= rel
                assert abs(ctx.expm1(lc - ctx.log(c))) <= rel

