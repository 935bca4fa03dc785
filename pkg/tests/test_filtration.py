from itertools import product

import pytest

from weylbs.filtration import (bernstein_count, diff_power_membership,
                               differential_signature_estimate, estimate_dim_e, filtration_stats,
                               r_monomial_count)
from weylbs.rings import RingDescriptor
from weylbs.weyl import WeylElement, apply

P1 = RingDescriptor.polynomial(("x",))
P2 = RingDescriptor.polynomial(("x", "y"))
V2 = RingDescriptor.veronese(2)
S22 = RingDescriptor.segre(2, 2)


def brute_count(desc, w, i):
    n = desc.nvars
    total = 0
    for a in product(range(i + 1), repeat=n):
        for b in product(range(i + 1), repeat=n):
            if sum(a) - sum(b) + w * sum(b) > i:
                continue
            if desc.kind == "veronese" and (sum(a) - sum(b)) % desc.d:
                continue
            if desc.kind == "segre" and (a[0] + a[1] - b[0] - b[1]) != (a[2] + a[3] - b[2] - b[3]):
                continue
            total += 1
    return total


def test_count_examples():
    assert bernstein_count(P1, 2, 2) == 6
    assert bernstein_count(V2, 3, 0) == 1


@pytest.mark.parametrize("desc,w", [(P1, 2), (P2, 3), (V2, 3), (V2, 4), (S22, 3)])
def test_count_against_enumeration(desc, w):
    for i in range(7):
        assert bernstein_count(desc, w, i) == brute_count(desc, w, i)


def test_slope_must_exceed_generator_degree():
    with pytest.raises(ValueError):
        bernstein_count(V2, 2, 3)


def test_counts_monotone_and_b_zero_slice():
    for desc, w in ((P2, 2), (V2, 3), (S22, 3)):
        counts = [bernstein_count(desc, w, i) for i in range(40)]
        assert counts == sorted(counts)
        for i in range(25):
            assert bernstein_count(desc, w, i, b_zero=True) == r_monomial_count(desc, i)


def test_dim_estimates():
    assert abs(filtration_stats(P1, 2, 200).fitted_dim - 2) < 0.15
    assert abs(filtration_stats(P2, 2, 200).fitted_dim - 4) < 0.15
    d3 = filtration_stats(V2, 3, 200).fitted_dim
    d4 = filtration_stats(V2, 4, 200).fitted_dim
    assert abs(d3 - 4) < 0.2 and abs(d3 - d4) < 0.2
    assert filtration_stats(S22, 3, 60).upper_bound


def test_constant_counts_have_dimension_zero():
    dim, _ = estimate_dim_e([(i, 7) for i in range(60)])
    assert abs(dim) < 1e-9
    with pytest.raises(ValueError):
        estimate_dim_e([(1, 1), (2, 2)])


def brute_membership(m, n, desc, reach=3):
    """Enumerate every admissible x^a d^b of order <= n - 1 with bounded exponents."""
    nv = desc.nvars
    zero = (0,) * nv
    for b in product(range(n), repeat=nv):
        if sum(b) > n - 1:
            continue
        for a in product(range(sum(m) + reach), repeat=nv):
            if (sum(a) - sum(b)) % desc.d:
                continue
            image = apply(WeylElement.monomial(nv, a, b), m)
            if zero in image:
                return False
    return True


def test_diff_power_membership_against_enumeration():
    mons = [m for m in product(range(7), repeat=2) if sum(m) % 2 == 0 and sum(m) <= 8]
    for n in range(0, 9):
        for m in mons:
            expected = True if n == 0 else brute_membership(m, n, V2)
            assert diff_power_membership(m, n, V2) == expected, (m, n)


def test_diff_power_examples():
    assert diff_power_membership((2, 0), 2, V2)
    assert not diff_power_membership((2, 2), 5, V2)
    for m in ((0, 0), (1, 1), (4, 0)):
        assert diff_power_membership(m, 1, V2) == (sum(m) > 0)


def test_signature_tables():
    tab = differential_signature_estimate(P1, 12)
    assert tab.entries == [(n, n) for n in range(13)]
    assert tab.signature_estimate == 1
    v = differential_signature_estimate(V2, 60)
    assert v.entries[0] == (0, 0)
    cols = [c for _, c in v.entries]
    assert cols == sorted(cols) and v.signature_estimate > 0
