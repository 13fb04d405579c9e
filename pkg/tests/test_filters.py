"""Filter-base convergence machinery and the four-clause characterizations."""

import random

import pytest

from topolab.core import TopologyError, build_space, discrete
from topolab.filters import (
    FilterBase,
    antichain_filter_bases,
    check_t41,
    check_t43,
    is_strictly_finer,
    maximal_filter_bases,
    pre_theta_accumulates,
    pre_theta_converges,
    principal_filter_bases,
)

from conftest import all_spaces


def test_filter_base_validation(s2):
    with pytest.raises(TopologyError):
        FilterBase(s2, ())
    with pytest.raises(TopologyError):
        FilterBase(s2, (0,))
    with pytest.raises(TopologyError):
        FilterBase(s2, (0b01, 0b10))  # no member below the intersection
    fb = FilterBase(s2, (0b11, 0b01))
    assert fb.minimum() == 0b01


def test_convergence_examples(s2, d2):
    fb = FilterBase(s2, (0b01,))
    assert pre_theta_converges(fb, 0)
    assert pre_theta_converges(fb, 1)
    fb_d = FilterBase(d2, (0b01,))
    assert not pre_theta_converges(fb_d, 1)
    assert not pre_theta_accumulates(fb_d, 1)


def test_accumulation_example(s2):
    fb = FilterBase(s2, (0b01,))
    assert pre_theta_accumulates(fb, 1)


def test_convergence_implies_accumulation():
    for n in (1, 2, 3):
        for sp in all_spaces(n):
            for fb in principal_filter_bases(sp):
                for x in range(sp.n):
                    if pre_theta_converges(fb, x):
                        assert pre_theta_accumulates(fb, x)


def test_maximal_filter_bases(s2):
    bases = maximal_filter_bases(s2)
    assert [fb.members for fb in bases] == [(0b01,), (0b10,)]
    assert len(maximal_filter_bases(build_space(1, []))) == 1
    assert len(maximal_filter_bases(discrete(3))) == 3


def test_maximal_bases_admit_no_finer():
    for n in (1, 2, 3):
        for sp in all_spaces(n):
            for mb in maximal_filter_bases(sp):
                for fb in principal_filter_bases(sp):
                    assert not is_strictly_finer(fb, mb)


def test_antichain_bases_cover_principal_filters(s2):
    mins = {fb.minimum() for fb in antichain_filter_bases(s2)}
    assert mins == {0b01, 0b10, 0b11}


def test_t41_examples(s2, i2):
    assert check_t41(s2) == (True, True, True, True)
    assert check_t41(i2) == (True, True, True, True)
    assert check_t41(discrete(3)) == (True, True, True, True)


def test_t41_equivalence_audit_small():
    for n in (1, 2, 3):
        for sp in all_spaces(n):
            a, b, c, d = check_t41(sp)
            assert a == b == c == d


def test_t43_examples(s2):
    assert check_t43(s2, 0b10) == (True, True, True, True)
    assert check_t43(s2, 0b00) == (True, True, True, True)
    assert check_t43(discrete(3), 0b011) == (True, True, True, True)


def test_t43_equivalence_audit_small():
    for n in (1, 2, 3):
        for sp in all_spaces(n):
            for s in range(sp.full + 1):
                a, b, c, d = check_t43(sp, s)
                assert a == b == c == d


def test_t41_with_sampling_seeded():
    sp = build_space(4, [0b0001, 0b0010])
    rng = random.Random(11)
    assert check_t41(sp, rng, samples=500) == (True, True, True, True)
