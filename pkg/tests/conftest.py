"""Shared oracle fixtures.

The small complexity tables are built once per session; everything else
is cheap enough to construct inline. Builds below 2n intentionally carry
NOT_FOUND entries, so warnings are silenced where that is the point.
"""

from __future__ import annotations

import warnings

import pytest

from kextract.bits import EMPTY, all_strings
from kextract.oracle import build_complexity_table


@pytest.fixture(scope="session")
def oracle_n2_all():
    """2-bit targets, lambda plus every 2-bit condition, l_max=6."""
    return build_complexity_table(2, [EMPTY] + all_strings(2), l_max=6)


@pytest.fixture(scope="session")
def oracle_n4_all():
    """4-bit targets, lambda plus every 4-bit condition, l_max=10."""
    return build_complexity_table(4, [EMPTY] + all_strings(4), l_max=10)


@pytest.fixture(scope="session")
def oracle_n5_all():
    """5-bit targets, lambda plus every 5-bit condition, l_max=10."""
    return build_complexity_table(5, [EMPTY] + all_strings(5), l_max=10)


@pytest.fixture(scope="session")
def oracle_n8_pairs():
    """8-bit targets under lambda, for 4-bit pair concatenations."""
    return build_complexity_table(8, [EMPTY], l_max=16)


@pytest.fixture(scope="session")
def oracle_m1_out():
    """1-bit outputs under lambda."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_complexity_table(1, [EMPTY], l_max=4)


@pytest.fixture(scope="session")
def oracle_m2_out():
    """2-bit outputs under lambda."""
    return build_complexity_table(2, [EMPTY], l_max=4)


@pytest.fixture(scope="session")
def oracle_m2_cond4():
    """2-bit targets conditioned on lambda and every 4-bit string."""
    return build_complexity_table(2, [EMPTY] + all_strings(4), l_max=6)


@pytest.fixture(scope="session")
def oracle_m6_out():
    """6-bit outputs under lambda."""
    return build_complexity_table(6, [EMPTY], l_max=12)
