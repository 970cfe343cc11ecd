import math

import numpy as np
import pytest

from kextract.distributions import (
    Distribution,
    FlatSource,
    dist_from_json,
    dist_to_json,
    dist_to_min_entropy,
    flatten_top,
    heavy_set,
    min_entropy,
    one_sided_distance,
    push_forward,
    statistical_distance,
)
from kextract.tables import gen_constant, gen_inner_product


def random_distribution(rng: np.random.Generator, n: int) -> Distribution:
    return Distribution(n, rng.dirichlet(np.ones(1 << n)))


# ----------------------------------------------------------- invariants


def test_distribution_validation():
    with pytest.raises(ValueError):
        Distribution(1, np.array([0.7, 0.2]))
    with pytest.raises(ValueError):
        Distribution(1, np.array([1.2, -0.2]))
    with pytest.raises(ValueError):
        Distribution(2, np.array([0.5, 0.5]))


def test_distribution_is_read_only():
    d = Distribution.uniform(2)
    with pytest.raises(ValueError):
        d.mass[0] = 1.0
    src = np.array([0.5, 0.5])
    d = Distribution(1, src)
    src[0] = 0.9  # the constructor must have copied
    assert d.mass[0] == 0.5


def test_flat_source():
    f = FlatSource(2, (3, 1, 3))
    assert f.support == (1, 3)
    assert f.size == 2
    assert list(f.to_distribution().mass) == [0.0, 0.5, 0.0, 0.5]
    with pytest.raises(ValueError):
        FlatSource(2, ())
    with pytest.raises(ValueError):
        FlatSource(2, (4,))


# ---------------------------------------------------------- min-entropy


def test_min_entropy_fixtures():
    assert min_entropy(Distribution.uniform(2)) == 2.0
    assert min_entropy(Distribution.point(3, 5)) == 0.0
    d = Distribution(2, np.array([0.5, 0.25, 0.125, 0.125]))
    assert min_entropy(d) == 1.0


# ------------------------------------------------------------- distance


def test_distance_fixtures():
    u1 = Distribution.uniform(1)
    assert statistical_distance(u1, u1) == 0.0
    assert statistical_distance(Distribution.point(1, 0), u1) == 0.5
    a = Distribution(1, np.array([1.0, 0.0]))
    b = Distribution(1, np.array([0.0, 1.0]))
    assert statistical_distance(a, b) == 1.0
    with pytest.raises(ValueError):
        statistical_distance(u1, Distribution.uniform(2))


def test_half_l1_equals_one_sided():
    """Half the L1 distance equals the total overshoot, exactly."""
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.integers(1, 7))
        a = random_distribution(rng, n)
        b = random_distribution(rng, n)
        sd = statistical_distance(a, b)
        assert abs(sd - one_sided_distance(a, b)) <= 1e-12
        assert abs(sd - one_sided_distance(b, a)) <= 1e-12


def test_distance_is_a_metric():
    rng = np.random.default_rng(8)
    for _ in range(200):
        a = random_distribution(rng, 3)
        b = random_distribution(rng, 3)
        c = random_distribution(rng, 3)
        ab = statistical_distance(a, b)
        assert abs(ab - statistical_distance(b, a)) <= 1e-12
        assert ab <= statistical_distance(a, c) + statistical_distance(c, b) + 1e-9
        assert statistical_distance(a, a) == 0.0


# ------------------------------------------------------------ heavy set


def test_heavy_set_fixtures():
    assert heavy_set(Distribution.uniform(2), 2, 2.0) == set()
    assert heavy_set(Distribution.point(2, 0), 2, 2.0) == {0}
    rng = np.random.default_rng(9)
    d = random_distribution(rng, 3)
    assert heavy_set(d, 3, float(1 << 3)) == set()  # threshold is 1
    with pytest.raises(ValueError):
        heavy_set(d, 2, 0.0)


def test_heavy_set_is_strict():
    d = Distribution(1, np.array([0.5, 0.5]))
    assert heavy_set(d, 1, 1.0) == set()  # mass == t*2^-k does not count


def test_heavy_mass_bound():
    """Lemma part 1: mass(HEAVY_{k,t}) <= 1/t + dist_to_min_entropy(d,k)."""
    rng = np.random.default_rng(10)
    for _ in range(500):
        n = int(rng.integers(1, 7))
        d = random_distribution(rng, n)
        k = int(rng.integers(0, n + 1))
        eps = dist_to_min_entropy(d, k)
        for t in (1.0, 1.5, 2.0, 4.0):
            mass = float(d.mass[sorted(heavy_set(d, k, t))].sum())
            assert mass <= 1.0 / t + eps + 1e-9


# ----------------------------------------------------------- flatten_top


def test_flatten_preserves_mass_and_support_order():
    d = Distribution(2, np.array([0.4, 0.3, 0.2, 0.1]))
    flat, ell = flatten_top(d, 2)
    avg = (0.4 + 0.3) / 2
    assert list(flat.mass) == [avg, avg, 0.2, 0.1]
    assert ell == -math.log2(avg)
    with pytest.raises(ValueError):
        flatten_top(d, 0)
    with pytest.raises(ValueError):
        flatten_top(d, 5)


def test_flatten_breaks_ties_toward_smaller_values():
    d = Distribution(2, np.array([0.25, 0.25, 0.25, 0.25]))
    flat, _ = flatten_top(d, 1)
    assert list(flat.mass) == [0.25, 0.25, 0.25, 0.25]
    d = Distribution(2, np.array([0.2, 0.3, 0.3, 0.2]))
    flat, _ = flatten_top(d, 3)
    # the three heaviest are values 1, 2, then tie 0-vs-3 -> 0
    assert flat.mass[3] == 0.2
    assert flat.mass[0] == flat.mass[1] == flat.mass[2]
    assert abs(flat.mass[0] - (0.3 + 0.3 + 0.2) / 3) <= 1e-15


def test_flatten_is_idempotent_on_its_output():
    rng = np.random.default_rng(11)
    for _ in range(50):
        d = random_distribution(rng, 3)
        k = int(rng.integers(1, 9))
        flat, _ = flatten_top(d, k)
        again, _ = flatten_top(flat, k)
        assert np.allclose(flat.mass, again.mass, atol=1e-15)


def test_flatten_conclusion():
    """Lemma part 2: top-K mass eps gives distance <= eps and
    min-entropy >= log2(K/eps)."""
    rng = np.random.default_rng(12)
    for _ in range(500):
        n = int(rng.integers(1, 7))
        d = random_distribution(rng, n)
        top_k = int(rng.integers(1, (1 << n) + 1))
        eps = float(np.sort(d.mass)[::-1][:top_k].sum())
        flat, _ = flatten_top(d, top_k)
        assert statistical_distance(d, flat) <= eps + 1e-9
        assert min_entropy(flat) >= math.log2(top_k / eps) - 1e-9


# --------------------------------------------------- dist_to_min_entropy


def test_dist_to_min_entropy_fixtures():
    assert dist_to_min_entropy(Distribution.uniform(3), 3) == 0.0
    assert dist_to_min_entropy(Distribution.point(1, 0), 1) == 0.5
    d = Distribution(2, np.array([0.5, 0.25, 0.25, 0.0]))
    assert dist_to_min_entropy(d, 2) == 0.25
    with pytest.raises(ValueError):
        dist_to_min_entropy(d, 3)
    with pytest.raises(ValueError):
        dist_to_min_entropy(d, -1)


def test_dist_to_min_entropy_zero_iff_entropy_met():
    rng = np.random.default_rng(13)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        d = random_distribution(rng, n)
        k = int(rng.integers(0, n + 1))
        eps = dist_to_min_entropy(d, k)
        if min_entropy(d) >= k:
            assert eps <= 1e-12
        else:
            assert eps > 0.0


def test_dist_to_min_entropy_against_grid_search():
    """n=1 brute force: scan all distributions on a 1/64 grid whose
    min-entropy clears k=1, take the closest."""
    candidates = [
        Distribution(1, np.array([a / 64, 1 - a / 64]))
        for a in range(0, 65)
        if max(a / 64, 1 - a / 64) <= 0.5
    ]
    for a in range(65):
        d = Distribution(1, np.array([a / 64, 1 - a / 64]))
        formula = dist_to_min_entropy(d, 1)
        brute = min(statistical_distance(d, c) for c in candidates)
        # the grid contains the exact optimum here, so they agree
        assert abs(formula - brute) <= 1e-12


def test_dist_to_min_entropy_is_achievable():
    """The clip formula is witnessed: some distribution at min-entropy k
    sits exactly at that distance."""
    rng = np.random.default_rng(14)
    for _ in range(100):
        n = int(rng.integers(1, 6))
        d = random_distribution(rng, n)
        k = int(rng.integers(0, n + 1))
        cap = 2.0 ** (-k)
        eps = dist_to_min_entropy(d, k)
        clipped = np.minimum(d.mass, cap)
        slack = cap - clipped
        total = float(slack.sum())
        if total > 0:
            witness = clipped + slack * (eps / total)
        else:
            witness = clipped
        w = Distribution(n, witness)
        assert min_entropy(w) >= k - 1e-9
        assert abs(statistical_distance(d, w) - eps) <= 1e-9


# ----------------------------------------------------------- push-forward


def test_push_forward_constant_table():
    t = gen_constant(2, 2, 3)
    x = FlatSource(2, (0, 1, 2, 3))
    d = push_forward(t, x, x)
    assert list(d.mass) == [0.0, 0.0, 0.0, 1.0]


def test_push_forward_inner_product_fixture():
    t = gen_inner_product(2)
    s = FlatSource(2, (1, 2))
    d = push_forward(t, s, s)
    assert list(d.mass) == [0.5, 0.5]


def test_push_forward_full_support_counts():
    t = gen_inner_product(2)
    full = FlatSource(2, tuple(range(4)))
    d = push_forward(t, full, full)
    ones = int(t.colors.sum())
    assert d.mass[1] == ones / 16
    assert d.mass[0] == (16 - ones) / 16


def test_push_forward_dimension_check():
    t = gen_inner_product(2)
    with pytest.raises(ValueError):
        push_forward(t, FlatSource(3, (0,)), FlatSource(2, (0,)))


# ------------------------------------------------------------------ json


def test_json_round_trip_is_exact():
    rng = np.random.default_rng(15)
    for _ in range(20):
        d = random_distribution(rng, 4)
        doc = dist_to_json(d)
        assert all(isinstance(s, str) for s in doc["mass"])
        back = dist_from_json(doc)
        assert back.n == d.n
        assert (back.mass == d.mass).all()  # bit-exact, not just close
