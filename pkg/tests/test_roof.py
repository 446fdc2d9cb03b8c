import math

import numpy as np
import pytest

from gwepi.harness import random_gw
from gwepi.measures import Bipartition, MeasureSpec, RangeError, f_q, gw_tangle
from gwepi.roof import (
    RoofOptions,
    ensemble_average,
    ensemble_from_isometry,
    member_values,
    random_isometry,
    restart_rng,
    roof_extremize,
    roof_extremize_many,
)
from gwepi.states import DensityMatrix, build_gw_state, eigh_density, reduced_density

CONC = MeasureSpec("concurrence")
PAIR = Bipartition([0], [1])
QUICK = RoofOptions(restarts=8)


def _w3_pair(w3):
    return reduced_density(build_gw_state(w3), [0, 1])


def _eig(rho):
    w, v = eigh_density(rho)
    keep = w > 1e-12
    return w[keep], v[:, keep]


def test_identity_isometry_gives_eigen_ensemble(w3):
    rho = _w3_pair(w3)
    w, v = _eig(rho)
    ens = ensemble_from_isometry(w, v, np.eye(len(w)), rho.dims)
    np.testing.assert_allclose(ens.probs, w, atol=1e-15)
    np.testing.assert_allclose(np.abs(ens.vectors @ v.conj()), np.eye(len(w)), atol=1e-12)


def test_random_isometry_reproduces_state(rng):
    g = random_gw(4, 3, 2)
    rho = reduced_density(build_gw_state(g), [0, 1, 3])
    w, v = _eig(rho)
    for m in (len(w), len(w) + 2, 3 * len(w)):
        ens = ensemble_from_isometry(w, v, random_isometry(m, len(w), rng), rho.dims)
        assert ens.probs.sum() == pytest.approx(1, abs=1e-10)
        assert np.all(ens.probs >= 0)
        np.testing.assert_allclose(ens.mixture(), rho.entries, atol=1e-8)


def test_four_member_ensemble_on_diagonal_state(rng):
    rho = DensityMatrix((2,), np.diag([2 / 3, 1 / 3]))
    w, v = _eig(rho)
    ens = ensemble_from_isometry(w, v, random_isometry(4, 2, rng), (2,))
    assert len(ens) == 4
    assert ens.probs.sum() == pytest.approx(1, abs=1e-12)


def test_non_isometry_rejected():
    with pytest.raises(ValueError):
        ensemble_from_isometry([0.5, 0.5], np.eye(2), np.ones((3, 2)), (2,))
    with pytest.raises(ValueError):
        ensemble_from_isometry([0.5, 0.5], np.eye(2), np.eye(3)[:, :1], (2,))


def test_restart_streams_are_keyed():
    a = restart_rng(3, 7).standard_normal(4)
    np.testing.assert_array_equal(a, restart_rng(3, 7).standard_normal(4))
    assert not np.allclose(a, restart_rng(3, 8).standard_normal(4))


def test_pure_input_is_exact(w3):
    rho = reduced_density(build_gw_state(w3), [0, 1, 2])
    cut = Bipartition([0], [1, 2])
    for mode in ("min", "max"):
        res = roof_extremize(rho, cut, CONC, mode, QUICK)
        assert res.value == pytest.approx(math.sqrt(8) / 3, abs=1e-12)
        assert res.restarts_used == 0


def test_w3_pair_concurrence(w3):
    rho = _w3_pair(w3)
    lo = roof_extremize(rho, PAIR, CONC, "min", RoofOptions(restarts=20))
    hi = roof_extremize(rho, PAIR, CONC, "max", RoofOptions(restarts=20))
    assert lo.certified_direction == "upper_bound_on_min"
    assert hi.certified_direction == "lower_bound_on_max"
    assert -1e-9 <= lo.value - 2 / 3 <= 5e-3
    assert abs(hi.value - lo.value) <= 1e-2


def test_separable_mixture_has_zero_roof():
    rho = DensityMatrix((2, 2), np.diag([0.3, 0, 0, 0.7]))
    res = roof_extremize(rho, PAIR, CONC, "min", QUICK)
    assert res.value == pytest.approx(0, abs=5e-3)
    # a Tsallis roof of the same mixture is also zero
    res = roof_extremize(rho, PAIR, MeasureSpec("tsallis", 2.0), "min", QUICK)
    assert res.value == pytest.approx(0, abs=5e-3)


def test_value_reproducible_from_ensemble():
    g = random_gw(5, 2, 9)
    rho = reduced_density(build_gw_state(g), [1, 2, 4])
    cut = Bipartition([0], [1, 2])
    spec = MeasureSpec("tsallis", 3.5)
    res = roof_extremize(rho, cut, spec, "min", QUICK)
    assert ensemble_average(res.ensemble, cut, spec) == pytest.approx(res.value, abs=1e-10)
    np.testing.assert_allclose(res.ensemble.mixture(), rho.entries, atol=1e-8)


def test_deterministic_given_seed():
    g = random_gw(4, 3, 5)
    rho = reduced_density(build_gw_state(g), [0, 1, 2])
    cut = Bipartition([0, 2], [1])
    spec = MeasureSpec("tsallis", 0.8)
    a = roof_extremize(rho, cut, spec, "min", QUICK)
    b = roof_extremize(rho, cut, spec, "min", QUICK)
    assert a.value == b.value
    np.testing.assert_array_equal(a.ensemble.vectors, b.ensemble.vectors)


def test_batched_equals_single():
    g = random_gw(4, 2, 1)
    s = build_gw_state(g)
    problems = [(reduced_density(s, [0, 1]), PAIR), (reduced_density(s, [2, 3]), PAIR)]
    many = roof_extremize_many(problems, CONC, "min", QUICK)
    for (rho, cut), res in zip(problems, many):
        assert roof_extremize(rho, cut, CONC, "min", QUICK).value == res.value


def test_monotone_in_restarts():
    g = random_gw(3, 3, 4)
    rho = reduced_density(build_gw_state(g), [0, 1])
    spec = MeasureSpec("tsallis", 2.0)
    weak = RoofOptions(restarts=1, iters=1, grid=4, golden_steps=2)
    strong = RoofOptions(restarts=4, iters=1, grid=4, golden_steps=2)
    assert roof_extremize(rho, PAIR, spec, "min", strong).value <= roof_extremize(rho, PAIR, spec, "min", weak).value
    assert roof_extremize(rho, PAIR, spec, "max", strong).value >= roof_extremize(rho, PAIR, spec, "max", weak).value


@pytest.mark.parametrize("q", [0.8, 2.0, 3.5])
def test_tsallis_roof_matches_closed_form(q):
    g = random_gw(4, 3, 21)
    rho = reduced_density(build_gw_state(g), [0, 1, 3])
    cut = Bipartition([1], [0, 2])
    res = roof_extremize(rho, cut, MeasureSpec("tsallis", q), "min", RoofOptions(restarts=10))
    closed = f_q(gw_tangle(g, [0, 1, 3], [1]), q)
    assert -1e-9 <= res.value - closed <= 5e-3


def test_out_of_window_measure_rejected():
    with pytest.raises(RangeError):
        MeasureSpec("tsallis", 4.5)


def test_minor_concurrence_matches_purity(rng):
    v = rng.standard_normal((6, 12)) + 1j * rng.standard_normal((6, 12))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    cut = Bipartition([0], [1, 2])
    direct = member_values(v, (3, 2, 2), cut, CONC)
    mats = v.reshape(6, 3, 4)
    red = mats @ mats.conj().transpose(0, 2, 1)
    purity = np.einsum("kij,kji->k", red, red).real
    np.testing.assert_allclose(direct, np.sqrt(2 * (1 - purity)), atol=1e-12)


def test_bad_mode(w3):
    with pytest.raises(ValueError):
        roof_extremize(_w3_pair(w3), PAIR, CONC, "mean")
