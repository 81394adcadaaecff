import math

import pytest

import sizeclust as sc


def test_information():
    assert sc.vi_loss([1, 1, 2, 2], [1, 2, 1, 2]) == 2.0
    assert sc.vi_loss([1, 1, 2, 2], [2, 2, 1, 1]) == 0.0
    assert sc.entropy([1, 2, 3, 4]) == 2.0
    assert sc.contingency([1, 1, 2, 2], [1, 2, 1, 2]) == [[1, 1], [1, 1]]


def test_composition():
    d = sc.aitchison_distance([0.25, 0.75], [0.75, 0.25])
    assert d == pytest.approx(2 * math.log(3) / math.sqrt(2), rel=1e-14)
    dist, best = sc.min_perm_aitchison([0.5, 0.3, 0.2], [0.2, 0.5, 0.3])
    assert dist < 1e-12
    assert best == [3, 1, 2]
    assert sc.closure([1, 1, 2, 3, 3], 3) == [0.4, 0.2, 0.4]


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        sc.aitchison_distance([0.5, 0.5], [1.0, 0.0])
    with pytest.raises(ValueError):
        sc.min_perm_aitchison([1.0] * 11, [1.0] * 11)


def test_loss():
    spec = sc.LossSpec([0.5, 0.5], 2, sc.LossMode.sensitive, 1.0, 0.0)
    assert sc.loss_sensitive([1, 1, 2, 2], [1, 2, 1, 2], spec) == 2.0
    vi_only = sc.LossSpec([0.5, 0.5], 2, lambda_=0.0)
    assert sc.expected_loss([1, 1, 2, 2], [[1, 1, 2, 2], [1, 2, 1, 2]], vi_only) == 1.0


def test_optimize_matches_brute_force():
    draws = [[1, 1, 2, 2, 1, 2], [1, 2, 2, 2, 1, 1], [1, 1, 2, 1, 1, 2]]
    spec = sc.LossSpec([0.5, 0.5], 2)
    cfg = sc.OptimizerConfig()
    cfg.population_size = 100
    a, value = sc.optimize_assignment(draws, spec, cfg)
    b, best = sc.brute_force_assignment(draws, spec)
    assert value == pytest.approx(best, abs=1e-12)
    assert len(a) == 6


def test_fit_and_identify():
    cfg = sc.SimConfig()
    cfg.respondents = 8
    cfg.clusters = 2
    cfg.questions = 4
    cfg.group_sizes = [4, 4]
    data, z_true, theta, phi = sc.simulate_dataset(cfg)
    assert data.respondents == 8
    assert sorted(z_true) == z_true

    sampler = sc.SamplerConfig()
    sampler.burn_in = 50
    sampler.kept = 50
    samples, diag = sc.fit_posterior(data, sc.PriorSpec.symmetric(data, 2), sampler)
    assert samples.draws == 200
    assert diag.max_rhat >= 0.9
    assert "theta[1,1]" in diag.rhat

    draws = samples.z_draws()
    a_star, sigma = sc.identify_labels(draws[0], samples)
    assert sc.vi_loss(a_star, draws[0]) == 0.0
    assert sorted(sigma) == [1, 2]
    assert sc.accuracy(z_true, z_true) == 1.0
