"""Smoke tests for the python bindings: the core operations are reachable
and agree with known closed-form values."""

import math

import pytest

import awgnbandit as ab


def test_capacity_and_bounds():
    assert ab.awgn_capacity(0.0) == 0.0
    assert ab.awgn_capacity(1.0) == 0.5
    assert ab.awgn_capacity(3.0) == 1.0

    report = ab.ucb0_bound(5, 10000, 4.0, 1.0)
    expected = 8 * math.sqrt(17 * 5 * 10000 * math.log(10000)) + 120
    assert report.value == pytest.approx(expected, rel=1e-12)
    assert ab.minimax_lower_bound(4, 10000, 1.0, 1.0, c1=1.0) == pytest.approx(204.0)


def test_recursion_sequence():
    assert ab.b_recursion(4.0, 1.0) == [16.0, 9.5, 6.25, 4.625, 3.8125]
    assert ab.b_recursion(2.0, 1.0) == [4.0, 3.5, 3.25]


def test_divergences():
    assert ab.kl_divergence([0.75, 0.25], [0.25, 0.75]) == pytest.approx(0.5 * math.log(3.0))
    assert ab.chi_square([0.75, 0.25], [0.25, 0.75]) == pytest.approx(4.0 / 3.0)
    assert ab.total_variation([0.75, 0.25], [0.25, 0.75]) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        ab.kl_divergence([0.5, 0.5], [0.2, 0.3, 0.5])


def test_cas_link_round_trip():
    cas = ab.CasParams(theta=0.5, side_info=1.0)
    encoded = ab.cas_encode(3.0, cas)
    assert encoded == 1.0
    assert ab.cas_decode(encoded, cas) == 3.0

    rng = ab.RandomSource(seed=1, stream=0)
    channel = ab.ChannelParams(1.0, 0.0)
    assert ab.transmit(encoded, channel, rng) == encoded  # noiseless


def test_schedule_parameters():
    schedule = ab.build_schedule("ue-ucb++", 5, 1000, 4.0, ab.ChannelParams.from_snr(1.0))
    assert schedule.sub_phases == 4
    assert schedule.tau == 2
    assert schedule.exploration_rounds == 40
    assert schedule.b_squared == [16.0, 9.5, 6.25, 4.625, 3.8125]

    with pytest.raises(ValueError):
        ab.build_schedule("ue-ucb++", 5, 40, 4.0, ab.ChannelParams.from_snr(1.0))


def test_episode_and_monte_carlo_determinism():
    inst = ab.gap_instance(2, 0.2)
    channel = ab.ChannelParams.from_snr(1.0)
    schedule = ab.build_schedule("ucb0", 2, 500, 1.0, channel)

    a = ab.run_episode(inst, schedule, channel, 500, seed=7)
    b = ab.run_episode(inst, schedule, channel, 500, seed=7)
    assert a.regret.final_regret == b.regret.final_regret
    assert a.regret.cumulative == b.regret.cumulative
    assert a.regret.final_regret >= 0.0

    s1 = ab.run_monte_carlo(inst, "ucb0", channel, 500, 8, base_seed=3)
    s2 = ab.run_monte_carlo(inst, "ucb0", channel, 500, 8, base_seed=3, parallel=2)
    assert s1.final_regrets == s2.final_regrets
    assert s1.audit_pass


def test_hard_instance_regret():
    inst = ab.deterministic_hard_instance(2, 1.0, 0)
    channel = ab.ChannelParams(1.0, 0.0)
    # At T = 10 the confidence bonus never pulls the leader's index below the
    # bad arm's stale index, so the bad arm is pulled exactly once: regret 2.
    schedule = ab.build_schedule("ucb0", 2, 10, 1.0, channel)
    episode = ab.run_episode(inst, schedule, channel, 10, seed=4)
    assert episode.regret.final_regret == 2.0


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        ab.gap_instance(2, 0.3)
    with pytest.raises(ValueError):
        ab.deterministic_hard_instance(3, 2.0, 5)
    with pytest.raises(ValueError):
        ab.ChannelParams(0.0, 1.0)
