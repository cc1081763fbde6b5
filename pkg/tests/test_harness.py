"""Monte Carlo engine: seeding, AWGN calibration, determinism, CSV schemas."""

import numpy as np
import pytest

from ddlab.channel import build_H_dt, case_config, sample_paths
from ddlab.equalize import ChannelMode
from ddlab.frames import DD_OTFS, DT, FD
from ddlab.harness import (
    STREAM_BITS,
    STREAM_CHANNEL,
    STREAM_NOISE,
    BerRecord,
    Scenario,
    awgn,
    ber_csv,
    run_ber,
    run_sparsity,
    scenario_from_json,
    scenario_to_json,
    sparsity_csv,
    substream_seed,
)
from ddlab.modem import Scheme, constellation, map_bits, modulate


class TestAwgn:
    def test_zero_variance_is_identity(self):
        v = np.array([1 + 2j, -3j], dtype=complex)
        out = awgn(v, 0.0, 1)
        np.testing.assert_array_equal(out, v)
        assert out is not v

    def test_variance_calibration(self):
        noise = awgn(np.zeros(10**6, dtype=complex), 1.0, 99)
        var = np.mean(np.abs(noise) ** 2)
        assert 0.99 < var < 1.01

    def test_deterministic(self):
        v = np.ones(100, dtype=complex)
        np.testing.assert_array_equal(awgn(v, 0.3, 5), awgn(v, 0.3, 5))
        assert not np.array_equal(awgn(v, 0.3, 5), awgn(v, 0.3, 6))

    def test_negative_variance_rejected(self):
        with pytest.raises(ValueError):
            awgn(np.ones(4, dtype=complex), -1.0, 0)


class TestSubstreamSeeds:
    def test_injective_over_grid(self):
        seen = set()
        for case in (1, 2):
            for code in (0, 1, 2):
                for snr in (0, 1, 2):
                    for trial in (0, 1, 2):
                        for stream in (STREAM_CHANNEL, STREAM_BITS, STREAM_NOISE):
                            seen.add(substream_seed(7, case, code, snr, trial, stream))
        assert len(seen) == 2 * 3 * 3 * 3 * 3

    def test_master_seed_changes_everything(self):
        a = substream_seed(1, 1, 0, 0, 0, 0)
        b = substream_seed(2, 1, 0, 0, 0, 0)
        assert a != b


def small_scenario(**kw):
    defaults = dict(
        cfg=case_config(1, 64, 8),
        schemes=((Scheme.SC, DT), (Scheme.OTFS, DD_OTFS)),
        snr_grid_db=(0.0, 10.0),
        trials=3,
        min_trials=3,
        min_bit_errors=10**9,
        seed=11,
    )
    defaults.update(kw)
    return Scenario(**defaults)


class TestRunBer:
    def test_deterministic_records_and_csv(self):
        sc = small_scenario()
        a = run_ber(sc)
        b = run_ber(sc)
        assert a == b
        assert ber_csv(a) == ber_csv(b)

    def test_record_layout(self):
        recs = run_ber(small_scenario())
        assert len(recs) == 4  # 2 schemes x 2 SNR points
        for r in recs:
            assert r.ber == r.bit_errors / r.bits_sent
            assert r.channel_mode == "full"
        header = ber_csv(recs).splitlines()[0]
        assert header == "scheme,eq_domain,channel_mode,snr_db,bit_errors,bits_sent,ber,seed"

    def test_early_stop_reduces_trials(self):
        full = run_ber(small_scenario(trials=10, min_trials=10))
        stopped = run_ber(small_scenario(trials=10, min_trials=1, min_bit_errors=1))
        assert stopped[0].bits_sent < full[0].bits_sent

    def test_otfs_variants_share_noise_and_channel(self):
        sc = small_scenario(
            schemes=((Scheme.OTFS, DT), (Scheme.OTFS, FD), (Scheme.OTFS, DD_OTFS)),
            snr_grid_db=(6.0,),
        )
        recs = run_ber(sc)
        counts = {r.eq_domain: r.bit_errors for r in recs}
        assert counts[DT] == counts[FD] == counts[DD_OTFS]

    def test_ideal_channel_hook(self):
        recs = run_ber(small_scenario(ideal_channel=True, snr_grid_db=(30.0,)))
        assert all(r.bit_errors == 0 for r in recs)

    def test_truncated_mode_recorded(self):
        sc = small_scenario(channel_mode=ChannelMode("band", 5), snr_grid_db=(10.0,))
        recs = run_ber(sc)
        assert all(r.channel_mode == "band:5" for r in recs)

    def test_received_power_is_calibrated(self):
        # unit-power paths and symbols: E ||H x||^2 / P = 1
        cfg = case_config(2, 128, 16)
        fact = small_scenario(cfg=cfg).fact
        c = constellation("qpsk")
        rng = np.random.default_rng(0)
        acc = 0.0
        trials = 100
        for t in range(trials):
            H = build_H_dt(sample_paths(cfg, t), cfg.P)
            bits = rng.integers(0, 2, 2 * cfg.P)
            x = modulate(Scheme.OTFS, map_bits(bits, c), fact)
            acc += np.linalg.norm(H.entries @ x.values) ** 2 / cfg.P
        assert abs(acc / trials - 1.0) < 0.05


class TestRunSparsity:
    def test_full_window_reaches_one(self):
        cfg = case_config(1, 65, 13, 5)
        sc = Scenario(cfg=cfg, trials=2, seed=0)
        recs = run_sparsity(sc, [32])  # 2*32+1 = 65 = P
        for r in recs:
            assert abs(r.lpr - 1.0) < 1e-12
            assert abs(r.spr - 1.0) < 1e-12

    def test_spr_dominates_lpr_on_every_record(self):
        sc = Scenario(cfg=case_config(2, 64, 8), trials=3, seed=4)
        for r in run_sparsity(sc, [0, 2, 5]):
            assert r.spr >= r.lpr - 1e-12

    def test_deterministic_csv(self):
        sc = Scenario(cfg=case_config(3, 64, 8), trials=2, seed=9)
        assert sparsity_csv(run_sparsity(sc, [0, 3])) == sparsity_csv(run_sparsity(sc, [0, 3]))

    def test_csv_header(self):
        sc = Scenario(cfg=case_config(1, 64, 8), trials=1, seed=0)
        header = sparsity_csv(run_sparsity(sc, [1])).splitlines()[0]
        assert header == "case,domain,metric,L_c,value,realizations,seed"


class TestScenarioJson:
    def test_round_trip_tabulated_case(self):
        sc = small_scenario(channel_mode=ChannelMode("topk", 3))
        again = scenario_from_json(scenario_to_json(sc))
        assert again == sc

    def test_round_trip_custom_channel(self):
        data = {
            "case": None, "L": 3, "T_d": 6.0, "F_d": 1.0, "R_f": 10.0,
            "P": 64, "M": 8, "N": 8, "schemes": ["ofdm"], "channel": "band:4",
            "snr_db": [0, 5], "trials": 2, "seed": 1, "mod": "16qam",
        }
        sc = scenario_from_json(data)
        assert sc.cfg.L == 3 and sc.cfg.case_id is None
        assert sc.schemes == ((Scheme.OFDM, FD),)
        assert sc.constellation == "16qam"

    def test_unknown_scheme_token(self):
        with pytest.raises(ValueError):
            scenario_from_json({"case": 1, "schemes": ["otfs-zz"]})


class TestValidation:
    def test_bad_scenario(self):
        with pytest.raises(ValueError):
            Scenario(cfg=case_config(1, 64, 8), trials=0)
        with pytest.raises(ValueError):
            Scenario(cfg=case_config(1, 64, 8), snr_grid_db=())

    def test_ber_record_consistency(self):
        with pytest.raises(ValueError):
            BerRecord("sc", DT, "full", 0.0, 10, 100, 0.5, 0)
