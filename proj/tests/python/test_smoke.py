import math

import pytest

import coded_sts as sts


def test_encode_and_validity():
    p = sts.CodeParams(5, 4)
    assert sts.encode(p, 1) == [1, 2, 4, 3]
    assert sts.inverse_gft(p, [1, 2, 4, 3]) == [0, 1, 0, 0]
    assert sts.is_valid_codeword(p, [2, 4, 3, 1])
    assert not sts.is_valid_codeword(p, [2, 3, 0, 4])
    assert sts.pack_message(sts.CodeParams(17, 16, 2), 3 + 5 * 17) == [3, 5]


def test_offset_round_trip():
    p = sts.CodeParams(5, 4)
    assert sts.estimate_offset(p, [2, 3, 0, 4]) == 1
    assert sts.correct_offset(p, [4, 0, 2, 1], 3) == [1, 2, 4, 3]


def test_decode_two_users():
    p = sts.CodeParams(5, 4)
    assert sts.decode_multiuser(p, [[1, 2], [2, 4], [4, 3], [3, 1]], tau=4) == [1, 2]
    assert p.default_tau == 2


def test_errors_raise():
    with pytest.raises(sts.StsError):
        sts.CodeParams(5, 3)
    with pytest.raises(ValueError):
        sts.Field(512)


def test_closed_forms():
    assert sts.p_false_alarm(1.0, 1.0, 2) == pytest.approx(2 / math.e)
    assert sts.threshold_for_far(0.01, 1.0, 1) == pytest.approx(math.log(100))
    assert sts.p_erasure(2.0, 1.0, 3.0, 1) == pytest.approx(1 - math.exp(-0.5))
    assert abs(sts.papr_db([[3], [7]], 16)) < 1e-9
    assert sts.separability_bound(16, 2, 17) == 15


def test_rcrm():
    assert sts.rcrm_pack(3, 7, 3, 3) == 511
    assert sts.rcrm_unpack(511) == {"resource_id": 3, "priority": 7, "target_sinr": 3, "bs_hash": 3}
    assert 0 <= sts.hash_bsid(100, 4) < 4


def test_trial_and_sweep_are_deterministic():
    cfg = sts.parse_config("users = 6\ntrials = 20\nsir_db = -20, 0\nseed = 3\n")
    assert cfg.users == 6
    t1 = sts.run_trial(cfg, -10.0, 5)
    assert t1 == sts.run_trial(cfg, -10.0, 5)
    assert len(t1["status"]) == 6
    a = sts.run_sweep(cfg)
    cfg.workers = 2
    b = sts.run_sweep(cfg)
    assert a["csv"] == b["csv"]
    assert a["csv"].startswith("sir_db,erasure_rate")
    assert len(a["points"]) == 2
    assert a["points"][0]["erasure_rate"] >= a["points"][1]["erasure_rate"]


def test_validate_detection_small():
    r = sts.validate_detection(n_rx=[1], n_user=[1], far=[0.1], samples=20000)
    assert r["passed"]
    assert len(r["cells"]) == 2
