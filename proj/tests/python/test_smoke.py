import json
import math

import pytest

import sprcal


def test_opt_matches_bruteforce():
    for n in range(1, 4):
        for s in range(0, 5):
            assert sprcal.opt_value(n, s) == sprcal.opt_value_bruteforce(n, s)


def test_tree_sample_is_seeded():
    a = sprcal.tree_sample(4, 2, 3)
    assert a == sprcal.tree_sample(4, 2, 3)
    assert len(a) == 6 and len(set(a)) == 6
    assert all(1 <= c <= 24 for c in a)


def test_play_game_transcript():
    out = sprcal.play_game(16, 16, "random", "ab", 5)
    lines = out["transcript"].splitlines()
    assert json.loads(lines[0])["n"] == 16
    assert 0 <= out["preserved"] <= 16


def test_calib_run_alternating_is_calibrated():
    out = sprcal.calib_run("constant:1/2", "alternating", 4)
    assert out["calerr"] == 0.0


def test_forecaster_run_is_clean():
    out = sprcal.calib_run("spr", "bernoulli:37/100", 1024, seed=7)
    diag = json.loads(out["diagnostics"])
    assert diag["anomalies"] == 0
    assert out["reduced_ok"]
    assert out["calerr"] <= 0.75 * 1024 ** (2 / 3)


def test_incompatible_pairing():
    with pytest.raises(ValueError):
        sprcal.calib_run("spr", "bernoulli-hidden:1/2", 64)


def test_constants():
    c = sprcal.find_beta_epsilon()
    assert c["verified"] and c["epsilon"] > 0 and c["alpha"] + c["beta"] < 1
    lam, g, unimodal = sprcal.entropy_exponent()
    assert abs(lam - 0.15229) < 1e-3 and g > 0.543895 and unimodal
    with pytest.raises(ValueError):
        sprcal.find_beta_epsilon(2.5)
    assert json.loads(sprcal.constants_json())["lambda_star"] == pytest.approx(lam)


def test_fit_exponent():
    slope, se = sprcal.fit_exponent([(1, 1), (4, 2), (16, 4)])
    assert math.isclose(slope, 0.5, abs_tol=1e-12)


def test_verify_subset():
    res = sprcal.verify([1, 5])
    assert [r[0] for r in res] == [1, 5]
    assert all(r[2] for r in res)
