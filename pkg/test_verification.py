# test_verification.py
import pytest

from core.hierarchy import INFINITY
from core.intervals import IntervalIndicator
from core.partitions import OrderedPartition

from modules.verification import (
    SUITES,
    KNOWN_CLT_MOMENTS,
    Verifier,
    VerifySettings,
    make_rng,
    pair_profiles,
    random_profile,
)

QUICK = VerifySettings(seed=5, profile_count=6, max_k=2, word_length=4)


def test_rng_streams_are_reproducible():
    first = make_rng(42, 3).integers(0, 1000, size=8).tolist()
    again = make_rng(42, 3).integers(0, 1000, size=8).tolist()
    other = make_rng(42, 4).integers(0, 1000, size=8).tolist()
    assert first == again
    assert first != other


def test_random_profiles_are_balanced():
    rng = make_rng(1)
    for _ in range(20):
        profile = random_profile(rng, 3)
        assert len(profile) == 6
        assert profile.is_balanced()


def test_pair_profiles_cover_every_labelling():
    pi = OrderedPartition.from_blocks([(1, 6), (2, 3), (4, 5)])
    supports = [IntervalIndicator(0, 1), IntervalIndicator(2, 3), IntervalIndicator(4, 6)]
    profiles = list(pair_profiles(pi, supports))
    assert len(profiles) == len(set(profiles)) == 27
    for profile in profiles:
        for a, b in pi.blocks:
            assert profile.at(a) == profile.at(b)


def test_known_clt_moments_rows():
    assert list(KNOWN_CLT_MOMENTS) == [1, 2, 3, 4, INFINITY]
    assert all(len(row) == 5 and row[0] == 1 for row in KNOWN_CLT_MOMENTS.values())


@pytest.mark.parametrize("suite", SUITES)
def test_suite_passes(suite):
    """Test each verification suite on a small corpus"""
    report = Verifier(QUICK).run([suite])
    assert report.results
    assert report.passed, [f"{r.name}: {r.detail}" for r in report.failures()]


def test_parallel_run_matches_serial():
    serial = Verifier(QUICK).run(["moments", "poisson"]).to_dict(timings=False)
    parallel = Verifier(QUICK, parallel=True, workers=2).run(["moments", "poisson"]).to_dict(timings=False)
    assert serial == parallel


def test_raising_check_is_reported_as_failure(monkeypatch):
    verifier = Verifier(QUICK)

    def broken():
        raise RuntimeError("boom")

    monkeypatch.setattr(verifier, "checks", lambda suite: [("broken", broken)])
    report = verifier.run(["moments"])
    assert not report.passed
    assert "RuntimeError: boom" in report.failures()[0].detail
    assert report.to_dict()["failures"] == 1


def test_unknown_suite():
    with pytest.raises(ValueError):
        Verifier(QUICK).checks("everything")


@pytest.mark.parametrize("suite", SUITES)
def test_suite_passes_on_the_default_corpus(suite):
    """Test each suite with the shipped corpus sizes (200 profiles, k <= 4, words up to length 6)"""
    settings = VerifySettings()
    assert (settings.profile_count, settings.max_k, settings.word_length) == (200, 4, 6)
    report = Verifier(settings).run([suite])
    assert report.passed, [f"{r.name}: {r.detail}" for r in report.failures()]


def test_basis_cap_reaches_the_product_space():
    report = Verifier(VerifySettings(seed=5, profile_count=6, max_k=2, word_length=4, max_basis=3)).run(["states"])
    failed = {r.name: r.detail for r in report.failures()}
    assert list(failed) == ["rewriting matches the product representation"]
    assert "BasisTooLargeError" in failed["rewriting matches the product representation"]


def test_clt_order_cap_reaches_the_finite_n_check():
    capped = Verifier(VerifySettings(seed=5, profile_count=6, max_k=2, word_length=4, clt_max_order=4)).run(["clt"])
    assert capped.passed
    assert "n=6" not in capped.results[0].detail
    assert not Verifier(VerifySettings(clt_max_order=2)).run(["clt"]).passed
