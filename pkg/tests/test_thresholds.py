import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from topicpages import (
    DEFAULT_THRESHOLDS,
    Thresholds,
    build_histogram,
    filter_subpages,
    find_bimodal_threshold,
    fit_cosine_cutoff,
    fit_thresholds,
    normalize,
    url_metrics,
)
from topicpages.errors import EmptyInput, NotBimodal
from topicpages.thresholds import with_cosine_cutoff, write_histogram_csv


def hist_from_counts(counts, bucket_size=1.0):
    values = [i * bucket_size for i, c in enumerate(counts) for _ in range(c)]
    return build_histogram(values, bucket_size)


class TestBuildHistogram:
    def test_integer_buckets(self):
        h = build_histogram([0, 0, 0, 3, 3, 4], 1.0)
        assert h.counts == {0: 3, 3: 2, 4: 1}
        assert all(isinstance(k, int) for k in h.counts)

    def test_wider_buckets(self):
        h = build_histogram([1, 4, 5, 9, 10, 14], 5.0)
        assert h.counts == {0: 2, 5: 2, 10: 2}

    def test_fractional_bucket_boundary(self):
        # 0.15 sits exactly on a 0.05 boundary; float division must not
        # push it into the bucket below
        h = build_histogram([0.15], 0.05)
        assert h.counts == {0.15: 1}

    def test_empty_raises(self):
        with pytest.raises(EmptyInput):
            build_histogram([], 1.0)

    def test_bad_bucket_size(self):
        with pytest.raises(ValueError):
            build_histogram([1.0], 0.0)


class TestFindBimodalThreshold:
    # counts laid out from bucket 0; expected thresholds derived by hand
    # from the documented rules (persistent mode pair, longest minimal run
    # between them, start of that run's last bucket)
    @pytest.mark.parametrize(
        "counts,expected",
        [
            ([5, 0, 0, 7], 2),
            ([9, 1, 2, 1, 8], 3),
            ([8, 0, 9], 1),
            ([4, 4, 0, 5], 2),  # plateau on the left mode
            ([5, 0, 7, 0, 5], 1),  # equal pair mass ties to the leftmost pair
            ([4, 9, 8, 9, 2], 2),  # one-bucket dip between twin peaks
            ([7, 5, 5, 7], 2),  # two-bucket flat valley, rightmost end
        ],
    )
    def test_hand_cases(self, counts, expected):
        assert find_bimodal_threshold(hist_from_counts(counts)) == expected

    def test_bucket_size_scales_result(self):
        assert find_bimodal_threshold(hist_from_counts([5, 0, 0, 7], 5.0)) == 10

    @pytest.mark.parametrize(
        "counts",
        [
            [50, 0, 1],  # right mode below the 5% side-mass floor
            [9, 6, 3, 1],  # monotone decay, one mode
            [5, 7],  # spans fewer than three buckets
            [5, 5, 7],  # plateau shoulder, still one mode
            [3, 9, 4],  # single interior mode
        ],
    )
    def test_not_bimodal(self, counts):
        with pytest.raises(NotBimodal):
            find_bimodal_threshold(hist_from_counts(counts))

    def test_jitter_on_a_flank_does_not_split_a_mode(self):
        # two jitter spikes near the left mode must not be mistaken for a
        # mode pair: the real valley is the long zero run before bucket 9
        counts = [20, 50, 48, 49, 20, 0, 0, 0, 0, 30, 10]
        assert find_bimodal_threshold(hist_from_counts(counts)) == 8

    @pytest.mark.parametrize("seed", [11, 12, 13])
    def test_recovers_planted_gap(self, seed):
        rng = np.random.default_rng(seed)
        left = rng.normal(30, 6, 1500)
        right = rng.normal(110, 12, 1500)
        values = [float(v) for v in np.clip(np.concatenate([left, right]), 1, 160)]
        t = find_bimodal_threshold(build_histogram(values, 1.0))
        assert left.max() <= t <= right.min()


def _segment(rng, length, hyphens):
    letters = "abcdefghijklmnopqrstuvwxyz"
    chars = [letters[rng.integers(0, 26)] for _ in range(length)]
    for p in rng.choice(np.arange(1, length - 1), size=hyphens, replace=False):
        chars[p] = "-"
    return "".join(chars)


def planted_urls(seed, n_side=800):
    """Synthetic link set: short clean section paths vs long hyphenated slugs."""
    rng = np.random.default_rng(seed)
    urls = []
    for _ in range(n_side):
        urls.append(
            f"https://site.example/{_segment(rng, int(rng.integers(5, 19)), int(rng.integers(0, 2)))}/"
        )
    for _ in range(n_side):
        urls.append(
            f"https://site.example/{_segment(rng, int(rng.integers(47, 76)), int(rng.integers(6, 13)))}/"
        )
    return [normalize(u) for u in urls]


class TestFitThresholds:
    def test_recovers_each_parameter_gap(self):
        urls = planted_urls(seed=21)
        fitted = fit_thresholds(urls)
        metrics = [url_metrics(u) for u in urls]
        half = len(urls) // 2
        for vals, got in [
            ([m.url_length for m in metrics], fitted.max_url_length),
            ([m.max_subpath_length for m in metrics], fitted.max_subpath_length),
            ([m.max_hyphens for m in metrics], fitted.max_hyphens),
        ]:
            assert max(vals[:half]) <= got <= min(vals[half:])
        assert fitted.cosine_cutoff == 0.4

    def test_unimodal_parameter_raises_with_name(self):
        urls = [normalize(f"https://site.example/{'a' * n}/") for n in [8] * 30 + [9] * 5]
        with pytest.raises(NotBimodal, match="url_length"):
            fit_thresholds(urls)

    def test_fallback_defaults(self):
        urls = [normalize(f"https://site.example/{'a' * n}/") for n in [8] * 30 + [9] * 5]
        fitted = fit_thresholds(urls, fallback_defaults=True)
        assert (
            fitted.max_url_length,
            fitted.max_subpath_length,
            fitted.max_hyphens,
        ) == (80, 30, 4)

    def test_small_sample_is_not_fitted(self):
        # a handful of URLs always shows accidental "modes"
        urls = [normalize(f"https://site.example/{'ab' * (n + 1)}/") for n in range(13)]
        with pytest.raises(NotBimodal, match="13 training URLs"):
            fit_thresholds(urls)

    def test_small_sample_falls_back(self):
        urls = [normalize(f"https://site.example/{'ab' * (n + 1)}/") for n in range(13)]
        fitted = fit_thresholds(urls, fallback_defaults=True, cosine_cutoff=0.6)
        assert (
            fitted.max_url_length,
            fitted.max_subpath_length,
            fitted.max_hyphens,
            fitted.cosine_cutoff,
        ) == (80, 30, 4, 0.6)

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            fit_thresholds([])


class TestFitCosineCutoff:
    def test_two_score_clusters(self):
        scores = [0.1] * 10 + [0.6] * 12
        assert fit_cosine_cutoff(scores) == 0.55

    def test_fallback(self):
        assert fit_cosine_cutoff([0.5] * 40, fallback_defaults=True) == 0.4

    def test_no_fallback_raises(self):
        with pytest.raises(NotBimodal):
            fit_cosine_cutoff([0.5] * 40)


class TestFilterSubpages:
    def test_url_length_boundary_inclusive(self):
        t = Thresholds(30, 100, 100)
        keep = normalize("https://x.example/abcdefghijk/")  # exactly 30 chars
        drop = normalize("https://x.example/abcdefghijkl/")  # 31
        assert len(keep.normalized) == 30 and len(drop.normalized) == 31
        assert filter_subpages([keep, drop], t) == [keep]

    def test_subpath_boundary_inclusive(self):
        t = Thresholds(100, 5, 100)
        keep = normalize("https://x.example/abcde/")
        drop = normalize("https://x.example/abcdef/")
        assert filter_subpages([keep, drop], t) == [keep]

    def test_hyphen_boundary_inclusive(self):
        t = Thresholds(100, 100, 2)
        keep = normalize("https://x.example/a-b-c/")
        drop = normalize("https://x.example/a-b-c-d/")
        assert filter_subpages([keep, drop], t) == [keep]

    def test_worst_subpath_decides(self):
        t = Thresholds(100, 6, 100)
        u = normalize("https://x.example/short/waytoolongsegment/")
        assert filter_subpages([u], t) == []

    def test_order_preserved(self):
        urls = [normalize(f"https://x.example/s{i}/") for i in (3, 1, 2)]
        assert filter_subpages(urls, DEFAULT_THRESHOLDS) == urls


subpath_st = st.from_regex(r"[a-z0-9]([a-z0-9-]{0,18}[a-z0-9])?", fullmatch=True)
url_st = st.lists(subpath_st, min_size=0, max_size=5).map(
    lambda segs: normalize("https://prop.example/" + "/".join(segs))
)


@settings(max_examples=60)
@given(st.lists(url_st, max_size=30))
def test_filter_idempotent(urls):
    once = filter_subpages(urls, DEFAULT_THRESHOLDS)
    assert filter_subpages(once, DEFAULT_THRESHOLDS) == once


@settings(max_examples=60)
@given(st.lists(url_st, max_size=30))
def test_filter_monotone_in_thresholds(urls):
    tight = Thresholds(40, 10, 1)
    kept_tight = {u.normalized for u in filter_subpages(urls, tight)}
    kept_loose = {u.normalized for u in filter_subpages(urls, DEFAULT_THRESHOLDS)}
    assert kept_tight <= kept_loose


class TestThresholdsObject:
    def test_validation(self):
        with pytest.raises(ValueError):
            Thresholds(-1, 30, 4)
        with pytest.raises(ValueError):
            Thresholds(80, 30, 4, cosine_cutoff=1.5)

    def test_round_trip(self):
        t = Thresholds(70, 25, 3, cosine_cutoff=0.35)
        assert Thresholds.from_dict(t.to_dict()) == t

    def test_with_cosine_cutoff(self):
        t = with_cosine_cutoff(DEFAULT_THRESHOLDS, 0.55)
        assert t.cosine_cutoff == 0.55
        assert t.max_url_length == DEFAULT_THRESHOLDS.max_url_length


def test_histogram_csv(tmp_path):
    path = tmp_path / "h.csv"
    write_histogram_csv(build_histogram([1, 1, 7, 3], 1.0), path)
    assert path.read_text("utf-8") == "bucket,count\n1,2\n3,1\n7,1\n"
