import zlib

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from bisymrr import (
    Direct,
    RandomSeed,
    RapporFull,
    RapporOneTime,
    ResponseCorpus,
    UnrelatedUniform,
    Warner,
    effective_a,
    entry_at,
    materialize,
    parse_mechanism,
    randomize,
    randomize_corpus,
    unrelated_channel_entry,
)
from twostage import simulate


class TestEffectiveA:
    def test_direct_is_identity(self):
        assert effective_a(Direct(0.62)) == 0.62

    def test_warner_is_identity(self):
        assert effective_a(Warner(0.7)) == 0.7

    def test_unrelated_uniform(self):
        assert effective_a(UnrelatedUniform(0.5)) == 0.75

    def test_rappor_one_time(self):
        assert effective_a(RapporOneTime(0.5)) == 0.75

    def test_rappor_full(self):
        assert effective_a(RapporFull(0.5, 0.75)) == 0.625

    @given(st.floats(0.0, 1.0, allow_nan=False))
    def test_unrelated_never_below_half(self, p):
        assert 0.5 <= effective_a(UnrelatedUniform(p)) <= 1.0

    def test_parameters_validated(self):
        with pytest.raises(ValueError):
            Direct(1.2)
        with pytest.raises(ValueError):
            Warner(-0.1)

    def test_rappor_full_accepts_matching_p(self):
        RapporFull(0.5, 0.75, p=0.25)

    def test_rappor_full_rejects_asymmetric_p(self):
        with pytest.raises(ValueError, match="symmetric"):
            RapporFull(0.5, 0.75, p=0.3)


class TestParseMechanism:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("direct:0.75", Direct(0.75)),
            ("warner:0.7", Warner(0.7)),
            ("unrelated:0.5", UnrelatedUniform(0.5)),
            ("rappor1:0.5", RapporOneTime(0.5)),
            ("rappor:f=0.5,q=0.75", RapporFull(0.5, 0.75)),
            ("rappor:0.5,0.75", RapporFull(0.5, 0.75)),
            ("Direct:a=0.6", Direct(0.6)),
        ],
    )
    def test_roundtrips(self, text, expected):
        assert parse_mechanism(text) == expected

    @pytest.mark.parametrize("text", ["bogus:0.5", "direct", "direct:", "rappor:f=0.5,z=1"])
    def test_rejects_malformed(self, text):
        with pytest.raises(ValueError):
            parse_mechanism(text)


class TestCorpus:
    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            ResponseCorpus(np.array([[0, 2]]))

    def test_rejects_wrong_rank(self):
        with pytest.raises(ValueError):
            ResponseCorpus(np.array([0, 1]))

    def test_shape_properties(self):
        c = ResponseCorpus(np.zeros((3, 2), dtype=np.uint8))
        assert (c.m, c.width, len(c)) == (3, 2, 3)


class TestRandomize:
    def test_never_flips_at_one(self):
        x = np.array([0, 1, 1, 0], dtype=np.uint8)
        for seed in (0, 1, 99):
            assert np.array_equal(randomize(x, 1.0, RandomSeed(seed)), x)

    def test_always_flips_at_zero(self):
        x = np.array([0, 1, 1, 0], dtype=np.uint8)
        for seed in (0, 1, 99):
            assert np.array_equal(randomize(x, 0.0, RandomSeed(seed)), 1 - x)

    def test_deterministic(self):
        x = np.array([0, 1, 1], dtype=np.uint8)
        seed = RandomSeed(123, 4)
        assert np.array_equal(randomize(x, 0.7, seed), randomize(x, 0.7, seed))

    def test_streams_are_distinct(self):
        x = np.zeros(64, dtype=np.uint8)
        one = randomize(x, 0.5, RandomSeed(123, 0))
        other = randomize(x, 0.5, RandomSeed(123, 1))
        assert not np.array_equal(one, other)

    def test_empirical_frequencies_match_channel_column(self):
        # fixed input, a = 0.75, n = 2: output cells follow the x-th column
        a, n, x, m = 0.75, 2, 2, 100_000
        corpus = ResponseCorpus(np.broadcast_to(np.array([0, 1], dtype=np.uint8), (m, n)))
        out = randomize_corpus(corpus, a, RandomSeed(2024))
        cells = out.bits @ (1 << np.arange(n))
        counts = np.bincount(cells, minlength=1 << n)
        expected = m * np.array([entry_at(a, n, r, x) for r in range(1 << n)])
        assert stats.chisquare(counts, expected).pvalue >= 1e-3
        assert counts[x] / m == pytest.approx(0.5625, abs=0.01)

    def test_output_bits_are_independent(self):
        # chi-square independence of the n output bits under a fixed input
        for n in (2, 3):
            m = 60_000
            x = np.zeros((m, n), dtype=np.uint8)
            x[:, 0] = 1
            out = randomize_corpus(ResponseCorpus(x), 0.7, RandomSeed(55, n))
            cells = out.bits @ (1 << np.arange(n))
            counts = np.bincount(cells, minlength=1 << n).astype(float)
            marginals = out.bits.mean(axis=0)
            expected = np.ones(1 << n) * m
            for t in range(n):
                bit = (np.arange(1 << n) >> t) & 1
                expected *= np.where(bit, marginals[t], 1.0 - marginals[t])
            dof = (1 << n) - 1 - n
            statistic = ((counts - expected) ** 2 / expected).sum()
            assert stats.chi2.sf(statistic, dof) >= 1e-3


class TestRandomizeCorpus:
    def test_empty_corpus(self):
        c = ResponseCorpus(np.zeros((0, 3), dtype=np.uint8))
        assert randomize_corpus(c, 0.8, RandomSeed(1)) == c

    def test_identity_at_one(self):
        c = ResponseCorpus((np.arange(12).reshape(4, 3) % 2).astype(np.uint8))
        assert randomize_corpus(c, 1.0, RandomSeed(9)) == c

    def test_batch_equals_per_record(self):
        rng = np.random.default_rng(7)
        c = ResponseCorpus(rng.integers(0, 2, (50, 5), dtype=np.uint8))
        seed = RandomSeed(42, 3)
        batch = randomize_corpus(c, 0.6, seed)
        for j in range(c.m):
            assert np.array_equal(randomize(c.bits[j], 0.6, seed, index=j), batch.bits[j])

    def test_record_randomness_is_order_independent(self):
        # record j's uniforms depend on (seed, stream, j, width) alone
        seed = RandomSeed(11, 2)
        direct = seed.record_uniforms(17, 3)
        assert np.array_equal(direct, seed.generator().random((20, 3))[17])

    def test_recovers_distribution_end_to_end(self):
        # uniform-ish corpus through the channel: joint histogram ~ C @ pi
        rng = np.random.default_rng(31)
        m, n, a = 100_000, 2, 0.75
        cells_in = rng.integers(0, 4, m)
        bits = ((cells_in[:, None] >> np.arange(n)) & 1).astype(np.uint8)
        pi_emp = np.bincount(cells_in, minlength=4) / m
        out = randomize_corpus(ResponseCorpus(bits), a, RandomSeed(77))
        counts = np.bincount(out.bits @ (1 << np.arange(n)), minlength=4)
        expected = m * (materialize(a, n) @ pi_emp)
        assert stats.chisquare(counts, expected).pvalue >= 1e-3


class TestMechanismReduction:
    """The two-stage protocols land on the same conditional distribution as
    the single-flip channel at their effective parameter."""

    @pytest.mark.parametrize(
        "spec",
        [
            Direct(0.8),
            Warner(0.7),
            UnrelatedUniform(0.5),
            RapporOneTime(0.5),
            RapporFull(0.5, 0.75),
        ],
        ids=lambda s: type(s).__name__,
    )
    @pytest.mark.parametrize("n,x", [(1, 1), (2, 2), (4, 5)])
    def test_two_stage_matches_flip_channel(self, spec, n, x):
        m = 100_000
        rng = np.random.default_rng(zlib.crc32(f"{type(spec).__name__}|{n}|{x}".encode()))
        counts = simulate(spec, n, x, m, rng)
        a = effective_a(spec)
        expected = m * np.array([entry_at(a, n, r, x) for r in range(1 << n)])
        assert stats.chisquare(counts, expected).pvalue >= 1e-3


class TestUnrelatedChannelEntry:
    def test_single_bit_disagreement(self):
        assert unrelated_channel_entry(0.5, 1, 0, 1) == 0.25

    def test_never_asks_coin(self):
        for n in (1, 3):
            assert unrelated_channel_entry(0.0, n, 5 % (1 << n), 5 % (1 << n)) == 1.0

    def test_width_two_diagonal(self):
        assert unrelated_channel_entry(0.5, 2, 0, 0) == 0.5625

    @pytest.mark.parametrize("p", np.linspace(0.0, 1.0, 11))
    @pytest.mark.parametrize("n", range(1, 7))
    def test_binomial_sum_equals_flip_entry(self, p, n):
        a = (2.0 - p) / 2.0
        dim = 1 << n
        worst = max(
            abs(unrelated_channel_entry(p, n, r, x) - entry_at(a, n, r, x))
            for r in range(dim)
            for x in range(dim)
        )
        assert worst <= 1e-12


class TestRandomSeed:
    def test_same_key_same_bits(self):
        assert np.array_equal(
            RandomSeed(5, 6).generator().random(8), RandomSeed(5, 6).generator().random(8)
        )

    def test_record_uniform_bounds_checked(self):
        with pytest.raises(ValueError):
            RandomSeed(1).record_uniforms(-1, 2)
