import json
import random
from fractions import Fraction

import pytest

from eulerbrick import _sweeppy
from eulerbrick.exact import factorize, int_valuation, is_perfect_square
from eulerbrick.search import (
    DEFAULT_SIEVE_SPECIALIZATIONS,
    Finding,
    SweepConfig,
    SweepStats,
    blocker_analysis,
    blocker_class,
    gaussian_blocker_check,
    modular_sieve,
    pair_coefficients,
    second_tables,
    smallest_blocker,
    sweep,
    sweep_pairs,
    tuple_quartic_values,
)
from eulerbrick.sweepcore import BACKEND, FILTER_MODULUS, square_residue_table

try:
    from eulerbrick import _sweepcore

    HAVE_EXT = True
except ImportError:
    HAVE_EXT = False


def oracle_blocker(f1, f2):
    """Full factorization, then the least odd-exponent prime."""
    odd = sorted(p for p, e in factorize(f1 * f2) if e % 2 == 1)
    return odd[0] if odd else None


class TestUniverse:
    def test_counts(self):
        assert len(sweep_pairs(39, parity=False)) == 473
        assert len(sweep_pairs(40, parity=True)) == 331
        assert sweep_pairs(2, parity=False) == [(2, 1)]

    def test_tuple_count_invariant(self):
        for max_param, parity in ((10, False), (15, True), (20, False)):
            n = len(sweep_pairs(max_param, parity))
            result = sweep(SweepConfig(max_param=max_param, parity=parity))
            assert result.stats.tuples == n * n

    def test_quartic_values(self):
        assert tuple_quartic_values(2, 1, 2, 1) == (369, 481)


class TestSweep:
    def test_max_2(self):
        result = sweep(SweepConfig(max_param=2))
        assert result.stats.tuples == 1
        assert result.stats.squares == 0
        assert result.findings == []

    def test_prefilter_sound(self):
        cfg_on = SweepConfig(max_param=20, prefilter=True)
        cfg_off = SweepConfig(max_param=20, prefilter=False)
        on, off = sweep(cfg_on), sweep(cfg_off)
        assert on.stats.squares == off.stats.squares == 0
        assert on.stats.tuples == off.stats.tuples
        # without the filter every tuple reaches the exact stage
        assert off.stats.prefilter_survivors == off.stats.tuples
        assert on.stats.prefilter_survivors < off.stats.prefilter_survivors

    def test_both_factors_mode(self):
        result = sweep(SweepConfig(max_param=15, both_factors=True))
        assert result.stats.squares == 0

    def test_jobs_equivalence(self):
        a = sweep(SweepConfig(max_param=25))
        b = sweep(SweepConfig(max_param=25, jobs=3))
        assert a.stats.to_json() == b.stats.to_json()

    def test_checkpoint_resume(self, tmp_path):
        cp = str(tmp_path / "cp.json")
        full = sweep(SweepConfig(max_param=20))
        part = sweep(SweepConfig(max_param=20, checkpoint_path=cp, stop_after=30))
        assert not part.completed
        resumed = sweep(SweepConfig(max_param=20, checkpoint_path=cp))
        assert resumed.completed
        assert resumed.stats.to_json() == full.stats.to_json()

    def test_stats_json_roundtrip(self):
        result = sweep(SweepConfig(max_param=12))
        data = result.stats.to_json()
        assert data["tuples"] == str(result.stats.tuples)
        back = SweepStats.from_json(json.loads(json.dumps(data)))
        assert back.to_json() == data


class TestKernels:
    def test_backends_agree(self):
        if not HAVE_EXT:
            pytest.skip("compiled kernel not built")
        pairs = sweep_pairs(25, parity=False)
        tables = second_tables(pairs)
        qr = square_residue_table()
        rng = random.Random(51)
        for a, b in rng.sample(pairs, 20):
            cu, cv, cw = pair_coefficients(a, b)
            for both in (False, True):
                got_c = _sweepcore.scan_pair(
                    cu, cv, cw, tables.g2m, tables.h2m, tables.g, tables.h,
                    qr, FILTER_MODULUS, both, True,
                )
                got_p = _sweeppy.scan_pair(
                    cu, cv, cw, tables.g2m, tables.h2m, tables.g, tables.h,
                    qr, FILTER_MODULUS, both, True,
                )
                assert got_c[0] == got_p[0]
                assert list(got_c[1]) == list(got_p[1])

    def test_exact_stage_detects_squares(self):
        # synthetic: second pair values engineered so f1 is a square and
        # f2 differs; both-factors mode must not fire, product mode governed
        # by the actual product
        pairs = [(2, 1)]
        tables = second_tables(pairs)
        qr = square_residue_table()
        cu, cv, cw = pair_coefficients(2, 1)
        surv, hits = _sweeppy.scan_pair(
            cu, cv, cw, tables.g2m, tables.h2m, tables.g, tables.h,
            qr, FILTER_MODULUS, False, False,
        )
        assert surv == 1 and hits == []

    def test_kernel_square_detection_via_gcd_split(self):
        # against direct isqrt on the product, across many tuples
        pairs = sweep_pairs(18, parity=False)
        rng = random.Random(52)
        for _ in range(2000):
            a, b = rng.choice(pairs)
            m, n = rng.choice(pairs)
            f1, f2 = tuple_quartic_values(a, b, m, n)
            direct, _ = is_perfect_square(f1 * f2)
            assert direct is False  # no squares exist at these bounds

    def test_backend_reported(self):
        assert BACKEND in ("cython", "python")


class TestBlockers:
    def test_smallest_tuple(self):
        f1, f2 = 369, 481
        p, v = smallest_blocker(f1, f2)
        assert (p, v) == (13, 1)
        assert blocker_class(p) == "1mod4"
        assert oracle_blocker(f1, f2) == 13

    def test_matches_oracle_randomized(self):
        pairs = sweep_pairs(15, parity=False)
        rng = random.Random(53)
        for _ in range(300):
            a, b = rng.choice(pairs)
            m, n = rng.choice(pairs)
            f1, f2 = tuple_quartic_values(a, b, m, n)
            p, v = smallest_blocker(f1, f2)
            assert p == oracle_blocker(f1, f2)
            assert v == int_valuation(f1 * f2, p)
            assert v % 2 == 1

    def test_even_blocker_exists_without_parity(self):
        # (3,2) x (3,1): v_2(f2) = 7, the smallest blocker is 2
        f1, f2 = tuple_quartic_values(3, 2, 3, 1)
        assert f2 == 16000
        assert smallest_blocker(f1, f2) == (2, 9)

    def test_histogram_small_bound(self):
        result = blocker_analysis(SweepConfig(max_param=10))
        stats = result.stats
        assert stats.tuples == len(sweep_pairs(10, parity=False)) ** 2
        assert stats.blocker_classes["3mod4"] == 0
        assert stats.blocker_classes["2"] > 0
        assert sum(stats.blocker_classes.values()) == stats.tuples
        assert sum(stats.blocker_primes.values()) == stats.tuples

    def test_parity_mode_has_no_even_blockers(self):
        result = blocker_analysis(SweepConfig(max_param=12, parity=True))
        assert result.stats.blocker_classes["2"] == 0
        assert result.stats.blocker_classes["3mod4"] == 0

    def test_reports_jsonl(self, tmp_path):
        out = str(tmp_path / "reports.jsonl")
        result = blocker_analysis(SweepConfig(max_param=6, out_path=out))
        records = [json.loads(line) for line in open(out)]
        assert len(records) == result.stats.tuples
        classes = {}
        for r in records:
            assert set(r) == {"a", "b", "m", "n", "f1", "f2", "square", "blocker", "blocker_class"}
            assert r["square"] is False
            assert int(r["f1"]) > 0  # decimal strings
            classes[r["blocker_class"]] = classes.get(r["blocker_class"], 0) + 1
        assert classes == {k: v for k, v in result.stats.blocker_classes.items() if v}

    def test_finding_record_schema(self):
        rec = Finding(2, 1, 2, 1, 369, 481).record()
        assert rec["square"] is True
        assert rec["blocker"] is None
        assert rec["f1"] == "369"


class TestGaussianBlocker:
    def test_smallest_tuple(self):
        rep = gaussian_blocker_check(2, 1, 2, 1)
        assert rep.blocker == 13
        assert rep.blocker_class == "1mod4"
        assert rep.z2.re == 16 and rep.z2.im == 15
        assert rep.z2.norm() == 481
        assert rep.product_valuation == 1
        v1, v2 = rep.valuations
        assert v1.norm_valuation + v2.norm_valuation == 1

    def test_inert_prime_even(self):
        f1, f2 = tuple_quartic_values(2, 1, 2, 1)
        assert int_valuation(f1 * f2, 3) == 2

    def test_ramified_blocker(self):
        rep = gaussian_blocker_check(3, 2, 3, 1)
        assert rep.blocker == 2
        assert rep.blocker_class == "2"
        v1, v2 = rep.valuations
        assert v1.kind == v2.kind == "ramified"
        assert v1.norm_valuation + v2.norm_valuation == 9


class TestSieve:
    def test_empty_sieve_passes_everything(self):
        r = modular_sieve(Fraction(2), height=20, prime_bound=3)
        assert r.primes == ()
        assert len(r.survivors) == r.candidates

    def test_primes_eliminate(self):
        weak = modular_sieve(Fraction(2), height=50, prime_bound=12)
        strong = modular_sieve(Fraction(2), height=50, prime_bound=60)
        assert len(strong.survivors) <= len(weak.survivors) < weak.candidates

    def test_good_primes_only(self):
        r = modular_sieve(Fraction(2), height=20, prime_bound=60)
        assert 2 not in r.primes
        assert 5 not in r.primes  # divides the denominator of A at s = 2
        for p in r.primes:
            assert p % 2 == 1

    def test_special_x_excluded(self):
        r = modular_sieve(Fraction(2), height=200, prime_bound=3)
        survivors_x = {Fraction(u, w * w) for (u, w) in r.survivors}
        for sp in r.excluded_x:
            assert sp not in survivors_x
        # x(T4) = 146/25 is inside this box and must have been dropped
        assert Fraction(146, 25) in r.excluded_x

    def test_degenerate_s_rejected(self):
        with pytest.raises(ValueError):
            modular_sieve(Fraction(1), height=10, prime_bound=10)

    def test_default_specializations_listed(self):
        assert len(DEFAULT_SIEVE_SPECIALIZATIONS) == 5
        assert all(0 < s < 1 for s in DEFAULT_SIEVE_SPECIALIZATIONS)
