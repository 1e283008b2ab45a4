import json

import numpy as np
import pytest

from entshare import monogamy as mg
from entshare.measures import PartitionSpec, concurrence_wootters
from entshare.qmat import DimensionError
from entshare.states import (
    DensityMatrix,
    StateVector,
    basis_state,
    bell,
    ghz,
    ghz_w_mixture,
    haar_random_pure,
    product_state,
    random_density,
    random_mixed,
    tensor,
    w,
)

from conftest import local_unitary

N_AB_W = (np.sqrt(5) - 1) / 6  # brute-force partial-transpose spectrum of the W pair
PI_W = 2 / 9 - 2 * N_AB_W**2


def product(n, rng):
    return product_state(*[rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(n)])


class TestReport:
    def test_flags(self):
        r = mg.MonogamyReport("x", 1.0, 1.0 - 5e-10, "")
        assert r.holds and not r.strict
        r = mg.MonogamyReport("x", 1.0, 1.0 + 2e-7, "")
        assert r.holds and r.strict
        r = mg.MonogamyReport("x", 1.0, 1.0 - 2e-9, "")
        assert not r.holds

    def test_serializes(self):
        d = mg.ckw_check(w(3)).to_dict()
        json.dumps(d)
        assert {"inequality_id", "lhs", "rhs", "slack", "tolerance", "holds", "strict", "seed"} <= d.keys()


class TestCKW:
    def test_ghz(self):
        r = mg.ckw_check(ghz(3))
        assert r.lhs == pytest.approx(0, abs=1e-12) and r.rhs == pytest.approx(1) and r.holds

    def test_w_saturates(self):
        r = mg.ckw_check(w(3))
        assert r.lhs == pytest.approx(8 / 9, abs=1e-12)
        assert abs(r.slack) < 1e-9

    def test_product(self, rng):
        r = mg.ckw_check(product(3, rng))
        assert r.lhs == pytest.approx(0, abs=1e-12) and r.rhs == pytest.approx(0, abs=1e-12)

    def test_size(self):
        with pytest.raises(DimensionError):
            mg.ckw_check(ghz(4))


class TestTangleAndPi:
    def test_tangle(self):
        assert mg.three_tangle_pure(ghz(3)) == pytest.approx(1)
        assert mg.three_tangle_pure(w(3)) == pytest.approx(0, abs=1e-9)
        assert mg.three_tangle_pure(tensor(bell(), basis_state("0"))) == pytest.approx(0, abs=1e-9)

    def test_pi(self, rng):
        assert mg.residual_pi(ghz(3)) == pytest.approx(0.25, abs=1e-12)
        assert mg.residual_pi(w(3)) == pytest.approx(PI_W, abs=1e-12)
        assert PI_W == pytest.approx((np.sqrt(5) - 1) / 9)
        assert mg.residual_pi(product(3, rng)) == pytest.approx(0, abs=1e-12)

    def test_pi_nonnegative_on_pure(self, rng):
        for _ in range(200):
            assert mg.residual_pi(haar_random_pure(3, rng)) >= -1e-9

    def test_tangle_is_local_unitary_invariant(self, rng):
        # the three-tangle has the closed form 4 |hyperdeterminant|
        for _ in range(20):
            psi = haar_random_pure(3, rng)
            a = psi.amplitudes.reshape(2, 2, 2)
            d1 = a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2 + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2 + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2 + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2
            d2 = (
                a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
                + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
                + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
                + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
                + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
                + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1]
            )
            d3 = a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1] + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0]
            assert mg.three_tangle_pure(psi) == pytest.approx(4 * abs(d1 - 2 * d2 + 4 * d3), abs=1e-10)


class TestQubitwise:
    def test_w4_negativity(self):
        r = mg.monogamy_qubitwise(w(4), 0, "negativity")
        assert r.lhs == pytest.approx(0.03216991411008936, abs=1e-12)
        assert r.rhs == pytest.approx(0.1875, abs=1e-12)
        assert r.strict

    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("kind,rhs", [("concurrence", 1.0), ("negativity", 0.25), ("realignment", 0.25)])
    def test_ghz(self, n, kind, rhs):
        for focus in range(n):
            r = mg.monogamy_qubitwise(ghz(n), focus, kind)
            assert r.lhs == pytest.approx(0, abs=1e-12)
            assert r.rhs == pytest.approx(rhs, abs=1e-12)

    def test_product(self, rng):
        for kind in mg.MEASURES:
            r = mg.monogamy_qubitwise(product(4, rng), 2, kind)
            assert r.lhs == pytest.approx(0, abs=1e-12) and r.rhs == pytest.approx(0, abs=1e-12)

    def test_needs_three(self):
        with pytest.raises(DimensionError):
            mg.monogamy_qubitwise(bell(), 0, "negativity")

    def test_random(self, rng):
        for n in (3, 4):
            for _ in range(30):
                psi = haar_random_pure(n, rng)
                for focus in range(n):
                    for kind in mg.MEASURES:
                        assert mg.monogamy_qubitwise(psi, focus, kind).holds


class TestBlock:
    def test_ghz4(self):
        r = mg.monogamy_block(ghz(4), 0, (1,), (2, 3), "negativity")
        assert r.terms["0|2,3"] == pytest.approx(0, abs=1e-12)
        assert r.lhs == pytest.approx(0, abs=1e-12)
        assert r.rhs == pytest.approx(0.25)
        assert r.holds

    def test_product(self, rng):
        r = mg.monogamy_block(product(5, rng), 0, (1, 2), (3, 4), "realignment")
        assert r.lhs == pytest.approx(0, abs=1e-12) and r.rhs == pytest.approx(0, abs=1e-12)

    def test_w5(self):
        r = mg.monogamy_block(w(5), 0, (1, 2), (3, 4), "negativity")
        assert r.lhs == pytest.approx(0.028769782338811112, abs=1e-12)
        assert r.rhs == pytest.approx(0.16, abs=1e-12)
        assert r.strict

    def test_malformed(self):
        with pytest.raises(ValueError):
            mg.monogamy_block(ghz(4), 0, (1,), (2,), "negativity")
        with pytest.raises(ValueError):
            mg.monogamy_block(ghz(4), 0, (1, 2), (2, 3), "negativity")
        with pytest.raises(ValueError):
            mg.monogamy_block(ghz(4), 0, (1,), (2, 3), "concurrence")

    def test_blockings(self):
        assert mg.blockings(3) == [((1,), (2,))]
        b4 = mg.blockings(4)
        assert len(b4) == 4 and ((1, 2), (3,)) in b4 and ((3,), (1, 2)) in b4
        assert len(mg.blockings(5)) == 11
        assert all(0 not in s + e for s, e in mg.blockings(5))

    def test_set_partitions_count(self):
        # Bell numbers
        assert [sum(1 for _ in mg.set_partitions(range(k))) for k in range(1, 6)] == [1, 2, 5, 15, 52]


class TestPairBounds:
    def test_ghz(self):
        rn, rr = mg.theorem2_bounds(ghz(3))
        for r in (rn, rr):
            assert r.lhs == pytest.approx(0, abs=1e-12)
            assert r.rhs >= 0.25 - 1e-9
            assert r.strict

    def test_bell_times_qubit_saturates(self, rng):
        u = local_unitary(2, rng)
        pair = StateVector(u @ bell().amplitudes, (2, 2))
        c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        psi = tensor(pair, product_state(c))
        for r in mg.theorem2_bounds(psi):
            assert r.lhs == pytest.approx(0.5, abs=1e-12)
            assert abs(r.slack) < 1e-9

    def test_mixture_half(self):
        rn, rr = mg.theorem2_bounds(ghz_w_mixture(0.5))
        assert rn.holds and rr.holds
        # brute-force index-loop evaluation
        assert rn.slack == pytest.approx(0.4412619920128622, abs=1e-10)
        assert rr.slack == pytest.approx(0.479746404517007, abs=1e-10)

    def test_random_mixed(self):
        rng = np.random.default_rng(10)
        for k in range(100):
            rho = random_mixed(3, 4 + k % 3, rng)
            for r in mg.theorem2_bounds(rho):
                assert r.holds

    def test_concurrence_bound_underlies(self):
        # the concurrence form C_AB <= (1 + sqrt(1 - C_C:AB^2))/2 on pure states
        rng = np.random.default_rng(12)
        for _ in range(100):
            psi = haar_random_pure(3, rng)
            cab = concurrence_wootters(psi.density().reduce([0, 1]))
            from entshare.measures import concurrence_pure_cut

            cc = concurrence_pure_cut(psi, PartitionSpec((2,), (0, 1)))
            assert cab <= 0.5 * (1 + np.sqrt(1 - cc**2)) + 1e-9

    def test_residual_record(self):
        rec = mg.residuals(ghz(3))
        assert rec.tau_ckw == pytest.approx(1)
        assert rec.pi_negativity == pytest.approx(0.25)
        assert mg.residuals(ghz_w_mixture(0.3)).tau_ckw is None


class TestSweep:
    def test_endpoints(self):
        rows = mg.tau_sweep([0.0, 1.0])
        assert rows[0][1] == pytest.approx(0.25, abs=1e-7)
        assert rows[0][2] == pytest.approx(0.25, abs=1e-7)
        assert rows[1][1] == pytest.approx((3 - np.sqrt(5)) / 6, abs=1e-10)
        assert rows[1][2] == pytest.approx((3 - np.sqrt(5)) / 6, abs=1e-10)

    def test_ordering_and_sign(self):
        for p, tn, tr in mg.tau_sweep(np.linspace(0, 1, 41)):
            assert tn >= 0 and tr >= 0
            assert tn <= tr + 1e-9

    def test_range(self):
        with pytest.raises(ValueError):
            mg.tau_sweep([1.5])

    def test_grid(self):
        assert len(mg.sweep_grid(0.01)) == 101
        assert mg.sweep_grid(0.3)[-1] == 1.0
        with pytest.raises(ValueError):
            mg.sweep_grid(0)


class TestSlocc:
    @pytest.mark.parametrize(
        "psi,label",
        [
            (ghz(3), "GHZ"),
            (w(3), "W"),
            (tensor(basis_state("0"), bell()), "A-BC"),
            (tensor(bell(), basis_state("1")), "C-AB"),
            (basis_state("011"), "A-B-C"),
        ],
    )
    def test_labels(self, psi, label):
        assert mg.classify_slocc(psi).value == label

    def test_b_ac(self):
        a = np.zeros(8)
        a[[0b000, 0b101]] = 1 / np.sqrt(2)
        assert mg.classify_slocc(StateVector(a, (2, 2, 2))) == mg.SloccClass.B_AC

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(13)
        seeds = [ghz(3), w(3), tensor(basis_state("0"), bell()), basis_state("000")]
        for k in range(100):
            psi = seeds[k % 4] if k < 40 else haar_random_pure(3, rng)
            u = local_unitary(3, rng)
            moved = StateVector(u @ psi.amplitudes, (2, 2, 2))
            assert mg.classify_slocc(psi) == mg.classify_slocc(moved)

    def test_haar_is_ghz(self, rng):
        assert mg.classify_slocc(haar_random_pure(3, rng)) == mg.SloccClass.GHZ

    def test_table(self):
        rows = {r["class"]: r for r in mg.table1_rows()}
        assert list(rows) == ["A-B-C", "A-BC", "B-AC", "C-AB", "W", "GHZ"]
        for label, r in rows.items():
            assert r["classified_as"] == label


class TestCampaign:
    def test_empty(self):
        s = mg.conjecture_campaign(3, 0, seed=1)
        assert s["evaluations"] == 0 and s["violations"] == 0 and s["min_slack"] is None

    def test_deterministic(self):
        a = mg.conjecture_campaign(4, 5, seed=3, general_groups=True)
        b = mg.conjecture_campaign(4, 5, seed=3, general_groups=True)
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_counts(self):
        s = mg.conjecture_campaign(4, 10, seed=2)
        assert s["evaluations"] == 10 * 4 * 2
        assert set(s["per_blocking"]) == {"1,2|3", "3|1,2", "2|1,3", "1|2,3"}
        assert s["violations"] == 0

    def test_n3(self):
        s = mg.conjecture_campaign(3, 200, seed=9)
        assert s["violations"] == 0
        assert s["min_slack"] >= -1e-9

    def test_qualification_readings(self):
        q = mg.qualification(w(4), 0)
        assert q == {"pairwise": True, "cut": True}
        q = mg.qualification(ghz(4), 0)
        assert q["pairwise"] is False and q["cut"] is True


class TestConvexRoof:
    def test_pure_exact(self):
        psi = haar_random_pure(3, 4)
        cut = PartitionSpec((0,), (1, 2))
        from entshare.measures import negativity

        expected = negativity(psi, cut) ** 2
        for trials in (1, 5):
            assert mg.convex_roof_upper_bound(psi, cut, "negativity-squared", trials, 0) == pytest.approx(expected, abs=1e-12)

    def test_separable_mixture(self):
        # equal mixture of two Bell states is separable; the eigen-ensemble is not unique
        b1 = bell().amplitudes
        b2 = np.array([1, 0, 0, -1]) / np.sqrt(2)
        rho = DensityMatrix(0.5 * np.outer(b1, b1) + 0.5 * np.outer(b2, b2), (2, 2))
        cut = PartitionSpec((0,), (1,))
        assert mg.convex_roof_upper_bound(rho, cut, "concurrence-squared", 200, 1) < 1e-9

    def test_above_wootters_and_decreasing(self):
        b1 = bell().amplitudes
        b2 = np.array([0, 1, 1, 0]) / np.sqrt(2)
        rho = DensityMatrix(0.7 * np.outer(b1, b1) + 0.3 * np.outer(b2, b2), (2, 2))
        cut = PartitionSpec((0,), (1,))
        exact = concurrence_wootters(rho) ** 2
        values = [mg.convex_roof_upper_bound(rho, cut, "concurrence-squared", t, 5) for t in (1, 10, 100, 1000)]
        assert all(v >= exact - 1e-9 for v in values)
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert values[-1] - exact < 0.05

    def test_mixture_monotone_in_trials(self):
        rho = ghz_w_mixture(0.5)
        cut = PartitionSpec((0,), (1, 2))
        b10 = mg.convex_roof_upper_bound(rho, cut, "negativity-squared", 10, 3)
        b1000 = mg.convex_roof_upper_bound(rho, cut, "negativity-squared", 1000, 3)
        assert b1000 <= b10

    def test_trials_validated(self):
        with pytest.raises(ValueError):
            mg.convex_roof_upper_bound(ghz(3), PartitionSpec((0,), (1, 2)), "negativity-squared", 0, 0)
