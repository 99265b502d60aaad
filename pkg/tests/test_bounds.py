import pytest

from sphererank.bounds import (
    CarlssonBound,
    browder_min_m,
    carlsson_min_m,
    free_rank_rp,
    gl_rank_audit,
    headline_report,
    olshanskii_condition,
    perm_rank_audit,
)
from sphererank.errors import GuardExceeded


class TestFreeRankRp:
    @pytest.mark.parametrize("m,n,expected", [(3, 5, 10), (2, 9, 0), (5, 3, 3)])
    def test_examples(self, m, n, expected):
        assert free_rank_rp(m, n) == expected

    def test_three_case_formula_grid(self):
        for m in range(1, 13):
            for n in range(1, 6):
                expected = {0: 0, 1: n, 2: 0, 3: 2 * n}[m % 4]
                assert free_rank_rp(m, n) == expected

    def test_depends_only_on_residue_and_linear_in_n(self):
        for m in range(1, 9):
            assert free_rank_rp(m, 4) == free_rank_rp(m + 4, 4)
            assert free_rank_rp(m, 6) == 2 * free_rank_rp(m, 3)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            free_rank_rp(0, 1)


class TestBrowder:
    @pytest.mark.parametrize("dim_gv,t,expected", [(1199, 100, 11), (5, 5, 0), (7, 3, 2)])
    def test_examples(self, dim_gv, t, expected):
        assert browder_min_m(dim_gv, t) == expected

    def test_least_consistent_value(self):
        for dim_gv in range(1, 40):
            for t in range(1, 10):
                m = browder_min_m(dim_gv, t)
                assert dim_gv <= (m + 1) * t
                if m > 0:
                    assert dim_gv > m * t


class TestCarlsson:
    def test_headline_values(self):
        bound = carlsson_min_m(1199, 100)
        assert bound.paper_weak == 2047 == 2**11 - 1
        assert bound.exact == 4067
        assert 4068**100 >= 2**1199 > 4067**100

    def test_diagonal(self):
        assert carlsson_min_m(7, 7).exact == 1

    def test_two_sided_certificate_grid(self):
        for dim_gv in range(1, 60, 3):
            for t in range(1, 8):
                exact, weak = carlsson_min_m(dim_gv, t)
                assert (exact + 1) ** t >= 2**dim_gv
                if exact >= 1:
                    assert exact**t < 2**dim_gv
                assert exact >= weak

    def test_browder_below_carlsson(self):
        for t in range(1, 8):
            for dim_gv in range(2 * t, 12 * t, t):
                assert browder_min_m(dim_gv, t) <= carlsson_min_m(dim_gv, t).exact


class TestOlshanskiiCondition:
    def test_headline_holds(self):
        assert olshanskii_condition(1249, 50, 51)

    def test_boundary_fails(self):
        assert not olshanskii_condition(1250, 50, 51)

    def test_desk_instance(self):
        assert olshanskii_condition(5, 4, 4)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            olshanskii_condition(0, 1, 1)


class TestHeadlineReport:
    def test_headline_instance(self):
        rep = headline_report(1249, 50, 51)
        assert rep.condition_holds
        assert rep.T_bound == 100 and rep.N_bound == 1199
        assert rep.sphere_dim == 2**1298 - 1
        assert rep.browder_min_m == 11
        assert rep.carlsson_min_m == CarlssonBound(4067, 2047)

    def test_d8_instance(self):
        rep = headline_report(2, 1, 2)
        assert rep.T_bound == 2 and rep.N_bound == 1 and rep.sphere_dim == 3

    def test_degenerate_instance(self):
        rep = headline_report(1, 1, 1)
        assert rep.T_bound == 1 and rep.N_bound == 1 and rep.sphere_dim == 1

    def test_arithmetic_identities(self):
        for n, t, k in [(10, 3, 4), (33, 7, 9), (1249, 50, 51)]:
            rep = headline_report(n, t, k)
            assert rep.T_bound + rep.N_bound == n + t
            assert rep.sphere_dim + 1 == 1 << (n + t - 1)


class TestPermRankAudit:
    def test_two_points(self):
        res = perm_rank_audit(2)
        assert res.ok and res.worst_rank == 1 and res.worst_orbits == 1

    def test_four_points(self):
        res = perm_rank_audit(4)
        assert res.ok and res.worst_rank == 2 and res.worst_orbits == 2

    def test_every_n_within_guard(self):
        for n in range(1, 8):
            assert perm_rank_audit(n).ok

    def test_seven_points_worst_case(self):
        res = perm_rank_audit(7)
        assert res.worst_rank == 3 and res.worst_orbits == 4  # three disjoint swaps

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            perm_rank_audit(8)


class TestGlRankAudit:
    @pytest.mark.parametrize("n,expected_rank", [(1, 0), (2, 1), (3, 2)])
    def test_small(self, n, expected_rank):
        res = gl_rank_audit(n)
        assert res.max_rank_found == expected_rank
        assert res.max_rank_found <= res.bound

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            gl_rank_audit(5)
