from fractions import Fraction as F

import pytest

from netgame import (
    AssumptionError,
    FeasibilityError,
    InvalidInputError,
    PreconditionError,
    RegimeError,
    check_stability_deviation,
    connection_graph,
)
from netgame.degree_sequence import (
    DegreeSequence,
    assumption1_sides,
    gen_regular_girth5,
    min_girth5_size,
    powerlaw_sequence,
    realize,
    smallest_K,
    validate_sequence,
)
from netgame.metrics import girth, is_connected, max_invitees

from conftest import params


class TestSequence:
    def test_bounds(self):
        with pytest.raises(InvalidInputError):
            DegreeSequence([0, 1])
        with pytest.raises(InvalidInputError):
            DegreeSequence([3, 1, 1])
        with pytest.raises(InvalidInputError):
            DegreeSequence([1])

    def test_histogram(self):
        assert DegreeSequence([3, 1, 3, 2]).histogram() == {1: 1, 2: 1, 3: 2}


class TestValidation:
    def test_smallest_k_definition(self):
        ds = [5, 5, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3]
        K = smallest_K(ds)
        lhs, rhs = assumption1_sides(ds, K)
        assert lhs >= rhs
        if K > 1:
            lhs, rhs = assumption1_sides(ds, K - 1)
            assert lhs < rhs

    def test_all_twos_rejected_by_assumption_2(self):
        with pytest.raises(AssumptionError) as info:
            validate_sequence([2] * 10, F(3, 5))
        assert info.value.assumption == 2

    def test_many_pendants_rejected_by_assumption_3(self):
        with pytest.raises(AssumptionError) as info:
            validate_sequence([1] * 10 + [3] * 10, F(3, 5))
        assert info.value.assumption == 3

    def test_gate_runs_before_construction(self):
        with pytest.raises(AssumptionError):
            realize([1] * 10 + [3] * 10, params("3/5", 20), seed=1)

    @pytest.mark.parametrize("g", ["1/2", "2/3", "9/10"])
    def test_regime(self, g):
        with pytest.raises(RegimeError):
            validate_sequence([3] * 10, F(g))

    def test_powerlaw_accepted(self):
        D = powerlaw_sequence("5/2", 2000)
        v = validate_sequence(D, F(11, 20))
        assert D.n == 2000 and v.K < max(D)
        assert all(x["holds"] for k, x in v.diagnostics.items() if k.startswith("assumption"))
        assert list(D) == sorted(D, reverse=True)


class TestGirth5:
    def check(self, gg, k, m):
        G = gg.graph()
        assert G.n == m and set(G.degrees()) == {k}
        assert girth(G) >= 5
        assert is_connected(G)

    def test_petersen_size(self):
        self.check(gen_regular_girth5(3, 10, seed=1), 3, 10)

    def test_cycle(self):
        gg = gen_regular_girth5(2, 7, seed=4)
        self.check(gg, 2, 7)
        assert girth(gg.graph()) == 7

    def test_k4_m200(self):
        self.check(gen_regular_girth5(4, 200, seed=3), 4, 200)

    def test_too_small(self):
        with pytest.raises(FeasibilityError):
            gen_regular_girth5(3, 8, seed=1)

    def test_parity(self):
        with pytest.raises(InvalidInputError):
            gen_regular_girth5(3, 11, seed=1)

    def test_deterministic(self):
        assert gen_regular_girth5(3, 20, seed=9) == gen_regular_girth5(3, 20, seed=9)

    def test_size_rule(self):
        assert min_girth5_size(2) == 5
        assert all(min_girth5_size(k) >= k * k + 1 for k in range(2, 12))


def assert_realization(rep, D, gamma):
    cfg = rep.config
    G = connection_graph(cfg)
    assert tuple(G.degrees()) == rep.achieved
    assert rep.l1_shift == sum(abs(x - y) for x, y in zip(D, rep.achieved))
    assert rep.planned() == list(rep.achieved)
    assert rep.within_budget()
    assert is_connected(G)
    assert max_invitees(cfg) <= rep.K_used + 3
    assert check_stability_deviation(cfg).stable
    # in this regime two non-adjacent agents never meet above 1/3
    for (u, v), m in G.meeting_rates.items():
        if not G.has_edge(u, v):
            assert m <= F(1, 3)
    # a vertex carries at most one mutual-1/2 relation
    for v in range(cfg.n):
        halves = [u for u, r in cfg.own_rates.get(v, {}).items()
                  if r == F(1, 2) and cfg.own_rates.get(u, {}).get(v) == F(1, 2)]
        assert len(halves) <= 1


class TestRealize:
    def test_sixty_cubic(self):
        D = DegreeSequence([3] * 60)
        rep = realize(D, params("3/5", 60), seed=1)
        assert_realization(rep, D, F(3, 5))
        assert rep.l1_shift <= 2 * 60

    def test_small_mixed(self):
        D = DegreeSequence([7, 6, 5, 4, 4, 4, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 2, 2, 1, 1] + [3] * 40)
        rep = realize(D, params("7/12", D.n), seed=5)
        assert_realization(rep, D, F(7, 12))

    def test_powerlaw(self):
        D = powerlaw_sequence("5/2", 2000)
        rep = realize(D, params("11/20", 2000), seed=11)
        assert_realization(rep, D, F(11, 20))
        changed = {v for v in range(D.n) if D[v] != rep.achieved[v]}
        assert changed <= set(rep.shifted_vertices())

    def test_deterministic(self):
        D = DegreeSequence([5, 4, 4] + [3] * 41)
        a = realize(D, params("3/5", D.n), seed=2)
        b = realize(D, params("3/5", D.n), seed=2)
        assert a.config == b.config and a.to_json() == b.to_json()

    def test_size_mismatch(self):
        with pytest.raises(InvalidInputError):
            realize([3] * 10, params("3/5", 11), seed=1)

    def test_needs_infinitesimal_b(self):
        with pytest.raises(PreconditionError):
            realize([3] * 10, params("3/5", 10, b=F(1, 100)), seed=1)

    def test_report_json(self):
        D = DegreeSequence([3] * 12)
        d = realize(D, params("3/5", 12), seed=1).to_json()
        assert d["n"] == 12 and d["l1_shift"] <= d["logged_shift"]
        assert all(set(e) == {"step", "vertex", "delta", "detail"} for e in d["step_log"])
