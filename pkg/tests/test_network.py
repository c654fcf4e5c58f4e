import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linebroadcast.network import (
    LinearNetwork,
    NetworkError,
    PathLoss,
    assignment_cost,
    distance,
    edge_source_assignment,
    load_network,
    min_positive_ranges,
    validate_broadcast,
)
from linebroadcast.oracle import OracleConfig, brute_force_optimal

from conftest import networks


class TestLinearNetwork:
    def test_rejects_coincident_positions(self):
        with pytest.raises(NetworkError, match="strictly increasing"):
            LinearNetwork([0, 1, 1, 2], 1)

    def test_rejects_unsorted_and_tiny(self):
        with pytest.raises(NetworkError):
            LinearNetwork([0, 2, 1], 1)
        with pytest.raises(NetworkError, match="at least two"):
            LinearNetwork([0], 0)

    @pytest.mark.parametrize("source", [-1, 5, 1.5])
    def test_rejects_bad_source(self, source):
        with pytest.raises(NetworkError, match="source"):
            LinearNetwork([0, 1, 2, 3, 4], source)

    def test_positions_are_read_only(self, five):
        with pytest.raises(ValueError):
            five.positions[0] = 5.0

    def test_json_round_trip(self, five, tmp_path):
        path = tmp_path / "net.json"
        path.write_text(json.dumps(dict(five.to_dict(), seed=3)))
        assert load_network(path) == five

    @pytest.mark.parametrize(
        "doc, field",
        [
            ({"positions": [0, 1]}, "source"),
            ({"positions": "abc", "source": 0}, "positions"),
            ({"positions": [0, 1], "source": "0"}, "source"),
            ({"positions": [0, 1, 1], "source": 0}, "positions"),
        ],
    )
    def test_malformed_documents_name_the_field(self, doc, field):
        with pytest.raises(NetworkError, match=field):
            LinearNetwork.from_dict(doc)


def test_path_loss_bounds():
    PathLoss(2)
    PathLoss(6)
    for bad in (1.5, 6.5):
        with pytest.raises(NetworkError, match="alpha"):
            PathLoss(bad)


class TestDistance:
    def test_examples(self, five):
        assert distance(five, 0, 4) == 7
        assert distance(five, 2, 2) == 0
        assert distance(LinearNetwork([0, 100, 101, 203], 0), 1, 3) == 103

    def test_symmetric(self, five):
        for i, j in itertools.product(range(5), repeat=2):
            assert distance(five, i, j) == distance(five, j, i)

    def test_out_of_bounds(self, five):
        with pytest.raises(IndexError):
            distance(five, 0, 5)


class TestMinPositiveRanges:
    def test_five(self, five):
        m = min_positive_ranges(five)
        assert m.m[[0, 1, 3, 4]].tolist() == [0, 1, 3, 0]
        assert (m.source_left, m.source_right) == (2, 1)

    def test_two_nodes(self):
        m = min_positive_ranges(LinearNetwork([0, 5], 0))
        assert m.source_right == 5 and m.source_left == 0
        assert m.m[1] == 0

    def test_adversarial_a(self, adv_a):
        m = min_positive_ranges(adv_a)
        assert m.m[[0, 2, 3]].tolist() == [0, 102, 0]
        assert (m.source_left, m.source_right) == (100, 1)

    @given(networks(min_n=2, interior=False))
    def test_invariants(self, net):
        m = min_positive_ranges(net)
        x, s, n = net.positions, net.source, net.n
        assert m.m[0] == 0 or s == 0
        assert m.m[n - 1] == 0 or s == n - 1
        for i in range(1, s):
            assert m.m[i] == x[i] - x[i - 1]
        for i in range(s + 1, n - 1):
            assert m.m[i] == x[i + 1] - x[i]


class TestCost:
    def test_examples(self):
        assert assignment_cost([0, 0, 0], 2) == 0
        assert assignment_cost([0, 1, 2, 3, 0], 2) == 14
        assert assignment_cost([0, 100, 102, 0], 2) == 20404

    def test_negative_rejected(self):
        with pytest.raises(NetworkError):
            assignment_cost([1, -1])

    @given(
        st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=12),
        st.floats(2, 6),
    )
    def test_hop_splitting(self, hops, alpha):
        # a single hop spanning several never beats the sub-hops
        total = sum(hops)
        assert total**alpha >= sum(h**alpha for h in hops) * (1 - 1e-12)


class TestValidateBroadcast:
    def test_chain_informs_everyone(self, five):
        res = validate_broadcast(five, [0, 1, 1, 3, 0])
        assert res.complete

    def test_no_transmission(self, five):
        res = validate_broadcast(five, np.zeros(5))
        assert res.informed.tolist() == [False, False, True, False, False]
        assert res.rounds == 0

    def test_one_short(self, adv_a):
        res = validate_broadcast(adv_a, [0, 1, 101, 0])
        assert not res.informed[3]
        assert not res.complete

    def test_boundary_is_inclusive(self):
        net = LinearNetwork([0.0, 0.1, 0.3], 0)
        r = [0.1, 0.3 - 0.1, 0.0]
        assert validate_broadcast(net, r).complete

    def test_rounds_count_hops(self):
        net = LinearNetwork(np.arange(6.0), 0)
        assert validate_broadcast(net, [1, 1, 1, 1, 1, 0]).rounds == 5

    @given(networks(min_n=2, max_n=12, interior=False), st.data())
    @settings(max_examples=60)
    def test_monotone_in_ranges(self, net, data):
        d = net.distance_matrix()
        r = np.array([data.draw(st.sampled_from(sorted(set(d[i])))) for i in range(net.n)])
        before = validate_broadcast(net, r).informed
        i = data.draw(st.integers(0, net.n - 1))
        r2 = r.copy()
        r2[i] = data.draw(st.sampled_from(sorted(v for v in set(d[i]) if v >= r[i])))
        after = validate_broadcast(net, r2).informed
        assert np.all(after >= before)
        assert validate_broadcast(net, r).informed[net.source]


class TestEdgeSource:
    def test_two_nodes(self):
        assert edge_source_assignment(LinearNetwork([0, 5], 0)).tolist() == [5, 0]

    def test_five_left_and_right(self):
        left = edge_source_assignment(LinearNetwork([0, 1, 3, 4, 7], 0))
        assert left.tolist() == [1, 2, 1, 3, 0]
        assert assignment_cost(left, 2) == 15
        right = edge_source_assignment(LinearNetwork([0, 1, 3, 4, 7], 4))
        assert right.tolist() == [0, 1, 2, 1, 3]

    def test_interior_rejected(self, five):
        with pytest.raises(NetworkError):
            edge_source_assignment(five)

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_oracle(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 8))
        x = np.sort(rng.uniform(0, 50, n))
        net = LinearNetwork(x, 0 if seed % 2 else n - 1)
        alpha = 2 + seed % 3
        r = edge_source_assignment(net)
        assert validate_broadcast(net, r).complete
        _, best = brute_force_optimal(net, OracleConfig(alpha=alpha))
        assert assignment_cost(r, alpha) == pytest.approx(best, rel=1e-9)


def test_shrinking_a_useless_range_saves_energy(five):
    # node 1's range 0.5 < M(1)=1 reaches nobody; dropping it keeps coverage and lowers cost
    r = np.array([0, 0.5, 2, 3, 0])
    before = validate_broadcast(five, r).informed
    r2 = r.copy()
    r2[1] = 0
    assert np.array_equal(validate_broadcast(five, r2).informed, before)
    assert assignment_cost(r2) < assignment_cost(r)
