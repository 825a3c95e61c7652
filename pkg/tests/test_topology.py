import pytest
from hypothesis import given, strategies as st

from wlanlb.topology import (
    AccessPoint, MobileStation, NetworkState, NetworkError, ap_load, check, derive_zones, validate,
)


def net(*stations, aps=("AP1", "AP2", "AP3")):
    return NetworkState(tuple(AccessPoint(a) for a in aps), stations)


def sta(sid, reach, assoc=None, up=0.0, down=0.0):
    return MobileStation(sid, {a: 30.0 for a in reach}, assoc, up, down)


class TestZones:
    def test_duplicates_collapse(self):
        z = derive_zones(net(sta("a", ["AP1", "AP2"]), sta("b", ["AP2", "AP1"])))
        assert [zone.aps for zone in z] == [("AP1", "AP2")]

    def test_no_overlap(self):
        assert derive_zones(net(sta("a", ["AP1"]), sta("b", ["AP2"]))) == []

    def test_two_zones(self):
        stations = [sta("a", ["AP1", "AP2"]), sta("b", ["AP2", "AP3"])]
        expected = sorted({tuple(sorted(s.reachable)) for s in stations})
        assert [zone.aps for zone in derive_zones(net(*stations))] == expected
        assert expected == [("AP1", "AP2"), ("AP2", "AP3")]

    @given(st.lists(st.sets(st.sampled_from(["AP1", "AP2", "AP3"]), min_size=1), max_size=6),
           st.randoms())
    def test_order_independent_and_idempotent(self, reach_sets, rnd):
        stations = [sta(f"s{i}", sorted(r)) for i, r in enumerate(reach_sets)]
        shuffled = list(stations)
        rnd.shuffle(shuffled)
        z1 = derive_zones(net(*stations))
        assert z1 == derive_zones(net(*shuffled))
        assert z1 == derive_zones(net(*stations))
        assert all(len(z.aps) >= 2 for z in z1)


class TestLoad:
    def test_empty(self):
        assert ap_load(net(), "AP1") == 0

    def test_one_station(self):
        assert ap_load(net(sta("a", ["AP1"], "AP1", 100, 400)), "AP1") == 500

    def test_two_stations(self):
        n = net(sta("a", ["AP1"], "AP1", 100, 400), sta("b", ["AP1"], "AP1", 50, 50))
        assert ap_load(n, "AP1") == 600

    def test_unknown_ap(self):
        with pytest.raises(KeyError):
            ap_load(net(), "nope")

    @given(st.lists(st.tuples(st.sampled_from(["AP1", "AP2", "AP3"]),
                              st.floats(0, 1e4), st.floats(0, 1e4)), max_size=8),
           st.sampled_from(["AP1", "AP2", "AP3"]), st.floats(0, 1e4))
    def test_additive(self, specs, target, d):
        stations = [sta(f"s{i}", [ap], ap, up, down) for i, (ap, up, down) in enumerate(specs)]
        before = {a: ap_load(net(*stations), a) for a in ("AP1", "AP2", "AP3")}
        after_net = net(*stations, sta("new", [target], target, d, 0.0))
        for a in ("AP1", "AP2", "AP3"):
            expect = before[a] + (d if a == target else 0.0)
            assert ap_load(after_net, a) == pytest.approx(expect, rel=1e-12, abs=1e-9)
        total = sum(s.demand_kbps for s in after_net.stations)
        assert sum(after_net.loads().values()) == pytest.approx(total, rel=1e-12)


class TestValidate:
    def test_unreachable_association(self):
        problems = validate(net(sta("cam", ["AP1"], "AP2")))
        assert len(problems) == 1 and "cam" in problems[0] and "AP2" in problems[0]

    def test_duplicate_ap(self):
        problems = validate(net(aps=("AP1", "AP1")))
        assert any("duplicate AP" in p for p in problems)

    def test_ok(self):
        assert validate(net(sta("a", ["AP1", "AP2"], "AP1", 10, 0), aps=("AP1", "AP2"))) == []

    def test_check_raises(self):
        with pytest.raises(NetworkError):
            check(net(sta("a", ["AP1"], "AP9")))

    def test_negative_snr_and_demand(self):
        bad = NetworkState((AccessPoint("AP1"),), (MobileStation("a", {"AP1": -3.0}, None, -1.0),))
        problems = validate(bad)
        assert any("negative SNR" in p for p in problems)
        assert any("negative demand" in p for p in problems)
