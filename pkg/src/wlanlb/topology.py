"""Static model of an extended service set: APs, stations, links, zones."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Mapping, Sequence

DEFAULT_BANDWIDTH_HZ = 20e6


class NetworkError(ValueError):
    """Raised when a network violates its invariants."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class AccessPoint:
    id: str
    bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ
    capacity_cap_bps: float | None = None


@dataclass(frozen=True)
class MobileStation:
    id: str
    reachable: Mapping[str, float]  # ap id -> link SNR in dB
    associated_ap: str | None = None
    demand_up_kbps: float = 0.0
    demand_down_kbps: float = 0.0

    @property
    def demand_kbps(self) -> float:
        return self.demand_up_kbps + self.demand_down_kbps

    def snr_to(self, ap_id: str) -> float:
        return self.reachable[ap_id]


@dataclass(frozen=True)
class OverlapZone:
    aps: tuple[str, ...]

    @property
    def id(self) -> str:
        return "+".join(self.aps)

    def __contains__(self, ap_id: object) -> bool:
        return ap_id in self.aps


@dataclass(frozen=True)
class NetworkState:
    aps: tuple[AccessPoint, ...]
    stations: tuple[MobileStation, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "aps", tuple(self.aps))
        object.__setattr__(self, "stations", tuple(self.stations))

    @cached_property
    def zones(self) -> list[OverlapZone]:
        return derive_zones(self)

    @cached_property
    def _ap_index(self) -> dict[str, AccessPoint]:
        return {ap.id: ap for ap in self.aps}

    @cached_property
    def _station_index(self) -> dict[str, MobileStation]:
        return {st.id: st for st in self.stations}

    @property
    def ap_ids(self) -> list[str]:
        return [ap.id for ap in self.aps]

    def ap(self, ap_id: str) -> AccessPoint:
        return self._ap_index[ap_id]

    def station(self, station_id: str) -> MobileStation:
        return self._station_index[station_id]

    def members(self, ap_id: str) -> list[MobileStation]:
        return [st for st in self.stations if st.associated_ap == ap_id]

    def loads(self) -> dict[str, float]:
        """Offered load of every AP in kbps, in AP order."""
        out = {ap.id: 0.0 for ap in self.aps}
        for st in self.stations:
            if st.associated_ap is not None:
                out[st.associated_ap] += st.demand_kbps
        return out

    def assignment(self) -> dict[str, str | None]:
        return {st.id: st.associated_ap for st in self.stations}

    def with_association(self, station_id: str, ap_id: str | None) -> NetworkState:
        stations = tuple(
            replace(st, associated_ap=ap_id) if st.id == station_id else st
            for st in self.stations
        )
        return NetworkState(self.aps, stations)

    def with_assignment(self, assignment: Mapping[str, str | None]) -> NetworkState:
        stations = tuple(
            replace(st, associated_ap=assignment[st.id]) if st.id in assignment else st
            for st in self.stations
        )
        return NetworkState(self.aps, stations)


def derive_zones(network: NetworkState) -> list[OverlapZone]:
    """One zone per distinct reachability set spanning two or more APs.

    Zones are sorted by their sorted AP-id tuple, so the result does not
    depend on the order stations are listed in.
    """
    sets = {tuple(sorted(st.reachable)) for st in network.stations if len(st.reachable) >= 2}
    return [OverlapZone(aps) for aps in sorted(sets)]


def ap_load(network: NetworkState, ap_id: str) -> float:
    """Sum of up-link and down-link demand (kbps) of the stations on `ap_id`."""
    if ap_id not in network._ap_index:
        raise KeyError(f"unknown AP {ap_id!r}")
    return sum(st.demand_kbps for st in network.stations if st.associated_ap == ap_id)


def validate(network: NetworkState) -> list[str]:
    """Return every invariant violation found; an empty list means the network is valid."""
    problems = []
    seen = set()
    for ap in network.aps:
        if ap.id in seen:
            problems.append(f"duplicate AP id {ap.id!r}")
        seen.add(ap.id)
        if not ap.bandwidth_hz > 0:
            problems.append(f"AP {ap.id!r}: bandwidth_hz must be > 0")
        if ap.capacity_cap_bps is not None and not ap.capacity_cap_bps > 0:
            problems.append(f"AP {ap.id!r}: capacity_cap_bps must be > 0")
    seen_st = set()
    for st in network.stations:
        if st.id in seen_st:
            problems.append(f"duplicate station id {st.id!r}")
        seen_st.add(st.id)
        for ap_id, snr in st.reachable.items():
            if ap_id not in seen:
                problems.append(f"station {st.id!r}: link to unknown AP {ap_id!r}")
            if not snr >= 0:
                problems.append(f"station {st.id!r}: negative SNR {snr} dB to AP {ap_id!r}")
        if st.associated_ap is not None and st.associated_ap not in st.reachable:
            problems.append(
                f"station {st.id!r}: associated to unreachable AP {st.associated_ap!r}"
            )
        if st.demand_up_kbps < 0 or st.demand_down_kbps < 0:
            problems.append(f"station {st.id!r}: negative demand")
    return problems


def check(network: NetworkState) -> NetworkState:
    problems = validate(network)
    if problems:
        raise NetworkError(problems)
    return network
