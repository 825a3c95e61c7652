"""Load-balancing controller: balance index, AP classification, SNR gate,
the iterative rebalancing loop and an exhaustive oracle for small networks.
"""
from __future__ import annotations

import enum
import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .topology import NetworkState, OverlapZone, check

DEFAULT_ALPHA = 0.2
RECOMMENDED_ALPHA = (0.1, 0.2)
BETA_EPS = 1e-12


class BalanceMode(str, enum.Enum):
    BASELINE = "baseline"
    SNR_AWARE = "snr-aware"


class LoadLabel(str, enum.Enum):
    OVERLOADED = "overloaded"
    BALANCED = "balanced"
    UNDERLOADED = "underloaded"


@dataclass(frozen=True)
class BalanceParams:
    alpha: float = DEFAULT_ALPHA
    mode: BalanceMode = BalanceMode.BASELINE
    max_moves: int = 32

    def __post_init__(self):
        object.__setattr__(self, "mode", BalanceMode(self.mode))
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.max_moves < 1:
            raise ValueError("max_moves must be >= 1")
        lo, hi = RECOMMENDED_ALPHA
        if not lo <= self.alpha <= hi:
            warnings.warn(
                f"alpha={self.alpha} outside recommended range [{lo}, {hi}]", stacklevel=3
            )


@dataclass(frozen=True)
class LoadClassification:
    anl: float
    delta1: float
    delta2: float
    loads: dict[str, float]
    labels: dict[str, LoadLabel]

    def with_label(self, label: LoadLabel) -> list[str]:
        return [ap for ap, lab in self.labels.items() if lab is label]


@dataclass(frozen=True)
class Move:
    station: str
    from_ap: str
    to_ap: str
    snr_from_db: float
    snr_to_db: float


@dataclass(frozen=True)
class MovePlan:
    moves: tuple[Move, ...]
    final_classification: LoadClassification
    converged: bool
    initial_min_beta: float = 1.0
    final_min_beta: float = 1.0

    def __len__(self):
        return len(self.moves)


# -- formulas ---------------------------------------------------------------

def balance_index(loads: Sequence[float]) -> float:
    """(sum T)^2 / (n * sum T^2); 1.0 when every load is zero."""
    if len(loads) == 0:
        raise ValueError("balance index of an empty zone")
    if any(t < 0 for t in loads):
        raise ValueError("loads must be non-negative")
    sq = math.fsum(t * t for t in loads)
    if sq == 0:
        return 1.0
    s = math.fsum(loads)
    return s * s / (len(loads) * sq)


def average_network_load(loads: Sequence[float]) -> float:
    if len(loads) == 0:
        raise ValueError("average load of an empty network")
    return math.fsum(loads) / len(loads)


def thresholds(anl: float, alpha: float) -> tuple[float, float]:
    """Overload / underload thresholds (delta1, delta2) = anl * (1 +/- alpha)."""
    return anl + alpha * anl, anl - alpha * anl


def classify_ap(load: float, delta1: float, delta2: float) -> LoadLabel:
    if load > delta1:
        return LoadLabel.OVERLOADED
    if load < delta2:
        return LoadLabel.UNDERLOADED
    return LoadLabel.BALANCED


def classify(network: NetworkState, alpha: float) -> LoadClassification:
    loads = network.loads()
    anl = average_network_load(list(loads.values()))
    d1, d2 = thresholds(anl, alpha)
    labels = {ap: classify_ap(t, d1, d2) for ap, t in loads.items()}
    return LoadClassification(anl, d1, d2, loads, labels)


def zone_balance(loads: dict[str, float], zone: OverlapZone) -> float:
    return balance_index([loads[ap] for ap in zone.aps])


def min_zone_balance(network: NetworkState, loads: dict[str, float] | None = None) -> float:
    """Smallest zone balance index in the network; 1.0 if there are no zones."""
    if loads is None:
        loads = network.loads()
    zones = network.zones
    if not zones:
        return 1.0
    return min(zone_balance(loads, z) for z in zones)


def find_zone_min(network: NetworkState, zones: Sequence[OverlapZone]) -> OverlapZone:
    if not zones:
        raise ValueError("no overlap zones to rebalance across")
    loads = network.loads()
    return min(zones, key=lambda z: (zone_balance(loads, z), z.aps))


def snr_gate(snr_source_db: float, snr_dest_db: float) -> bool:
    """True when a move from a link at `snr_source_db` to one at `snr_dest_db` is allowed.

    Blocked when the destination SNR is at or below half the source SNR (dB).
    """
    return snr_dest_db > snr_source_db / 2.0


# -- candidate selection ----------------------------------------------------

def rank_candidates(
    network: NetworkState,
    overloaded_ap: str,
    anl: float,
    zone: OverlapZone,
    params: BalanceParams,
    labels: dict[str, LoadLabel] | None = None,
    exclude: Iterable[str] = (),
) -> list[Move]:
    """Moves off `overloaded_ap`, nearest demand to (load - ANL) first.

    Ties on distance go to the lower station id. Each station's destination
    is its least loaded reachable underloaded AP in `zone` (ties by AP id),
    restricted to gate-passing links in snr-aware mode.
    """
    loads = network.loads()
    if labels is None:
        labels = classify(network, params.alpha).labels
    diff = loads[overloaded_ap] - anl
    under = [ap for ap in zone.aps if labels[ap] is LoadLabel.UNDERLOADED]
    skip = set(exclude)
    ranked = []
    for st in network.stations:
        if st.associated_ap != overloaded_ap or st.id in skip or st.demand_kbps <= 0:
            continue
        src_snr = st.reachable[overloaded_ap]
        dests = [ap for ap in under if ap in st.reachable]
        if params.mode is BalanceMode.SNR_AWARE:
            dests = [ap for ap in dests if snr_gate(src_snr, st.reachable[ap])]
        if not dests:
            continue
        dest = min(dests, key=lambda ap: (loads[ap], ap))
        move = Move(st.id, overloaded_ap, dest, src_snr, st.reachable[dest])
        ranked.append((abs(st.demand_kbps - diff), st.id, move))
    ranked.sort(key=lambda r: (r[0], r[1]))
    return [r[2] for r in ranked]


def select_candidate(
    network: NetworkState,
    overloaded_ap: str,
    anl: float,
    zone: OverlapZone,
    params: BalanceParams,
) -> Move | None:
    ranked = rank_candidates(network, overloaded_ap, anl, zone, params)
    return ranked[0] if ranked else None


# -- main loop --------------------------------------------------------------

def rebalance(network: NetworkState, params: BalanceParams = BalanceParams()) -> MovePlan:
    """Run the controller loop until no AP is overloaded or nothing can move.

    Each round classifies every AP against the global average load, walks
    the zones that hold an overloaded AP from the least balanced up, and
    takes the first candidate move (from the most loaded overloaded AP
    first) that does not lower the network's minimum zone balance index.
    A station moves at most once per plan.
    """
    check(network)
    work = network
    zones = network.zones
    initial_beta = min_zone_balance(network)
    moves: list[Move] = []
    moved: set[str] = set()
    converged = False
    while True:
        cls = classify(work, params.alpha)
        overloaded = set(cls.with_label(LoadLabel.OVERLOADED))
        if not overloaded:
            converged = True
            break
        if len(moves) >= params.max_moves:
            break
        current_beta = min_zone_balance(work, cls.loads)
        hot_zones = sorted(
            (z for z in zones if overloaded.intersection(z.aps)),
            key=lambda z: (zone_balance(cls.loads, z), z.aps),
        )
        chosen = None
        for zone in hot_zones:
            sources = sorted(
                (ap for ap in zone.aps if ap in overloaded),
                key=lambda ap: (-cls.loads[ap], ap),
            )
            for src in sources:
                for move in rank_candidates(work, src, cls.anl, zone, params, cls.labels, moved):
                    trial = work.with_association(move.station, move.to_ap)
                    if min_zone_balance(trial) >= current_beta - BETA_EPS:
                        chosen = (move, trial)
                        break
                if chosen:
                    break
            if chosen:
                break
        if chosen is None:
            break
        move, work = chosen
        moves.append(move)
        moved.add(move.station)

    return MovePlan(
        tuple(moves),
        classify(work, params.alpha),
        converged,
        initial_beta,
        min_zone_balance(work),
    )


def apply_plan(network: NetworkState, plan: MovePlan) -> NetworkState:
    for m in plan.moves:
        network = network.with_association(m.station, m.to_ap)
    return network


# -- oracle -----------------------------------------------------------------

MAX_ORACLE_STATIONS = 10
MAX_ORACLE_ASSIGNMENTS = 10**6


def feasible_aps(network: NetworkState, params: BalanceParams) -> dict[str, list[str]]:
    """AP choices per associated station, sorted; the initial AP is always included."""
    options = {}
    for st in sorted(network.stations, key=lambda s: s.id):
        if st.associated_ap is None:
            continue
        src = st.reachable[st.associated_ap]
        opts = []
        for ap in st.reachable:
            if ap == st.associated_ap:
                opts.append(ap)
            elif params.mode is BalanceMode.BASELINE or snr_gate(src, st.reachable[ap]):
                opts.append(ap)
        options[st.id] = sorted(opts)
    return options


def brute_force_best_assignment(
    network: NetworkState, params: BalanceParams = BalanceParams()
) -> tuple[dict[str, str | None], float]:
    """Exhaustively find the assignment maximizing the minimum zone balance index.

    The initial assignment wins ties; among strictly better assignments the
    lexicographically smallest (stations sorted by id) is returned.
    """
    check(network)
    if len(network.stations) > MAX_ORACLE_STATIONS:
        raise ValueError(f"oracle limited to {MAX_ORACLE_STATIONS} stations")
    options = feasible_aps(network, params)
    count = math.prod(len(v) for v in options.values())
    if count > MAX_ORACLE_ASSIGNMENTS:
        raise ValueError(f"{count} assignments exceed oracle cap")

    ids = list(options)
    demand = {st.id: st.demand_kbps for st in network.stations}
    base = {ap: 0.0 for ap in network.ap_ids}
    zones = network.zones

    def score(choice: Sequence[str]) -> float:
        loads = dict(base)
        for sid, ap in zip(ids, choice):
            loads[ap] += demand[sid]
        if not zones:
            return 1.0
        return min(balance_index([loads[a] for a in z.aps]) for z in zones)

    best = network.assignment()
    best_beta = score([best[s] for s in ids])
    for choice in itertools.product(*(options[s] for s in ids)):
        b = score(choice)
        if b > best_beta + BETA_EPS:
            best_beta = b
            best = {**network.assignment(), **dict(zip(ids, choice))}
    return best, best_beta
