"""Load balancing of overlapping 802.11 cells with an SNR-aware move gate."""
from .channel import db_to_linear, effective_throughput, packet_service_time, shannon_capacity
from .lba import (
    BalanceMode,
    BalanceParams,
    LoadLabel,
    Move,
    MovePlan,
    average_network_load,
    balance_index,
    brute_force_best_assignment,
    classify_ap,
    find_zone_min,
    rebalance,
    select_candidate,
    snr_gate,
    thresholds,
)
from .metrics import Frame, PacketRecord, QosReport, bitrate, jitter_stats, mean_delay, mse, psnr, video_psnr
from .scenario import Scenario, ScenarioError, load_builtin, parse_scenario, render_scenario
from .topology import AccessPoint, MobileStation, NetworkState, OverlapZone, ap_load, derive_zones, validate

__version__ = "0.1.0"
