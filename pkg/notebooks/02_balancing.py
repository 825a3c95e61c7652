# %% [markdown]
# # Classifying APs and moving stations
#
# Loads are compared against the network average (ANL) with a tolerance
# band of +/- alpha. An AP above the band is overloaded and sheds stations
# to an underloaded AP in the same overlap zone. The SNR-aware mode also
# refuses a move when the target link is worse than half the current one
# (in dB).

# %%
from wlanlb import (
    BalanceMode,
    BalanceParams,
    MobileStation,
    NetworkState,
    AccessPoint,
    balance_index,
    brute_force_best_assignment,
    rebalance,
    snr_gate,
    thresholds,
)
from wlanlb.lba import classify

# %%
print(balance_index([1, 2, 3]), balance_index([5, 5]), balance_index([9, 1]))
print(thresholds(1000, 0.2))

# %% [markdown]
# Two APs, one heavily loaded. The camera can hear both but its second
# link is only 30 dB, below half of 80 dB.

# %%
aps = (AccessPoint("ap1"), AccessPoint("ap2"))
stations = (
    MobileStation("cam", {"ap1": 80.0, "ap2": 30.0}, "ap1", 800, 0),
    MobileStation("bg1", {"ap1": 25.0}, "ap1", 3350, 0),
    MobileStation("bg2", {"ap2": 30.0}, "ap2", 450, 0),
)
net = NetworkState(aps, stations)
c = classify(net, 0.2)
print(c.anl, c.delta1, c.delta2)
print({ap: lab.value for ap, lab in c.labels.items()})
print("gate 80 -> 30:", snr_gate(80, 30), "  80 -> 50:", snr_gate(80, 50))

# %%
for mode in BalanceMode:
    plan = rebalance(net, BalanceParams(0.2, mode))
    print(mode.value, [(m.station, m.from_ap, m.to_ap) for m in plan.moves],
          f"min zone beta {plan.initial_min_beta:.3f} -> {plan.final_min_beta:.3f}")

# %% [markdown]
# With a 50 dB second link the gate opens and the SNR-aware mode makes the
# same move as the baseline.

# %%
net50 = NetworkState(aps, (MobileStation("cam", {"ap1": 80.0, "ap2": 50.0}, "ap1", 800, 0),) + stations[1:])
plan = rebalance(net50, BalanceParams(0.2, BalanceMode.SNR_AWARE))
print([(m.station, m.snr_from_db, m.snr_to_db) for m in plan.moves])

# %% [markdown]
# On small networks every assignment can be enumerated. The oracle reports
# the best reachable minimum zone balance to compare against.

# %%
print(brute_force_best_assignment(net50, BalanceParams(0.2)))
