# %% [markdown]
# # Links, capacity and airtime
#
# A station's link to an AP is described by its SNR in dB. The AP's channel
# bandwidth turns that into a Shannon limit, and stations sharing one AP
# split its airtime in proportion to what they ask for.

# %%
import numpy as np

from wlanlb import AccessPoint, db_to_linear, effective_throughput, packet_service_time, shannon_capacity

# %% [markdown]
# Capacity grows with log2(1 + SNR), so every extra 10 dB adds roughly
# 3.3 bits/s/Hz once the link is good.

# %%
bw = 250e3
for snr_db in np.arange(0, 90, 10):
    c = shannon_capacity(bw, db_to_linear(snr_db))
    print(f"{snr_db:3.0f} dB  {c / 1e3:8.1f} kbps")

# %% [markdown]
# Three stations on one AP. Each requests demand/capacity of the airtime.
# Here the requests add up to more than 1, so every share is scaled down
# by the same factor, and the weak-link station pays for its long airtime.

# %%
ap = AccessPoint("ap1", bandwidth_hz=bw)
members = [("cam", 800e3, 80.0), ("ftp", 3350e3, 25.0), ("weak", 200e3, 3.0)]
share = effective_throughput(ap, members)
print(f"requested airtime {share.requested_airtime:.3f}")
for sid, s in share.stations.items():
    print(f"{sid:5s} airtime {s.airtime:.3f}  achieved {s.achieved_bps / 1e3:7.1f} kbps"
          f"  drain {s.serving_bps / 1e3:7.1f} kbps")

# %%
# time to push one 8000-bit video packet at the camera's drain rate
print(f"{packet_service_time(8000, share['cam'].serving_bps) * 1e3:.2f} ms")
