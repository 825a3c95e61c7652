# %% [markdown]
# # Sweeping link quality and background load
#
# Scenario keys can be overridden by dotted path, which makes parameter
# sweeps a loop. The camera's second link is weakened so that it always
# joins AP1 and the sweep measures one AP.

# %%
import numpy as np

from wlanlb import load_builtin
from wlanlb.sim import run


def cam_qos(**keys):
    sc = load_builtin("table1", {"sim.lba_mode": "off", "station.cam.link.ap2.snr_db": "0", **keys})
    q = run(sc).flows["cam"].qos
    return q.bitrate_kbps, q.mean_delay_ms


# %%
snrs = [20, 30, 40, 50]
res = np.array([cam_qos(**{"station.cam.link.ap1.snr_db": str(s)}) for s in snrs])
for s, (b, d) in zip(snrs, res):
    print(f"{s} dB  {b:6.1f} kbps  {d:7.1f} ms")

# %%
loads = [450, 1000, 2010, 3000, 11000]
res = np.array([cam_qos(**{"station.bg1.ftp.rate_kbps": str(l)}) for l in loads])
for l, (b, d) in zip(loads, res):
    print(f"bg {l:5d} kbps  {b:6.1f} kbps  {d:7.1f} ms")

# %% [markdown]
# The same sweep from a shell:
#
#     wlanlb run table1 --mode off --sweep station.bg1.ftp.rate_kbps=450,3000 --out out/
