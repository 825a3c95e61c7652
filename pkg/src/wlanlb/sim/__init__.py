from .engine import AssocMessage, EventKind, FlowResult, MsgKind, SimReport, Simulator, TimedMove, run
from .traffic import FtpProfile, HttpProfile, VideoProfile, emissions
from .video import conceal, generate_frames

__all__ = [
    "AssocMessage", "EventKind", "FlowResult", "MsgKind", "SimReport", "Simulator", "TimedMove",
    "run", "FtpProfile", "HttpProfile", "VideoProfile", "emissions", "conceal", "generate_frames",
]
