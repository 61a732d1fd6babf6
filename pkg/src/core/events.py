from dataclasses import dataclass, field
from datetime import datetime, timezone


@dataclass
class HermblockEvent:
    """Base class for progress events."""
    timestamp: datetime = field(init=False)

    def __post_init__(self):
        self.timestamp = datetime.now(timezone.utc)


@dataclass
class ProjectionProgressEvent(HermblockEvent):
    iteration: int
    psd_residual: float
    subspace_residual: float


@dataclass
class ProjectionConvergedEvent(HermblockEvent):
    iterations: int
    psd_residual: float
    subspace_residual: float


@dataclass
class SearchRestartEvent(HermblockEvent):
    restart: int
    margin: float
    best_margin: float


@dataclass
class CounterexampleFoundEvent(HermblockEvent):
    restart: int
    margin: float
