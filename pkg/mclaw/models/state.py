# mclaw/models/state.py
"""
Solution state and trajectory models.
"""

from dataclasses import dataclass, field

import numpy as np

from mclaw.models.grid import GeometrySnapshot


@dataclass(frozen=True, eq=False)
class State:
    """Cell averages u_K at time t; mass caches sum u_K V_K(t)."""

    u: np.ndarray
    t: float
    mass: float
    step: int = 0

    def __repr__(self) -> str:
        return f"<State(t={self.t:.6g}, step={self.step}, cells={self.u.size})>"


@dataclass(frozen=True, eq=False)
class StepRecord:
    """Two consecutive states with the geometry at both ends of the step."""

    before: State
    after: State
    snapshot_before: GeometrySnapshot
    snapshot_after: GeometrySnapshot

    @property
    def dt(self) -> float:
        return self.after.t - self.before.t


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States at the requested output times, plus optional per-step records."""

    states: tuple[State, ...]
    snapshots: tuple[GeometrySnapshot, ...]
    steps: tuple[StepRecord, ...] = ()
    n_steps: int = 0
    dt_max: float = 0.0
    dt_min: float = 0.0
    initial_mass: float = 0.0
    masses: tuple[float, ...] = field(default_factory=tuple)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    @property
    def final(self) -> State:
        return self.states[-1]
