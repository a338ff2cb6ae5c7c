"""Non-Markovian surrogate process: 3 actions, 6 visible observations.

The visible state follows a stable linear map driven by the action plus two
hidden channels the observation never exposes: a momentum vector (slow EMA of
recent actions) and a fatigue scalar (EMA of action effort). Histories with
identical visible state can therefore evolve differently, so the current state
must be inferred from past observations and actions.

All coefficient matrices are fixed constants; the spectral radius of A is
about 0.85, keeping the visible state bounded under any bounded action input.
"""

import numpy as np

from ..errors import ShapeError

A = np.array(
    [
        [0.78, 0.15, 0.00, 0.00, 0.00, 0.00],
        [-0.15, 0.78, 0.10, 0.00, 0.00, 0.00],
        [0.00, 0.00, 0.70, 0.20, 0.00, 0.00],
        [0.00, 0.00, -0.20, 0.70, 0.05, 0.00],
        [0.00, 0.00, 0.00, 0.00, 0.60, 0.25],
        [0.05, 0.00, 0.00, 0.00, -0.25, 0.60],
    ]
)
B = np.array(
    [
        [0.50, 0.00, 0.00],
        [0.00, 0.50, 0.00],
        [0.00, 0.00, 0.50],
        [0.20, 0.10, 0.00],
        [0.00, 0.20, 0.10],
        [0.10, 0.00, 0.20],
    ]
)
C = np.array(
    [
        [0.30, 0.00],
        [0.00, 0.30],
        [0.15, 0.15],
        [0.00, 0.00],
        [0.10, -0.10],
        [0.00, 0.10],
    ]
)
D_FATIGUE = np.array([0.10, -0.05, 0.08, 0.00, 0.12, -0.10])
B_MOMENTUM = np.array(
    [
        [0.80, 0.10, 0.00],
        [0.00, 0.50, 0.40],
    ]
)
MOMENTUM_DECAY = 0.9
FATIGUE_DECAY = 0.95
ACTION_COST_WEIGHT = 0.1


class SurrogateEnv:
    """Stand-in industrial process with hidden momentum/fatigue dynamics."""

    name = "surrogate"
    n_obs = 6
    n_act = 3

    def __init__(self, seed: int = 0, episode_length: int = 500):
        self.action_low = np.full(3, -1.0)
        self.action_high = np.full(3, 1.0)
        self.episode_length = episode_length
        self._seed = seed
        self._visible = np.zeros(6)
        self._momentum = np.zeros(2)
        self._fatigue = 0.0
        self._steps = 0
        self.faulted = False

    def reset(self, seed: int | None = None) -> np.ndarray:
        if seed is not None:
            self._seed = seed
        self._visible = np.zeros(6)
        self._momentum = np.zeros(2)
        self._fatigue = 0.0
        self._steps = 0
        self.faulted = False
        return self._visible.copy()

    def set_state(
        self, visible: np.ndarray, momentum: np.ndarray | None = None, fatigue: float = 0.0
    ) -> np.ndarray:
        visible = np.asarray(visible, dtype=np.float64)
        if visible.shape != (6,):
            raise ShapeError(f"surrogate visible state must have shape (6,), got {visible.shape}")
        self._visible = visible.copy()
        self._momentum = np.zeros(2) if momentum is None else np.asarray(momentum, dtype=np.float64).copy()
        self._fatigue = float(fatigue)
        self.faulted = False
        return self._visible.copy()

    def step(self, action: np.ndarray) -> tuple[np.ndarray, float, bool]:
        action = np.asarray(action, dtype=np.float64)
        if action.shape != (3,):
            raise ShapeError(f"surrogate action must have shape (3,), got {action.shape}")
        a = np.clip(action, self.action_low, self.action_high)
        self._visible = A @ self._visible + B @ a + C @ self._momentum + D_FATIGUE * self._fatigue
        self._momentum = MOMENTUM_DECAY * self._momentum + (1.0 - MOMENTUM_DECAY) * (B_MOMENTUM @ a)
        self._fatigue = FATIGUE_DECAY * self._fatigue + (1.0 - FATIGUE_DECAY) * float(np.sum(np.abs(a)))
        self._steps += 1
        obs = self._visible.copy()
        if not np.all(np.isfinite(obs)):
            self.faulted = True
            return obs, float("inf"), True
        cost = self.cost_of(obs, a)
        done = self._steps >= self.episode_length
        return obs, cost, done

    def cost_of(self, obs: np.ndarray, action: np.ndarray) -> float:
        return float(np.linalg.norm(obs) + ACTION_COST_WEIGHT * np.linalg.norm(action))

    def cost_grad(self, obs: np.ndarray, action: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        nobs = np.linalg.norm(obs)
        nact = np.linalg.norm(action)
        dobs = obs / nobs if nobs > 0.0 else np.zeros_like(obs)
        dact = ACTION_COST_WEIGHT * action / nact if nact > 0.0 else np.zeros_like(action)
        return dobs, dact

    def clone(self) -> "SurrogateEnv":
        env = SurrogateEnv(seed=self._seed, episode_length=self.episode_length)
        env._visible = self._visible.copy()
        env._momentum = self._momentum.copy()
        env._fatigue = self._fatigue
        env._steps = self._steps
        env.faulted = self.faulted
        return env
