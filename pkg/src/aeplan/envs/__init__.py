"""Seed-deterministic simulated environments with a uniform reset/step interface.

Every environment exposes:
  n_obs, n_act, action_low, action_high, episode_length, faulted
  reset(seed) -> obs;  step(action) -> (obs, cost, done)
  cost_of(obs, action) -> float;  cost_grad(obs, action) -> (d_obs, d_action)
  clone() -> independent copy at the same state

step() clamps out-of-bounds actions silently and sets done both at the
episode-length cap and on a non-finite state (a fault, with `faulted` set).
"""

from ..errors import ConfigError
from .quadrotor import QuadrotorEnv
from .surrogate import SurrogateEnv

ENV_NAMES = ("drone", "surrogate")


def make_env(name: str, seed: int = 0, episode_length: int = 500):
    if name == "drone":
        return QuadrotorEnv(seed=seed, episode_length=episode_length)
    if name == "surrogate":
        return SurrogateEnv(seed=seed, episode_length=episode_length)
    raise ConfigError(f"unknown environment {name!r}; choose from {ENV_NAMES}")


__all__ = ["QuadrotorEnv", "SurrogateEnv", "make_env", "ENV_NAMES"]
