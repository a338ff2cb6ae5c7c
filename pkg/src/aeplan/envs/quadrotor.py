"""Simplified quadrotor: rigid body, rotor thrust/torque, no aerodynamic drag.

Conventions (fixed; the observation layout below is part of the public contract):
  observation = [x, y, z, vx, vy, vz, roll, pitch, yaw, p, q, r]
  world frame z-up, ZYX Euler angles (R = Rz(yaw) @ Ry(pitch) @ Rx(roll)),
  body rates p, q, r about the body axes, angles wrapped to (-pi, pi].
  Actions are the four rotor speeds in rad/s, X layout:
      rotor 0 front-left (+x, +y), 1 rear-left (-x, +y),
      rotor 2 rear-right (-x, -y), 3 front-right (+x, -y),
  rotors 0 and 2 spin opposite to 1 and 3 (yaw reaction signs + - + -).

Integration is semi-implicit Euler: velocities/rates first, then positions
and angles from the updated velocities.
"""

import math

import numpy as np

from ..errors import ShapeError

MASS = 1.0  # kg
GRAVITY = 9.81  # m/s^2
ARM = 0.2  # m
K_THRUST = 1e-5
K_YAW = 1e-6
INERTIA = np.array([0.01, 0.01, 0.02])  # diagonal, kg m^2
DT = 0.05  # s
OMEGA_MAX = 800.0  # rad/s
GOAL = np.array([1.0, 1.0, 1.0])
RESET_SPREAD = 0.05

HOVER_OMEGA = math.sqrt(MASS * GRAVITY / (4.0 * K_THRUST))  # ~495 rad/s

_ARM_XY = ARM / math.sqrt(2.0)
# rotor (x, y) positions in the body frame
_ROTOR_X = np.array([_ARM_XY, -_ARM_XY, -_ARM_XY, _ARM_XY])
_ROTOR_Y = np.array([_ARM_XY, _ARM_XY, -_ARM_XY, -_ARM_XY])
_YAW_SIGN = np.array([1.0, -1.0, 1.0, -1.0])


def wrap_angle(a: np.ndarray) -> np.ndarray:
    """Wrap to (-pi, pi]."""
    return np.pi - np.mod(np.pi - a, 2.0 * np.pi)


def rotation_matrix(roll: float, pitch: float, yaw: float) -> np.ndarray:
    cr, sr = math.cos(roll), math.sin(roll)
    cp, sp = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)
    return np.array(
        [
            [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
            [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
            [-sp, cp * sr, cp * cr],
        ]
    )


class QuadrotorEnv:
    """Drone with 4 rotor-speed actions and 12 observations; cost = distance to (1,1,1)."""

    name = "drone"
    n_obs = 12
    n_act = 4

    def __init__(self, seed: int = 0, episode_length: int = 500):
        self.action_low = np.zeros(4)
        self.action_high = np.full(4, OMEGA_MAX)
        self.episode_length = episode_length
        self.dt = DT
        self._seed = seed
        self._state = np.zeros(12)
        self._steps = 0
        self.faulted = False

    @property
    def hover_action(self) -> np.ndarray:
        return np.full(4, HOVER_OMEGA)

    def reset(self, seed: int | None = None) -> np.ndarray:
        if seed is not None:
            self._seed = seed
        rng = np.random.default_rng(self._seed)
        self._state = rng.uniform(-RESET_SPREAD, RESET_SPREAD, size=12)
        self._steps = 0
        self.faulted = False
        return self._state.copy()

    def set_state(self, state: np.ndarray) -> np.ndarray:
        """Place the drone at an exact state (testing and cloned evaluations)."""
        state = np.asarray(state, dtype=np.float64)
        if state.shape != (12,):
            raise ShapeError(f"drone state must have shape (12,), got {state.shape}")
        self._state = state.copy()
        self.faulted = False
        return self._state.copy()

    def step(self, action: np.ndarray) -> tuple[np.ndarray, float, bool]:
        action = np.asarray(action, dtype=np.float64)
        if action.shape != (4,):
            raise ShapeError(f"drone action must have shape (4,), got {action.shape}")
        omega = np.clip(action, self.action_low, self.action_high)
        w2 = omega * omega
        thrust = K_THRUST * np.sum(w2)
        f_rotor = K_THRUST * w2
        tau = np.array(
            [
                np.sum(f_rotor * _ROTOR_Y),
                -np.sum(f_rotor * _ROTOR_X),
                K_YAW * np.sum(_YAW_SIGN * w2),
            ]
        )

        pos = self._state[0:3]
        vel = self._state[3:6]
        ang = self._state[6:9]
        rates = self._state[9:12]

        rot = rotation_matrix(ang[0], ang[1], ang[2])
        accel = rot @ np.array([0.0, 0.0, thrust]) / MASS - np.array([0.0, 0.0, GRAVITY])
        p, q, r = rates
        rate_dot = np.array(
            [
                (tau[0] - (INERTIA[2] - INERTIA[1]) * q * r) / INERTIA[0],
                (tau[1] - (INERTIA[0] - INERTIA[2]) * p * r) / INERTIA[1],
                (tau[2] - (INERTIA[1] - INERTIA[0]) * p * q) / INERTIA[2],
            ]
        )

        new_vel = vel + DT * accel
        new_pos = pos + DT * new_vel
        new_rates = rates + DT * rate_dot
        # Euler kinematics with the updated rates (semi-implicit)
        roll, pitch = ang[0], ang[1]
        sr, cr = math.sin(roll), math.cos(roll)
        cp = math.cos(pitch)
        tp = math.tan(pitch)
        np_, nq, nr = new_rates
        ang_dot = np.array(
            [
                np_ + sr * tp * nq + cr * tp * nr,
                cr * nq - sr * nr,
                (sr * nq + cr * nr) / cp if cp != 0.0 else math.inf,
            ]
        )
        new_ang = wrap_angle(ang + DT * ang_dot)

        self._state = np.concatenate([new_pos, new_vel, new_ang, new_rates])
        self._steps += 1
        obs = self._state.copy()
        if not np.all(np.isfinite(self._state)):
            self.faulted = True
            return obs, math.inf, True
        cost = self.cost_of(obs, omega)
        done = self._steps >= self.episode_length
        return obs, cost, done

    def cost_of(self, obs: np.ndarray, action: np.ndarray) -> float:
        return float(np.linalg.norm(obs[0:3] - GOAL))

    def cost_grad(self, obs: np.ndarray, action: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        dobs = np.zeros(12)
        diff = obs[0:3] - GOAL
        dist = np.linalg.norm(diff)
        if dist > 0.0:
            dobs[0:3] = diff / dist
        return dobs, np.zeros(4)

    def clone(self) -> "QuadrotorEnv":
        env = QuadrotorEnv(seed=self._seed, episode_length=self.episode_length)
        env._state = self._state.copy()
        env._steps = self._steps
        env.faulted = self.faulted
        return env
