"""Desk-scale control environments with deterministic dynamics and
analytic scripted experts.

Three tasks, all integrated with semi-implicit Euler at a fixed dt:

* ``point_reach`` -- 2-D double integrator pushed toward the origin by a
  bounded force; reward is the negative distance to the goal.
* ``pendulum_swing`` -- torque-limited pendulum swing-up; reward penalizes
  the angle from upright, angular velocity, and torque effort.
* ``cart_balance`` -- linearized cart-pole with a discrete left/right
  force; +1 reward per step the pole stays up and the cart stays in bounds.

Dynamics are deterministic; the only randomness is the seeded start state,
so identical (state, action) pairs always produce bit-identical successors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset, DatasetMeta
from .errors import ConfigError, EpisodeDoneError

DT = 0.05


def wrap_angle(theta: float) -> float:
    """Map any angle onto [-pi, pi)."""
    return (theta + math.pi) % (2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class EnvSpec:
    env_id: str
    obs_dim: int
    action_kind: str         # "continuous" | "discrete"
    action_dim: int          # action vector dim, or number of discrete actions
    action_low: np.ndarray   # None for discrete
    action_high: np.ndarray
    max_steps: int
    reward_min: float
    reward_max: float


class DeskEnv:
    """Common reset/step bookkeeping; subclasses implement the physics."""

    spec: EnvSpec

    def __init__(self):
        self._state = None
        self._steps = 0
        self._done = True

    def reset(self, seed) -> np.ndarray:
        rng = np.random.default_rng(seed)
        self._state = self._sample_start(rng)
        self._steps = 0
        self._done = False
        return self._observe()

    @property
    def steps(self) -> int:
        return self._steps

    @property
    def done(self) -> bool:
        return self._done

    def step(self, action):
        if self._state is None:
            raise EpisodeDoneError(f"{self.spec.env_id}: step() before reset()")
        if self._done:
            raise EpisodeDoneError(f"{self.spec.env_id}: episode already done")
        reward, failed = self._advance(action)
        self._steps += 1
        if failed or self._steps >= self.spec.max_steps:
            self._done = True
        return self._observe(), reward, self._done

    # subclass hooks
    def _sample_start(self, rng):
        raise NotImplementedError

    def _observe(self) -> np.ndarray:
        raise NotImplementedError

    def _advance(self, action):
        raise NotImplementedError

    def expert_action(self, obs):
        raise NotImplementedError


class PointReach(DeskEnv):
    """Double integrator on the plane; the goal is the origin.

    State (px, py, vx, vy). The commanded force is clipped to [-1, 1]^2,
    velocity is capped at VMAX, and positions are clamped to the arena box
    (hitting a wall zeroes that velocity component), which bounds the
    per-step reward to [-ARENA*sqrt(8), 0].
    """

    KP = 4.0
    KD = 0.8  # underdamped on purpose: the expert spirals in, sweeping
    # a wide swath of the state space even in a single episode
    VMAX = 2.0
    ARENA = 4.0
    START_POS = 1.5
    START_VEL = 0.1

    def __init__(self):
        super().__init__()
        self.spec = EnvSpec(
            env_id="point_reach",
            obs_dim=4,
            action_kind="continuous",
            action_dim=2,
            action_low=np.array([-1.0, -1.0]),
            action_high=np.array([1.0, 1.0]),
            max_steps=200,
            reward_min=-self.ARENA * math.sqrt(8.0),
            reward_max=0.0,
        )

    def _sample_start(self, rng):
        pos = rng.uniform(-self.START_POS, self.START_POS, size=2)
        vel = rng.uniform(-self.START_VEL, self.START_VEL, size=2)
        return np.concatenate([pos, vel])

    def _observe(self):
        return self._state.copy()

    def _advance(self, action):
        u = np.clip(np.asarray(action, dtype=np.float64), -1.0, 1.0)
        pos, vel = self._state[:2], self._state[2:]
        vel = np.clip(vel + DT * u, -self.VMAX, self.VMAX)
        pos = pos + DT * vel
        for i in range(2):
            if abs(pos[i]) > self.ARENA:
                pos[i] = math.copysign(self.ARENA, pos[i])
                vel[i] = 0.0
        self._state = np.concatenate([pos, vel])
        return -float(np.linalg.norm(pos)), False

    def expert_action(self, obs):
        pos, vel = obs[:2], obs[2:]
        return np.clip(-self.KP * pos - self.KD * vel, -1.0, 1.0)


class PendulumSwing(DeskEnv):
    """Torque-limited pendulum; angle 0 is upright, pi is hanging down.

    Observation (cos th, sin th, omega). Max torque is well below the
    gravity torque at the horizontal, so the expert has to pump energy
    before it can catch and stabilize the pendulum near the top.
    """

    MASS = 1.0
    LENGTH = 1.0
    GRAVITY = 9.81
    U_MAX = 12.0
    OMEGA_MAX = 8.0
    # expert gains
    K_ENERGY = 2.0
    KP = 24.0
    KD = 6.0
    CATCH_ANGLE = 0.5
    CATCH_OMEGA = 2.5

    def __init__(self):
        super().__init__()
        wmax = self.OMEGA_MAX
        self.spec = EnvSpec(
            env_id="pendulum_swing",
            obs_dim=3,
            action_kind="continuous",
            action_dim=1,
            action_low=np.array([-self.U_MAX]),
            action_high=np.array([self.U_MAX]),
            max_steps=300,
            reward_min=-(math.pi**2 + 0.1 * wmax**2 + 0.001 * self.U_MAX**2),
            reward_max=0.0,
        )

    def _sample_start(self, rng):
        theta = math.pi + rng.uniform(-1.0, 1.0)
        omega = rng.uniform(-0.5, 0.5)
        return np.array([theta, omega])

    def _observe(self):
        theta, omega = self._state
        return np.array([math.cos(theta), math.sin(theta), omega])

    def _advance(self, action):
        u = float(np.clip(np.asarray(action, dtype=np.float64).reshape(-1)[0],
                          -self.U_MAX, self.U_MAX))
        theta, omega = self._state
        ml2 = self.MASS * self.LENGTH**2
        omega += DT * ((self.GRAVITY / self.LENGTH) * math.sin(theta) + u / ml2)
        omega = float(np.clip(omega, -self.OMEGA_MAX, self.OMEGA_MAX))
        theta = theta + DT * omega
        self._state = np.array([theta, omega])
        a = wrap_angle(theta)
        reward = -(a * a + 0.1 * omega * omega + 0.001 * u * u)
        return reward, False

    def expert_action(self, obs):
        theta = math.atan2(obs[1], obs[0])
        omega = obs[2]
        if abs(theta) <= self.CATCH_ANGLE and abs(omega) <= self.CATCH_OMEGA:
            u = -self.KP * theta - self.KD * omega
        else:
            # Pump mechanical energy toward the upright level (E = 0);
            # dE/dt = omega * u, so push along omega while energy is short.
            energy = (
                0.5 * self.MASS * self.LENGTH**2 * omega * omega
                + self.MASS * self.GRAVITY * self.LENGTH * (math.cos(theta) - 1.0)
            )
            if abs(omega) < 0.05:
                u = self.U_MAX  # kick off the hanging rest point
            else:
                u = -self.K_ENERGY * omega * energy
        return np.clip(np.array([u]), -self.U_MAX, self.U_MAX)


class CartBalance(DeskEnv):
    """Cart-pole linearized about the upright pole, with bang-bang force.

    Action 0 pushes left, 1 pushes right. The episode fails when the pole
    angle or cart position leaves its bound; reward is 1 per surviving step.
    """

    M_CART = 1.0
    M_POLE = 0.1
    POLE_HALF = 0.5
    GRAVITY = 9.8
    FORCE = 10.0
    ANGLE_LIMIT = 0.21
    X_LIMIT = 2.4
    START = 0.05
    # expert: push right iff theta + EXPERT_BLEND * theta_dot > 0
    EXPERT_BLEND = 0.25

    def __init__(self):
        super().__init__()
        self.spec = EnvSpec(
            env_id="cart_balance",
            obs_dim=4,
            action_kind="discrete",
            action_dim=2,
            action_low=None,
            action_high=None,
            max_steps=200,
            reward_min=0.0,
            reward_max=1.0,
        )
        total = self.M_CART + self.M_POLE
        # effective pole length in the linearized angular dynamics
        self._l_eff = self.POLE_HALF * (4.0 / 3.0 - self.M_POLE / total)
        self._total = total

    def _sample_start(self, rng):
        return rng.uniform(-self.START, self.START, size=4)

    def _observe(self):
        return self._state.copy()

    def _advance(self, action):
        a = int(np.asarray(action).reshape(()))
        if a not in (0, 1):
            raise ConfigError(f"cart_balance: action must be 0 or 1, got {action!r}")
        force = self.FORCE if a == 1 else -self.FORCE
        x, x_dot, theta, theta_dot = self._state
        theta_acc = (self.GRAVITY * theta - force / self._total) / self._l_eff
        x_acc = force / self._total - (self.M_POLE * self.POLE_HALF / self._total) * theta_acc
        theta_dot += DT * theta_acc
        theta += DT * theta_dot
        x_dot += DT * x_acc
        x += DT * x_dot
        self._state = np.array([x, x_dot, theta, theta_dot])
        failed = abs(theta) > self.ANGLE_LIMIT or abs(x) > self.X_LIMIT
        return (0.0 if failed else 1.0), failed

    def expert_action(self, obs):
        return 1 if obs[2] + self.EXPERT_BLEND * obs[3] > 0.0 else 0


ENV_IDS = ("point_reach", "pendulum_swing", "cart_balance")

_ENV_CLASSES = {
    "point_reach": PointReach,
    "pendulum_swing": PendulumSwing,
    "cart_balance": CartBalance,
}


def make_env(env_id: str) -> DeskEnv:
    try:
        return _ENV_CLASSES[env_id]()
    except KeyError:
        raise ConfigError(
            f"unknown env {env_id!r}; choose from {', '.join(ENV_IDS)}"
        ) from None


def env_spec(env_id: str) -> EnvSpec:
    return make_env(env_id).spec


def random_action(spec: EnvSpec, rng):
    """Uniform action in the env's action space."""
    if spec.action_kind == "discrete":
        return int(rng.integers(spec.action_dim))
    return rng.uniform(spec.action_low, spec.action_high)


def one_hot(index: int, n: int) -> np.ndarray:
    v = np.zeros(n)
    v[index] = 1.0
    return v


def generate_dataset(env: DeskEnv, n_episodes: int, seed: int) -> Dataset:
    """Roll the scripted expert for seeded episodes, recording every
    (observation, expert action) pair. Discrete actions are stored one-hot."""
    if n_episodes < 1:
        raise ConfigError(f"n_episodes must be >= 1, got {n_episodes}")
    spec = env.spec
    states, actions = [], []
    episode_seeds = np.random.SeedSequence(seed).spawn(n_episodes)
    for ep_seed in episode_seeds:
        obs = env.reset(ep_seed)
        done = False
        while not done:
            act = env.expert_action(obs)
            states.append(obs)
            if spec.action_kind == "discrete":
                actions.append(one_hot(act, spec.action_dim))
            else:
                actions.append(np.asarray(act, dtype=np.float64))
            obs, _, done = env.step(act)
    meta = DatasetMeta(
        env=spec.env_id,
        episodes=n_episodes,
        seed=seed,
        obs_dim=spec.obs_dim,
        action_dim=spec.action_dim,
        action_kind=spec.action_kind,
    )
    return Dataset(
        states=np.array(states), actions=np.array(actions), meta=meta
    )
