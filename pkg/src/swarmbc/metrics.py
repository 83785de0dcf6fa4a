"""Evaluation quantities: per-state action disagreement, rollouts,
episode returns, and return scaling against expert/random baselines.

The disagreement measure for N predicted actions is the average pairwise
L2 distance (not squared):

    d = 2 / (N (N - 1)) * sum_{i<j} ||a_i - a_j||

Returns are undiscounted sums over an episode. Scaled return maps the
random-policy level to 0 and the expert level to 1.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ensemble import Ensemble
from .envs import DeskEnv, random_action
from .errors import ConfigError, DegenerateBaselineError, DimensionMismatchError

# |R_expert - R_random| below this is too degenerate to scale against.
BASELINE_EPSILON = 1e-6


def mean_action_difference(actions) -> float:
    """Average pairwise L2 distance among N >= 2 action vectors.

    For discrete policies the inputs are the members' probability vectors.
    """
    a = np.asarray(actions, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatchError(
            f"expected (N, action_dim) array, got shape {a.shape}"
        )
    n = a.shape[0]
    if n < 2:
        raise ConfigError(
            f"pairwise action difference needs >= 2 actions, got {n}"
        )
    diffs = a[:, None, :] - a[None, :, :]
    dists = np.sqrt(np.sum(diffs * diffs, axis=-1))
    iu = np.triu_indices(n, k=1)
    return float(dists[iu].mean())


@dataclass
class Trajectory:
    """One episode. ``member_actions`` has shape (T, N, action_dim) when the
    rollout recorded them; ``action_diffs`` is None unless N >= 2."""

    observations: np.ndarray
    actions: list
    rewards: np.ndarray
    episode_return: float
    member_actions: Optional[np.ndarray] = None
    action_diffs: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.rewards)

    @property
    def mean_action_difference(self) -> Optional[float]:
        if self.action_diffs is None:
            return None
        return float(self.action_diffs.mean())


@dataclass
class RunRecord:
    """One experiment cell: a trained model evaluated on one env."""

    env: str
    method: str  # "bc" | "ensemble" | "swarm"
    n_expert_episodes: int
    tau: float
    n_members: int
    seed: int
    scaled_return: float
    action_diff: Optional[float]  # episode-averaged d; None when N = 1


def rollout(env: DeskEnv, policy, seed, record_members: bool = False) -> Trajectory:
    """Run one full episode.

    ``policy`` is either a plain callable obs -> action or an Ensemble.
    With ``record_members`` and an Ensemble, every member's raw output and
    the per-step disagreement d_t are stored alongside the episode.
    """
    is_ensemble = isinstance(policy, Ensemble)
    if record_members and not is_ensemble:
        raise ConfigError("record_members requires an Ensemble policy")

    obs = env.reset(seed)
    observations, actions, rewards = [], [], []
    member_actions = [] if record_members else None
    done = False
    while not done:
        if is_ensemble:
            if record_members:
                outputs = policy.predict_members(obs)
                member_actions.append(outputs)
                mean = outputs.mean(axis=0)
                if policy.action_kind == "discrete":
                    action = int(np.argmax(mean))
                else:
                    action = mean
                    if policy.action_low is not None:
                        action = np.clip(mean, policy.action_low, policy.action_high)
            else:
                action = policy.act(obs)
        else:
            action = policy(obs)
        observations.append(obs)
        actions.append(action)
        obs, reward, done = env.step(action)
        rewards.append(reward)

    rewards = np.array(rewards)
    traj = Trajectory(
        observations=np.array(observations),
        actions=actions,
        rewards=rewards,
        episode_return=float(rewards.sum()),
    )
    if record_members:
        stacked = np.stack(member_actions)  # (T, N, action_dim)
        traj.member_actions = stacked
        if stacked.shape[1] >= 2:
            traj.action_diffs = np.array(
                [mean_action_difference(step) for step in stacked]
            )
    return traj


def scaled_return(episode_return, r_random, r_expert) -> float:
    """Affine rescale: 0 at the random-policy level, 1 at the expert level."""
    denom = r_expert - r_random
    if abs(denom) < BASELINE_EPSILON:
        raise DegenerateBaselineError(
            f"expert ({r_expert}) and random ({r_random}) returns are too close"
        )
    return float((episode_return - r_random) / denom)


def baseline_returns(env: DeskEnv, n_episodes: int = 20, seed: int = 0):
    """Mean episode returns of the uniform-random policy and the scripted
    expert over seeded episodes: returns ``(r_random, r_expert)``."""
    if n_episodes < 1:
        raise ConfigError(f"n_episodes must be >= 1, got {n_episodes}")
    root = np.random.SeedSequence(seed)
    episode_seeds = root.spawn(2 * n_episodes)
    random_returns, expert_returns = [], []
    for i in range(n_episodes):
        act_rng = np.random.default_rng(episode_seeds[2 * i + 1])
        traj = rollout(
            env, lambda obs: random_action(env.spec, act_rng), episode_seeds[2 * i]
        )
        random_returns.append(traj.episode_return)
    for i in range(n_episodes):
        traj = rollout(env, env.expert_action, episode_seeds[2 * i])
        expert_returns.append(traj.episode_return)
    return float(np.mean(random_returns)), float(np.mean(expert_returns))


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Per-timestep CSV: t, reward, d, then a_member{i}_{dim} columns when
    member actions were recorded. d is blank for single-member rollouts."""
    header = ["t", "reward", "d"]
    n_members = action_dim = 0
    if traj.member_actions is not None:
        _, n_members, action_dim = traj.member_actions.shape
        for i in range(n_members):
            for j in range(action_dim):
                header.append(f"a_member{i}_{j}")
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for t in range(len(traj)):
            row = [t, repr(float(traj.rewards[t]))]
            if traj.action_diffs is not None:
                row.append(repr(float(traj.action_diffs[t])))
            else:
                row.append("")
            if traj.member_actions is not None:
                row.extend(
                    repr(float(v)) for v in traj.member_actions[t].reshape(-1)
                )
            writer.writerow(row)
