"""Policy ensembles and the three behavior-cloning variants.

The single training loss for a sample (s, a) is

    L(s, a) = sum_i ||pi_i(s) - a||^2
              + tau * sum_k sum_{i<j} ||h_ik(s) - h_jk(s)||^2

where h_ik is member i's post-tanh activation at hidden layer k. With
tau = 0 this is plain ensemble behavior cloning (members decouple); with
tau > 0 the pairwise term pulls the members' hidden representations
together, which is the whole point: aligned hidden features produce
aligned actions in states the data never covered. The deployed action is
the member mean (continuous, clipped to env bounds) or the argmax of the
mean probability vector (discrete).

The pairwise sum is raw by default. ``normalize_swarm`` divides it by
K * N(N-1)/2 so one tau transfers across ensemble sizes; it is off by
default because the raw form is the reference definition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import nn
from .data import Dataset
from .errors import ConfigError, DimensionMismatchError, TrainingDivergedError

METHODS = ("bc", "ensemble", "swarm")


@dataclass
class LossBreakdown:
    """bc_term + tau * swarm_term = total; swarm_term is stored pre-tau."""

    bc_term: float
    swarm_term: float
    total: float


@dataclass
class Ensemble:
    members: list[nn.MlpPolicy]
    tau: float
    action_kind: str  # "continuous" | "discrete"
    obs_mean: np.ndarray = None
    obs_std: np.ndarray = None
    action_low: np.ndarray = None
    action_high: np.ndarray = None
    normalize_swarm: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.members:
            raise ConfigError("ensemble needs at least one member")
        if self.tau < 0:
            raise ConfigError(f"tau must be >= 0, got {self.tau}")
        if self.action_kind not in ("continuous", "discrete"):
            raise ConfigError(f"unknown action_kind {self.action_kind!r}")
        dims = self.members[0].layer_dims
        for i, m in enumerate(self.members):
            if m.layer_dims != dims:
                raise DimensionMismatchError(
                    f"member {i} layer_dims {m.layer_dims} != member 0 {dims}"
                )
            if m.output_activation != self.members[0].output_activation:
                raise DimensionMismatchError("members disagree on output activation")
        if self.obs_mean is None:
            self.obs_mean = np.zeros(dims[0])
            self.obs_std = np.ones(dims[0])

    @property
    def n_members(self) -> int:
        return len(self.members)

    @property
    def obs_dim(self) -> int:
        return self.members[0].obs_dim

    @property
    def action_dim(self) -> int:
        return self.members[0].action_dim

    def normalize(self, s):
        return (np.asarray(s, dtype=np.float64) - self.obs_mean) / self.obs_std

    def member_traces(self, s) -> list[nn.ForwardTrace]:
        z = self.normalize(s)
        return [nn.forward(m, z) for m in self.members]

    def predict_members(self, s) -> np.ndarray:
        """Raw member outputs for one state: (N, action_dim). Discrete heads
        yield probability vectors (no argmax, no clipping)."""
        return np.stack([t.output for t in self.member_traces(s)])

    def act(self, s):
        """The deployed ensemble action for one state."""
        return ensemble_action(self, s)


def _swarm_pair_count(n_members: int, n_hidden: int) -> int:
    return n_hidden * (n_members * (n_members - 1)) // 2


def _swarm_scale(ensemble: Ensemble) -> float:
    """1 for the raw pairwise sum, 1/(K * pairs) in normalized mode."""
    if not ensemble.normalize_swarm:
        return 1.0
    pairs = _swarm_pair_count(ensemble.n_members, ensemble.members[0].n_hidden_layers)
    return 1.0 / pairs if pairs else 1.0


def _check_sample(ensemble: Ensemble, s, a):
    s = np.asarray(s, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    if s.shape != (ensemble.obs_dim,):
        raise DimensionMismatchError(
            f"state shape {s.shape}, expected ({ensemble.obs_dim},)"
        )
    if a.shape != (ensemble.action_dim,):
        raise DimensionMismatchError(
            f"action shape {a.shape}, expected ({ensemble.action_dim},)"
        )
    return s, a


def _bc_term(outputs, a) -> float:
    return float(sum(np.sum((y - a) ** 2) for y in outputs))


def _swarm_term(traces) -> float:
    """Raw pairwise squared hidden-activation differences, hidden layers only."""
    n = len(traces)
    widths = [tuple(h.shape for h in t.hiddens) for t in traces]
    if any(w != widths[0] for w in widths):
        raise DimensionMismatchError("members have heterogeneous hidden widths")
    total = 0.0
    for k in range(len(traces[0].hiddens)):
        for i in range(n):
            for j in range(i + 1, n):
                d = traces[i].hiddens[k] - traces[j].hiddens[k]
                total += float(np.sum(d * d))
    return total


def standard_loss(ensemble: Ensemble, s, a) -> LossBreakdown:
    """Plain BC-ensemble loss for one sample: sum_i ||pi_i(s) - a||^2."""
    s, a = _check_sample(ensemble, s, a)
    outputs = [t.output for t in ensemble.member_traces(s)]
    bc = _bc_term(outputs, a)
    return LossBreakdown(bc_term=bc, swarm_term=0.0, total=bc)


def swarm_loss(ensemble: Ensemble, s, a) -> LossBreakdown:
    """Full training loss for one sample; reduces bit-exactly to
    ``standard_loss`` when tau = 0."""
    s, a = _check_sample(ensemble, s, a)
    traces = ensemble.member_traces(s)
    bc = _bc_term([t.output for t in traces], a)
    swarm = _swarm_term(traces) * _swarm_scale(ensemble)
    return LossBreakdown(bc_term=bc, swarm_term=swarm, total=bc + ensemble.tau * swarm)


def ensemble_action(ensemble: Ensemble, s):
    """Member-mean action: componentwise mean clipped to the env bounds for
    continuous heads, argmax of the mean probability vector for discrete."""
    mean = ensemble.predict_members(s).mean(axis=0)
    if ensemble.action_kind == "discrete":
        return int(np.argmax(mean))
    if ensemble.action_low is not None:
        mean = np.clip(mean, ensemble.action_low, ensemble.action_high)
    return mean


def batch_loss_and_grads(ensemble: Ensemble, states, actions):
    """Mean per-sample loss over a batch, plus per-member parameter grads.

    Returns ``(LossBreakdown, grads)`` with ``grads[i]`` a flat parameter
    list matching ``nn.policy_parameters(member_i)``. One backward pass
    through the coupled graph: every member's hidden activations receive
    gradient from the pairwise term as well as from its own output error.
    """
    states = np.atleast_2d(np.asarray(states, dtype=np.float64))
    actions = np.atleast_2d(np.asarray(actions, dtype=np.float64))
    n_batch = len(states)
    n = ensemble.n_members
    traces = ensemble.member_traces(states)
    K = ensemble.members[0].n_hidden_layers
    scale = _swarm_scale(ensemble)

    bc = sum(np.sum((t.output - actions) ** 2) for t in traces) / n_batch
    swarm = 0.0
    hidden_sums = []
    for k in range(K):
        hs = np.stack([t.hiddens[k] for t in traces])  # (N, B, m)
        hidden_sums.append(hs.sum(axis=0))
        for i in range(n):
            for j in range(i + 1, n):
                d = hs[i] - hs[j]
                swarm += np.sum(d * d)
    swarm = swarm * scale / n_batch
    total = bc + ensemble.tau * swarm

    seeds = []
    coef = 2.0 * ensemble.tau * scale / n_batch
    for i, t in enumerate(traces):
        out_seed = 2.0 * (t.output - actions) / n_batch
        hid_seeds = None
        if ensemble.tau > 0 and n > 1:
            # d/dh_i sum_{a<b} ||h_a - h_b||^2 = 2 (N h_i - sum_j h_j)
            hid_seeds = [
                coef * (n * t.hiddens[k] - hidden_sums[k]) for k in range(K)
            ]
        seeds.append((out_seed, hid_seeds))

    raw = nn.backward(ensemble.members, traces, seeds)
    grads = [nn.policy_gradients(dw, db) for dw, db in raw]
    return LossBreakdown(bc_term=float(bc), swarm_term=float(swarm), total=float(total)), grads


def evaluate_loss(ensemble: Ensemble, states, actions) -> LossBreakdown:
    """Mean per-sample LossBreakdown over a set of samples (no gradients)."""
    breakdown, _ = batch_loss_and_grads(ensemble, states, actions)
    return breakdown


@dataclass
class TrainConfig:
    epochs: int = 400
    batch_size: int = 64
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    hidden_dims: tuple = (16, 16)
    patience: int = 50
    min_rel_improvement: float = 1e-4
    normalize_swarm: bool = False

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ConfigError("epochs and batch_size must be >= 1")
        if not self.hidden_dims:
            raise ConfigError("need at least one hidden layer")


def train(
    dataset: Dataset,
    n_members: int,
    tau: float,
    config: TrainConfig = None,
    seed: int = 0,
):
    """Train a fresh ensemble on a dataset; returns ``(ensemble, history)``.

    All members update jointly from the single coupled loss each minibatch.
    States are normalized with the dataset statistics. Training stops at the
    epoch budget or once the epoch loss has stopped improving for
    ``patience`` epochs. ``history`` holds one mean LossBreakdown per epoch.
    """
    if config is None:
        config = TrainConfig()
    if len(dataset) == 0:
        raise ConfigError("cannot train on an empty dataset")
    if n_members < 1:
        raise ConfigError(f"n_members must be >= 1, got {n_members}")
    if tau < 0:
        raise ConfigError(f"tau must be >= 0, got {tau}")

    discrete = dataset.meta.action_kind == "discrete"
    layer_dims = [dataset.meta.obs_dim, *config.hidden_dims, dataset.meta.action_dim]
    streams = np.random.SeedSequence(seed).spawn(n_members + 1)
    members = [
        nn.init_policy(
            layer_dims,
            np.random.default_rng(streams[i]),
            output_activation="softmax" if discrete else "identity",
        )
        for i in range(n_members)
    ]
    shuffle_rng = np.random.default_rng(streams[n_members])

    low = high = None
    if not discrete:
        from .envs import ENV_IDS, env_spec

        if dataset.meta.env in ENV_IDS:
            spec = env_spec(dataset.meta.env)
            low, high = spec.action_low, spec.action_high

    ens = Ensemble(
        members=members,
        tau=tau,
        action_kind=dataset.meta.action_kind,
        obs_mean=dataset.obs_mean.copy(),
        obs_std=dataset.obs_std.copy(),
        action_low=low,
        action_high=high,
        normalize_swarm=config.normalize_swarm,
        meta={
            "env": dataset.meta.env,
            "n_expert_episodes": dataset.meta.episodes,
            "dataset_seed": dataset.meta.seed,
            "train_seed": seed,
        },
    )

    opt_states = [
        nn.adam_init(
            nn.policy_parameters(m),
            lr=config.learning_rate,
            beta1=config.beta1,
            beta2=config.beta2,
            eps=config.eps,
        )
        for m in members
    ]

    n_samples = len(dataset)
    history: list[LossBreakdown] = []
    best_total = np.inf
    best_epoch = -1
    last_finite = [m.copy() for m in ens.members]

    for epoch in range(config.epochs):
        order = shuffle_rng.permutation(n_samples)
        sum_bc = sum_swarm = sum_total = 0.0
        for start in range(0, n_samples, config.batch_size):
            idx = order[start : start + config.batch_size]
            breakdown, grads = batch_loss_and_grads(
                ens, dataset.states[idx], dataset.actions[idx]
            )
            if not np.isfinite(breakdown.total):
                raise TrainingDivergedError(
                    f"non-finite loss in epoch {epoch}",
                    epoch=epoch,
                    last_finite_ensemble=Ensemble(
                        members=last_finite,
                        tau=ens.tau,
                        action_kind=ens.action_kind,
                        obs_mean=ens.obs_mean,
                        obs_std=ens.obs_std,
                        action_low=ens.action_low,
                        action_high=ens.action_high,
                        normalize_swarm=ens.normalize_swarm,
                        meta=dict(ens.meta),
                    ),
                )
            new_members = []
            for i, member in enumerate(ens.members):
                params, opt_states[i] = nn.adam_step(
                    nn.policy_parameters(member), grads[i], opt_states[i]
                )
                new_members.append(nn.with_parameters(member, params))
            ens.members = new_members
            w = len(idx)
            sum_bc += breakdown.bc_term * w
            sum_swarm += breakdown.swarm_term * w
            sum_total += breakdown.total * w
        epoch_loss = LossBreakdown(
            bc_term=sum_bc / n_samples,
            swarm_term=sum_swarm / n_samples,
            total=sum_total / n_samples,
        )
        history.append(epoch_loss)
        last_finite = [m.copy() for m in ens.members]

        if np.isfinite(best_total):
            threshold = config.min_rel_improvement * max(1.0, abs(best_total))
            improved = epoch_loss.total < best_total - threshold
        else:
            improved = True
        if improved:
            best_total = epoch_loss.total
            best_epoch = epoch
        elif epoch - best_epoch >= config.patience:
            break
    return ens, history


def save_ensemble(ensemble: Ensemble, path) -> None:
    """Write a self-describing JSON model file (lossless float64 round-trip)."""
    import json

    doc = {
        "format": "swarmbc-ensemble-v1",
        "n_members": ensemble.n_members,
        "tau": ensemble.tau,
        "action_kind": ensemble.action_kind,
        "normalize_swarm": ensemble.normalize_swarm,
        "layer_dims": list(ensemble.members[0].layer_dims),
        "hidden_activation": ensemble.members[0].hidden_activation,
        "output_activation": ensemble.members[0].output_activation,
        "obs_mean": ensemble.obs_mean.tolist(),
        "obs_std": ensemble.obs_std.tolist(),
        "action_low": None if ensemble.action_low is None else ensemble.action_low.tolist(),
        "action_high": None if ensemble.action_high is None else ensemble.action_high.tolist(),
        "meta": ensemble.meta,
        "members": [
            {
                "weights": [w.tolist() for w in m.weights],
                "biases": [b.tolist() for b in m.biases],
            }
            for m in ensemble.members
        ],
    }
    with open(path, "w") as f:
        json.dump(doc, f)


def load_ensemble(path) -> Ensemble:
    import json

    with open(path) as f:
        doc = json.load(f)
    if doc.get("format") != "swarmbc-ensemble-v1":
        raise ConfigError(f"{path}: not a swarmbc ensemble file")
    layer_dims = list(doc["layer_dims"])
    members = [
        nn.MlpPolicy(
            layer_dims=list(layer_dims),
            weights=[np.array(w, dtype=np.float64) for w in rec["weights"]],
            biases=[np.array(b, dtype=np.float64) for b in rec["biases"]],
            hidden_activation=doc["hidden_activation"],
            output_activation=doc["output_activation"],
        )
        for rec in doc["members"]
    ]
    return Ensemble(
        members=members,
        tau=float(doc["tau"]),
        action_kind=doc["action_kind"],
        obs_mean=np.array(doc["obs_mean"], dtype=np.float64),
        obs_std=np.array(doc["obs_std"], dtype=np.float64),
        action_low=None if doc["action_low"] is None else np.array(doc["action_low"]),
        action_high=None if doc["action_high"] is None else np.array(doc["action_high"]),
        normalize_swarm=bool(doc.get("normalize_swarm", False)),
        meta=doc.get("meta", {}),
    )


def random_tiny_ensemble(rng, tau, n_members=None, discrete=None) -> Ensemble:
    """Small random ensemble for gradient and identity checks."""
    if n_members is None:
        n_members = int(rng.integers(2, 4))
    if discrete is None:
        discrete = bool(rng.integers(2))
    obs_dim = int(rng.integers(1, 4))
    action_dim = int(rng.integers(2, 4)) if discrete else int(rng.integers(1, 4))
    n_hidden = int(rng.integers(1, 3))
    hidden = [int(rng.integers(1, 5)) for _ in range(n_hidden)]
    dims = [obs_dim, *hidden, action_dim]
    members = [
        nn.init_policy(
            dims,
            np.random.default_rng(rng.integers(2**63)),
            output_activation="softmax" if discrete else "identity",
        )
        for _ in range(n_members)
    ]
    return Ensemble(
        members=members,
        tau=tau,
        action_kind="discrete" if discrete else "continuous",
    )


def gradient_max_rel_error(n_trials=100, seed=0, taus=(0.0, 0.25, 1.0), step=1e-5):
    """Compare analytic gradients of the full loss against central finite
    differences on random tiny ensembles; returns the worst relative error
    (absolute floor 1e-7 in the denominator)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for trial in range(n_trials):
        tau = taus[trial % len(taus)]
        ens = random_tiny_ensemble(rng, tau)
        s = rng.normal(size=ens.obs_dim)
        if ens.action_kind == "discrete":
            a = np.zeros(ens.action_dim)
            a[rng.integers(ens.action_dim)] = 1.0
        else:
            a = rng.normal(size=ens.action_dim)

        _, grads = batch_loss_and_grads(ens, s[None, :], a[None, :])

        counts = [len(nn.policy_parameters(m)) for m in ens.members]

        def loss_fn(flat_params):
            rebuilt, at = [], 0
            for m, c in zip(ens.members, counts):
                rebuilt.append(nn.with_parameters(m, flat_params[at : at + c]))
                at += c
            probe = Ensemble(
                members=rebuilt,
                tau=ens.tau,
                action_kind=ens.action_kind,
                normalize_swarm=ens.normalize_swarm,
            )
            return swarm_loss(probe, s, a).total

        flat = [p for m in ens.members for p in nn.policy_parameters(m)]
        fd = nn.finite_diff_grad(loss_fn, flat, step=step)
        analytic = [g for gs in grads for g in gs]
        for ga, gf in zip(analytic, fd):
            denom = np.maximum(np.maximum(np.abs(ga), np.abs(gf)), 1e-7)
            worst = max(worst, float(np.max(np.abs(ga - gf) / denom)))
    return worst
