"""Dense feed-forward policies with hand-written analytic gradients.

Everything here is float64 and purely functional: forward passes return a
trace of every intermediate value, the backward pass consumes a trace plus
gradient seeds (including seeds injected directly on hidden activations),
and the optimizer returns fresh arrays instead of mutating. This keeps
training bit-reproducible and the gradient math checkable against finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionMismatchError

HIDDEN_ACTIVATIONS = ("tanh",)
OUTPUT_ACTIVATIONS = ("identity", "softmax")


@dataclass
class MlpPolicy:
    """One MLP: ``layer_dims[0]`` inputs, K hidden tanh layers, one output layer.

    ``weights[k]`` has shape ``(layer_dims[k], layer_dims[k+1])`` and acts on
    row vectors (``x @ W + b``).
    """

    layer_dims: list[int]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    hidden_activation: str = "tanh"
    output_activation: str = "identity"

    def __post_init__(self):
        if len(self.layer_dims) < 3:
            raise DimensionMismatchError(
                f"need at least one hidden layer, got layer_dims={self.layer_dims}"
            )
        if any(d <= 0 for d in self.layer_dims):
            raise DimensionMismatchError(f"non-positive width in {self.layer_dims}")
        if self.hidden_activation not in HIDDEN_ACTIVATIONS:
            raise ValueError(f"unknown hidden activation {self.hidden_activation!r}")
        if self.output_activation not in OUTPUT_ACTIVATIONS:
            raise ValueError(f"unknown output activation {self.output_activation!r}")
        n_layers = len(self.layer_dims) - 1
        if len(self.weights) != n_layers or len(self.biases) != n_layers:
            raise DimensionMismatchError(
                f"expected {n_layers} weight/bias pairs, got "
                f"{len(self.weights)}/{len(self.biases)}"
            )
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            want = (self.layer_dims[k], self.layer_dims[k + 1])
            if w.shape != want:
                raise DimensionMismatchError(
                    f"layer {k}: weight shape {w.shape}, expected {want}"
                )
            if b.shape != (self.layer_dims[k + 1],):
                raise DimensionMismatchError(
                    f"layer {k}: bias shape {b.shape}, expected ({want[1]},)"
                )

    @property
    def obs_dim(self) -> int:
        return self.layer_dims[0]

    @property
    def action_dim(self) -> int:
        return self.layer_dims[-1]

    @property
    def n_hidden_layers(self) -> int:
        return len(self.layer_dims) - 2

    def copy(self) -> "MlpPolicy":
        return replace(
            self,
            layer_dims=list(self.layer_dims),
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
        )


@dataclass
class ForwardTrace:
    """All intermediates of one forward pass (single state or batch)."""

    state: np.ndarray
    pre_activations: list[np.ndarray]  # one per affine layer, outputs last
    hiddens: list[np.ndarray]          # post-tanh, one per hidden layer
    output: np.ndarray


def init_policy(layer_dims, rng, output_activation="identity") -> MlpPolicy:
    """Uniform fan-in-scaled init; weights and biases both ~ U(+-1/sqrt(fan_in))."""
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(rng.uniform(-bound, bound, size=fan_out))
    return MlpPolicy(
        layer_dims=list(layer_dims),
        weights=weights,
        biases=biases,
        output_activation=output_activation,
    )


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def forward(policy: MlpPolicy, s: np.ndarray) -> ForwardTrace:
    """Run the network on one state (1-D) or a batch (2-D), keeping all
    intermediates for the backward pass."""
    s = np.asarray(s, dtype=np.float64)
    single = s.ndim == 1
    x = np.atleast_2d(s)
    if x.shape[1] != policy.obs_dim:
        raise DimensionMismatchError(
            f"input layer: state dim {x.shape[1]}, expected {policy.obs_dim}"
        )
    pre, hiddens = [], []
    a = x
    n_layers = len(policy.weights)
    for k in range(n_layers):
        z = a @ policy.weights[k] + policy.biases[k]
        pre.append(z)
        if k < n_layers - 1:
            a = np.tanh(z)
            hiddens.append(a)
        elif policy.output_activation == "softmax":
            a = _softmax(z)
        else:
            a = z
    if single:
        return ForwardTrace(
            state=s,
            pre_activations=[p[0] for p in pre],
            hiddens=[h[0] for h in hiddens],
            output=a[0],
        )
    return ForwardTrace(state=s, pre_activations=pre, hiddens=hiddens, output=a)


def backward_policy(policy, trace, output_grad, hidden_grads=None):
    """Analytic gradients of a scalar loss w.r.t. every weight and bias.

    ``output_grad`` is dL/d(output); ``hidden_grads[k]``, when given, is
    dL/dh_{k+1} injected directly on the post-tanh activation of hidden
    layer k (this is how the pairwise alignment penalty enters the graph
    mid-network). Returns ``(dweights, dbiases)`` mirroring the policy.
    """
    K = policy.n_hidden_layers
    if hidden_grads is None:
        hidden_grads = [None] * K
    if len(hidden_grads) != K:
        raise DimensionMismatchError(
            f"got {len(hidden_grads)} hidden-gradient seeds for {K} hidden layers"
        )

    x = np.atleast_2d(np.asarray(trace.state, dtype=np.float64))
    hiddens = [np.atleast_2d(h) for h in trace.hiddens]
    out = np.atleast_2d(trace.output)
    gy = np.atleast_2d(np.asarray(output_grad, dtype=np.float64))
    if gy.shape != out.shape:
        raise DimensionMismatchError(
            f"output seed shape {gy.shape}, expected {out.shape}"
        )

    if policy.output_activation == "softmax":
        # dL/dz = y * (g - sum(g * y)) for y = softmax(z)
        dz = out * (gy - (gy * out).sum(axis=-1, keepdims=True))
    else:
        dz = gy

    dweights = [None] * len(policy.weights)
    dbiases = [None] * len(policy.biases)
    acts = [x] + hiddens  # inputs to each affine layer
    for k in range(len(policy.weights) - 1, -1, -1):
        dweights[k] = acts[k].T @ dz
        dbiases[k] = dz.sum(axis=0)
        if k == 0:
            break
        da = dz @ policy.weights[k].T
        seed = hidden_grads[k - 1]
        if seed is not None:
            da = da + np.atleast_2d(seed)
        h = hiddens[k - 1]
        dz = da * (1.0 - h * h)  # tanh'(z) from the stored activation
    return dweights, dbiases


def backward(policies, traces, seeds):
    """Per-policy gradients for a list of policies sharing one scalar loss.

    ``seeds[i]`` is ``(output_grad, hidden_grads)`` for policy i, with
    ``hidden_grads`` either None or a list with one entry per hidden layer.
    """
    if not (len(policies) == len(traces) == len(seeds)):
        raise DimensionMismatchError(
            f"got {len(policies)} policies, {len(traces)} traces, {len(seeds)} seeds"
        )
    return [
        backward_policy(p, t, out_g, hid_g)
        for p, t, (out_g, hid_g) in zip(policies, traces, seeds)
    ]


@dataclass
class AdamState:
    """Bias-corrected adaptive-moment optimizer state for a list of arrays."""

    m: list[np.ndarray]
    v: list[np.ndarray]
    step: int = 0
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def adam_init(params, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8) -> AdamState:
    return AdamState(
        m=[np.zeros_like(p) for p in params],
        v=[np.zeros_like(p) for p in params],
        lr=lr,
        beta1=beta1,
        beta2=beta2,
        eps=eps,
    )


def adam_step(params, grads, state: AdamState):
    """One update. Returns ``(new_params, new_state)``; nothing is mutated."""
    if len(params) != len(grads) or len(params) != len(state.m):
        raise DimensionMismatchError("parameter/gradient/state length mismatch")
    t = state.step + 1
    c1 = 1.0 - state.beta1**t
    c2 = 1.0 - state.beta2**t
    new_m, new_v, new_params = [], [], []
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape:
            raise DimensionMismatchError(
                f"gradient shape {g.shape} does not match parameter {p.shape}"
            )
        m = state.beta1 * m + (1.0 - state.beta1) * g
        v = state.beta2 * v + (1.0 - state.beta2) * (g * g)
        new_m.append(m)
        new_v.append(v)
        new_params.append(p - state.lr * (m / c1) / (np.sqrt(v / c2) + state.eps))
    return new_params, replace(state, m=new_m, v=new_v, step=t)


def policy_parameters(policy: MlpPolicy) -> list[np.ndarray]:
    """Flatten to [W0, b0, W1, b1, ...] for the optimizer."""
    out = []
    for w, b in zip(policy.weights, policy.biases):
        out.append(w)
        out.append(b)
    return out


def policy_gradients(dweights, dbiases) -> list[np.ndarray]:
    out = []
    for dw, db in zip(dweights, dbiases):
        out.append(dw)
        out.append(db)
    return out


def with_parameters(policy: MlpPolicy, params) -> MlpPolicy:
    """Rebuild a policy from the flat [W0, b0, ...] parameter list."""
    n = len(policy.weights)
    if len(params) != 2 * n:
        raise DimensionMismatchError(f"expected {2 * n} arrays, got {len(params)}")
    return replace(
        policy,
        weights=[params[2 * k] for k in range(n)],
        biases=[params[2 * k + 1] for k in range(n)],
    )


def finite_diff_grad(loss_fn, params, step=1e-5):
    """Central-difference gradients of ``loss_fn(params)`` w.r.t. every entry.

    The test oracle for the analytic backward pass: it only ever calls the
    loss as a black box.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    grads = []
    work = [p.astype(np.float64).copy() for p in params]
    for i, p in enumerate(work):
        g = np.zeros_like(p)
        it = np.nditer(p, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            orig = p[idx]
            p[idx] = orig + step
            lo_hi = loss_fn(work)
            p[idx] = orig - step
            lo_lo = loss_fn(work)
            p[idx] = orig
            g[idx] = (lo_hi - lo_lo) / (2.0 * step)
        grads.append(g)
    return grads
