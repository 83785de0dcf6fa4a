"""Command-line interface.

Subcommands: gen-data, train, eval, sweep, mode-demo, grad-check.
Exit codes: 0 success, 1 usage/config error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import harness, theory
from .data import load_dataset, save_dataset
from .ensemble import TrainConfig, load_ensemble, save_ensemble, train
from .ensemble import gradient_max_rel_error
from .envs import ENV_IDS, generate_dataset, make_env
from .errors import (
    ConfigError,
    DegenerateBaselineError,
    DimensionMismatchError,
    SwarmBCError,
    TiedModeError,
    TrainingDivergedError,
)
from .metrics import rollout, scaled_return, write_trajectory_csv

USAGE_EXIT = 1
NUMERICAL_EXIT = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _train_config(args) -> TrainConfig:
    kwargs = {}
    if args.epochs is not None:
        kwargs["epochs"] = args.epochs
    if args.batch_size is not None:
        kwargs["batch_size"] = args.batch_size
    if args.lr is not None:
        kwargs["learning_rate"] = args.lr
    if args.patience is not None:
        kwargs["patience"] = args.patience
    if args.hidden_dims is not None:
        kwargs["hidden_dims"] = tuple(int(t) for t in args.hidden_dims.split(","))
    if args.normalize_swarm:
        kwargs["normalize_swarm"] = True
    return TrainConfig(**kwargs)


def cmd_gen_data(args) -> int:
    out = Path(args.out)
    if out.exists() and not args.force:
        raise ConfigError(f"{out} exists; rerun with --force to overwrite")
    env = make_env(args.env)
    dataset = generate_dataset(env, args.episodes, args.seed)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_dataset(dataset, out)
    print(f"wrote {len(dataset)} samples ({args.episodes} episodes) to {out}")
    return 0


def _resolve_method_params(method, tau, n):
    if method == "bc":
        tau = 0.0 if tau is None else tau
        n = 1 if n is None else n
        if n != 1:
            raise ConfigError("bc trains a single policy; use --method ensemble for N > 1")
        if tau != 0.0:
            raise ConfigError("bc does not take a regularizer; tau must be 0")
    elif method == "ensemble":
        tau = 0.0 if tau is None else tau
        n = 4 if n is None else n
        if tau != 0.0:
            raise ConfigError("ensemble uses tau = 0; use --method swarm for tau > 0")
        if n < 2:
            raise ConfigError("ensemble needs --n >= 2")
    elif method == "swarm":
        tau = 0.25 if tau is None else tau
        n = 4 if n is None else n
        if tau <= 0.0:
            raise ConfigError("swarm requires tau > 0; use --method ensemble for tau = 0")
        if n < 2:
            raise ConfigError("swarm needs --n >= 2")
    return tau, n


def cmd_train(args) -> int:
    tau, n = _resolve_method_params(args.method, args.tau, args.n)
    dataset = load_dataset(args.data)
    config = _train_config(args)
    ens, history = train(dataset, n, tau, config, seed=args.seed)
    ens.meta["method"] = args.method

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_ensemble(ens, out)

    history_path = Path(args.history) if args.history else out.with_suffix(".history.csv")
    with open(history_path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["epoch", "bc_term", "swarm_term", "total"])
        for epoch, h in enumerate(history):
            writer.writerow(
                [epoch, repr(h.bc_term), repr(h.swarm_term), repr(h.total)]
            )
    final = history[-1]
    print(
        f"trained {args.method} (tau={tau}, N={n}) for {len(history)} epochs; "
        f"final loss {final.total:.6f} (bc {final.bc_term:.6f}, "
        f"swarm {final.swarm_term:.6f})"
    )
    print(f"model: {out}\nhistory: {history_path}")
    return 0


def cmd_eval(args) -> int:
    if not args.expert and not args.model:
        raise ConfigError("need --model PATH (or --expert to evaluate the expert)")
    ens = None
    if args.model:
        ens = load_ensemble(args.model)
        env_id = args.env or ens.meta.get("env")
        if env_id is None:
            raise ConfigError("model has no env metadata; pass --env")
        if args.env and ens.meta.get("env") and args.env != ens.meta["env"]:
            raise ConfigError(
                f"model was trained on {ens.meta['env']!r}, not {args.env!r}"
            )
    else:
        if not args.env:
            raise ConfigError("--expert needs --env")
        env_id = args.env
    env = make_env(env_id)
    if ens is not None and ens.obs_dim != env.spec.obs_dim:
        raise DimensionMismatchError(
            f"model expects obs_dim {ens.obs_dim}, env {env_id} has "
            f"{env.spec.obs_dim}"
        )

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = harness.ExperimentConfig(
        envs=(env_id,), eval_episodes=args.episodes, master_seed=args.seed
    )
    baselines = harness.load_or_compute_baselines(cfg, out_dir)
    r_random, r_expert = baselines[env_id]

    record_members = ens is not None and ens.n_members >= 2
    episode_seeds = np.random.SeedSequence(
        harness.fan_out_seed(args.seed, "eval", env_id)
    ).spawn(args.episodes)
    returns, diffs = [], []
    for i, ep_seed in enumerate(episode_seeds):
        policy = env.expert_action if ens is None else ens
        traj = rollout(env, policy, ep_seed, record_members=record_members)
        returns.append(scaled_return(traj.episode_return, r_random, r_expert))
        if traj.action_diffs is not None:
            diffs.append(traj.mean_action_difference)
        write_trajectory_csv(traj, out_dir / f"traj_ep{i:03d}.csv")

    mean_return = float(np.mean(returns))
    mean_diff = float(np.mean(diffs)) if diffs else None
    if ens is None:
        method, tau, n, n_ep = "expert", 0.0, 1, 0
    else:
        method = ens.meta.get("method", "ensemble")
        tau, n = ens.tau, ens.n_members
        n_ep = int(ens.meta.get("n_expert_episodes", 0))

    results_path = out_dir / "eval_results.csv"
    new_file = not results_path.exists()
    with open(results_path, "a", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        if new_file:
            f.write(f"# schema={harness.RESULTS_SCHEMA}\n")
            writer.writerow(harness.RESULTS_COLUMNS)
        writer.writerow(
            [env_id, method, n_ep, repr(float(tau)), n, args.seed,
             repr(mean_return), "" if mean_diff is None else repr(mean_diff)]
        )

    d_text = "" if mean_diff is None else f", mean action difference {mean_diff:.6f}"
    print(
        f"{env_id} {method}: mean scaled return {mean_return:.4f} over "
        f"{args.episodes} episodes{d_text}"
    )
    print(f"trajectories and results in {out_dir}")
    return 0


def cmd_sweep(args) -> int:
    if args.write_config:
        path = Path(args.write_config)
        if path.exists() and not args.force:
            raise ConfigError(f"{path} exists; rerun with --force to overwrite")
        path.write_text(harness.default_config_text())
        print(f"wrote default config to {path}")
        return 0
    cfg = (
        harness.parse_config_file(args.config)
        if args.config
        else harness.ExperimentConfig()
    )
    store = harness.run_sweep(
        cfg, args.out, workers=args.workers, force=args.force, log=print
    )
    print(f"{len(store.records)} records in {Path(args.out) / 'results.csv'}")
    return 0


def cmd_mode_demo(args) -> int:
    n_list = [int(t) for t in args.n_list.split(",") if t.strip()]
    if args.density == "uniform":
        density = theory.uniform_grid_density(n_cells=args.cells)
    else:
        density = theory.gaussian_grid_density(
            n_cells=args.cells, mean=args.mean, std=args.std
        )
    try:
        report = theory.concentration_report(density, args.tau, n_list)
    except TiedModeError as exc:
        # the concentration claim assumes a unique global mode
        print(f"degenerate density: {exc}", file=sys.stderr)
        raise
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["N", "mode_mass"])
        for n, mass in report:
            writer.writerow([n, repr(mass)])
    print(f"{'N':>4}  mode_mass")
    for n, mass in report:
        print(f"{n:>4}  {mass:.6f}")
    print(f"wrote {out}")
    return 0


def cmd_grad_check(args) -> int:
    worst = gradient_max_rel_error(
        n_trials=args.trials, seed=args.seed, step=args.step
    )
    print(f"max relative error over {args.trials} random ensembles: {worst:.3e}")
    if worst >= 1e-4:
        print("FAIL: exceeds 1e-4", file=sys.stderr)
        return NUMERICAL_EXIT
    print("PASS: below 1e-4")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="swarmbc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="record expert demonstrations to JSONL")
    p.add_argument("--env", required=True, choices=ENV_IDS)
    p.add_argument("--episodes", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train", help="train bc/ensemble/swarm on a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--method", required=True, choices=("bc", "ensemble", "swarm"))
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model file (JSON)")
    p.add_argument("--history", default=None, help="loss-history CSV path")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--patience", type=int, default=None)
    p.add_argument("--hidden-dims", default=None, help="e.g. 64,64")
    p.add_argument("--normalize-swarm", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a model (or the expert) on an env")
    p.add_argument("--model", default=None)
    p.add_argument("--expert", action="store_true", help="evaluate the scripted expert")
    p.add_argument("--env", default=None, choices=ENV_IDS)
    p.add_argument("--episodes", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="eval_out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="run the full experiment grid")
    p.add_argument("--config", default=None, help="key = value config file")
    p.add_argument("--out", default="sweep_out")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--force", action="store_true", help="rerun completed cells")
    p.add_argument("--write-config", default=None, metavar="PATH",
                   help="write the default config file and exit")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mode-demo", help="mode-concentration sweep on a grid density")
    p.add_argument("--density", choices=("gauss", "uniform"), default="gauss")
    p.add_argument("--cells", type=int, default=101)
    p.add_argument("--mean", type=float, default=0.15)
    p.add_argument("--std", type=float, default=0.25)
    p.add_argument("--tau", type=float, default=0.4, help="window edge length")
    p.add_argument("--n-list", default="1,2,4,8,16,32")
    p.add_argument("--out", default="mode_demo.csv")
    p.set_defaults(func=cmd_mode_demo)

    p = sub.add_parser("grad-check", help="finite-difference check of the backward pass")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step", type=float, default=1e-5)
    p.set_defaults(func=cmd_grad_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DimensionMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (TrainingDivergedError, DegenerateBaselineError, TiedModeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_EXIT
    except SwarmBCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
