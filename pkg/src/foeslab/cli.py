"""Command-line interface: model diagnostics as reproducible CSV.

Every subcommand reads options from flags and/or a flat ``key = value``
config file (flags win), writes CSV to stdout or ``--out``, and exits 0 on
success, 2 on a usage/config error, 3 when an enumeration would exceed the
outcome budget. Floats are emitted with shortest round-trip repr so output
is byte-reproducible for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .core import (
    BudgetExceededError,
    DEFAULT_ENUMERATION_BUDGET,
    FoesModel,
    UniformModelError,
)
from .experiments import GridExperimentConfig, figure1_csv, run_figure1
from .metrics import (
    ParameterPath,
    PathThresholds,
    classify_path,
    delta_n,
    graph_lower_bound,
    instability_report,
    lrep,
    modal_set,
)
from .psr import check_psr, degeneracy_trend
from .rbm_bounds import bounds_report
from .samplers import (
    ChainConfig,
    expected_standardized_log_prob,
    expected_statistic,
    normalized_score,
    run_gibbs,
    run_param_mh,
)
from .zoo import (
    GraphModelSpec,
    LinearExpFamily,
    RbmParams,
    make_bernoulli,
    make_graph_model,
    make_multinomial,
    make_rbm_joint,
    make_rbm_marginal,
    make_uniform,
)


class ConfigError(Exception):
    """Malformed config file, flag combination, or model description."""


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated floats, got {text!r}") from exc


def read_config_file(path: str) -> dict:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    values = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, _, val = line.partition("=")
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def merge_config(args: argparse.Namespace, casts: dict) -> dict:
    """Resolve option values: flag > config file > declared default."""
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}
    resolved = {}
    for key, (cast, default) in casts.items():
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            resolved[key] = flag_val
        elif key in file_values:
            try:
                resolved[key] = cast(file_values[key])
            except (ValueError, TypeError) as exc:
                raise ConfigError(
                    f"config key {key} = {file_values[key]!r}: {exc}") from exc
        else:
            resolved[key] = default
    unknown = set(file_values) - set(casts)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return resolved


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, float):
        # plain-float repr is shortest round-trip; numpy scalars repr as
        # np.float64(...) and must be unwrapped first
        return repr(float(value))
    return str(value)


def _csv(columns: list[str], rows: list[dict], comments: list[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# model construction from resolved option values
# ---------------------------------------------------------------------------

MODEL_KEYS = {
    "model": (str, None),
    "n": (int, None),
    "alphabet_size": (int, 2),
    "theta": (float, None),
    "thetas": (_float_list, None),
    "nodes": (int, None),
    "theta1": (float, 0.0),
    "theta2": (float, 0.0),
    "theta3": (float, 0.0),
    "n_visible": (int, None),
    "n_hidden": (int, 0),
    "theta_v": (_float_list, None),
    "theta_h": (_float_list, None),
    "theta_vh": (_float_list, None),
    "budget": (int, DEFAULT_ENUMERATION_BUDGET),
}


def add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", choices=[
        "uniform", "bernoulli", "multinomial", "graph",
        "rbm_marginal", "rbm_joint"])
    parser.add_argument("--n", type=int, help="variable count (iid models)")
    parser.add_argument("--alphabet-size", type=int, dest="alphabet_size")
    parser.add_argument("--theta", type=float, help="scalar parameter")
    parser.add_argument("--thetas", type=_float_list,
                        help="comma-separated parameter vector")
    parser.add_argument("--nodes", type=int, help="graph node count")
    parser.add_argument("--theta1", type=float, help="graph edge parameter")
    parser.add_argument("--theta2", type=float, help="graph 2-star parameter")
    parser.add_argument("--theta3", type=float, help="graph triangle parameter")
    parser.add_argument("--n-visible", type=int, dest="n_visible")
    parser.add_argument("--n-hidden", type=int, dest="n_hidden")
    parser.add_argument("--theta-v", type=_float_list, dest="theta_v")
    parser.add_argument("--theta-h", type=_float_list, dest="theta_h")
    parser.add_argument("--theta-vh", type=_float_list, dest="theta_vh")
    parser.add_argument("--budget", type=int)
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--out", help="output path (default stdout)")


def _require(values: dict, *keys: str) -> None:
    missing = [k for k in keys if values.get(k) is None]
    if missing:
        raise ConfigError(f"missing required option(s): {', '.join(missing)}")


def rbm_params_from(values: dict) -> RbmParams:
    _require(values, "n_visible", "theta_v")
    nv, nh = values["n_visible"], values["n_hidden"]
    theta_v = np.asarray(values["theta_v"], dtype=np.float64)
    theta_h = np.asarray(values["theta_h"] or [], dtype=np.float64)
    theta_vh = np.asarray(values["theta_vh"] or [], dtype=np.float64)
    if theta_v.size != nv or theta_h.size != nh or theta_vh.size != nv * nh:
        raise ConfigError("RBM parameter lengths must match n_visible/n_hidden")
    return RbmParams(theta_v, theta_h, theta_vh.reshape(nh, nv))


def build_model(values: dict) -> FoesModel:
    """Construct the model a subcommand's options describe."""
    kind = values.get("model")
    budget = values["budget"]
    if kind is None:
        raise ConfigError("missing required option(s): model")
    if kind == "uniform":
        _require(values, "n")
        return make_uniform(values["n"], values["alphabet_size"], budget=budget)
    if kind == "bernoulli":
        _require(values, "n", "theta")
        return make_bernoulli(values["n"], values["theta"], budget=budget)
    if kind == "multinomial":
        _require(values, "n", "thetas")
        return make_multinomial(values["n"], values["thetas"], budget=budget)
    if kind == "graph":
        _require(values, "nodes")
        spec = GraphModelSpec(values["nodes"], params=(
            values["theta1"], values["theta2"], values["theta3"]))
        return make_graph_model(spec, budget=budget)
    if kind == "rbm_marginal":
        return make_rbm_marginal(rbm_params_from(values), budget=budget)
    if kind == "rbm_joint":
        return make_rbm_joint(rbm_params_from(values), budget=budget)
    raise ConfigError(f"unknown model kind {kind!r}")


def model_family_from(values: dict):
    """(family callable over one parameter object, initial theta) pair."""
    kind = values.get("model")
    budget = values["budget"]
    if kind == "bernoulli":
        _require(values, "n")
        n = values["n"]
        return (lambda th: make_bernoulli(n, float(np.atleast_1d(th)[0]),
                                          budget=budget)), values["theta"]
    if kind == "multinomial":
        _require(values, "n")
        n = values["n"]
        thetas = values["thetas"]
        return (lambda th: make_multinomial(n, th, budget=budget)), \
            (None if thetas is None else np.asarray(thetas))
    if kind == "graph":
        _require(values, "nodes")
        nodes = values["nodes"]
        theta = (values["theta1"], values["theta2"], values["theta3"])
        return (lambda th: make_graph_model(
            GraphModelSpec(nodes, params=tuple(np.atleast_1d(th))),
            budget=budget)), theta
    if kind == "rbm_marginal":
        params = rbm_params_from(values)
        return (lambda p: make_rbm_marginal(p, budget=budget)), params
    if kind == "rbm_joint":
        params = rbm_params_from(values)
        return (lambda p: make_rbm_joint(p, budget=budget)), params
    raise ConfigError(f"model {kind!r} does not define a sign-reversible family")


PATH_FAMILIES = {
    "bernoulli": lambda n, p: make_bernoulli(n, float(p[0])),
    "multinomial": lambda n, p: make_multinomial(n, p),
    # path entries for the graph family are keyed by node count
    "graph": lambda n, p: make_graph_model(GraphModelSpec(n, params=tuple(p))),
}


def parse_path_entries(text: str) -> list[tuple[int, np.ndarray]]:
    """Parse 'N:t1,t2;N:t1,t2;...' into (size, params) pairs."""
    entries = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        size_part, _, params_part = chunk.partition(":")
        try:
            size = int(size_part)
        except ValueError as exc:
            raise ConfigError(f"bad path entry {chunk!r}") from exc
        entries.append((size, np.asarray(_float_list(params_part))))
    if not entries:
        raise ConfigError("no path entries given")
    return entries


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def cmd_lrep(args) -> int:
    values = merge_config(args, MODEL_KEYS)
    model = build_model(values)
    r = instability_report(model)
    text = _csv(
        ["model", "n", "lrep", "scaled_lrep", "delta_n",
         "argmax_index", "argmin_index"],
        [{"model": model.family, "n": r.n_variables, "lrep": r.lrep,
          "scaled_lrep": r.scaled_lrep, "delta_n": r.delta_n,
          "argmax_index": r.argmax_index, "argmin_index": r.argmin_index}],
    )
    _emit(text, args.out)
    return 0


def cmd_delta(args) -> int:
    values = merge_config(args, MODEL_KEYS)
    model = build_model(values)
    text = _csv(["model", "n", "delta_n"],
                [{"model": model.family, "n": model.n_variables,
                  "delta_n": delta_n(model)}])
    _emit(text, args.out)
    return 0


def cmd_modeset(args) -> int:
    keys = {**MODEL_KEYS, "epsilon": (float, 0.1)}
    values = merge_config(args, keys)
    model = build_model(values)
    mset = modal_set(model, values["epsilon"])
    text = _csv(
        ["model", "n", "epsilon", "threshold", "n_members", "mass"],
        [{"model": model.family, "n": model.n_variables,
          "epsilon": mset.epsilon, "threshold": mset.threshold,
          "n_members": mset.n_members, "mass": mset.mass}],
    )
    _emit(text, args.out)
    return 0


def cmd_path(args) -> int:
    keys = {
        "family": (str, None),
        "entries": (str, None),
        "epsilon": (float, None),
        "flatness": (float, PathThresholds.flatness),
        "level": (float, PathThresholds.level),
        "budget": (int, DEFAULT_ENUMERATION_BUDGET),
    }
    values = merge_config(args, keys)
    _require(values, "family", "entries")
    if values["family"] not in PATH_FAMILIES:
        raise ConfigError(f"unknown path family {values['family']!r}; "
                          f"choose from {sorted(PATH_FAMILIES)}")
    entries = parse_path_entries(values["entries"])
    path = ParameterPath(PATH_FAMILIES[values["family"]], tuple(entries))
    verdict = classify_path(path, PathThresholds(values["flatness"], values["level"]))
    comments = [f"family = {values['family']}",
                f"verdict = {verdict.verdict}",
                f"trend_slope = {verdict.trend_slope!r}",
                "verdict is a finite-size heuristic, not an asymptotic claim"]
    columns = ["n", "scaled_lrep"]
    rows = [{"n": n, "scaled_lrep": y}
            for n, y in zip(verdict.ns, verdict.scaled_lreps)]
    if values["epsilon"] is not None:
        masses = degeneracy_trend(path, values["epsilon"])
        columns.append("modal_mass")
        for row, mass in zip(rows, masses):
            row["modal_mass"] = mass
        comments.insert(2, f"epsilon = {values['epsilon']!r}")
    _emit(_csv(columns, rows, comments), args.out)
    return 0


def cmd_bounds(args) -> int:
    keys = {
        **{k: MODEL_KEYS[k] for k in
           ("n_visible", "n_hidden", "theta_v", "theta_h", "theta_vh", "budget")},
        "random_draws": (int, 0),
        "half_width": (float, 3.0),
        "seed": (int, 0),
    }
    values = merge_config(args, keys)
    draws = []
    if values["random_draws"]:
        _require(values, "n_visible")
        nv, nh = values["n_visible"], values["n_hidden"]
        rng = np.random.Generator(np.random.Philox(key=np.array(
            [np.uint64(values["seed"]), np.uint64(0)], dtype=np.uint64)))
        w = values["half_width"]
        for _ in range(values["random_draws"]):
            draws.append(RbmParams(rng.uniform(-w, w, nv),
                                   rng.uniform(-w, w, nh),
                                   rng.uniform(-w, w, (nh, nv))))
    else:
        draws.append(rbm_params_from(values))
    columns = ["draw", "n_visible", "n_hidden", "visible_l1", "hidden_l1",
               "interaction_l1", "a_n", "b_n", "c_n", "lrep_joint",
               "lrep_marginal", "a_n_hidden_first", "lower_witness", "n_h_log2"]
    rows = []
    for d, params in enumerate(draws):
        r = bounds_report(params, budget=values["budget"])
        rows.append({"draw": d, **{c: getattr(r, c) for c in columns[1:]}})
    comments = [f"seed = {values['seed']}", f"half_width = {values['half_width']!r}"] \
        if values["random_draws"] else []
    _emit(_csv(columns, rows, comments), args.out)
    return 0


def cmd_psr(args) -> int:
    values = merge_config(args, MODEL_KEYS)
    family, theta = model_family_from(values)
    if theta is None:
        raise ConfigError("the chosen family needs its parameter flags")
    report = check_psr(family, theta)
    text = _csv(
        ["model", "holds", "max_violation", "lrep_theta", "lrep_neg_theta"],
        [{"model": values["model"], "holds": report.holds,
          "max_violation": report.max_violation,
          "lrep_theta": report.lrep_theta,
          "lrep_neg_theta": report.lrep_neg_theta}],
    )
    _emit(text, args.out)
    return 0


def cmd_lowerbound(args) -> int:
    keys = {k: MODEL_KEYS[k] for k in
            ("nodes", "theta1", "theta2", "theta3", "budget")}
    values = merge_config(args, keys)
    _require(values, "nodes")
    spec = GraphModelSpec(values["nodes"], params=(
        values["theta1"], values["theta2"], values["theta3"]))
    bound = graph_lower_bound(spec)
    row = {"nodes": values["nodes"], "theta1": values["theta1"],
           "theta2": values["theta2"], "theta3": values["theta3"],
           "bound": bound, "scaled_lrep": None}
    if 2**spec.n_edges <= values["budget"]:
        row["scaled_lrep"] = lrep(make_graph_model(
            spec, budget=values["budget"])).scaled_lrep
    text = _csv(["nodes", "theta1", "theta2", "theta3", "bound", "scaled_lrep"],
                [row])
    _emit(text, args.out)
    return 0


def cmd_gibbs(args) -> int:
    keys = {
        **MODEL_KEYS,
        "sweeps": (int, 10000),
        "burn_in": (int, 0),
        "seed": (int, 0),
        "epsilon": (float, 0.1),
        "init": (str, None),
    }
    values = merge_config(args, keys)
    model = build_model(values)
    init = None
    if values["init"] is not None and values["init"] != "random":
        init = tuple(int(v) for v in values["init"].split(","))
    config = ChainConfig(n_sweeps=values["sweeps"], burn_in=values["burn_in"],
                         seed=values["seed"], init_outcome=init)
    report = run_gibbs(model, config, epsilon=values["epsilon"], keep_trace=True)
    logp = model.log_probs()
    mask = modal_set(model, values["epsilon"]).member_mask(model.space.n_outcomes)
    comments = [
        f"model = {model.family}", f"seed = {values['seed']}",
        f"epsilon = {values['epsilon']!r}",
        f"tv_distance = {report.tv_distance!r}",
        f"max_transition_log_ratio = {report.max_transition_log_ratio!r}",
        f"mode_escape_time = {report.mode_escape_time}",
        f"modal_occupancy = {report.modal_occupancy!r}",
    ]
    rows = [{"sweep": s + 1, "outcome_index": int(idx),
             "log_prob": float(logp[idx]), "in_modal_set": bool(mask[idx])}
            for s, idx in enumerate(report.trace)]
    text = _csv(["sweep", "outcome_index", "log_prob", "in_modal_set"],
                rows, comments)
    _emit(text, args.out)
    return 0


def cmd_mh(args) -> int:
    keys = {
        **MODEL_KEYS,
        "data": (str, None),
        "steps": (int, 1000),
        "step_size": (float, 0.5),
        "seed": (int, 0),
        "theta0": (_float_list, None),
        "prior": (str, "flat"),
    }
    values = merge_config(args, keys)
    family, default_theta = model_family_from(values)
    _require(values, "data")
    data = tuple(int(v) for v in values["data"].split(","))
    theta0 = values["theta0"]
    if theta0 is None:
        if default_theta is None:
            raise ConfigError("give --theta0 or the family's parameter flags")
        theta0 = np.atleast_1d(np.asarray(default_theta, dtype=np.float64))
    log_prior = _parse_prior(values["prior"])
    config = ChainConfig(n_sweeps=values["steps"], seed=values["seed"])
    result = run_param_mh(family, data, config, theta0=theta0,
                          step_size=values["step_size"], log_prior=log_prior)
    k = result.thetas.shape[1]
    columns = ["step"] + [f"theta_{i}" for i in range(k)] + ["accepted", "log_alpha"]
    rows = []
    for step in range(result.accepted.size):
        row = {"step": step + 1, "accepted": bool(result.accepted[step]),
               "log_alpha": float(result.log_alphas[step])}
        for i in range(k):
            row[f"theta_{i}"] = float(result.thetas[step + 1, i])
        rows.append(row)
    comments = [f"acceptance_rate = {result.acceptance_rate!r}",
                f"seed = {values['seed']}",
                f"step_size = {values['step_size']!r}",
                f"prior = {values['prior']}"]
    _emit(_csv(columns, rows, comments), args.out)
    return 0


def _parse_prior(text: str):
    if text == "flat":
        return lambda th: 0.0
    if text.startswith("normal:"):
        try:
            scale = float(text.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad prior spec {text!r}") from exc
        if scale <= 0:
            raise ConfigError("normal prior scale must be positive")
        return lambda th: float(-0.5 * np.sum(np.asarray(th)**2) / scale**2)
    raise ConfigError(f"unknown prior {text!r} (use 'flat' or 'normal:SCALE')")


def cmd_score(args) -> int:
    values = merge_config(args, MODEL_KEYS)
    model = build_model(values)
    if not isinstance(model, LinearExpFamily):
        raise ConfigError("score needs a linear exponential family model")
    mu = expected_statistic(model)
    row = {"model": model.family, "n": model.n_variables,
           "mu": ";".join(repr(float(v)) for v in mu),
           "normalized_score": None, "expected_position": None}
    if model.n_params == 1:
        row["normalized_score"] = normalized_score(model)
    try:
        row["expected_position"] = expected_standardized_log_prob(model)
    except UniformModelError:
        pass
    text = _csv(["model", "n", "mu", "normalized_score", "expected_position"],
                [row])
    _emit(text, args.out)
    return 0


def cmd_figure1(args) -> int:
    keys = {
        "n_visible": (int, 9),
        "n_hidden": (int, 5),
        "magnitude_min": (float, 0.001),
        "magnitude_max": (float, 3.0),
        "n_breaks": (int, 20),
        "samples_per_point": (int, 100),
        "seed": (int, 0),
        "metrics": (str, ",".join(GridExperimentConfig.metrics)),
        "budget": (int, DEFAULT_ENUMERATION_BUDGET),
    }
    values = merge_config(args, keys)
    metrics = tuple(m for m in values["metrics"].split(",") if m)
    config = GridExperimentConfig(
        n_visible=values["n_visible"], n_hidden=values["n_hidden"],
        magnitude_min=values["magnitude_min"],
        magnitude_max=values["magnitude_max"],
        n_breaks=values["n_breaks"],
        samples_per_point=values["samples_per_point"],
        seed=values["seed"], metrics=metrics,
    )
    cells = run_figure1(config, budget=values["budget"])
    _emit(figure1_csv(cells, config), args.out)
    return 0


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foeslab",
        description="Exact instability and degeneracy diagnostics for "
                    "finite discrete probability models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, model_flags=True, extra=()):
        p = sub.add_parser(name, help=help_text)
        if model_flags:
            add_model_flags(p)
        else:
            p.add_argument("--config", help="flat key = value config file")
            p.add_argument("--out", help="output path (default stdout)")
        for flag, kwargs in extra:
            p.add_argument(flag, **kwargs)
        p.set_defaults(func=func)
        return p

    add("lrep", cmd_lrep, "extremal log-ratio report for one model")
    add("delta", cmd_delta, "largest one-flip log-ratio for one model")
    add("modeset", cmd_modeset, "modal set size and mass", extra=[
        ("--epsilon", dict(type=float))])
    add("path", cmd_path, "scaled-LREP trend along a parameter path",
        model_flags=False, extra=[
            ("--family", dict(choices=sorted(PATH_FAMILIES))),
            ("--entries", dict(help="'N:params;N:params;...' "
                                    "(node count for the graph family)")),
            ("--epsilon", dict(type=float, help="also report modal masses")),
            ("--flatness", dict(type=float)),
            ("--level", dict(type=float)),
            ("--budget", dict(type=int)),
        ])
    add("bounds", cmd_bounds, "RBM extremal-bound report", extra=[
        ("--random-draws", dict(type=int, dest="random_draws")),
        ("--half-width", dict(type=float, dest="half_width")),
        ("--seed", dict(type=int))])
    add("psr", cmd_psr, "parameter sign-reversal check")
    add("lowerbound", cmd_lowerbound, "closed-form graph-model bound",
        model_flags=False, extra=[
            ("--nodes", dict(type=int)),
            ("--theta1", dict(type=float)),
            ("--theta2", dict(type=float)),
            ("--theta3", dict(type=float)),
            ("--budget", dict(type=int)),
        ])
    add("gibbs", cmd_gibbs, "Gibbs chain trace with mixing diagnostics", extra=[
        ("--sweeps", dict(type=int)),
        ("--burn-in", dict(type=int, dest="burn_in")),
        ("--seed", dict(type=int)),
        ("--epsilon", dict(type=float)),
        ("--init", dict(help="comma-separated outcome or 'random'"))])
    add("mh", cmd_mh, "random-walk MH over model parameters", extra=[
        ("--data", dict(help="comma-separated data outcome")),
        ("--steps", dict(type=int)),
        ("--step-size", dict(type=float, dest="step_size")),
        ("--seed", dict(type=int)),
        ("--theta0", dict(type=_float_list)),
        ("--prior", dict(help="'flat' or 'normal:SCALE'"))])
    add("score", cmd_score, "expected statistic and normalized score")
    add("figure1", cmd_figure1, "sphere-sampled magnitude grid experiment",
        model_flags=False, extra=[
            ("--n-visible", dict(type=int, dest="n_visible")),
            ("--n-hidden", dict(type=int, dest="n_hidden")),
            ("--magnitude-min", dict(type=float, dest="magnitude_min")),
            ("--magnitude-max", dict(type=float, dest="magnitude_max")),
            ("--n-breaks", dict(type=int, dest="n_breaks")),
            ("--samples-per-point", dict(type=int, dest="samples_per_point")),
            ("--seed", dict(type=int)),
            ("--metrics", dict(help="comma subset of scaled_lrep,delta_n")),
            ("--budget", dict(type=int)),
        ])
    return parser


def cli_dispatch(argv=None) -> int:
    """Run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"foeslab: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError) as exc:
        print(f"foeslab: error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return cli_dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
