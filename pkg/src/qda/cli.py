"""Config-driven batch runner: ``qda run|benchmark|rp|sample``.

The config file is JSON (schema_version 1):

.. code-block:: json

    {
      "schema_version": 1,
      "target": {"name": "beta_mixture"},
      "proposal": {"blocks": [
          {"kind": "uniform_box", "lower": [0.0], "upper": [1.0]}]},
      "points": {"generator": "midpoint1d", "m": 10, "skip": 1},
      "outputs": {"mean": true, "covariance": false,
                  "quantiles": [{"coord": 1, "alpha": 0.2}],
                  "kd_oracle": "beta_mixture",
                  "rp_n": 10, "draws": {"n": 100, "seed": 7}}
    }

Target names: beta_mixture, normal2d, banana, linreg, blasso, gp, plugin,
subprocess.  linreg/blasso take {"d", "n", "seed"}; gp takes {"n", "d", "m",
"seed"}; plugin takes {"path"}; subprocess takes {"command", "dim",
"support"}.  Proposal blocks: uniform_box {lower, upper}, mvnormal {mean,
cov}, mvcauchy {loc, scale}, gamma {shape, scale}; or {"preset": "model"}
to use the model-supplied proposal (linreg, blasso).  Multi-stage runs
replace "points" with {"stages": [[m, generator], ...], "family":
"mvcauchy", "skip": 1}.

Every run validates the whole config first (all violations reported at
once), computes everything in memory, and only then writes artifacts, so a
failing run leaves no partial files.  Output CSVs are byte-stable across
reruns; wall-clock times live only in run_log.json.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import __version__, adaptive, baselines, dacore, metrics, models, proposal, qmc, sampling
from .exceptions import StageError

_SCHEMA_VERSION = 1
_GENERATORS = ("sobol", "halton", "midpoint1d")
_TARGETS = ("beta_mixture", "normal2d", "banana", "linreg", "blasso", "gp", "plugin", "subprocess")
_ORACLES = ("beta_mixture", "normal2d")


class ConfigError(ValueError):
    def __init__(self, problems):
        super().__init__("invalid config:\n" + "\n".join(f"  - {p}" for p in problems))
        self.problems = problems


# ---------------------------------------------------------------------------
# config loading / validation
# ---------------------------------------------------------------------------


def _check(problems, ok, message):
    if not ok:
        problems.append(message)
    return ok


def load_config(path: str) -> dict:
    with open(path) as f:
        cfg = json.load(f)
    problems = []
    _check(problems, isinstance(cfg, dict), "top level must be an object")
    if not isinstance(cfg, dict):
        raise ConfigError(problems)
    _check(
        problems,
        cfg.get("schema_version") == _SCHEMA_VERSION,
        f"schema_version must be {_SCHEMA_VERSION}",
    )

    tgt = cfg.get("target")
    if _check(problems, isinstance(tgt, dict), "target must be an object"):
        name = tgt.get("name")
        _check(problems, name in _TARGETS, f"target.name must be one of {_TARGETS}")
        if name == "plugin":
            _check(problems, isinstance(tgt.get("path"), str), "plugin target needs a path")
        if name == "subprocess":
            _check(
                problems,
                isinstance(tgt.get("command"), list) and tgt["command"],
                "subprocess target needs a command list",
            )
            _check(
                problems,
                isinstance(tgt.get("dim"), int) and tgt["dim"] >= 1,
                "subprocess target needs a positive integer dim",
            )

    prop_cfg = cfg.get("proposal")
    if _check(problems, isinstance(prop_cfg, dict), "proposal must be an object"):
        if "preset" in prop_cfg:
            _check(
                problems,
                prop_cfg["preset"] == "model"
                and isinstance(tgt, dict)
                and tgt.get("name") in ("linreg", "blasso"),
                "proposal.preset='model' is only available for linreg and blasso targets",
            )
        else:
            blocks = prop_cfg.get("blocks")
            if _check(problems, isinstance(blocks, list) and blocks, "proposal.blocks must be a nonempty list"):
                for i, b in enumerate(blocks):
                    kind = b.get("kind") if isinstance(b, dict) else None
                    _check(
                        problems,
                        kind in ("uniform_box", "mvnormal", "mvcauchy", "gamma"),
                        f"proposal.blocks[{i}].kind unknown: {kind!r}",
                    )

    pts = cfg.get("points")
    stages = cfg.get("stages")
    _check(
        problems,
        (pts is None) != (stages is None),
        "exactly one of 'points' and 'stages' is required",
    )
    if pts is not None and _check(problems, isinstance(pts, dict), "points must be an object"):
        _check(problems, pts.get("generator") in _GENERATORS, f"points.generator must be one of {_GENERATORS}")
        _check(problems, isinstance(pts.get("m"), int) and pts["m"] >= 1, "points.m must be a positive integer")
        _check(problems, isinstance(pts.get("skip", 1), int) and pts.get("skip", 1) >= 0, "points.skip must be >= 0")
    if stages is not None and _check(problems, isinstance(stages, dict), "stages must be an object"):
        sched = stages.get("schedule")
        if _check(problems, isinstance(sched, list) and sched, "stages.schedule must be a nonempty list"):
            for i, entry in enumerate(sched):
                ok = (
                    isinstance(entry, list)
                    and len(entry) == 2
                    and isinstance(entry[0], int)
                    and entry[0] >= 1
                    and entry[1] in _GENERATORS
                )
                _check(problems, ok, f"stages.schedule[{i}] must be [m, generator]")
        _check(
            problems,
            stages.get("family", "mvcauchy") in ("mvcauchy", "mvnormal"),
            "stages.family must be 'mvcauchy' or 'mvnormal'",
        )

    out = cfg.get("outputs", {})
    if _check(problems, isinstance(out, dict), "outputs must be an object"):
        for q in out.get("quantiles", []):
            ok = (
                isinstance(q, dict)
                and isinstance(q.get("coord"), int)
                and q["coord"] >= 1
                and isinstance(q.get("alpha"), (int, float))
                and 0.0 < q["alpha"] < 1.0
            )
            _check(problems, ok, f"outputs.quantiles entries need coord >= 1 and alpha in (0,1): {q!r}")
        if "kd_oracle" in out:
            _check(
                problems,
                out["kd_oracle"] in _ORACLES,
                f"outputs.kd_oracle must be one of {_ORACLES} (closed-form reference CDF required)",
            )
            if isinstance(tgt, dict) and out.get("kd_oracle") not in (None, tgt.get("name")):
                problems.append("outputs.kd_oracle must match the target name")
        if "rp_n" in out:
            _check(problems, isinstance(out["rp_n"], int) and out["rp_n"] >= 1, "outputs.rp_n must be >= 1")
        if "draws" in out:
            dr = out["draws"]
            ok = isinstance(dr, dict) and isinstance(dr.get("n"), int) and dr["n"] >= 1
            _check(problems, ok, "outputs.draws needs a positive integer n")

    if problems:
        raise ConfigError(problems)
    return cfg


def _build_target(cfg: dict):
    tgt = cfg["target"]
    name = tgt["name"]
    data = None
    if name == "beta_mixture":
        return models.beta_mixture_target(), None
    if name == "normal2d":
        return models.normal2d_target(), None
    if name == "banana":
        return models.banana_target(), None
    if name in ("linreg", "blasso"):
        data = models.make_linreg_data(
            d=tgt.get("d", 5), n=tgt.get("n"), seed=tgt.get("seed", 0)
        )
        target = models.linreg_target(data) if name == "linreg" else models.blasso_target(data)
        return target, data
    if name == "gp":
        x, y = models.gp_synthetic_data(
            n=tgt.get("n", 40), d=tgt.get("d", 2), seed=tgt.get("seed", 0)
        )
        config = models.GPConfig(x=x, y=y, m=tgt.get("m", 20), feature_seed=tgt.get("seed", 0))
        return models.gp_target(config), config
    if name == "plugin":
        return models.plugin_target(tgt["path"]), None
    if name == "subprocess":
        return (
            models.subprocess_target(
                tgt["command"], tgt["dim"], support=tgt.get("support")
            ),
            None,
        )
    raise ValueError(f"unknown target {name!r}")


def _build_proposal(cfg: dict, data) -> proposal.Proposal:
    pc = cfg["proposal"]
    if pc.get("preset") == "model":
        name = cfg["target"]["name"]
        return models.linreg_proposal(data) if name == "linreg" else models.blasso_proposal(data)
    blocks = []
    for b in pc["blocks"]:
        kind = b["kind"]
        if kind == "uniform_box":
            blocks.append(proposal.uniform_box(b["lower"], b["upper"]))
        elif kind == "mvnormal":
            blocks.append(proposal.mvnormal(b["mean"], b["cov"]))
        elif kind == "mvcauchy":
            blocks.append(proposal.mvcauchy(b["loc"], b["scale"]))
        elif kind == "gamma":
            blocks.append(proposal.gamma_block(b["shape"], b["scale"]))
    return proposal.Proposal(blocks)


def _oracle_for(name: str) -> metrics.CdfOracle:
    return models.beta_mixture_oracle() if name == "beta_mixture" else models.normal2d_oracle()


def _config_hash(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:16]


def _csv_header(cfg_hash: str, seed) -> list:
    return [
        f"engine=qda {__version__}",
        f"config_sha256={cfg_hash}",
        f"seed={seed}",
    ]


def _write_csv(path, header_lines, columns, rows):
    with open(path, "w") as f:
        for line in header_lines:
            f.write(f"# {line}\n")
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


# ---------------------------------------------------------------------------
# run / rp / sample
# ---------------------------------------------------------------------------


def _execute_pipeline(cfg: dict, workers: int):
    target, data = _build_target(cfg)
    prop = _build_proposal(cfg, data)
    if target.dim != prop.dim:
        raise ConfigError(
            [f"dimension mismatch: target {target.dim}, proposal {prop.dim}"]
        )
    t0 = time.perf_counter()
    if "stages" in cfg and cfg["stages"] is not None:
        st = cfg["stages"]
        schedule = [(m, g) for m, g in st["schedule"]]
        dp, reports = adaptive.run_stages(
            target,
            prop,
            schedule,
            n_stages=len(schedule),
            family=st.get("family", "mvcauchy"),
            base_skip=st.get("skip", 1),
            workers=workers,
        )
    else:
        pc = cfg["points"]
        gen, m = pc["generator"], pc["m"]
        if gen == "sobol":
            pts = qmc.sobol_points(m, target.dim, skip=pc.get("skip", 1))
        elif gen == "halton":
            pts = qmc.halton_points(m, target.dim)
        else:
            if target.dim != 1:
                raise ConfigError(["midpoint1d requires a one-dimensional target"])
            pts = qmc.midpoint_grid_1d(m)
        dp = dacore.discretize(target, prop, pts, workers=workers)
        reports = []
    elapsed = time.perf_counter() - t0
    return target, dp, reports, elapsed


def _collect_outputs(cfg: dict, dp, seed):
    out = cfg.get("outputs", {})
    rows = []
    rows.append(("acceptance_rate", "", float(dp.acceptance_rate)))
    rows.append(("shift", "", float(dp.shift)))
    rows.append(("m", "", dp.m))
    if out.get("mean", True):
        for j, v in enumerate(dp.mean(), start=1):
            rows.append(("mean", str(j), float(v)))
    if out.get("covariance", False):
        cov = dp.covariance()
        for i in range(dp.dim):
            for j in range(dp.dim):
                rows.append(("covariance", f"{i + 1}_{j + 1}", float(cov[i, j])))
    for q in out.get("quantiles", []):
        v = dp.marginal_quantile(q["coord"] - 1, q["alpha"])
        rows.append(("quantile", f"{q['coord']}@{q['alpha']:g}", float(v)))
    if "kd_oracle" in out:
        kd = metrics.kolmogorov_discrete(dp, _oracle_for(out["kd_oracle"]))
        rows.append(("kd", out["kd_oracle"], float(kd)))
    rp = None
    if "rp_n" in out:
        rp = sampling.representation_points(dp, out["rp_n"])
        rows.append(("rp_n", "", out["rp_n"]))
    draws = None
    if "draws" in out:
        n = out["draws"]["n"]
        dseed = out["draws"].get("seed", seed if seed is not None else 0)
        draws = sampling.draw(dp, n, dseed)
        rows.append(("draws_n", "", n))
        rows.append(("draws_seed", "", dseed))
    return rows, rp, draws


def cmd_run(args, only: str = None, cfg: dict = None) -> int:
    if cfg is None:
        cfg = load_config(args.config)
    workers = _workers(args)
    try:
        target, dp, reports, elapsed = _execute_pipeline(cfg, workers)
        rows, rp, draws = _collect_outputs(cfg, dp, args.seed)
    except StageError as exc:
        _fail(f"adaptive stage failed: {exc}")
        return 1
    cfg_hash = _config_hash(cfg)
    header = _csv_header(cfg_hash, args.seed)
    os.makedirs(args.out_dir, exist_ok=True)

    wrote = []
    if only in (None, "rp") and rp is not None:
        path = os.path.join(args.out_dir, "rp.csv")
        _write_rp_csv(path, header, rp, dp.dim)
        wrote.append(path)
    if only in (None, "sample") and draws is not None:
        path = os.path.join(args.out_dir, "draws.csv")
        _write_csv(path, header, [f"y_{j + 1}" for j in range(dp.dim)], draws.tolist())
        wrote.append(path)
    if only is None:
        results = os.path.join(args.out_dir, "results.csv")
        _write_csv(results, header, ["quantity", "index", "value"], rows)
        posterior = os.path.join(args.out_dir, "posterior.csv")
        dp.to_csv(posterior, extra_header=header)
        wrote.extend([results, posterior])
        log = {
            "engine": f"qda {__version__}",
            "schema_version": _SCHEMA_VERSION,
            "config_sha256": cfg_hash,
            "seed": args.seed,
            "workers": workers,
            "target": target.name,
            "acceptance_rate": dp.acceptance_rate,
            "low_acceptance_warning": dp.acceptance_rate < adaptive.LOW_ACCEPTANCE,
            "elapsed_seconds": elapsed,
            "stage_reports": [r.to_dict() for r in reports],
        }
        log_path = os.path.join(args.out_dir, "run_log.json")
        with open(log_path, "w") as f:
            json.dump(log, f, indent=2)
        wrote.append(log_path)
    for path in wrote:
        print(f"wrote {path}")
    return 0


def _write_rp_csv(path, header_lines, rp, dim):
    with open(path, "w") as f:
        for line in header_lines:
            f.write(f"# {line}\n")
        f.write(",".join([f"y_{j + 1}" for j in range(dim)] + ["multiplicity"]) + "\n")
    with open(path, "ab") as f:
        idx = sorted(rp.multiplicities)
        first = {}
        for row, i in enumerate(rp.atom_indices):
            first.setdefault(int(i), row)
        body = np.column_stack(
            [
                np.array([rp.points[first[i]] for i in idx]),
                np.array([float(rp.multiplicities[i]) for i in idx]),
            ]
        )
        np.savetxt(f, body, delimiter=",", fmt="%.17g")


def cmd_rp(args) -> int:
    cfg = load_config(args.config)
    if args.n is not None:
        cfg.setdefault("outputs", {})["rp_n"] = args.n
    if "rp_n" not in cfg.get("outputs", {}):
        _fail("rp needs outputs.rp_n in the config or --n")
        return 2
    return cmd_run(args, only="rp", cfg=cfg)


def cmd_sample(args) -> int:
    cfg = load_config(args.config)
    out = cfg.setdefault("outputs", {})
    if args.n is not None:
        out["draws"] = {"n": args.n, "seed": args.seed if args.seed is not None else 0}
    if "draws" not in out:
        _fail("sample needs outputs.draws in the config or --n")
        return 2
    return cmd_run(args, only="sample", cfg=cfg)


# ---------------------------------------------------------------------------
# benchmarks
# ---------------------------------------------------------------------------


def _rep_seed(master: int, rep: int) -> int:
    return (master * 1_000_003 + rep) & 0x7FFFFFFF


def bench_t1(seed: int, repetitions: int, workers: int):
    """Beta-mixture comparison: MCMC / exact MC / DA / DA-RP at M = 10, 30."""
    target = models.beta_mixture_target()
    unif = proposal.Proposal([proposal.uniform_box([0.0], [1.0])])
    oracle = models.beta_mixture_oracle()
    truth = models.beta_mixture_mean()
    rows = []
    da_values = {}
    for m in (10, 30):
        mcmc_se, mcmc_kd, mc_se, mc_kd = [], [], [], []
        for rep in range(repetitions):
            s = _rep_seed(seed, rep)
            chain, _ = baselines.mh_chain(
                target,
                baselines.MHConfig(
                    kind="independence", chain_length=2 * m, burn_in=m, seed=s, proposal=unif
                ),
            )
            mcmc_se.append((chain.mean() - truth) ** 2)
            mcmc_kd.append(metrics.kolmogorov_discrete(chain, oracle))
            draws = baselines.exact_mc("beta_mixture", m, s)
            mc_se.append((draws.mean() - truth) ** 2)
            mc_kd.append(metrics.kolmogorov_discrete(draws, oracle))
        dp = dacore.discretize(target, unif, qmc.midpoint_grid_1d(m), workers=workers)
        da_se = (dp.mean()[0] - truth) ** 2
        da_kd = metrics.kolmogorov_discrete(dp, oracle)
        rp = sampling.representation_points(dp, 10)
        rp_se = (rp.points.mean() - truth) ** 2
        rp_kd = metrics.kolmogorov_discrete(rp, oracle)
        da_values[m] = (da_se, da_kd)
        rows += [
            ("mcmc", m, float(np.mean(mcmc_se)), float(np.std(mcmc_se, ddof=1)),
             float(np.mean(mcmc_kd)), float(np.std(mcmc_kd, ddof=1))),
            ("exact_mc", m, float(np.mean(mc_se)), float(np.std(mc_se, ddof=1)),
             float(np.mean(mc_kd)), float(np.std(mc_kd, ddof=1))),
            ("da", m, float(da_se), 0.0, float(da_kd), 0.0),
            ("da_rp_n10", m, float(rp_se), 0.0, float(rp_kd), 0.0),
        ]
    reference = {10: (2.1613e-5, 0.0872), 30: (3.2417e-7, 0.0275)}
    ok = all(
        abs(da_values[m][i] - reference[m][i]) <= 0.01 * reference[m][i]
        for m in (10, 30)
        for i in (0, 1)
    )
    cols = ["method", "m", "mean_se", "se_std", "mean_kd", "kd_std"]
    verdict = "PASS" if ok else "FAIL"
    line = f"t1 {verdict}: deterministic rows within 1% of reference"
    return cols, rows, [line], ok


def bench_t2(seed: int, repetitions: int, workers: int):
    """Correlated 2D normal: one-stage vs two-stage vs MC baselines."""
    target = models.normal2d_target()
    cauchy0 = proposal.Proposal([proposal.mvcauchy(np.zeros(2), np.eye(2))])
    truth_mean = models.NORMAL2D_MEAN
    truth_cov = models.NORMAL2D_COV
    q1 = truth_mean[0] + np.sqrt(truth_cov[0, 0]) * proposal.inv_norm_cdf(0.2)
    q2 = truth_mean[1] + np.sqrt(truth_cov[1, 1]) * proposal.inv_norm_cdf(0.1)

    def summarize(mean, cov, qa, qb):
        return (
            float(np.sum((mean - truth_mean) ** 2)),
            float(np.sum((cov - truth_cov) ** 2)),
            float((qa - q1) ** 2),
            float((qb - q2) ** 2),
        )

    rows = []
    mcmc_stats = []
    for rep in range(repetitions):
        s = _rep_seed(seed, rep)
        chain, _ = baselines.mh_chain(
            target,
            baselines.MHConfig(
                kind="independence", chain_length=2200, burn_in=200, seed=s, proposal=cauchy0
            ),
        )
        mean = chain.mean(axis=0)
        cov = np.cov(chain.T, ddof=1)
        qa = np.quantile(chain[:, 0], 0.2)
        qb = np.quantile(chain[:, 1], 0.1)
        mcmc_stats.append(summarize(mean, cov, qa, qb))
        draws = baselines.exact_mc("normal2d", 2000, s)
        mcmc_stats[-1] = mcmc_stats[-1] + summarize(
            draws.mean(axis=0), np.cov(draws.T, ddof=1),
            np.quantile(draws[:, 0], 0.2), np.quantile(draws[:, 1], 0.1),
        )
    mcmc_stats = np.asarray(mcmc_stats)
    for label, block in (("mcmc_2000", mcmc_stats[:, :4]), ("exact_mc_2000", mcmc_stats[:, 4:])):
        rows.append(
            (label, "", *(float(v) for v in block.mean(axis=0)),
             *(float(v) for v in np.median(block, axis=0)))
        )

    def da_row(label, dp):
        vals = summarize(
            dp.mean(), dp.covariance(), dp.marginal_quantile(0, 0.2), dp.marginal_quantile(1, 0.1)
        )
        rows.append((label, dp.m, *vals, *vals))
        return vals

    one_1000 = da_row("da_1000", dacore.discretize(target, cauchy0, qmc.sobol_points(1000, 2, 1), workers=workers))
    one_2000 = da_row("da_2000", dacore.discretize(target, cauchy0, qmc.sobol_points(2000, 2, 1), workers=workers))
    dp2, _ = adaptive.run_stages(
        target, cauchy0, [(1000, "sobol"), (1000, "sobol")], 2, workers=workers
    )
    two = da_row("da_two_stage_1000x2", dp2)

    med_mcmc_se = float(np.median(mcmc_stats[:, 0]))
    ok = two[0] < one_2000[0] < med_mcmc_se and two[0] < 1e-4
    lines = [
        f"t2 {'PASS' if ok else 'FAIL'}: mean-SE ordering two-stage ({two[0]:.3e}) "
        f"< one-stage M=2000 ({one_2000[0]:.3e}) < median MCMC ({med_mcmc_se:.3e}) "
        f"and two-stage < 1e-4"
    ]
    cols = [
        "method", "m", "mean_se", "cov_se", "q20_x1_se", "q10_x2_se",
        "median_mean_se", "median_cov_se", "median_q20_x1_se", "median_q10_x2_se",
    ]
    return cols, rows, lines, ok


def bench_t3_small(seed: int, repetitions: int, workers: int):
    """Scaled regression study (d=20, n=120): DA vs MCMC against the exact posterior."""
    d, n, m = 20, 120, 1000
    da_se, mcmc_se = [], []
    for rep in range(repetitions):
        s = _rep_seed(seed, rep)
        data = models.make_linreg_data(d=d, n=n, seed=s)
        target = models.linreg_target(data)
        prop = models.linreg_proposal(data)
        truth = models.linreg_exact_moments(data)["gamma_mean"][1]  # posterior mean of beta_1
        dp = dacore.discretize(target, prop, qmc.sobol_points(m, target.dim, 1), workers=workers)
        da_se.append((dp.mean()[1] - truth) ** 2)
        chain, _ = baselines.mh_chain(
            target,
            baselines.MHConfig(
                kind="independence", chain_length=m + m // 10, burn_in=m // 10,
                seed=s, proposal=prop,
            ),
        )
        mcmc_se.append((chain[:, 1].mean() - truth) ** 2)
    rows = [
        ("da", m, float(np.mean(da_se)), float(np.std(da_se, ddof=1))),
        ("mcmc", m, float(np.mean(mcmc_se)), float(np.std(mcmc_se, ddof=1))),
    ]
    ok = np.mean(da_se) < np.mean(mcmc_se)
    lines = [
        f"t3-small {'PASS' if ok else 'FAIL'}: DA mean MSE for beta_1 "
        f"({np.mean(da_se):.3e}) below MCMC ({np.mean(mcmc_se):.3e})"
    ]
    return ["method", "m", "beta1_mean_mse", "beta1_mse_std"], rows, lines, ok


def bench_t4_small(seed: int, repetitions: int, workers: int):
    """Shrinkage-prior interval study: 90% coverage for beta_1 at n=50, d=5."""
    d, n, m = 5, 50, 10000
    pts_cache = None
    covered = {1: 0, 4: 0}
    lengths = {1: [], 4: []}
    for rep in range(repetitions):
        s = _rep_seed(seed, rep)
        data = models.make_linreg_data(d=d, n=n, seed=s)
        target = models.blasso_target(data)
        prop = models.blasso_proposal(data)
        if pts_cache is None:
            pts_cache = qmc.sobol_points(m, target.dim, 1)
        dp = dacore.discretize(target, prop, pts_cache, workers=workers)
        for coord in (1, 4):
            true_val = data.beta_true[coord - 1]
            lo = dp.marginal_quantile(coord, 0.05)
            hi = dp.marginal_quantile(coord, 0.95)
            lengths[coord].append(hi - lo)
            covered[coord] += lo <= true_val <= hi
    cr1, cr4 = covered[1] / repetitions, covered[4] / repetitions
    len1, len4 = lengths[1], lengths[4]
    rows = [
        ("beta_1", cr1, float(np.mean(len1)), float(np.std(len1, ddof=1))),
        ("beta_4", cr4, float(np.mean(len4)), float(np.std(len4, ddof=1))),
    ]
    ok = abs(cr1 - 0.8524) <= 0.05
    lines = [
        f"t4-small {'PASS' if ok else 'FAIL'}: beta_1 coverage {cr1:.4f} within 0.8524 +/- 0.05"
    ]
    return ["parameter", "coverage", "avg_length", "length_std"], rows, lines, ok


_BENCHMARKS = {
    "t1": (bench_t1, 100),
    "t2": (bench_t2, 20),
    "t3-small": (bench_t3_small, 20),
    "t4-small": (bench_t4_small, 500),
}


def cmd_benchmark(args) -> int:
    fn, default_reps = _BENCHMARKS[args.table]
    reps = args.repetitions if args.repetitions else default_reps
    seed = args.seed if args.seed is not None else 20240901
    cols, rows, lines, ok = fn(seed, reps, _workers(args))
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, f"benchmark_{args.table}.csv")
    header = _csv_header(f"benchmark:{args.table}:reps={reps}", seed)
    _write_csv(path, header, cols, rows)
    print(f"wrote {path}")
    for line in lines:
        print(line)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _workers(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("QDA_THREADS")
    return max(1, int(env)) if env else 1


def _fail(message: str):
    print(f"error: {message}", file=sys.stderr)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qda", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--out-dir", default=".", help="directory for output artifacts")
        p.add_argument("--seed", type=int, default=None, help="master seed for stochastic parts")
        p.add_argument(
            "--threads", type=int, default=None,
            help="worker threads for density evaluation (QDA_THREADS as fallback)",
        )

    p_run = sub.add_parser("run", help="run the full pipeline from a config")
    common(p_run)

    p_bench = sub.add_parser("benchmark", help="rerun a bundled comparison at desk scale")
    p_bench.add_argument("table", choices=sorted(_BENCHMARKS))
    common(p_bench, config=False)
    p_bench.add_argument("--repetitions", type=int, default=None, help="override repetition count")

    p_rp = sub.add_parser("rp", help="write representation points only")
    common(p_rp)
    p_rp.add_argument("--n", type=int, default=None, help="number of representation points")

    p_sample = sub.add_parser("sample", help="write random draws only")
    common(p_sample)
    p_sample.add_argument("--n", type=int, default=None, help="number of draws")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "benchmark":
            return cmd_benchmark(args)
        if args.command == "rp":
            return cmd_rp(args)
        if args.command == "sample":
            return cmd_sample(args)
    except ConfigError as exc:
        _fail(str(exc))
        return 2
    except FileNotFoundError as exc:
        _fail(str(exc))
        return 2
    except Exception as exc:  # module errors surface as a one-line diagnostic
        _fail(f"{type(exc).__name__}: {exc}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
