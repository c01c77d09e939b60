"""Seeded synthetic benchmark: synthesize, combine with every method, evaluate.

One row per method plus a ``BM`` row, the unweighted mean of each base
model evaluated on its own binary predictions. Results are reduced in
(seed, method) order, so the JSON output is byte-for-byte reproducible
regardless of how many worker threads ran.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import ConsensusConfig
from .exceptions import MLCMError, ValidationError
from .metrics import METRIC_NAMES, evaluate
from .mlcma import mlcm_a
from .mlcmr import bgcm_binary_relevance, mlcm_r
from .synth import SynthSpec, generate_truth, simulate_base_models
from .voting import average_predictions

logger = logging.getLogger(__name__)

METHODS = {
    "mv": lambda P, config: average_predictions(P),
    "bgcm-br": bgcm_binary_relevance,
    "mlcm-r": mlcm_r,
    "mlcm-a": mlcm_a,
}

DISPLAY_NAMES = {
    "bm": "BM",
    "mv": "MV",
    "bgcm-br": "BGCM-BR",
    "mlcm-r": "MLCM-r",
    "mlcm-a": "MLCM-a",
}

METRIC_HEADERS = {
    "micro_auc": "microAUC",
    "one_error": "one error",
    "ranking_loss": "ranking loss",
    "avg_precision": "avg precision",
}


def combine(method, pred_set, config=None):
    """Dispatch to a combination method by its identifier."""
    try:
        fn = METHODS[method]
    except KeyError:
        raise ValidationError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    return fn(pred_set, ConsensusConfig() if config is None else config)


def base_model_report(pred_set, truth, tie_policy="strict", std_ap=False):
    """Mean of every metric over the base models' own predictions."""
    reports = [evaluate(Yk, truth, tie_policy, std_ap) for Yk in pred_set]
    return {name: float(np.mean([getattr(r, name) for r in reports])) for name in METRIC_NAMES}


def max_threads():
    raw = os.environ.get("MLCM_THREADS")
    if not raw:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"MLCM_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def _run_seed(spec, seed, methods, config, std_ap):
    rows = {}
    try:
        s = spec.with_seed(seed)
        truth = generate_truth(s)
        preds = simulate_base_models(truth, spec=s)
        rows["bm"] = {"metrics": base_model_report(preds, truth, config.tie_policy, std_ap)}
    except MLCMError as exc:
        logger.warning("seed %s: synthesis failed: %s", seed, exc)
        return {name: {"error": exc.to_dict()} for name in ["bm", *methods]}
    for method in methods:
        try:
            scores = combine(method, preds, config)
            rep = evaluate(scores, truth, config.tie_policy, std_ap)
            rows[method] = {"metrics": rep.metrics(), "skipped_instances": rep.skipped_instances}
        except MLCMError as exc:
            logger.warning("seed %s, %s failed: %s", seed, method, exc)
            rows[method] = {"error": exc.to_dict()}
    return rows


def run_bench(spec=None, seeds=range(1, 11), methods=tuple(METHODS), config=None,
              std_ap=False, threads=None):
    """Run the benchmark over ``seeds`` and summarize per method.

    Parameters
    ----------
    spec : SynthSpec, optional
        Data-generation parameters; its own ``seed`` is replaced per run.
    seeds : iterable of int
    methods : sequence of str
        Method identifiers from :data:`METHODS`.
    config : ConsensusConfig, optional
    std_ap : bool, default=False
        Use the conventional average-precision definition.
    threads : int, optional
        Worker threads; defaults to ``MLCM_THREADS`` or the CPU count.

    Returns
    -------
    result : dict
        JSON-serializable; ``runs`` holds per-seed rows (failed jobs carry an
        ``error`` object instead of metrics) and ``summary`` the mean and
        population standard deviation of each metric per method.
    """
    spec = SynthSpec() if spec is None else spec
    config = ConsensusConfig() if config is None else config
    seeds = [int(s) for s in seeds]
    methods = list(methods)
    if not seeds:
        raise ValidationError("need at least one seed")
    for method in methods:
        if method not in METHODS:
            raise ValidationError(f"unknown method {method!r}; choose from {sorted(METHODS)}")

    threads = max_threads() if threads is None else max(1, int(threads))
    with ThreadPoolExecutor(max_workers=min(threads, len(seeds))) as pool:
        futures = [pool.submit(_run_seed, spec, s, methods, config, std_ap) for s in seeds]
        per_seed = [f.result() for f in futures]

    rows = ["bm", *methods]
    runs = []
    summary = {}
    for name in rows:
        values = {metric: [] for metric in METRIC_NAMES}
        for seed, res in zip(seeds, per_seed):
            entry = {"seed": seed, "method": name, **res[name]}
            runs.append(entry)
            if "metrics" in entry:
                for metric in METRIC_NAMES:
                    values[metric].append(entry["metrics"][metric])
        summary[name] = {
            metric: (
                {"mean": float(np.mean(v)), "std": float(np.std(v)), "n": len(v)}
                if v else {"mean": None, "std": None, "n": 0}
            )
            for metric, v in values.items()
        }
    spec_dict = spec.to_dict()
    spec_dict.pop("seed")
    return {
        "spec": spec_dict,
        "seeds": seeds,
        "methods": rows,
        "config": config.to_dict(),
        "std_ap": std_ap,
        "runs": runs,
        "summary": summary,
        "failures": sum("error" in r for r in runs),
    }


def render_markdown(result):
    """Table of ``mean ± std`` per method, four decimals."""
    header = "| Method | " + " | ".join(METRIC_HEADERS[m] for m in METRIC_NAMES) + " |"
    lines = [header, "|" + "---|" * (len(METRIC_NAMES) + 1)]
    for name in result["methods"]:
        cells = []
        for metric in METRIC_NAMES:
            s = result["summary"][name][metric]
            cells.append("failed" if s["n"] == 0 else f"{s['mean']:.4f} ± {s['std']:.4f}")
        lines.append(f"| {DISPLAY_NAMES.get(name, name)} | " + " | ".join(cells) + " |")
    return "\n".join(lines)
