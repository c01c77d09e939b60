"""Acceptance gate.

Every test prints one ``PASS``/``FAIL`` line naming its criterion, shown even
without ``-s``. Lines marked ``INFO`` report extra measurements and never
fail.
"""

import json
import time

import numpy as np
import pytest

from mlcm import (
    ConsensusConfig,
    average_predictions,
    bgcm_binary_relevance,
    build_graph,
    instance_scores,
    mlcm_r,
    row_normalized_voting,
    solve_group_distributions,
    solve_group_distributions_iterative,
    transition_matrix,
)
from mlcm.bench import run_bench
from mlcm.cli import main
from mlcm.metrics import brute_force_micro_auc, brute_force_ranking_loss, micro_auc, ranking_loss
from mlcm.mlcma import consensus_objective, consensus_objective_gradient, mlcm_a_path

from conftest import random_prediction_set
from test_mlcmr import decomposition_oracle

SEED = 424242


@pytest.fixture
def report(capsys):
    def emit(criterion, ok, detail, tag=None):
        with capsys.disabled():
            print(f"\n[{tag or ('PASS' if ok else 'FAIL')}] {criterion}: {detail}")
        return ok

    return emit


def random_graphs(count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        m, n, l = rng.integers(1, 6), rng.integers(2, 51), rng.integers(2, 11)
        alpha = float(rng.choice([0.5, 2.0, 8.0]))
        yield build_graph(random_prediction_set(rng, m, n, l, density=rng.uniform(0.1, 0.6)), alpha)


def test_oracle_equivalence(report):
    start = time.perf_counter()
    worst = 0.0
    for g in random_graphs(100, SEED):
        Q = solve_group_distributions(g)
        Q_it = solve_group_distributions_iterative(g, tol=1e-13, max_iters=200_000)
        worst = max(worst, np.abs(Q - Q_it).max())
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 10
    assert report("oracle equivalence (closed form vs series, 100 graphs)", ok,
                  f"max |diff| = {worst:.2e} (<= 1e-8), {elapsed:.2f} s (< 10 s)")


def test_stochasticity(report):
    violations = 0
    for g in random_graphs(100, SEED):
        S = transition_matrix(g.restrict()[0])
        Q = solve_group_distributions(g)
        U = instance_scores(g, Q)
        for M in (S, Q, U):
            violations += int((np.abs(M.sum(axis=1) - 1) > 1e-8).sum())
    assert report("stochasticity of S, Q*, U* rows", violations == 0, f"{violations} violations")


def test_decomposition(report):
    worst = 0.0
    for g in random_graphs(50, SEED + 1):
        Q = solve_group_distributions(g)
        act = g.active_instances
        worst = max(worst, np.abs(instance_scores(g, Q)[act] - decomposition_oracle(g, Q)[act]).max())
    assert report("instance-score decomposition (50 cases)", worst <= 1e-10, f"max |diff| = {worst:.2e}")


def test_limits(report):
    rng = np.random.default_rng(SEED + 2)
    worst_r = worst_b = 0.0
    for _ in range(20):
        X = random_prediction_set(rng, rng.integers(1, 6), rng.integers(2, 40), rng.integers(2, 9))
        c = ConsensusConfig(alpha=1e8)
        worst_r = max(worst_r, np.abs(mlcm_r(X, c) - row_normalized_voting(X)).max())
        worst_b = max(worst_b, np.abs(bgcm_binary_relevance(X, c) - average_predictions(X)).max())
    ok = worst_r <= 1e-5 and worst_b <= 1e-5
    assert report("alpha = 1e8 limits", ok,
                  f"MLCM-r vs row-normalized votes {worst_r:.1e}, BGCM-BR vs mean {worst_b:.1e}")


def test_mlcm_a_stationarity(report):
    rng = np.random.default_rng(SEED + 3)
    worst_grad = worst_fd = 0.0
    beaten = steps = 0
    for _ in range(5):
        m, n, l = rng.integers(1, 8), rng.integers(10, 60), rng.integers(2, 9)
        X = random_prediction_set(rng, m, n, l, density=0.4)
        ybar = average_predictions(X)
        for _, omega, Y, _ in mlcm_a_path(X, ConsensusConfig(iters=5, tol=1e-15)):
            steps += 1
            worst_grad = max(worst_grad, np.abs(consensus_objective_gradient(Y, ybar, omega, m)).max())

            f = lambda Z: consensus_objective(Z, ybar, omega, m)
            P = Y + rng.normal(scale=0.3, size=Y.shape)
            G = consensus_objective_gradient(P, ybar, omega, m)
            h = 1e-5
            for _ in range(20):
                i, j = rng.integers(n), rng.integers(l)
                E = np.zeros_like(P)
                E[i, j] = h
                fd = (f(P + E) - f(P - E)) / (2 * h)
                worst_fd = max(worst_fd, abs(fd - G[i, j]) / max(abs(G[i, j]), 1.0))

            J = f(Y)
            beaten += all(f(Y + rng.uniform(-1e-2, 1e-2, Y.shape)) >= J for _ in range(100))
    ok = worst_grad <= 1e-6 and worst_fd <= 1e-4 and beaten == steps
    assert report("MLCM-a stationarity after every step", ok,
                  f"max |grad| {worst_grad:.1e}, FD rel err {worst_fd:.1e}, "
                  f"beats 100 perturbations in {beaten}/{steps} steps")


def test_metric_oracles(report):
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for k in range(100):
        n, l = rng.integers(1, 13), rng.integers(2, 13)
        Z = (rng.random((n, l)) < 0.4).astype(float)
        Z[0, :2] = [1, 0]
        S = rng.integers(5, size=(n, l)) / 5 if k % 2 else rng.random((n, l))
        for policy in ("strict", "half"):
            worst = max(worst,
                        abs(micro_auc(S, Z, policy) - brute_force_micro_auc(S, Z, policy)),
                        abs(ranking_loss(S, Z, policy) - brute_force_ranking_loss(S, Z, policy)))
    assert report("metric fast paths vs brute force (100 cases, both tie policies)",
                  worst <= 1e-12, f"max |diff| = {worst:.1e}")


@pytest.fixture(scope="module")
def bench_runs(tmp_path_factory):
    out = []
    for k in range(2):
        d = tmp_path_factory.mktemp(f"bench{k}")
        start = time.perf_counter()
        code = main(["bench", "--seeds", "1-10", "--out", str(d)])
        out.append((code, time.perf_counter() - start, (d / "bench.json").read_bytes()))
    return out


def per_seed(result, method, metric):
    return {r["seed"]: r["metrics"][metric] for r in result["runs"] if r["method"] == method}


def directional_counts(result):
    rl_r, rl_mv = per_seed(result, "mlcm-r", "ranking_loss"), per_seed(result, "mv", "ranking_loss")
    auc_a, auc_mv = per_seed(result, "mlcm-a", "micro_auc"), per_seed(result, "mv", "micro_auc")
    auc_r, auc_bm = per_seed(result, "mlcm-r", "micro_auc"), per_seed(result, "bm", "micro_auc")
    seeds = result["seeds"]
    a = sum(rl_r[s] < rl_mv[s] for s in seeds)
    b = sum(auc_a[s] > auc_mv[s] for s in seeds)
    c = sum(min(auc_r[s], auc_a[s]) > auc_bm[s] for s in seeds)
    return a, b, c


def test_directional_bench(bench_runs, report):
    code, elapsed, blob = bench_runs[0]
    result = json.loads(blob)
    a, b, c = directional_counts(result)
    summary = result["summary"]
    report("(a) ranking loss MLCM-r < MV", a >= 8, f"{a}/10 seeds (need >= 8)")
    report("(b) microAUC MLCM-a > MV", b >= 8, f"{b}/10 seeds (need >= 8)")
    report("(c) microAUC MLCM-r and MLCM-a > BM", c == 10, f"{c}/10 seeds (need 10)")
    report("bench runtime", elapsed < 60, f"{elapsed:.1f} s (< 60 s), exit code {code}")
    report("bench means", True,
           ", ".join(f"{m}: AUC {summary[m]['micro_auc']['mean']:.4f} RL {summary[m]['ranking_loss']['mean']:.4f}"
                     for m in result["methods"]), tag="INFO")
    assert code == 0 and a >= 8 and b >= 8 and c == 10 and elapsed < 60


def test_determinism(bench_runs, report):
    (_, _, first), (_, _, second) = bench_runs
    assert report("bench JSON byte-identical across two runs", first == second,
                  f"{len(first)} bytes, identical={first == second}")


def test_literal_defaults_informational(report):
    result = run_bench(seeds=range(1, 11), methods=("mv", "mlcm-r", "mlcm-a"),
                       config=ConsensusConfig(alpha=2.0, iters=20))
    a, b, _ = directional_counts(result)
    report("alpha = 2, T = 20 directional counts", True,
           f"(a) MLCM-r < MV ranking loss {a}/10, (b) MLCM-a > MV microAUC {b}/10", tag="INFO")

