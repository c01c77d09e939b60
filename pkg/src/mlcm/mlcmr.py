"""MLCM-r: consensus maximization on an instance / (model, label) bipartite graph.

Every base model contributes one *group node* per label. Instance ``i`` is
linked to group node ``(k, j)`` when model ``k`` predicts label ``j`` for it,
and each group node is anchored to the label node of its label. Minimizing
the disagreement between connected nodes has a closed form in which each
group node's label distribution is the settling distribution of a damped
random walk over group nodes; an instance's score for a label is then the
average of the distributions of the group nodes it touches.

Zero-degree group nodes (a model never predicts some label) are dropped
before solving and get their own label node's distribution back: with no
edges the walk settles immediately. Instances no model assigns any label to
get the uniform score row.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .base import BaseCombiner
from .config import ConsensusConfig, check_alpha
from .exceptions import ConvergenceError, SingularDegreeError, SolverError, ValidationError
from .validation import check_prediction_set


@dataclass(frozen=True, eq=False)
class ConsensusGraph:
    """Bipartite graph between instances and (model, label) group nodes.

    Attributes
    ----------
    A : ndarray of shape (n, v)
        ``A[i, k*l + j] == 1`` iff model ``k`` (0-based) predicts label ``j``
        on instance ``i``; ``v = m * l``.
    B : ndarray of shape (v, l)
        One-hot label indicator of each group node.
    d_n : ndarray of shape (n,)
        Instance degrees (row sums of ``A``).
    d_v : ndarray of shape (v,)
        Group-node degrees (column sums of ``A``).
    lam : ndarray of shape (v,)
        Continuation probability ``d_v / (alpha + d_v)`` of the random walk.
    alpha : float
    """

    A: np.ndarray
    B: np.ndarray
    d_n: np.ndarray
    d_v: np.ndarray
    lam: np.ndarray
    alpha: float

    @property
    def n_instances(self):
        return self.A.shape[0]

    @property
    def n_nodes(self):
        return self.A.shape[1]

    @property
    def n_labels(self):
        return self.B.shape[1]

    @property
    def active_nodes(self):
        return self.d_v > 0

    @property
    def active_instances(self):
        return self.d_n > 0

    def restrict(self):
        """Subgraph without zero-degree instances and group nodes.

        Returns the subgraph plus the retained node and instance indices.
        """
        nodes = np.flatnonzero(self.active_nodes)
        inst = np.flatnonzero(self.active_instances)
        A = self.A[np.ix_(inst, nodes)]
        sub = ConsensusGraph(
            A=A,
            B=self.B[nodes],
            d_n=self.d_n[inst],
            d_v=self.d_v[nodes],
            lam=self.lam[nodes],
            alpha=self.alpha,
        )
        return sub, nodes, inst


def connection_matrix(pred_set):
    """Flatten an ``(m, n, l)`` prediction set into the ``(n, m*l)`` matrix A."""
    Y = np.asarray(pred_set, dtype=np.float64)
    m, n, l = Y.shape
    return Y.transpose(1, 0, 2).reshape(n, m * l)


def resolve_alpha(alpha, d_v):
    """Turn ``"auto"`` into the mean degree of the non-empty group nodes."""
    check_alpha(alpha)
    if alpha != "auto":
        return float(alpha)
    active = d_v[d_v > 0]
    return float(active.mean()) if active.size else 1.0


def build_graph(pred_set, alpha="auto"):
    """Build the MLCM-r consensus graph from base-model predictions.

    Parameters
    ----------
    pred_set : array-like of shape (m, n, l)
        Binary base-model predictions.
    alpha : float or "auto", default="auto"
        Anchor strength of the label nodes; must be positive. ``"auto"`` is
        resolved from this graph's degrees and stored resolved.

    Returns
    -------
    graph : ConsensusGraph
    """
    check_alpha(alpha)
    Y = check_prediction_set(pred_set)
    m, _, l = Y.shape
    A = connection_matrix(Y)
    B = np.tile(np.eye(l), (m, 1))
    d_v = A.sum(axis=0)
    alpha = resolve_alpha(alpha, d_v)
    return ConsensusGraph(
        A=A,
        B=B,
        d_n=A.sum(axis=1),
        d_v=d_v,
        lam=d_v / (alpha + d_v),
        alpha=alpha,
    )


def _check_degrees(graph):
    if not graph.active_nodes.all():
        j = int(np.flatnonzero(~graph.active_nodes)[0])
        raise SingularDegreeError(f"group node {j} has zero degree")
    if not graph.active_instances.all():
        i = int(np.flatnonzero(~graph.active_instances)[0])
        raise SingularDegreeError(f"instance {i} has zero degree")


def transition_matrix(graph):
    """Row-stochastic group-to-group transition matrix ``D_v^-1 A' D_n^-1 A``.

    Step from a group node to a uniformly chosen neighbouring instance, then
    to a uniformly chosen group node of that instance.

    Raises
    ------
    SingularDegreeError
        If the graph still has zero-degree instances or group nodes; call
        :meth:`ConsensusGraph.restrict` first.
    """
    _check_degrees(graph)
    A = graph.A
    return (A.T / graph.d_v[:, None]) @ (A / graph.d_n[:, None])


def _walk_operator(graph):
    # D_lam S == (alpha I + D_v)^-1 A' D_n^-1 A
    A = graph.A
    return (A.T / (graph.alpha + graph.d_v)[:, None]) @ (A / graph.d_n[:, None])


def _settle(graph):
    # D_{1-lam} B
    return (1.0 - graph.lam)[:, None] * graph.B


def _reinsert(graph, nodes, Q_sub):
    Q = graph.B.copy()
    Q[nodes] = Q_sub
    return Q


def solve_group_distributions(graph):
    """Closed-form label distribution of every group node.

    Solves ``(I - D_lam S) Q = D_{1-lam} B`` with one LU factorization and
    ``l`` right-hand sides.

    Parameters
    ----------
    graph : ConsensusGraph

    Returns
    -------
    Q : ndarray of shape (v, l)
        ``Q[j, k]`` is the probability that a walk started at group node
        ``j`` settles on a group node of label ``k``. Rows sum to one.
    """
    sub, nodes, _ = graph.restrict()
    if nodes.size == 0:
        return graph.B.copy()
    M = np.eye(nodes.size) - _walk_operator(sub)
    try:
        Q_sub = scipy.linalg.solve(M, _settle(sub), check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SolverError(f"group-distribution system is singular: {exc}") from exc
    if not np.isfinite(Q_sub).all():
        raise SolverError("group-distribution solve produced non-finite values")
    return _reinsert(graph, nodes, Q_sub)


def solve_group_distributions_iterative(graph, tol=1e-10, max_iters=10000, return_n_iter=False):
    """Fixed-point iteration ``Q <- D_lam S Q + D_{1-lam} B``.

    Starts from ``Q = D_{1-lam} B``, so iterate ``t`` is the power series
    truncated after ``t`` terms. Used as an independent check of
    :func:`solve_group_distributions`.

    Parameters
    ----------
    graph : ConsensusGraph
    tol : float, default=1e-10
        Stop once successive iterates differ by less than ``tol`` (max-abs).
    max_iters : int, default=10000
    return_n_iter : bool, default=False
        Also return the number of iterations performed.

    Raises
    ------
    ConvergenceError
        If ``tol`` is not reached within ``max_iters`` iterations.
    """
    sub, nodes, _ = graph.restrict()
    if nodes.size == 0:
        return (graph.B.copy(), 0) if return_n_iter else graph.B.copy()
    P = _walk_operator(sub)
    R = _settle(sub)
    Q = R.copy()
    for it in range(1, max_iters + 1):
        Q_next = P @ Q + R
        delta = np.abs(Q_next - Q).max()
        Q = Q_next
        if delta < tol:
            break
    else:
        raise ConvergenceError(
            f"no convergence after {max_iters} iterations (last change {delta:.3e})"
        )
    Q = _reinsert(graph, nodes, Q)
    return (Q, it) if return_n_iter else Q


def instance_scores(graph, Q):
    """Average the group distributions over each instance's neighbours.

    Returns ``U = D_n^-1 A Q`` of shape ``(n, l)``; rows of instances with no
    edges are set to ``1/l``.
    """
    Q = np.asarray(Q, dtype=np.float64)
    if Q.shape != (graph.n_nodes, graph.n_labels):
        raise ValidationError(
            f"Q must have shape {(graph.n_nodes, graph.n_labels)}, got {Q.shape}"
        )
    U = np.full((graph.n_instances, graph.n_labels), 1.0 / graph.n_labels)
    act = graph.active_instances
    U[act] = (graph.A[act] @ Q) / graph.d_n[act, None]
    return U


def label_affinity(graph, Q):
    """Mean group distribution per label, an ``(l, l)`` label-to-label matrix.

    Row ``k`` averages ``Q`` over the active group nodes of label ``k``
    (across models): the walk's probability of reaching label ``j`` from
    label ``k``. Labels nobody predicts get their one-hot row.
    """
    l = graph.n_labels
    act = graph.active_nodes
    counts = graph.B[act].sum(axis=0)
    total = graph.B[act].T @ Q[act]
    out = np.eye(l)
    seen = counts > 0
    out[seen] = total[seen] / counts[seen, None]
    return out


def _resolve_config(config):
    return ConsensusConfig() if config is None else config


def mlcm_r(pred_set, config=None):
    """Consolidate multilabel predictions with MLCM-r.

    Parameters
    ----------
    pred_set : array-like of shape (m, n, l)
        Binary base-model predictions.
    config : ConsensusConfig, optional
        Only ``alpha`` is used.

    Returns
    -------
    scores : ndarray of shape (n, l)
        Per-instance label relevance; each row sums to one.
    """
    config = _resolve_config(config)
    graph = build_graph(pred_set, config.alpha)
    return instance_scores(graph, solve_group_distributions(graph))


def binary_relevance_sets(pred_set):
    """Split a prediction set into one two-class prediction set per label.

    Returns an array of shape ``(l, m, n, 2)``; in the last axis index 0 is
    "label absent" and index 1 is "label present".
    """
    Y = check_prediction_set(pred_set)
    two = np.stack([1.0 - Y, Y], axis=-1)  # (m, n, l, 2)
    return two.transpose(2, 0, 1, 3)


def bgcm_binary_relevance(pred_set, config=None):
    """Label-by-label BGCM consensus, ignoring label correlations.

    For each label a separate bipartite graph is built whose group nodes are
    (model, class) pairs; every instance links to exactly one class node per
    model. The returned column is the consensus probability of the
    "present" class.
    """
    config = _resolve_config(config)
    per_label = binary_relevance_sets(pred_set)
    cols = []
    for two in per_label:
        graph = build_graph(two, config.alpha)
        cols.append(instance_scores(graph, solve_group_distributions(graph))[:, 1])
    return np.column_stack(cols)


class MLCMr(BaseCombiner):
    """MLCM-r combiner (targets ranking loss).

    Parameters
    ----------
    alpha : float or "auto", default="auto"
        Anchor strength of the label nodes. Large values keep each group
        node close to its own label and reduce the method to row-normalized
        voting. ``"auto"`` uses the mean group-node degree of the training
        graph.

    Attributes
    ----------
    alpha_ : float
        Resolved anchor strength.
    graph_ : ConsensusGraph
        Graph built from the training prediction set.
    group_distributions_ : ndarray of shape (m * l, l)
        Solved group-node label distributions.
    label_affinity_ : ndarray of shape (l, l)
        Label-to-label reach probabilities averaged over models.
    n_models_ : int
    n_labels_in_ : int

    Notes
    -----
    ``transform`` scores any prediction set from the same ``m`` models over
    the same ``l`` labels using the fitted group distributions; on the
    training set it reproduces :func:`mlcm_r`.
    """

    def __init__(self, alpha="auto"):
        self.alpha = alpha

    def fit(self, X, y=None):
        Y = self._validate_fit(X)
        self.graph_ = build_graph(Y, self.alpha)
        self.alpha_ = self.graph_.alpha
        self.group_distributions_ = solve_group_distributions(self.graph_)
        self.label_affinity_ = label_affinity(self.graph_, self.group_distributions_)
        return self

    def transform(self, X):
        Y = self._validate_transform(X)
        if Y.shape[0] != self.n_models_:
            raise ValidationError(f"expected {self.n_models_} models, got {Y.shape[0]}")
        # only A and d_n of the new graph matter here; alpha enters through Q
        graph = build_graph(Y, self.alpha_)
        return self._as_output(instance_scores(graph, self.group_distributions_))


class BGCMBinaryRelevance(BaseCombiner):
    """Per-label BGCM consensus baseline.

    Parameters
    ----------
    alpha : float or "auto", default="auto"
        ``"auto"`` is resolved separately for every label's graph.

    Attributes
    ----------
    alphas_ : ndarray of shape (l,)
        Resolved anchor strength per label.
    group_distributions_ : ndarray of shape (l, 2 * m, 2)
        Solved class distributions of the (model, class) nodes, per label.
    """

    def __init__(self, alpha="auto"):
        self.alpha = alpha

    def fit(self, X, y=None):
        Y = self._validate_fit(X)
        graphs = [build_graph(two, self.alpha) for two in binary_relevance_sets(Y)]
        self.alphas_ = np.array([g.alpha for g in graphs])
        self.group_distributions_ = np.stack([solve_group_distributions(g) for g in graphs])
        return self

    def transform(self, X):
        Y = self._validate_transform(X)
        if Y.shape[0] != self.n_models_:
            raise ValidationError(f"expected {self.n_models_} models, got {Y.shape[0]}")
        cols = []
        for two, Q, a in zip(binary_relevance_sets(Y), self.group_distributions_, self.alphas_):
            graph = build_graph(two, a)
            cols.append(instance_scores(graph, Q)[:, 1])
        return self._as_output(np.column_stack(cols))
