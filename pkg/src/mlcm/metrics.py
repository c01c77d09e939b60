"""Multilabel ranking metrics: micro AUC, one error, ranking loss, average precision.

All metrics consume real-valued scores and a binary truth matrix of the same
shape. Tied scores are handled by ``tie_policy``:

``"strict"``
    a (relevant, irrelevant) pair counts as correctly ordered only when the
    relevant score is strictly larger. Ties are errors.
``"half"``
    ties earn half credit, the usual Mann-Whitney convention.

Where a single ordering of labels is needed (one error, average precision)
ties are broken towards the lower label index.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .config import TIE_POLICIES
from .exceptions import DegenerateTruthError, ValidationError
from .validation import check_label_matrix, check_scores

METRIC_NAMES = ("micro_auc", "one_error", "ranking_loss", "avg_precision")


@dataclass(frozen=True)
class MetricReport:
    micro_auc: float
    one_error: float
    ranking_loss: float
    avg_precision: float
    skipped_instances: int = 0

    def metrics(self):
        return {name: getattr(self, name) for name in METRIC_NAMES}

    def to_dict(self):
        return asdict(self)


def _check_pair(scores, truth):
    Z = check_label_matrix(truth)
    S = check_scores(scores, shape=Z.shape)
    return S, Z.astype(bool)


def _check_policy(tie_policy):
    if tie_policy not in TIE_POLICIES:
        raise ValidationError(f"tie_policy must be one of {TIE_POLICIES}, got {tie_policy!r}")


def _ordered_pairs(pos, neg_sorted, tie_policy):
    """Credit of every (positive, negative) pair, summed; positives vs sorted negatives."""
    below = np.searchsorted(neg_sorted, pos, side="left")
    if tie_policy == "strict":
        return float(below.sum())
    ties = np.searchsorted(neg_sorted, pos, side="right") - below
    return float(below.sum()) + 0.5 * float(ties.sum())


def micro_auc(scores, truth, tie_policy="strict"):
    """Fraction of correctly ordered (positive, negative) entry pairs.

    Pairs range over all ``n * l`` entries jointly, across instances and
    labels. Runs in ``O(nl log nl)``.

    Raises
    ------
    DegenerateTruthError
        If the truth has no positive or no negative entry.
    """
    _check_policy(tie_policy)
    S, Z = _check_pair(scores, truth)
    pos, neg = S[Z], S[~Z]
    if pos.size == 0 or neg.size == 0:
        raise DegenerateTruthError("micro AUC needs at least one positive and one negative entry")
    credit = _ordered_pairs(pos, np.sort(neg), tie_policy)
    return credit / (pos.size * neg.size)


def _ranking_loss_terms(S, Z, tie_policy):
    terms = []
    for s, z in zip(S, Z):
        n_pos = int(z.sum())
        n_neg = z.size - n_pos
        if n_pos == 0 or n_neg == 0:
            continue
        correct = _ordered_pairs(s[z], np.sort(s[~z]), tie_policy)
        pairs = n_pos * n_neg
        terms.append((pairs - correct) / pairs)
    return terms


def ranking_loss(scores, truth, tie_policy="strict", return_skipped=False):
    """Mean per-instance fraction of mis-ordered (relevant, irrelevant) label pairs.

    Instances whose labels are all relevant or all irrelevant have no pairs
    and are skipped.

    Parameters
    ----------
    scores : array-like of shape (n, l)
    truth : array-like of shape (n, l)
    tie_policy : {"strict", "half"}, default="strict"
        Under "strict" a tie counts as a violation.
    return_skipped : bool, default=False
        Also return the number of skipped instances.

    Raises
    ------
    DegenerateTruthError
        If every instance is skipped.
    """
    _check_policy(tie_policy)
    S, Z = _check_pair(scores, truth)
    terms = _ranking_loss_terms(S, Z, tie_policy)
    if not terms:
        raise DegenerateTruthError("ranking loss undefined: every instance has no relevant/irrelevant pair")
    loss = float(np.mean(terms))
    return (loss, S.shape[0] - len(terms)) if return_skipped else loss


def one_error(scores, truth):
    """Fraction of instances whose top-scored label is irrelevant.

    Instances without any relevant label are skipped. Ties for the top score
    go to the lowest label index.
    """
    S, Z = _check_pair(scores, truth)
    keep = Z.any(axis=1)
    if not keep.any():
        raise DegenerateTruthError("one error undefined: no instance has a relevant label")
    top = S[keep].argmax(axis=1)
    return float(np.mean(~Z[keep][np.arange(top.size), top]))


def _precision_at_cutoffs(S, Z):
    order = np.argsort(-S, axis=1, kind="stable")
    hits = np.take_along_axis(Z, order, axis=1)
    return hits, np.cumsum(hits, axis=1) / np.arange(1, S.shape[1] + 1)


def average_precision(scores, truth, standard=False):
    """Average precision over instances.

    By default precision is averaged over every cutoff ``s = 1..l`` of the
    score-sorted label list and divided by ``l``. With ``standard=True`` the
    usual definition is used instead: precision averaged over the ranks of
    the relevant labels only (instances with no relevant label are skipped).
    """
    S, Z = _check_pair(scores, truth)
    hits, prec = _precision_at_cutoffs(S, Z)
    if not standard:
        return float(prec.mean(axis=1).mean())
    n_rel = hits.sum(axis=1)
    keep = n_rel > 0
    if not keep.any():
        raise DegenerateTruthError("average precision undefined: no instance has a relevant label")
    per = (prec * hits).sum(axis=1)[keep] / n_rel[keep]
    return float(per.mean())


def brute_force_micro_auc(scores, truth, tie_policy="strict"):
    """Literal double loop over every (positive, negative) entry pair."""
    _check_policy(tie_policy)
    S, Z = _check_pair(scores, truth)
    flat_s, flat_z = S.ravel().tolist(), Z.ravel().tolist()
    pos = [s for s, z in zip(flat_s, flat_z) if z]
    neg = [s for s, z in zip(flat_s, flat_z) if not z]
    if not pos or not neg:
        raise DegenerateTruthError("micro AUC needs at least one positive and one negative entry")
    credit = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                credit += 1.0
            elif p == q and tie_policy == "half":
                credit += 0.5
    return credit / (len(pos) * len(neg))


def brute_force_ranking_loss(scores, truth, tie_policy="strict"):
    """Literal per-instance enumeration of (relevant, irrelevant) label pairs."""
    _check_policy(tie_policy)
    S, Z = _check_pair(scores, truth)
    terms = []
    for s, z in zip(S.tolist(), Z.tolist()):
        rel = [f for f, y in zip(s, z) if y]
        irr = [f for f, y in zip(s, z) if not y]
        if not rel or not irr:
            continue
        bad = 0.0
        for fp in rel:
            for fq in irr:
                if fp < fq:
                    bad += 1.0
                elif fp == fq:
                    bad += 1.0 if tie_policy == "strict" else 0.5
        terms.append(bad / (len(rel) * len(irr)))
    if not terms:
        raise DegenerateTruthError("ranking loss undefined: every instance has no relevant/irrelevant pair")
    return sum(terms) / len(terms)


def evaluate(scores, truth, tie_policy="strict", std_ap=False):
    """Compute all four metrics.

    Returns
    -------
    report : MetricReport
        ``skipped_instances`` counts the instances excluded from ranking
        loss.
    """
    loss, skipped = ranking_loss(scores, truth, tie_policy, return_skipped=True)
    return MetricReport(
        micro_auc=micro_auc(scores, truth, tie_policy),
        one_error=one_error(scores, truth),
        ranking_loss=loss,
        avg_precision=average_precision(scores, truth, standard=std_ap),
        skipped_instances=skipped,
    )
