"""Synthetic multilabel ground truth and noisy simulated base models.

Ground truth is a prototype mixture: a handful of latent label sets are
drawn, every instance copies one of them, and entries are flipped with small
rates. Labels that share a prototype co-occur far more often than chance.
Base models flip each truth entry independently with a per-model rate.

Random streams are derived from ``seed`` with :class:`numpy.random.SeedSequence`
spawn keys, so each stream is reproducible on its own:

* truth: ``SeedSequence(seed, spawn_key=(0,))``
* base model ``k`` (0-based): ``SeedSequence(seed, spawn_key=(1, k))``
"""

from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .exceptions import InfeasibleSpecError, ValidationError
from .validation import check_label_matrix

MAX_RESAMPLE_ROUNDS = 1000


def _rate(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of the synthetic benchmark.

    ``model_noise`` holds one flip rate per base model, so its length is the
    number of models ``m``.
    """

    n: int = 500
    l: int = 20
    prototypes: int = 5
    prototype_density: float = 0.15
    flip_in: float = 0.05
    flip_out: float = 0.02
    model_noise: tuple = field(default=(0.25,) * 10)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model_noise", tuple(float(r) for r in self.model_noise))
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if self.l < 1:
            raise ValidationError(f"l must be >= 1, got {self.l}")
        if self.prototypes < 1:
            raise ValidationError(f"prototypes must be >= 1, got {self.prototypes}")
        if not self.model_noise:
            raise ValidationError("model_noise needs at least one rate (one per model)")
        _rate("prototype_density", self.prototype_density)
        _rate("flip_in", self.flip_in)
        _rate("flip_out", self.flip_out)
        for r in self.model_noise:
            _rate("model_noise", r)
        if not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def m(self):
        return len(self.model_noise)

    def with_seed(self, seed):
        return replace(self, seed=seed)

    def to_dict(self):
        d = asdict(self)
        d["model_noise"] = list(self.model_noise)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        unknown = set(d) - set(cls.__dataclass_fields__) - {"m"}
        if unknown:
            raise ValidationError(f"unknown SynthSpec fields: {sorted(unknown)}")
        m = d.pop("m", None)
        noise = d.get("model_noise", cls.__dataclass_fields__["model_noise"].default)
        if np.isscalar(noise):
            noise = (noise,) * (m if m is not None else 10)
        elif m is not None and len(noise) != m:
            raise ValidationError(f"m={m} but model_noise has {len(noise)} rates")
        d["model_noise"] = tuple(noise)
        return cls(**d)


def _truth_rng(seed):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))


def _model_rng(seed, k):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1, k)))


def _nondegenerate(Z):
    counts = Z.sum(axis=1)
    return (counts > 0) & (counts < Z.shape[1])


def _draw_prototypes(spec, rng):
    protos = np.zeros((spec.prototypes, spec.l), dtype=bool)
    todo = np.arange(spec.prototypes)
    for _ in range(MAX_RESAMPLE_ROUNDS):
        protos[todo] = rng.random((todo.size, spec.l)) < spec.prototype_density
        todo = np.flatnonzero(~_nondegenerate(protos))
        if todo.size == 0:
            return protos
    raise InfeasibleSpecError(
        f"could not draw prototypes with 1..{spec.l - 1} labels at density {spec.prototype_density}"
    )


def _materialize(protos, rows, spec, rng):
    Z = protos[rng.integers(protos.shape[0], size=rows)]
    u = rng.random(Z.shape)
    return np.where(Z, u >= spec.flip_in, u < spec.flip_out)


def generate_truth(spec):
    """Draw an ``(n, l)`` binary ground-truth matrix.

    Every row is guaranteed at least one relevant and one irrelevant label;
    rows violating this are redrawn (prototype and noise).

    Raises
    ------
    InfeasibleSpecError
        If ``l < 2`` or the rates make non-degenerate rows unreachable.
    """
    if spec.l < 2:
        raise InfeasibleSpecError("need l >= 2 for rows with both relevant and irrelevant labels")
    rng = _truth_rng(spec.seed)
    protos = _draw_prototypes(spec, rng)
    Z = _materialize(protos, spec.n, spec, rng)
    for _ in range(MAX_RESAMPLE_ROUNDS):
        bad = np.flatnonzero(~_nondegenerate(Z))
        if bad.size == 0:
            return Z.astype(np.float64)
        Z[bad] = _materialize(protos, bad.size, spec, rng)
    raise InfeasibleSpecError("could not draw non-degenerate truth rows with these flip rates")


def simulate_base_models(truth, m=None, spec=None):
    """Simulate ``m`` base models by flipping truth entries at random.

    Parameters
    ----------
    truth : array-like of shape (n, l)
    m : int, optional
        Number of models; defaults to ``len(spec.model_noise)``. A single
        configured rate is broadcast to all ``m`` models.
    spec : SynthSpec, optional

    Returns
    -------
    pred_set : ndarray of shape (m, n, l)
    """
    spec = SynthSpec() if spec is None else spec
    Z = check_label_matrix(truth).astype(bool)
    noise = spec.model_noise
    if m is None:
        m = len(noise)
    elif len(noise) == 1:
        noise = noise * m
    elif len(noise) != m:
        raise ValidationError(f"m={m} but spec has {len(noise)} model_noise rates")
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    preds = np.empty((m,) + Z.shape)
    for k in range(m):
        flips = _model_rng(spec.seed, k).random(Z.shape) < noise[k]
        preds[k] = Z ^ flips
    return preds


def cooccurrence(truth):
    """Empirical joint frequency ``Z'Z / n`` of label pairs."""
    Z = check_label_matrix(truth)
    return (Z.T @ Z) / Z.shape[0]
