import itertools

import numpy as np
import pytest

from mlcm.exceptions import InfeasibleSpecError, ValidationError
from mlcm.synth import (
    SynthSpec,
    _draw_prototypes,
    _truth_rng,
    cooccurrence,
    generate_truth,
    simulate_base_models,
)


def test_noiseless_single_prototype():
    spec = SynthSpec(n=50, l=8, prototypes=1, prototype_density=0.5, flip_in=0, flip_out=0, seed=4)
    Z = generate_truth(spec)
    assert (Z == Z[0]).all()
    assert 0 < Z[0].sum() < 8


def test_truth_deterministic():
    spec = SynthSpec(seed=11)
    np.testing.assert_array_equal(generate_truth(spec), generate_truth(spec))
    assert not np.array_equal(generate_truth(spec), generate_truth(spec.with_seed(12)))


def test_rows_nondegenerate():
    Z = generate_truth(SynthSpec(n=2000, l=3, prototype_density=0.1, seed=2))
    s = Z.sum(axis=1)
    assert ((s > 0) & (s < 3)).all()


def test_l_below_two_infeasible():
    with pytest.raises(InfeasibleSpecError):
        generate_truth(SynthSpec(l=1))


def test_cooccurrence_matches_count():
    Z = generate_truth(SynthSpec(n=60, l=6, seed=5))
    C = cooccurrence(Z)
    for a, b in itertools.product(range(6), repeat=2):
        count = sum(1 for row in Z if row[a] and row[b])
        assert C[a, b] == count / 60


def test_cooccurrence_concentrated_within_prototypes():
    spec = SynthSpec(seed=1)
    protos = _draw_prototypes(spec, _truth_rng(spec.seed))  # first draw of the truth stream
    Z = generate_truth(spec)
    C = cooccurrence(Z)
    shared = (protos.T.astype(int) @ protos.astype(int)) > 0
    off = ~np.eye(spec.l, dtype=bool)
    within, across = C[shared & off], C[~shared & off]
    assert within.sum() > across.sum()
    assert within.mean() > 5 * across.mean()


def test_correlation_above_independence():
    Z = generate_truth(SynthSpec(seed=1))
    C = cooccurrence(Z)
    p = Z.mean(axis=0)
    ratio = (C / np.outer(p, p))[~np.eye(Z.shape[1], dtype=bool)]
    assert ratio.max() > 2


@pytest.mark.parametrize("rate", [0.0, 1.0])
def test_extreme_noise(rate):
    spec = SynthSpec(n=40, l=6, model_noise=(rate,) * 3, seed=3)
    Z = generate_truth(spec)
    for Yk in simulate_base_models(Z, spec=spec):
        np.testing.assert_array_equal(Yk, Z if rate == 0 else 1 - Z)


def test_agreement_band():
    spec = SynthSpec(seed=7)
    Z = generate_truth(spec)
    X = simulate_base_models(Z, spec=spec)
    assert X.shape == (10, 500, 20)
    agreement = (X == Z).mean()
    assert 0.73 <= agreement <= 0.77


def test_flip_rate_calibration():
    spec = SynthSpec(n=500, l=20, model_noise=(0.1, 0.25, 0.4), seed=9)
    Z = generate_truth(spec)
    N = Z.size
    for Yk, r in zip(simulate_base_models(Z, spec=spec), spec.model_noise):
        assert abs((Yk != Z).mean() - r) <= 3 * np.sqrt(r * (1 - r) / N)


def test_models_independent_streams():
    spec = SynthSpec(n=100, l=10, model_noise=(0.3,) * 4, seed=0)
    Z = generate_truth(spec)
    X4 = simulate_base_models(Z, spec=spec)
    X2 = simulate_base_models(Z, m=2, spec=SynthSpec(n=100, l=10, model_noise=(0.3,), seed=0))
    np.testing.assert_array_equal(X4[:2], X2)
    assert not np.array_equal(X4[0], X4[1])


def test_model_count_mismatch():
    with pytest.raises(ValidationError):
        simulate_base_models(np.eye(3), m=3, spec=SynthSpec(model_noise=(0.1, 0.2)))


class TestSpec:
    def test_round_trip(self):
        spec = SynthSpec(n=30, l=4, model_noise=(0.1, 0.2), seed=8)
        assert SynthSpec.from_dict(spec.to_dict()) == spec

    def test_scalar_noise_with_m(self):
        spec = SynthSpec.from_dict({"m": 3, "model_noise": 0.2})
        assert spec.model_noise == (0.2, 0.2, 0.2)

    @pytest.mark.parametrize(
        "d", [{"n": 0}, {"flip_in": 1.5}, {"model_noise": []}, {"bogus": 1}, {"m": 2, "model_noise": [0.1]}]
    )
    def test_invalid(self, d):
        with pytest.raises(ValidationError):
            SynthSpec.from_dict(d)
