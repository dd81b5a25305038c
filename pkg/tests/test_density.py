import dataclasses
import math

import numpy as np
import pytest

from bosegas.bogoliubov import ThermalConfig, Variant, dispersion, mu_sq
from bosegas.density import (
    build_rho1,
    build_rho2,
    dm2_min_eigenvalue,
    dm_trace_norm_diff,
)
from bosegas.errors import ModelValidityError
from bosegas.lattice import modes_up_to


CFG = ThermalConfig(a=1.0, beta=1.0, variant=Variant.B)


def test_rho1_trace_is_exactly_N():
    for N in (100, 10**6):
        dm = build_rho1(CFG, N, cutoff=50)
        assert dm.trace() == float(N)
        assert dm.condensate_weight + math.fsum(dm.excited_weights.tolist()) == pytest.approx(N, rel=0)


def test_rho2_trace_is_exactly_N():
    dm = build_rho2(CFG, 10**6, cutoff=50)
    assert dm.trace() == float(10**6)


def test_pure_condensate_limit():
    cfg = ThermalConfig(a=0.0, beta=1e3, variant=Variant.B)
    dm = build_rho1(cfg, 500, cutoff=20)
    assert dm.condensate_weight == 500.0
    assert np.all(dm.excited_weights == 0.0)


def test_zero_temperature_weights_reduce_to_quantum_depletion():
    cfg = ThermalConfig(a=1.0, beta=1e3, variant=Variant.B)
    dm = build_rho1(cfg, 10**6, cutoff=30)
    expected = np.array([mu_sq(m.p_sq, 1.0) for m in dm.modes])
    assert np.max(np.abs(dm.excited_weights - expected)) <= 1e-30


def test_positive_weights_at_positive_temperature():
    dm = build_rho1(ThermalConfig(a=0.5, beta=0.01, variant=Variant.A), 10**6, cutoff=20)
    assert np.all(dm.excited_weights > 0.0)


def test_validity_guard_raises_structured_error():
    cfg = ThermalConfig(a=10.0, beta=0.5, variant=Variant.B)
    with pytest.raises(ModelValidityError):
        build_rho1(cfg, 1, cutoff=100)
    with pytest.raises(ModelValidityError):
        build_rho2(cfg, 8, cutoff=100)


def test_rho2_weights_and_pairing_structure():
    dm2 = build_rho2(CFG, 10**6, cutoff=30)
    dm1 = build_rho1(CFG, 10**6, cutoff=30)
    assert np.allclose(dm2.excited_weights, 4.0 * dm1.excited_weights, rtol=1e-14)
    assert np.all(dm2.pairing < 0.0)


def test_rho2_pairing_zero_temperature_limit():
    for variant in Variant:
        cfg = ThermalConfig(a=1.0, beta=1e3, variant=variant)
        dm = build_rho2(cfg, 10**6, cutoff=20)
        expected = np.array([-4.0 * math.pi * 1.0 / dispersion(m.p_sq, 1.0) for m in dm.modes])
        assert np.max(np.abs(dm.pairing / expected - 1.0)) < 1e-6


def test_rho2_free_gas_has_no_pairing():
    cfg = ThermalConfig(a=0.0, beta=0.05, variant=Variant.B)
    dm = build_rho2(cfg, 10**6, cutoff=10)
    assert np.all(dm.pairing == 0.0)


class TestTraceNormDiff:
    def test_identical_models_have_zero_distance(self):
        x = build_rho1(CFG, 1000, cutoff=20)
        assert dm_trace_norm_diff(x, x) == 0.0

    def test_dm1_distance_is_sum_of_weight_gaps(self):
        x = build_rho1(CFG, 10**6, cutoff=20)
        y = build_rho1(ThermalConfig(a=1.0, beta=2.0, variant=Variant.B), 10**6, cutoff=20)
        direct = abs(x.condensate_weight - y.condensate_weight) + float(
            np.sum(np.abs(x.excited_weights - y.excited_weights))
        )
        assert dm_trace_norm_diff(x, y) == pytest.approx(direct, rel=1e-14)

    def test_pairing_block_counts_twice_per_pair(self):
        x = build_rho2(CFG, 10**6, cutoff=4)
        delta = 1e-3
        pairing = x.pairing.copy()
        # perturb the block of one +-p pair (two ordered legs)
        pair_n = x.modes[0].n
        for i, m in enumerate(x.modes):
            if m.n == pair_n or m.n == (-pair_n[0], -pair_n[1], -pair_n[2]):
                pairing[i] += delta
        y = dataclasses.replace(x, pairing=pairing)
        assert dm_trace_norm_diff(x, y) == pytest.approx(2.0 * delta, rel=1e-12)

    def test_metric_axioms_on_sample_triples(self):
        cfgs = [
            ThermalConfig(a=1.0, beta=b, variant=Variant.B) for b in (0.5, 1.0, 2.0)
        ]
        dms = [build_rho2(c, 10**6, cutoff=10) for c in cfgs]
        d01 = dm_trace_norm_diff(dms[0], dms[1])
        d12 = dm_trace_norm_diff(dms[1], dms[2])
        d02 = dm_trace_norm_diff(dms[0], dms[2])
        assert d01 == dm_trace_norm_diff(dms[1], dms[0])
        assert d02 <= d01 + d12 + 1e-12
        assert d01 > 0.0

    def test_shape_mismatch_rejected(self):
        x = build_rho1(CFG, 1000, cutoff=10)
        y = build_rho1(CFG, 1000, cutoff=20)
        with pytest.raises(ValueError):
            dm_trace_norm_diff(x, y)
        z = build_rho2(CFG, 1000, cutoff=10)
        with pytest.raises(ValueError):
            dm_trace_norm_diff(x, z)


class TestMinEigenvalue:
    def test_free_gas_model_is_positive(self):
        cfg = ThermalConfig(a=0.0, beta=0.05, variant=Variant.B)
        dm = build_rho2(cfg, 10**6, cutoff=10)
        assert dm2_min_eigenvalue(dm) >= 0.0

    def test_no_pairing_reduces_to_diagonal_minimum(self):
        dm = build_rho2(CFG, 10**6, cutoff=10)
        flat = dataclasses.replace(dm, pairing=np.zeros_like(dm.pairing))
        expected = min(flat.condensate_weight, float(np.min(flat.excited_weights)), 0.0)
        assert dm2_min_eigenvalue(flat) == pytest.approx(expected)

    def test_closed_form_matches_dense_arrow_matrix(self):
        dm = build_rho2(CFG, 1000, cutoff=4)
        m = len(dm.pairing)
        arrow = np.zeros((m + 1, m + 1))
        arrow[0, 0] = dm.condensate_weight
        arrow[0, 1:] = dm.pairing
        arrow[1:, 0] = dm.pairing
        dense_min = float(np.linalg.eigvalsh(arrow).min())
        expected = min(dense_min, float(np.min(dm.excited_weights)))
        assert dm2_min_eigenvalue(dm) == pytest.approx(expected, rel=1e-12)

    def test_negativity_shrinks_with_particle_number(self):
        small = dm2_min_eigenvalue(build_rho2(CFG, 100, cutoff=10))
        large = dm2_min_eigenvalue(build_rho2(CFG, 10**6, cutoff=10))
        assert small < 0.0
        assert abs(large) < abs(small)


def test_json_serialization_shape():
    import json

    dm = build_rho2(CFG, 1000, cutoff=3)
    payload = json.loads(dm.to_json())
    assert payload["N"] == 1000
    assert payload["variant"] == "B"
    assert {row["norm_sq"] for row in payload["modes"]} == {1, 2, 3}
    row = payload["modes"][0]
    assert set(row) == {"norm_sq", "multiplicity", "weight", "pairing"}
    dm1 = build_rho1(CFG, 1000, cutoff=3)
    payload1 = json.loads(dm1.to_json(provenance={"x": 1}))
    assert "pairing" not in payload1["modes"][0]
    assert payload1["provenance"] == {"x": 1}
