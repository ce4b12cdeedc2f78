"""Unit tests for kernel and angle primitives."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from angleopt import (
    ALPHA_INFINITY,
    DomainError,
    UnitVector,
    check_alpha,
    geodesic_distance,
    kernel,
    kernel_matrix,
    lambda0,
)
from conftest import random_unit_rows


class TestCheckAlpha:
    @pytest.mark.parametrize("value", [1, 1.0, 1.5, 2, 100, math.inf])
    def test_accepts(self, value):
        out = check_alpha(value)
        assert isinstance(out, float)
        assert out == float(value)

    @pytest.mark.parametrize("value", [0, 0.5, -1, 0.999999])
    def test_rejects_below_one(self, value):
        with pytest.raises(DomainError):
            check_alpha(value)

    def test_rejects_nan(self):
        with pytest.raises(DomainError):
            check_alpha(math.nan)

    def test_rejects_bool(self):
        with pytest.raises(DomainError):
            check_alpha(True)

    def test_rejects_non_numeric(self):
        with pytest.raises(DomainError):
            check_alpha("2")

    def test_finite_flag_rejects_infinity(self):
        with pytest.raises(DomainError):
            check_alpha(math.inf, finite=True)
        assert check_alpha(2.0, finite=True) == 2.0


class TestUnitVector:
    def test_normalizes(self):
        v = UnitVector([3.0, 4.0])
        assert math.isclose(np.linalg.norm(v.coords), 1.0, abs_tol=1e-15)
        assert v.ambient_dim == 2
        assert v.sphere_dim == 1

    def test_already_unit_is_preserved(self):
        v = UnitVector([1.0, 0.0, 0.0])
        assert v.coords[0] == 1.0
        assert v.coords[1] == 0.0

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            UnitVector([0.0, 0.0])

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            UnitVector([1.0, math.nan])
        with pytest.raises(DomainError):
            UnitVector([1.0, math.inf])

    def test_rejects_scalar_and_short(self):
        with pytest.raises(DomainError):
            UnitVector([1.0])
        with pytest.raises(DomainError):
            UnitVector(2.0)

    def test_coords_read_only(self):
        v = UnitVector([1.0, 0.0])
        with pytest.raises(ValueError):
            v.coords[0] = 5.0

    def test_negation(self):
        v = UnitVector([0.6, 0.8])
        w = -v
        assert np.array_equal(w.coords, -v.coords)

    def test_dot(self):
        v = UnitVector([1.0, 0.0])
        w = UnitVector([0.0, 1.0])
        assert v.dot(w) == 0.0


class TestGeodesicDistance:
    def test_orthogonal(self):
        v = UnitVector([1.0, 0.0])
        w = UnitVector([0.0, 1.0])
        assert geodesic_distance(v, w) == pytest.approx(math.pi / 2, abs=1e-15)

    def test_identical_is_exact_zero(self):
        v = UnitVector([0.6, 0.8])
        assert geodesic_distance(v, v) == 0.0

    def test_antipodal_is_exact_pi(self):
        v = UnitVector([0.6, 0.8])
        assert geodesic_distance(v, -v) == math.pi

    def test_dimension_mismatch(self):
        from angleopt import DimensionMismatchError

        with pytest.raises(DimensionMismatchError):
            geodesic_distance(UnitVector([1.0, 0.0]), UnitVector([1.0, 0.0, 0.0]))


class TestLambda0:
    @pytest.mark.parametrize(
        "t,expected",
        [
            (0.0, 0.0),
            (math.pi / 2, 1.0),
            (math.pi, 0.0),
            (math.pi / 4, 0.5),
            (3 * math.pi / 4, 0.5),
        ],
    )
    def test_anchor_values(self, t, expected):
        assert lambda0(t) == expected

    def test_symmetry_about_midpoint(self):
        for t in np.linspace(0.0, math.pi, 301):
            assert lambda0(t) == pytest.approx(lambda0(math.pi - t), abs=1e-15)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            lambda0(-0.1)
        with pytest.raises(DomainError):
            lambda0(math.pi + 0.1)

    def test_array_matches_scalar(self):
        ts = np.linspace(0.0, math.pi, 17)
        arr = lambda0(ts)
        assert arr.shape == ts.shape
        for t, a in zip(ts, arr):
            assert a == lambda0(float(t))

    @given(st.floats(min_value=0.0, max_value=math.pi, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_range_and_tent_shape(self, t):
        val = lambda0(t)
        assert 0.0 <= val <= 1.0
        assert val == pytest.approx(2.0 * min(t, math.pi - t) / math.pi, abs=0)


class TestKernel:
    def test_orthogonal_pair_is_one(self):
        v = UnitVector([1.0, 0.0])
        w = UnitVector([0.0, 1.0])
        assert kernel(v, w, alpha=1.0) == 1.0
        assert kernel(v, w, alpha=7.5) == 1.0
        assert kernel(v, w, alpha=ALPHA_INFINITY) == 1.0

    def test_same_line_is_zero(self):
        v = UnitVector([0.6, 0.8])
        assert kernel(v, v, alpha=1.0) == 0.0
        assert kernel(v, -v, alpha=1.0) == 0.0
        assert kernel(v, v, alpha=ALPHA_INFINITY) == 0.0

    def test_antipodal_invariance_bitwise(self):
        rng = np.random.default_rng(11)
        pts = random_unit_rows(rng, 8, 3)
        for i in range(8):
            for j in range(8):
                v = UnitVector(pts[i])
                w = UnitVector(pts[j])
                base = kernel(v, w, alpha=3.0)
                assert kernel(-v, w, alpha=3.0) == base
                assert kernel(v, -w, alpha=3.0) == base
                assert kernel(-v, -w, alpha=3.0) == base

    def test_power_law(self):
        v = UnitVector([1.0, 0.0])
        w = UnitVector([math.cos(math.pi / 4), math.sin(math.pi / 4)])
        base = kernel(v, w, alpha=1.0)
        assert base == pytest.approx(0.5, abs=1e-15)
        assert kernel(v, w, alpha=3.0) == pytest.approx(base**3, rel=1e-14)

    def test_infinity_indicator_threshold(self):
        v = UnitVector([1.0, 0.0])
        # slightly non-orthogonal but within the default tolerance
        w = UnitVector([5e-10, 1.0])
        assert kernel(v, w, alpha=ALPHA_INFINITY) == 1.0
        w2 = UnitVector([1e-3, 1.0])
        assert kernel(v, w2, alpha=ALPHA_INFINITY) == 0.0

    def test_infinity_custom_tolerance(self):
        v = UnitVector([1.0, 0.0])
        w = UnitVector([1e-3, 1.0])
        assert kernel(v, w, alpha=ALPHA_INFINITY, orth_tol=1e-2) == 1.0

    def test_alpha_monotone_decreasing_for_middle_angles(self):
        v = UnitVector([1.0, 0.0])
        w = UnitVector([math.cos(1.0), math.sin(1.0)])
        vals = [kernel(v, w, alpha=a) for a in (1.0, 1.5, 2.0, 4.0, 8.0)]
        assert all(x > y for x, y in zip(vals, vals[1:]))

    @given(
        st.lists(
            st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
            min_size=3,
            max_size=3,
        ).filter(lambda c: sum(x * x for x in c) > 1e-6),
        st.lists(
            st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
            min_size=3,
            max_size=3,
        ).filter(lambda c: sum(x * x for x in c) > 1e-6),
    )
    @settings(max_examples=100, deadline=None)
    def test_symmetry(self, a, b):
        v = UnitVector(a)
        w = UnitVector(b)
        assert kernel(v, w, alpha=2.0) == kernel(w, v, alpha=2.0)


class TestKernelMatrix:
    def test_matches_pairwise_kernel(self):
        rng = np.random.default_rng(3)
        pts = random_unit_rows(rng, 6, 4)
        for alpha in (1.0, 2.0, 5.0, ALPHA_INFINITY):
            mat = kernel_matrix(pts, alpha=alpha)
            assert mat.shape == (6, 6)
            for i in range(6):
                for j in range(6):
                    expected = kernel(UnitVector(pts[i]), UnitVector(pts[j]), alpha=alpha)
                    # BLAS matmul may round the dot product differently than
                    # the scalar path, so equality is up to a few ulps
                    assert mat[i, j] == pytest.approx(expected, rel=1e-12, abs=1e-15)

    def test_diagonal_zero(self):
        rng = np.random.default_rng(4)
        pts = random_unit_rows(rng, 5, 3)
        mat = kernel_matrix(pts, alpha=2.0)
        assert np.all(mat.diagonal() == 0.0)

    def test_symmetric(self):
        rng = np.random.default_rng(5)
        pts = random_unit_rows(rng, 7, 3)
        mat = kernel_matrix(pts, alpha=1.5)
        assert np.array_equal(mat, mat.T)

    def test_rectangular_two_argument_form(self):
        rng = np.random.default_rng(6)
        a = random_unit_rows(rng, 4, 3)
        b = random_unit_rows(rng, 5, 3)
        mat = kernel_matrix(a, b, alpha=2.0)
        assert mat.shape == (4, 5)
        for i in range(4):
            for j in range(5):
                expected = kernel(UnitVector(a[i]), UnitVector(b[j]), alpha=2.0)
                assert mat[i, j] == pytest.approx(expected, rel=1e-12, abs=1e-15)

    def test_rejects_mismatched_dims(self):
        from angleopt import DimensionMismatchError

        with pytest.raises(DimensionMismatchError):
            kernel_matrix(np.eye(3), np.eye(4), alpha=1.0)
