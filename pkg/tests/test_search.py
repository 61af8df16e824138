import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qchan.search import golden_section_max, project_rows_to_simplex, project_to_simplex


@pytest.mark.parametrize("f,a,b,xstar", [
    (lambda x: -(x - 1.3) ** 2, -5, 5, 1.3),
    (lambda x: math.cos(x), -1, 2, 0.0),
    (lambda x: x, 0, 1, 1.0),
    (lambda x: -x, 0, 1, 0.0),
])
def test_golden_section(f, a, b, xstar):
    x, fx = golden_section_max(f, a, b, tol=1e-10)
    assert x == pytest.approx(xstar, abs=1e-6)
    assert fx == pytest.approx(f(x))


vectors = arrays(np.float64, st.integers(1, 6), elements=st.floats(-5, 5, allow_nan=False))


@settings(max_examples=200, deadline=None)
@given(vectors)
def test_projection_is_on_simplex_and_optimal(v):
    x = project_to_simplex(v)
    assert np.all(x >= 0)
    assert x.sum() == pytest.approx(1.0, abs=1e-12)
    # variational inequality: (v - x) . (y - x) <= 0 for every simplex point y
    rng = np.random.default_rng(0)
    for y in rng.dirichlet(np.ones(v.size), size=50):
        assert np.dot(v - x, y - x) <= 1e-9


def test_projection_fixed_points():
    p = np.array([0.2, 0.3, 0.5])
    assert np.allclose(project_to_simplex(p), p)
    assert np.allclose(project_to_simplex([2.0, 0.0]), [1.0, 0.0])


def test_rowwise_matches_scalar(rng):
    V = rng.normal(size=(100, 4))
    P = project_rows_to_simplex(V)
    for v, p in zip(V, P):
        assert np.allclose(p, project_to_simplex(v), atol=1e-15)
