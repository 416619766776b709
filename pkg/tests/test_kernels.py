from __future__ import annotations

import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartan_lab import _backend, _kernels_py

BACKENDS = [pytest.param(_kernels_py, id="python")]
try:
    from cartan_lab import _kernels  # type: ignore[attr-defined]

    BACKENDS.append(pytest.param(_kernels, id="cython"))
except ImportError:  # pragma: no cover - extension not built
    _kernels = None


def naive_convolution(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def random_symmetric(rng, n, scale=1.0):
    m = rng.standard_normal((n, n)) * scale
    return (m + m.T) / 2


@pytest.mark.parametrize("impl", BACKENDS)
@pytest.mark.parametrize("p", [2, 3, 101, 65537, 2**31 - 1, 2**61 - 1])
def test_poly_mul_matches_naive(impl, p):
    rng = random.Random(p)
    for la, lb in [(1, 1), (3, 7), (24, 25), (40, 90), (200, 150)]:
        a = tuple(rng.randrange(p) for _ in range(la))
        b = tuple(rng.randrange(p) for _ in range(lb))
        assert list(impl.poly_mul_mod(a, b, p)) == naive_convolution(a, b, p)


@pytest.mark.parametrize("impl", BACKENDS)
def test_poly_mul_empty_and_extreme(impl):
    assert impl.poly_mul_mod((), (1, 2), 3) == ()
    p = 2**31 - 1
    a = (p - 1,) * 300
    assert list(impl.poly_mul_mod(a, a, p)) == naive_convolution(a, a, p)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.integers(0, 6), min_size=1, max_size=60),
    st.lists(st.integers(0, 6), min_size=1, max_size=60),
)
def test_backends_agree_on_products(a, b):
    expected = tuple(naive_convolution(a, b, 7))
    assert _kernels_py.poly_mul_mod(tuple(a), tuple(b), 7) == expected
    if _kernels is not None:
        assert _kernels.poly_mul_mod(tuple(a), tuple(b), 7) == expected


@pytest.mark.parametrize("impl", BACKENDS)
def test_jacobi_matches_lapack(impl):
    rng = np.random.default_rng(0)
    for n in range(1, 9):
        for scale in (1e-3, 1.0, 1e6):
            m = random_symmetric(rng, n, scale)
            eig, sweeps = impl.jacobi_eigvalsh(m.tolist(), 1e-12, 100)
            assert sweeps >= 0
            ref = np.linalg.eigvalsh(m)
            assert sorted(eig) == pytest.approx(list(ref), abs=1e-9 * scale * n)


@pytest.mark.parametrize("impl", BACKENDS)
def test_jacobi_diagonal_and_budget(impl):
    eig, sweeps = impl.jacobi_eigvalsh([[3.0, 0.0], [0.0, -1.0]], 1e-12, 100)
    assert sorted(eig) == [-1.0, 3.0] and sweeps == 0
    dense = random_symmetric(np.random.default_rng(1), 6).tolist()
    _, sweeps = impl.jacobi_eigvalsh(dense, 1e-300, 0)
    assert sweeps == -1


@pytest.mark.parametrize("impl", BACKENDS)
def test_jacobi_gram_top_eigenvalue(impl):
    rng = np.random.default_rng(2)
    for n in (2, 3, 4, 6):
        g = rng.standard_normal((n, n))
        eig, _ = impl.jacobi_eigvalsh((g.T @ g).tolist(), 1e-12, 100)
        top = np.linalg.svd(g, compute_uv=False)[0] ** 2
        assert max(eig) == pytest.approx(top, rel=1e-12)


def test_backend_selection():
    assert _backend.BACKEND in ("python", "cython")
    if _kernels is not None:
        assert _backend.BACKEND == "cython" or os.environ.get("CARTAN_LAB_PURE_PYTHON")


def test_pure_python_override():
    env = dict(os.environ, CARTAN_LAB_PURE_PYTHON="1")
    code = "from cartan_lab import _backend; print(_backend.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"

