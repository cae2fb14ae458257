import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from hsmeasure import kernels

BACKENDS = ["python"] + (["cython"] if kernels.HAS_CYTHON else [])


def brute_signs(n):
    return np.array(list(itertools.product([1.0, -1.0], repeat=n)))


@pytest.fixture(params=BACKENDS)
def kmod(request):
    return kernels.get_backend(request.param)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, 4.0, 2.7])
@pytest.mark.parametrize("n", [1, 2, 5, 13, 15])
def test_sign_moment(kmod, n, p):
    rng = np.random.default_rng(n)
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    S = brute_signs(n)
    want = np.mean(np.abs(S @ a) ** p)
    got = kmod.sign_moment(np.ascontiguousarray(a.real), np.ascontiguousarray(a.imag), p)
    assert got == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("n", [1, 3, 14])
def test_sign_tail_counts(kmod, n):
    rng = np.random.default_rng(n)
    a = rng.standard_normal(n)
    S = brute_signs(n)
    sums = np.abs(S @ a)
    t = np.sort(np.concatenate([[0.0], rng.uniform(0, np.abs(a).sum(), 6), [np.abs(a).sum() + 1]]))
    want = [(sums > x).sum() for x in t]
    got = kmod.sign_tail_counts(a, t)
    assert list(got) == want


@pytest.mark.parametrize("n,d", [(1, 1), (4, 3), (14, 2)])
def test_max_sign_norm(kmod, n, d):
    rng = np.random.default_rng(n * 10 + d)
    phi = rng.standard_normal((n, d))
    S = brute_signs(n)
    want = np.linalg.norm(S @ phi, axis=1).max()
    val, signs = kmod.max_sign_norm(phi)
    assert val == pytest.approx(want, rel=1e-12)
    assert np.linalg.norm(signs.astype(float) @ phi) == pytest.approx(val, rel=1e-12)


@pytest.mark.parametrize("n", [1, 5, 14])
def test_max_subset_modulus(kmod, n):
    rng = np.random.default_rng(n)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    want = max(abs(sum(z[list(c)])) for r in range(n + 1) for c in itertools.combinations(range(n), r))
    val, mask = kmod.max_subset_modulus(np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag))
    assert val == pytest.approx(want, rel=1e-12)
    assert abs(sum(z[k] for k in range(n) if (mask >> k) & 1)) == pytest.approx(val, rel=1e-12)


@pytest.mark.parametrize("rows,n", [(1, 1), (3, 6), (2, 14)])
def test_max_sign_l1(kmod, rows, n):
    rng = np.random.default_rng(rows * 100 + n)
    x = rng.standard_normal((rows, n))
    S = brute_signs(n)
    want = np.abs(S @ x.T).sum(axis=1).max()
    val, signs = kmod.max_sign_l1(x)
    assert val == pytest.approx(want, rel=1e-12)


def test_backends_agree_on_large_inputs():
    if not kernels.HAS_CYTHON:
        pytest.skip("compiled kernels not built")
    c, p = kernels.get_backend("cython"), kernels.get_backend("python")
    rng = np.random.default_rng(0)
    a = rng.standard_normal(20)
    z = np.zeros(20)
    assert c.sign_moment(a, z, 3.0) == pytest.approx(p.sign_moment(a, z, 3.0), rel=1e-12)
    phi = rng.standard_normal((18, 3))
    assert c.max_sign_norm(phi)[0] == pytest.approx(p.max_sign_norm(phi)[0], rel=1e-12)


def test_empty_inputs(kmod):
    e = np.zeros(0)
    assert kmod.sign_moment(e, e, 2.0) == 0.0
    assert kmod.max_subset_modulus(e, e)[0] == 0.0


def test_env_var_forces_python_backend():
    env = dict(os.environ, HSMEASURE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import hsmeasure.kernels as k; print(k.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")
