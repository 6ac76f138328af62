import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from toricembed import _kernels_py, kernels

compiled = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernel not built")


def naive_union(weights, n):
    """Max over partitions of the ball sequences, by direct DP over pairs."""
    from toricembed.ech import ball_degree
    acc = [0] * (n + 1)
    for w in weights:
        seq = [ball_degree(k) * w for k in range(n + 1)]
        acc = [max(acc[i] + seq[k - i] for i in range(k + 1)) for k in range(n + 1)]
    return acc


@given(st.lists(st.integers(1, 9), max_size=4), st.integers(0, 40))
def test_python_union_matches_naive(weights, n):
    assert _kernels_py.ball_union(weights, n) == naive_union(weights, n)


@compiled
@settings(deadline=None)
@given(st.lists(st.integers(1, 30), max_size=6), st.integers(0, 300))
def test_backends_agree_on_union(weights, n):
    assert kernels.ball_union(weights, n, "python") == kernels.ball_union(weights, n, "cython")


@compiled
@settings(deadline=None, max_examples=30)
@given(st.integers(2, 12), st.lists(st.integers(1, 5), max_size=4), st.integers(0, 400))
def test_backends_agree_on_capacities(B, cuts, K):
    cuts = sorted(cuts, reverse=True)
    if sum(c * c for c in cuts) >= B * B or (len(cuts) > 1 and cuts[0] + cuts[1] > B):
        return
    assert (kernels.convex_capacities_scaled(B, cuts, K, "python")
            == kernels.convex_capacities_scaled(B, cuts, K, "cython"))


def test_overflow_falls_back_to_python():
    huge = [1 << 61]
    assert not kernels._union_fits(huge, 10)
    assert kernels.ball_union(huge, 3) == [0, 1 << 61, 1 << 61, 2 << 61]


def test_environment_forces_fallback():
    env = dict(os.environ, TORICEMBED_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from toricembed import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_short_union_raises_index_error():
    with pytest.raises(IndexError):
        _kernels_py.convex_sequence(3, [0, 1], 2, 50)
