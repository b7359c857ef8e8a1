"""Shared fixtures and numeric helpers for the test suite."""

from fractions import Fraction

import numpy as np
import pytest

from ordaffect.trace import AnnotationTrace


def central_diff(f, x, h=1e-5):
    """Central finite-difference derivative of a scalar function."""
    return (f(x + h) - f(x - h)) / (2.0 * h)


def rel_err(analytic, numeric, floor=1e-8):
    """Relative error with a floor so near-zero gradients compare sanely."""
    denom = max(abs(analytic), abs(numeric), floor)
    return abs(analytic - numeric) / denom


def grad_check_array(loss_fn, grad, arr, h=1e-5, floor=1e-8):
    """Max relative error between `grad` and finite differences of loss_fn.

    loss_fn takes no arguments and reads `arr` in place; every element is
    perturbed in turn.
    """
    worst = 0.0
    it = np.nditer(arr, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        keep = arr[idx]
        arr[idx] = keep + h
        up = loss_fn()
        arr[idx] = keep - h
        down = loss_fn()
        arr[idx] = keep
        numeric = (up - down) / (2.0 * h)
        worst = max(worst, rel_err(grad[idx], numeric, floor))
    return worst


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def short_trace():
    return AnnotationTrace(np.array([0.0, 1.0, 0.5, -0.5, 0.0]), Fraction(4))
