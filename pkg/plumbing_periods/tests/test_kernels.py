#!/usr/bin/env python
"""
Test the genus-0 Cauchy kernel and bidifferential.
"""
import pytest

from plumbing_periods.curve.model import HalfEdge
from plumbing_periods.differentials.kernels import (
    Genus0Kernel,
    a_normalization_check,
    derivative_defect,
    get_kernel,
    register_kernel,
    symmetry_defect,
)
from plumbing_periods.differentials.ratdiff import RationalDifferential
from plumbing_periods.errors import PlumbingError, PoleError


@pytest.fixture
def kernel():
    return get_kernel()


def test_cauchy_kernel_is_normalized(kernel):
    """The loop integral of K(., w) is 1 around w and 0 elsewhere."""
    assert abs(a_normalization_check(kernel, 0.3j, 0, 1) - 1) < 1e-12
    assert abs(a_normalization_check(kernel, 3.0, 0, 1)) < 1e-12


def test_bidifferential_symmetry_and_derivative(kernel):
    """omega is symmetric and equals 2 pi i d/dw K."""
    points = [0.1, 1 + 1j, -2.0 + 0.5j, 3j]
    assert symmetry_defect(kernel, points) == 0
    assert derivative_defect(kernel, 1 + 1j, -0.5) < 1e-8


def test_kernels_on_diagonal_raise(kernel):
    """Both kernels are singular on the diagonal."""
    with pytest.raises(PoleError):
        kernel.cauchy(1.0, 1.0)
    with pytest.raises(PoleError):
        kernel.bidifferential(2j, 2j)


def test_hat_kernels_vanish_in_one_chart(kernel):
    """Affine charts carry no regular part of the kernels."""
    assert kernel.cauchy_hat(0.1, 0.2, same_chart=True) == 0
    assert kernel.bidifferential_hat(0.1, 0.2, same_chart=True) == 0
    assert kernel.bidifferential_hat(0.1, 2.1, same_chart=False) == pytest.approx(0.25)


def test_beta(g2_curve, banana_curve):
    """beta_{e,f} = rho_e rho_f / (q_e - q_f)^2."""
    kernel = Genus0Kernel()
    e, f = HalfEdge("e1", 1), HalfEdge("e2", 1)
    assert kernel.beta(g2_curve, e, f) == pytest.approx(1 / (3 - 3j) ** 2)
    assert kernel.beta(g2_curve, e, -e) == pytest.approx(1 / 36)
    assert kernel.beta(g2_curve, e, e) == 0
    with pytest.raises(PlumbingError):
        kernel.beta(banana_curve, e, HalfEdge("e1", -1))


def test_cauchy_transform_keeps_enclosed_principal_parts(kernel):
    """Transform over a circle keeps the poles inside it."""
    phi = RationalDifferential({(0.1, 2): 1.0, (5.0, 1): 2.0})
    transformed = kernel.cauchy_transform(phi, 0, 1)
    assert transformed.poles == [0.1]


def test_kernel_registry():
    """Kernels are looked up by name."""

    class Shifted(Genus0Kernel):
        name = "shifted"

    register_kernel("shifted", Shifted)
    assert isinstance(get_kernel("shifted"), Shifted)
    with pytest.raises(PlumbingError):
        get_kernel("no-such-kernel")
