import math

import numpy as np
import pytest

from gaussqfi.check import sample_family
from gaussqfi.errors import SmoothnessError, StepTooSmallError
from gaussqfi.families import FAMILY_NAMES, ParamFamily, closed_form_qfi
from gaussqfi.fd_oracle import (
    check_smoothness,
    default_step,
    fidelity_curvature,
    qfi_from_bures,
    qfi_from_fidelity,
)
from gaussqfi.gaussian import GaussianState, StateParams

COHERENT_ALPHA = ParamFamily("alpha", StateParams(alpha=0.0))


def constant(theta):
    return GaussianState([0.4, -0.2], [[2.0, 0.3], [0.3, 1.5]])


class TestFidelityCurvature:
    def test_coherent_alpha(self):
        assert qfi_from_fidelity(COHERENT_ALPHA.state_at, 0.0, 1e-4) == pytest.approx(4.0, abs=1e-5)

    def test_constant(self):
        assert qfi_from_fidelity(constant, 0.3) == 0.0

    def test_chi(self):
        f = ParamFamily("chi", StateParams.from_sigma(sigma=0.5, chi=0.2))
        assert closed_form_qfi(f) == pytest.approx(7.03125, rel=1e-14)
        assert qfi_from_fidelity(f.state_at, f.point, f.fd_step) == pytest.approx(7.03125, rel=1e-4)

    def test_step_too_small(self):
        with pytest.raises(StepTooSmallError):
            qfi_from_fidelity(COHERENT_ALPHA.state_at, 0.0, 1e-12)

    def test_bad_step(self):
        with pytest.raises(ValueError):
            qfi_from_fidelity(COHERENT_ALPHA.state_at, 0.0, 0.0)

    def test_non_smooth(self):
        def kinked(theta):
            return GaussianState([2 * math.sqrt(max(theta, 0.0)), 0.0], np.eye(2))

        with pytest.raises(SmoothnessError):
            check_smoothness(kinked, 0.0, 1e-3)
        with pytest.raises(SmoothnessError):
            qfi_from_fidelity(kinked, 0.0, 1e-3)

    @pytest.mark.parametrize("name", FAMILY_NAMES)
    @pytest.mark.parametrize("h_scale", [1.0, 0.1])
    def test_smoothness(self, name, h_scale, rng):
        for _ in range(10):
            f = sample_family(name, rng)
            first = check_smoothness(f.state_at, f.point, h_scale * f.fd_step)
            assert abs(first) <= 10 * h_scale * f.fd_step * max(1.0, closed_form_qfi(f)) + 1e-9

    def test_richardson_order(self):
        f = ParamFamily("psi", StateParams(alpha=1.0, r=0.4, chi=0.3, n_th=0.2))
        exact = closed_form_qfi(f)
        e1 = abs(fidelity_curvature(f.state_at, f.point, 4e-2) - exact)
        e2 = abs(fidelity_curvature(f.state_at, f.point, 2e-2) - exact)
        assert e1 / e2 >= 3.5

    @pytest.mark.parametrize("name", FAMILY_NAMES)
    def test_agrees_with_closed_form(self, name, rng):
        for _ in range(20):
            f = sample_family(name, rng)
            assert qfi_from_fidelity(f.state_at, f.point, f.fd_step) == pytest.approx(closed_form_qfi(f), rel=1e-4)

    def test_default_step(self):
        assert default_step(0.5) == 1e-3
        assert default_step(-20.0) == pytest.approx(2e-2)


class TestBures:
    def test_coherent_alpha(self):
        est = qfi_from_bures(COHERENT_ALPHA.state_at, 0.0, 1e-4)
        assert est.value == pytest.approx(4.0, rel=1e-3)
        assert est.extrapolated == pytest.approx(4.0, rel=1e-3)
        assert est.h == 1e-4

    def test_constant(self):
        assert qfi_from_bures(constant, 0.0).extrapolated == 0.0

    @pytest.mark.parametrize("name", FAMILY_NAMES)
    def test_cross_oracle(self, name, rng):
        for _ in range(10):
            f = sample_family(name, rng)
            a = qfi_from_bures(f.state_at, f.point, f.fd_step).extrapolated
            b = qfi_from_fidelity(f.state_at, f.point, f.fd_step)
            assert a == pytest.approx(b, rel=1e-3)
