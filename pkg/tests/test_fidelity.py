import math

import numpy as np
import pytest

from gaussqfi import fock
from gaussqfi.check import sample_params
from gaussqfi.errors import ComputationError
from gaussqfi.fidelity import bures_distance, fidelity, infidelity
from gaussqfi.gaussian import GaussianState, StateParams, from_params


def coherent(x, p=0.0):
    return GaussianState([x, p], np.eye(2))


def rotate(s: GaussianState, angle, shift):
    c, n = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -n], [n, c]])
    return GaussianState(rot @ s.mean + shift, rot @ s.cov @ rot.T)


class TestFidelity:
    def test_identical(self, random_params):
        for p in random_params:
            s = from_params(p)
            assert fidelity(s, s) == pytest.approx(1.0, abs=1e-12)

    def test_coherent_pair(self):
        assert fidelity(coherent(0), coherent(2)) == pytest.approx(math.exp(-1), rel=1e-14)

    def test_coherent_pair_fock(self):
        vac = fock.build_state(StateParams(), 40)
        coh = fock.build_state(StateParams(alpha=1), 40)
        assert fock.uhlmann_fidelity(vac, coh) == pytest.approx(math.exp(-1), rel=1e-10)

    def test_thermal_vs_vacuum(self):
        # rho_vac is pure, so F = <0|rho_th|0> = 1 / (n + 1)
        a, b = from_params(StateParams(n_th=1)), from_params(StateParams())
        expected = fock.uhlmann_fidelity(fock.build_state(StateParams(n_th=1), 60), fock.build_state(StateParams(), 60))
        assert fidelity(a, b) == pytest.approx(0.5, rel=1e-14)
        assert fidelity(a, b) == pytest.approx(expected, abs=1e-8)

    def test_symmetry(self, rng):
        for _ in range(100):
            a, b = from_params(sample_params(rng)), from_params(sample_params(rng))
            assert fidelity(a, b) == pytest.approx(fidelity(b, a), rel=1e-14, abs=1e-300)

    def test_rotation_displacement_invariance(self, rng):
        for _ in range(50):
            a, b = from_params(sample_params(rng)), from_params(sample_params(rng))
            angle = rng.uniform(-math.pi, math.pi)
            shift = rng.normal(size=2)
            f0 = fidelity(a, b)
            f1 = fidelity(rotate(a, angle, shift), rotate(b, angle, shift))
            assert f1 == pytest.approx(f0, rel=1e-12, abs=1e-300)

    def test_bounds(self, rng):
        for _ in range(200):
            f = fidelity(from_params(sample_params(rng)), from_params(sample_params(rng)))
            assert 0 <= f <= 1

    def test_pure_boundary_continuity(self):
        # one state pure (det = 1 exactly) against slightly mixed neighbours
        pure = from_params(StateParams(alpha=0.5, r=0.4, chi=0.2))
        values = [fidelity(pure, from_params(StateParams(alpha=0.5, r=0.4, chi=0.2, n_th=n)))
                  for n in (1e-4, 1e-6, 1e-8, 0.0)]
        assert values[-1] == 1.0
        assert np.all(np.diff(values) > 0)

    def test_both_pure_squeezed(self):
        # pure states: F = |<a|b>|^2; two squeezed vacua with r1, r2 along one axis
        a = from_params(StateParams(r=0.3))
        b = from_params(StateParams(r=-0.5))
        assert fidelity(a, b) == pytest.approx(1 / math.cosh(0.8), rel=1e-13)

    def test_fock_crosscheck(self, rng):
        for _ in range(5):
            p1 = sample_params(rng, "fock")
            p2 = sample_params(rng, "fock")
            n = max(fock.suggest_n_max(p1), fock.suggest_n_max(p2))
            uhl = fock.uhlmann_fidelity(fock.build_state(p1, n), fock.build_state(p2, n))
            assert fidelity(from_params(p1), from_params(p2)) == pytest.approx(uhl, abs=1e-6)


class TestBures:
    def test_identical(self):
        s = from_params(StateParams(alpha=0.3, r=0.2, n_th=0.4))
        assert bures_distance(s, s) == pytest.approx(0.0, abs=1e-7)

    def test_far_apart(self):
        # |delta alpha|^2 = 50
        d = bures_distance(coherent(0), coherent(2 * math.sqrt(50)))
        assert d == pytest.approx(math.sqrt(2), abs=1e-9)

    def test_coherent_pair(self):
        d = bures_distance(coherent(0), coherent(2))
        assert d == pytest.approx(math.sqrt(2 - 2 * math.exp(-0.5)), rel=1e-14)

    def test_small_separation_is_accurate(self):
        # d ~ |delta alpha| for small shifts
        e = 1e-4
        d = bures_distance(coherent(0), coherent(2 * e))
        assert d == pytest.approx(e, rel=1e-6)

    def test_infidelity(self):
        assert infidelity(coherent(0), coherent(2)) == pytest.approx(1 - math.exp(-1))


def test_degenerate_guard():
    # an unphysical pair that bypasses validation would divide by ~0
    a = from_params(StateParams())
    b = object.__new__(GaussianState)
    object.__setattr__(b, "mean", np.zeros(2))
    object.__setattr__(b, "cov", -np.eye(2))
    with pytest.raises(ComputationError):
        fidelity(a, b)
