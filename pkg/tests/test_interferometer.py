"""Tests for the two-qubit Mach-Zehnder model and visibility formulas."""

import numpy as np
import pytest

from polphase import interferometer as itf
from polphase import su2

RNG = np.random.default_rng(31415)

KET_VX = np.array([1, 0, 0, 0], dtype=complex)
KET_VY = np.array([0, 1, 0, 0], dtype=complex)


def random_su2():
    return su2.from_yzy(*RNG.uniform(-2 * np.pi, 2 * np.pi, 3))


def test_beam_splitter_twice_is_i_times_swap():
    # direct 4x4 product oracle: BS^2 sends |VX> to i |VY>
    bs2 = itf.beam_splitter() @ itf.beam_splitter()
    np.testing.assert_allclose(bs2 @ KET_VX, 1j * KET_VY, atol=1e-15)
    swap = np.kron(np.eye(2), np.array([[0, 1], [1, 0]]))
    np.testing.assert_allclose(bs2, 1j * swap, atol=1e-15)


def test_beam_splitter_splits_fifty_fifty():
    out = itf.beam_splitter() @ KET_VX
    assert abs(out[0]) ** 2 == pytest.approx(0.5)
    assert abs(out[1]) ** 2 == pytest.approx(0.5)


def test_beam_splitter_leaves_polarization_alone():
    bs = itf.beam_splitter()
    # no element couples V to H
    assert np.all(bs[:2, 2:] == 0) and np.all(bs[2:, :2] == 0)


def test_mirror_action():
    np.testing.assert_allclose(itf.mirror() @ KET_VX, -1j * KET_VY, atol=1e-15)


def test_mirror_squared_is_minus_identity():
    m = itf.mirror()
    np.testing.assert_allclose(m @ m, -np.eye(4), atol=1e-15)
    assert np.all(m[:2, 2:] == 0) and np.all(m[2:, :2] == 0)


def test_phase_shifter_zero_is_identity():
    np.testing.assert_allclose(itf.phase_shifter("X", 0.0), np.eye(4))


def test_phase_shifter_pi_flips_x_only():
    p = itf.phase_shifter("X", np.pi)
    state = np.array([0.5, 0.5, 0.5, 0.5], dtype=complex)
    out = p @ state
    np.testing.assert_allclose(out, [-0.5, 0.5, -0.5, 0.5], atol=1e-15)


def test_phase_shifter_composition_law():
    a, b = 0.7, -1.9
    np.testing.assert_allclose(
        itf.phase_shifter("Y", a) @ itf.phase_shifter("Y", b),
        itf.phase_shifter("Y", a + b),
        atol=1e-15,
    )


def test_phase_shifter_bad_arm():
    with pytest.raises(ValueError):
        itf.phase_shifter("Z", 0.0)


def test_arm_unitary_identity():
    np.testing.assert_allclose(itf.arm_unitary(np.eye(2), "X"), np.eye(4))


def test_arm_unitary_acts_on_chosen_arm_only():
    u = random_su2()
    op = itf.arm_unitary(u, "X")
    # Y amplitudes untouched
    np.testing.assert_allclose(op @ KET_VY, KET_VY, atol=1e-15)
    out = op @ KET_VX
    np.testing.assert_allclose(out[0::2], u @ np.array([1, 0]), atol=1e-15)


def test_arm_unitary_unitary():
    for _ in range(100):
        op = itf.arm_unitary(random_su2(), "Y")
        np.testing.assert_allclose(op.conj().T @ op, np.eye(4), atol=su2.EPS_MAT)


def test_mach_zehnder_empty_instrument_is_identity():
    # closed form for U = 1, phi = 0, checked against the explicit product
    got = itf.mach_zehnder(np.eye(2), 0.0)
    np.testing.assert_allclose(got, np.eye(4), atol=1e-15)
    product = itf.beam_splitter() @ itf.mirror() @ itf.beam_splitter()
    np.testing.assert_allclose(got, product, atol=1e-15)


def test_mach_zehnder_unitary_and_power_conserving():
    for _ in range(500):
        u = random_su2()
        phi = RNG.uniform(-np.pi, np.pi)
        ut = itf.mach_zehnder(u, phi)
        np.testing.assert_allclose(ut.conj().T @ ut, np.eye(4), atol=su2.EPS_MAT)
        total = itf.output_intensity("V", u, phi) + itf.output_intensity(
            "V", u, phi, complementary=True
        )
        assert abs(total - 1.0) < 1e-12


def test_mach_zehnder_arms_configurable():
    # retarders on arm X with the scan on arm Y give the same detector fringe
    for _ in range(50):
        u = random_su2()
        phi = RNG.uniform(-np.pi, np.pi)
        swapped = itf.mach_zehnder(u, phi, u_arm="X", phase_arm="Y")
        np.testing.assert_allclose(
            swapped.conj().T @ swapped, np.eye(4), atol=su2.EPS_MAT
        )
        out = swapped @ KET_VX
        i_dark = abs(out[1]) ** 2 + abs(out[3]) ** 2
        assert abs(i_dark - itf.output_intensity("V", u, phi)) < 1e-12


def test_output_intensity_empty_instrument():
    phis = np.linspace(0, 2 * np.pi, 37)
    for phi in phis:
        assert itf.output_intensity("V", np.eye(2), phi) == pytest.approx(
            0.5 * (1 - np.cos(phi)), abs=1e-12
        )


def test_output_intensity_zyz_form():
    # I = (1/2)[1 - cos(beta) cos(phi - delta)] for V input, +delta for H
    for _ in range(300):
        u = random_su2()
        p = su2.to_zyz(u)
        phi = RNG.uniform(-2 * np.pi, 2 * np.pi)
        iv = itf.output_intensity("V", u, phi)
        ih = itf.output_intensity("H", u, phi)
        assert abs(iv - 0.5 * (1 - np.cos(p.beta) * np.cos(phi - p.delta))) < 1e-12
        assert abs(ih - 0.5 * (1 - np.cos(p.beta) * np.cos(phi + p.delta))) < 1e-12


def test_output_intensity_yzy_form():
    # same intensity written in the y-z-y angles
    for _ in range(300):
        xi, eta, zeta = RNG.uniform(-2 * np.pi, 2 * np.pi, 3)
        phi = RNG.uniform(-2 * np.pi, 2 * np.pi)
        iv = itf.output_intensity("V", su2.from_yzy(xi, eta, zeta), phi)
        expected = 0.5 * (
            1
            - np.cos(eta / 2) * np.cos((xi + zeta) / 2) * np.cos(phi)
            - np.sin(eta / 2) * np.cos((xi - zeta) / 2) * np.sin(phi)
        )
        assert abs(iv - expected) < 1e-12


def test_half_fringes_shifted_by_two_delta():
    for _ in range(200):
        u = random_su2()
        p = su2.to_zyz(u)
        phi = RNG.uniform(-np.pi, np.pi)
        iv_shifted = itf.output_intensity("V", u, phi + 2 * p.delta)
        ih = itf.output_intensity("H", u, phi)
        assert abs(ih - iv_shifted) < 1e-12


def test_split_beam_shift_known_delta():
    u = su2.from_zyz(np.pi / 4, 0.3, 0.9)
    grid = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    got = itf.split_beam_shift(u, grid)
    assert abs(su2.wrap_angle(got - 1.8)) < 2 * np.pi / 4096


def test_split_beam_shift_identity_is_zero():
    grid = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    assert abs(itf.split_beam_shift(np.eye(2), grid)) < 1e-9


def test_split_beam_shift_random_recovery():
    grid = np.linspace(0, 2 * np.pi, 1024, endpoint=False)
    for _ in range(100):
        beta = RNG.uniform(0, np.pi / 3)
        delta = RNG.uniform(-np.pi, np.pi)
        u = su2.from_zyz(beta, RNG.uniform(-np.pi, np.pi), delta)
        got = itf.split_beam_shift(u, grid)
        assert abs(su2.wrap_angle(got - 2 * delta)) < 2 * np.pi / 1024


def test_split_beam_shift_zero_visibility():
    with pytest.raises(itf.ZeroVisibility):
        itf.split_beam_shift(
            su2.from_zyz(np.pi / 2, 0.1, 0.4),
            np.linspace(0, 2 * np.pi, 64, endpoint=False),
        )


def test_split_beam_shift_grid_validation():
    u = np.eye(2)
    with pytest.raises(ValueError):
        itf.split_beam_shift(u, np.linspace(0, 2 * np.pi, 8, endpoint=False))
    with pytest.raises(ValueError):
        itf.split_beam_shift(u, np.linspace(0, np.pi, 64, endpoint=False))
    with pytest.raises(ValueError):
        itf.split_beam_shift(u, np.sort(RNG.uniform(0, 2 * np.pi, 64)))


def test_visibility_yzy_special_cases():
    assert itf.visibility_yzy(0.0, 1.3, 0.0) == pytest.approx(1.0)
    assert itf.visibility_yzy(np.pi, 0.7, np.pi) == pytest.approx(1.0)


def test_visibility_yzy_matches_matrix_element():
    for _ in range(1000):
        xi, eta, zeta = RNG.uniform(-2 * np.pi, 2 * np.pi, 3)
        u = su2.from_yzy(xi, eta, zeta)
        assert abs(itf.visibility_yzy(xi, eta, zeta) - abs(u[0, 0])) < 1e-12


def test_visibility_equals_numeric_contrast():
    # (I_max - I_min) / (I_max + I_min) from a dense sweep, quadratically
    # interpolated around the best samples
    phis = np.linspace(0, 2 * np.pi, 8192, endpoint=False)
    for _ in range(25):
        xi, eta, zeta = RNG.uniform(-2 * np.pi, 2 * np.pi, 3)
        u = su2.from_yzy(xi, eta, zeta)
        intensity, _ = itf._intensity_sweep("V", u, phis)

        def refined(idx, sign):
            ym = intensity[(idx - 1) % len(phis)]
            y0 = intensity[idx]
            yp = intensity[(idx + 1) % len(phis)]
            den = ym - 2 * y0 + yp
            off = 0.5 * (ym - yp) / den if den != 0 else 0.0
            return y0 - 0.25 * (ym - yp) * off

        i_max = refined(int(np.argmax(intensity)), +1)
        i_min = refined(int(np.argmin(intensity)), -1)
        contrast = (i_max - i_min) / (i_max + i_min)
        assert abs(itf.visibility_yzy(xi, eta, zeta) - contrast) < 1e-9


def test_visibility_plates_identity_array():
    assert itf.visibility_plates(np.pi / 4, -np.pi / 4, np.pi / 4) == pytest.approx(1.0)


def test_visibility_plates_matches_matrix_route():
    from polphase import plates

    for _ in range(1000):
        t1, t2, t3 = RNG.uniform(-np.pi, np.pi, 3)
        u = plates.compose(
            [plates.quarter_wave(t1), plates.half_wave(t2), plates.quarter_wave(t3)]
        )
        assert abs(itf.visibility_plates(t1, t2, t3) - abs(u[0, 0])) < 1e-12


def test_visibility_plates_theta2_slice_shape():
    # fixing theta1 and theta3 and sweeping theta2 keeps the closed form in
    # lockstep with the matrix route across the slice
    from polphase import plates

    t1, t3 = 0.3, -0.9
    for t2 in np.linspace(-np.pi, np.pi, 41):
        u = plates.compose(
            [plates.quarter_wave(t1), plates.half_wave(t2), plates.quarter_wave(t3)]
        )
        assert abs(itf.visibility_plates(t1, t2, t3) - abs(u[0, 0])) < 1e-12
