"""Constructing SU(2) polarization transformations and reading off the phase.

Walks through the two Euler factorizations (y-z-y and z-y-z), converts
between them, and shows that the Pancharatnam phase arg<i|U|i> of a
transformed state is exactly the z-y-z angle delta.
"""

import numpy as np

import polphase as pp

np.set_printoptions(precision=4, suppress=True)

# --- build the same transformation two ways --------------------------------
xi, eta, zeta = 1.0, 0.7, -0.4
u = pp.from_yzy(xi, eta, zeta)
print("U(xi=1.0, eta=0.7, zeta=-0.4) =")
print(u)

zyz = pp.to_zyz(u)
print(f"\nconverted to z-y-z angles: beta={zyz.beta:.6f}, "
      f"gamma={zyz.gamma:.6f}, delta={zyz.delta:.6f}")

u2 = pp.from_zyz(zyz.beta, zyz.gamma, zyz.delta)
print(f"round-trip residual: {np.max(np.abs(u - u2)):.2e}")

# --- the phase of the transformed state is delta ---------------------------
final = pp.apply(u, pp.KET_V)
phase = pp.pancharatnam_phase(pp.KET_V, final)
print(f"\nPancharatnam phase arg<V|U|V> = {phase:.6f}  (delta = {zyz.delta:.6f})")
print(f"visibility of the corresponding fringe = cos(beta) = {np.cos(zyz.beta):.6f}")

# --- degenerate corners are flagged, not fudged ----------------------------
pure_phase = pp.to_zyz(np.diag([np.exp(1j * np.pi / 3), np.exp(-1j * np.pi / 3)]))
print(f"\npure z-rotation: delta={pure_phase.delta:.6f}, "
      f"gamma defined? {pure_phase.gamma_defined}")

try:
    pp.pancharatnam_phase(pp.KET_V, pp.KET_H)
except pp.OrthogonalStates as exc:
    print(f"orthogonal states have no relative phase: {exc}")

# --- the sign from anticommuting Pauli operators ---------------------------
# sigma_x sigma_y = -sigma_y sigma_x: applying the two products to the same
# state leaves states differing by a pure sign, i.e. a phase of pi
print(f"\nanticommutation phase = {pp.anticommutation_phase():.15f}  (pi = {np.pi:.15f})")
