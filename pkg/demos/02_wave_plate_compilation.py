"""Compiling polarization transformations into rotatable wave plates.

Any SU(2) transformation can be realized with two quarter-wave plates and one
half-wave plate; the five-plate extension realizes the frame-conjugated
operator used by the single-beam phase measurement.  This script compiles a
few arrays, verifies the compilations against the matrix route, and exercises
the plate-reduction identities.
"""

import numpy as np

import polphase as pp
from polphase import plates

np.set_printoptions(precision=4, suppress=True)


def show(array):
    return "  ".join(f"{p.kind}({p.axis:+.4f})" for p in array)


# --- three-plate compilation ------------------------------------------------
xi, eta, zeta = 2.2, -0.9, 0.6
array = pp.decompose_qhq(xi, eta, zeta)
print("target U(2.2, -0.9, 0.6) compiles to (traversal order):")
print("  " + show(array))
residual = np.max(np.abs(pp.compose(array) - pp.from_yzy(xi, eta, zeta)))
print(f"  compose-back residual: {residual:.2e}  (exact, no global sign)")

identity = pp.decompose_qhq(0.0, 0.0, 0.0)
print("\nthe identity compiles to the classic alignment array:")
print("  " + show(identity))

# --- reduction identities ----------------------------------------------------
q, h = plates.quarter_wave(0.5), plates.half_wave(-0.2)
swapped = pp.simplify_qh(q, h)
print("\nswap rule     [Q(0.5), H(-0.2)]  ->", show(swapped))
print(f"  residual {np.max(np.abs(pp.compose([q, h]) - pp.compose(swapped))):.2e}")

triple = [plates.quarter_wave(0.3), plates.half_wave(1.0), plates.half_wave(-0.4)]
merged = pp.merge_qhh(*triple)
print("merge rule    [Q, H, H]          ->", show(merged))
print(f"  residual {np.max(np.abs(pp.compose(triple) - pp.compose(merged))):.2e}")

# --- five-plate array for the single-beam method -----------------------------
phi = 0.8
five = pp.polarimetric_array(xi, eta, zeta, phi)
target = pp.polarimetric_target(pp.from_yzy(xi, eta, zeta), phi)
print(f"\nfive-plate scan array at phi={phi}:")
print("  " + show(five))
print(f"  conjugated-target residual: {np.max(np.abs(pp.compose(five) - target)):.2e}")

# rotating the whole assembly: every axis moves by the same -dphi/2
moved = pp.polarimetric_array(xi, eta, zeta, phi + 0.3)
shifts = [(p1.axis - p0.axis) % np.pi for p0, p1 in zip(five, moved)]
print(f"  axis steps under phi -> phi+0.3 (mod pi): {np.round(shifts, 6)}")

# --- plate files -------------------------------------------------------------
text = pp.format_plate_array(five)
print("\nserialized plate list:")
print("  " + "  |  ".join(text.strip().splitlines()))
parsed = pp.parse_plate_array(text)
print(f"  parse round-trip ok: {all(a == b for a, b in zip(five, parsed))}")
