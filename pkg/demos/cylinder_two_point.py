"""Dynamical sector on the Lorentz cylinder R x S^1.

Compares the mode sum for the two-point function with a closed form and a
direct quadrature, then looks at the commutator and the frequency content.
"""
import cmath
import math
import random

from abelian_duality import dyncyl
from abelian_duality.dyncyl import GaussianProfile, TestForm

c, s = 0.2, 0.3
rho = TestForm.cos_mode(GaussianProfile(c, s), 1)

fhat = s * math.sqrt(2 * math.pi) * math.exp(-2 * math.pi ** 2 * s * s) * cmath.exp(-2j * math.pi * c)
r = dyncyl.two_point(rho, rho)
print(f"mode sum      {r.value.real:.15e}  (tail bound {r.tail_bound:.1e})")
print(f"closed form   {math.pi / 2 * abs(fhat) ** 2:.15e}")
print(f"quadrature    {dyncyl.two_point_quadrature(rho, rho).real:.15e}")

rng = random.Random(3)
a, b = rho, rho.shifted(0.15) + TestForm.sin_mode(GaussianProfile(-0.3, 0.25), 1, component="dt")
anti = dyncyl.two_point(a, b).value - dyncyl.two_point(b, a).value
print("\nantisymmetric part        ", anti)
print("-i tau (propagator kernel)", -1j * dyncyl.tau_dyn(a, b))
print("tau via d rho and harmonic", dyncyl.tau_dyn(a, b, method="curl"))

# Pure gauge and static forms carry nothing.
g = GaussianProfile(0.0, 0.4)
gauge = TestForm.exact([(2, 0.5, g), (-2, 0.5, g)])
static = TestForm((("dtheta", 0, 1.0, g),))
print("\nomega2(d phi, a) =", dyncyl.two_point(gauge, a).value)
print("omega2(static, a) =", dyncyl.two_point(static, a).value)

report = dyncyl.ground_state_check([(rho, rho), (a, b)])
for row in report["pairs"]:
    print(f"peak frequency {row['peak_frequency']}, negative-frequency leak {row['negative_leak']:.1e}")

group = dyncyl.CylinderDynSector()
state = dyncyl.omega_dyn(group)
from abelian_duality.weyl import WeylElement, gram_positivity  # noqa: E402
print("\nomega_dyn(W(rho)) =", state(WeylElement.generator(group, rho)))
res = gram_positivity(state, [group.random_element(rng) for _ in range(12)])
print("Gram min eigenvalue over 12 generators:", res.min_eigenvalue)
