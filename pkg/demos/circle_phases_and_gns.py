"""Topological sectors of the circle: exact phases, the vacuum state and its GNS space.

Run with ``python3 demos/circle_phases_and_gns.py``.
"""
from fractions import Fraction as F

from abelian_duality.gns import duality_unitary, flux_operator, ket, phase_operator, vacuum_expectation
from abelian_duality.sectors import TopFreeGroup, duality_free, free_element, sigma_free
from abelian_duality.surface import SpacetimeModel, builtin_surface
from abelian_duality.weyl import WeylElement, gelfand_witness, omega_free, weyl_mul, weyl_star

M = SpacetimeModel(builtin_surface("circle"), 1, 2)
G = TopFreeGroup(M)

# A holonomy 1/4 paired with one unit of magnetic flux.
g = free_element(M, u=[F(1, 4)])
h = free_element(M, zt=[1])
print("sigma(g, h) =", sigma_free(g, h, M).value)
print("sigma(h, g) =", sigma_free(h, g, M).value)

Wg, Wh = WeylElement.generator(G, g), WeylElement.generator(G, h)
prod = weyl_mul(Wg, Wh)
print("W(g) W(h) =", [(str(x), c.value()) for x, c in prod.items()])

state = omega_free(G)
print("omega_free(W(g)) =", state(Wg), " omega_free(W(h)) =", state(Wh))

# The state does not see the torus part, so this combination is a null vector.
a = gelfand_witness(G, free_element(M, u=[F(1, 3)], z=[1]))
print("null element has", len(a.terms), "terms; omega_free(a* a) =",
      state.exact_value(weyl_mul(weyl_star(a), a)).value())

# GNS side: the vacuum reproduces the state.
print("<0|pi(W(g) W(h))|0> =", vacuum_expectation(prod).value(), " omega_free =", state(prod))
v = phase_operator(M, [F(1, 4)], [0]).apply(ket(M, [0], [1]))
print("Phi(1/4, 0)|0,1> amplitude:", v.amplitude([0], [1]))
P = flux_operator(M, [0], [F(1, 2)])
print("P(0, 1/2)|3,0> =", P.apply(ket(M, [3], [0])).amplitude([3], [0]), "|3,0>")

# Electric/magnetic exchange.
print("zeta(g) =", duality_free(g, M))
print("U|1,0> =", duality_unitary(ket(M, [1], [0])).to_json())
