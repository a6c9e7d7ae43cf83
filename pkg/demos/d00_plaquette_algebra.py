"""
Plaquette operators on the ruby lattice
=======================================

Build a small torus, list its plaquette symmetries and count how many of
them are independent.
"""

import itertools

from rubycode import COLORS, CouplingParams, build_hamiltonian, build_patch, commutes
from rubycode import PauliString, plaquette_operators, symplectic_rank

# a 2x2 torus: 24 triangles, 72 spins, 12 plaquettes of three colours
torus = build_patch(2, 2, "periodic")
print(torus.vertex_count, "spins,", len(torus.plaquettes), "plaquettes")
print({str(c): sum(p.color == c for p in torus.plaquettes) for c in COLORS})

# each plaquette carries three operators with P1 P2 P3 = -1
P1, P2, P3 = plaquette_operators(torus, 0)
print("weight of P1:", P1.weight)
print("P1 P2 P3 == -1:", P1 * P2 * P3 == -PauliString.identity(torus.vertex_count))

# all of them commute with each other and with every link term
h = build_hamiltonian(torus, CouplingParams(1.0, 0.7, 1.3))
ops = [p for k in range(len(torus.plaquettes)) for p in plaquette_operators(torus, k)]
print("mutually commuting:", all(commutes(a, b) for a, b in itertools.combinations(ops, 2)))
print("commute with H:", all(commutes(p, t) for p in ops for _, t in h.terms))

# two operators per plaquette, minus two global relations
rank = symplectic_rank(ops)
print(f"rank {rank} = 2*{len(torus.plaquettes)} - {2 * len(torus.plaquettes) - rank}")
