"""
Two-qubit gates from braiding
=============================

Encode qubits in pairs of sites, braid a control boson around a target
and read off the controlled phase. A Hadamard on the target turns it into
a CNOT.
"""

import numpy as np

from rubycode.gates import (CNOT, SCHEMES, controlled_phase, hadamard, make_layout,
                            target_x_compositions, verify_scheme)

# every encoding gives a diagonal phase table
for scheme in SCHEMES:
    table = controlled_phase(make_layout(scheme))
    print(f"{scheme:13s}", [(r.logical, r.physical, r.phase) for r in table.rows])

# three of them give CZ; the colour switch needs its target labels swapped
print(verify_scheme("color_switch").note)

# CZ conjugated by a Hadamard built from the target's own X and Z
layout = make_layout("hopping")
h = np.kron(np.eye(2), hadamard(layout.target))
m = h @ controlled_phase(layout).matrix() @ h
print(np.round(m.real, 12))
print("deviation from CNOT:", np.max(np.abs(m - CNOT)))

# a bare target X before or after the braid is not enough
for name, comp in target_x_compositions(layout).items():
    print(name, "is CNOT:", comp["equals_cnot_up_to_phase"])
