"""
Braiding coloured bosons
========================

Move one boson around another, on the lattice and in the abstract fusion
rules, and compare the phases.
"""

import itertools

from rubycode import COLORS
from rubycode.anyons import (AnyonConfig, BraidSchedule, Loop, StatisticsTable,
                             accumulate_phase, default_board, derive_exchange_phase,
                             monodromy_cases)

# full monodromy from the string operators, on three deformed loops each
for mover, enclosed in itertools.product(COLORS, repeat=2):
    phases = [r.phase for r in monodromy_cases(mover, enclosed, count=3)]
    print(f"{mover} around {enclosed}: {phases}")

# exchanging two equal bosons
print("exchange:", {str(c): derive_exchange_phase(c) for c in COLORS})

# the abstract table, derived from the same rules, agrees
table = StatisticsTable.standard()
print("abstract monodromy:", {f"{a}{b}": v for (a, b), v in table.monodromy.items()})

# a schedule on the board: one loop around a site that holds a g boson
board = default_board()
center = min(range(board.n_sites), key=board.centrality)
ring = board.ring([center])
loop = BraidSchedule((Loop(ring[0], tuple(ring)),))
for enclosed in COLORS:
    config = AnyonConfig({ring[0]: COLORS[0], center: enclosed})
    print(f"{COLORS[0]} loop around {enclosed}:", accumulate_phase(config, loop, board))
