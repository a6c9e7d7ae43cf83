"""The three colours r, g, b and the cyclic bar operation."""

from __future__ import annotations

import enum


class Color(enum.IntEnum):
    R = 0
    G = 1
    B = 2

    @property
    def bar(self) -> "Color":
        """Cyclic successor: r -> g -> b -> r."""
        return Color((self + 1) % 3)

    @property
    def bbar(self) -> "Color":
        return Color((self + 2) % 3)

    @property
    def label(self) -> str:
        return "rgb"[self]

    @classmethod
    def parse(cls, value) -> "Color":
        if isinstance(value, Color):
            return value
        if isinstance(value, str):
            try:
                return cls("rgb".index(value.strip().lower()[0]))
            except (ValueError, IndexError):
                raise ValueError(f"unknown colour {value!r}") from None
        return cls(int(value))

    def __str__(self) -> str:
        return self.label


COLORS = (Color.R, Color.G, Color.B)

# Pauli axis carried by a link of each colour: r -> xx, g -> yy, b -> zz.
LINK_AXIS = {Color.R: "x", Color.G: "y", Color.B: "z"}


def axis(c_prime: Color, c: Color) -> str:
    """Colour-pair notation ``c'|c``: ``c|c = x``, ``bar(c)|c = y``, ``bbar(c)|c = z``."""
    c_prime, c = Color.parse(c_prime), Color.parse(c)
    return "xyz"[(c_prime - c) % 3]
