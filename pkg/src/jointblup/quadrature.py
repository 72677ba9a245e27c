"""Deterministic quadrature on the unit interval for moment integrals.

Moment integrands are mapped to (0, 1) through the parent cdf.  The
resulting quantile-function factors are singular (slowly divergent) at
both endpoints, so a single Gauss-Legendre rule converges poorly there.
The rule below is a composite Gauss-Legendre rule whose panels shrink
geometrically toward 0 and 1; with the default settings the moment
identities hold to better than 1e-10 for sample sizes up to 20.

Settings are value objects: the same settings always produce the same
nodes, which is what makes cached moments reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre


@dataclass(frozen=True)
class QuadratureSettings:
    panels_per_side: int = 12
    nodes_per_panel: int = 24
    grading: float = 0.15

    def __post_init__(self):
        if self.panels_per_side < 1 or self.nodes_per_panel < 2:
            raise ValueError("need at least one panel of at least two nodes")
        if not 0.0 < self.grading < 1.0:
            raise ValueError("grading ratio must lie strictly between 0 and 1")

    def as_dict(self) -> dict:
        return {
            "panels_per_side": self.panels_per_side,
            "nodes_per_panel": self.nodes_per_panel,
            "grading": self.grading,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QuadratureSettings":
        return cls(
            panels_per_side=int(d["panels_per_side"]),
            nodes_per_panel=int(d["nodes_per_panel"]),
            grading=float(d["grading"]),
        )


@lru_cache(maxsize=8)
def unit_rule(settings: QuadratureSettings) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite rule on (0, 1).

    Panel breakpoints on the left half are 0, 0.5*g^m, ..., 0.5*g, 0.5
    for grading ratio g and m panels; the right half mirrors them, so the
    rule is symmetric under u -> 1 - u.
    """
    x, w = roots_legendre(settings.nodes_per_panel)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    breaks = [0.0] + [
        0.5 * settings.grading**j for j in range(settings.panels_per_side - 1, -1, -1)
    ]
    nodes, weights = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        nodes.append(a + (b - a) * x)
        weights.append((b - a) * w)
    left_n = np.concatenate(nodes)
    left_w = np.concatenate(weights)
    full_n = np.concatenate([left_n, 1.0 - left_n[::-1]])
    full_w = np.concatenate([left_w, left_w[::-1]])
    full_n.flags.writeable = False
    full_w.flags.writeable = False
    return full_n, full_w
