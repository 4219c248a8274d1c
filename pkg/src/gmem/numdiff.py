"""Central-difference oracles for symmetric-tensor derivatives.

Symmetric pairs are stored as (11, 22, 12) triples. Differentiation returns
single-entry partials: the off-diagonal column is halved because a stored
perturbation of the 12 component moves both the 12 and 21 tensor entries.
With that convention every derived quantity takes a uniform prefactor
(stress = 2x partials of the energy, and so on).
"""

from __future__ import annotations

import numpy as np

STRESS_STEP = 1e-6
TANGENT_STEP = 1e-5


def _eval(f, comps):
    return np.asarray(f(*comps), dtype=float)


def partials_sym(f, comps, rel_step):
    """Single-entry partial derivatives of f with respect to a symmetric
    pair-storage triple; f may return a scalar or an array.

    Returns an array of shape f(*comps).shape + (3,).
    """
    comps = tuple(float(x) for x in comps)
    cols = []
    for i in range(3):
        h = rel_step * max(abs(comps[i]), 1.0)
        up = list(comps)
        dn = list(comps)
        up[i] += h
        dn[i] -= h
        d = (_eval(f, up) - _eval(f, dn)) / (2.0 * h)
        if i == 2:
            d = 0.5 * d
        cols.append(d)
    return np.stack(cols, axis=-1)


def partials_sym_richardson(f, comps, rel_step):
    """Two-step Richardson extrapolation of partials_sym, for marginal
    cases where plain central differences sit on the truncation/roundoff
    crossover."""
    p1 = partials_sym(f, comps, rel_step)
    p2 = partials_sym(f, comps, 0.5 * rel_step)
    return (4.0 * p2 - p1) / 3.0


def fd_stress_from_energy(energy, comps, rel_step=STRESS_STEP, richardson=False):
    """Second Piola-Kirchhoff components 2 dW/dC as a (3,) array in pair
    storage, from an energy callable of the three C components."""
    p = (partials_sym_richardson if richardson else partials_sym)(
        energy, comps, rel_step)
    return 2.0 * p


def fd_tangent_from_stress(stress, comps, rel_step=TANGENT_STEP, richardson=False):
    """Elasticity components 2 dS/dC as a (3, 3) pair matrix from a stress
    callable returning pair storage."""
    p = (partials_sym_richardson if richardson else partials_sym)(
        stress, comps, rel_step)
    return 2.0 * p
