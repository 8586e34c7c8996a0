"""Isoperimetric statistics and arc bounds for tuples of exponential words.

For a tuple ``z = (z_1, …, z_n)`` of exponential words (the boundary labels
of a picture) this module computes

- ``W0 = Σ ω(z_i)``, ``W1 = Σ |z_i|``, ``W2 = max l(h)`` and
  ``W3 = max(|s|, W2²)``;
- the corridor arc bounds ``M(0)``, ``M(1)``, ``M(2)`` and ``M(z)``;
- ``B1`` and the arc bound ``B`` for pictures on a surface of Euler
  characteristic ``χ``.

Usage:
    from qexp.bounds import bounds

    stats = bounds(z, env, chi=1)
    stats.B >= stats.B1 >= 2 * stats.W1
"""

import logging
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence

from qexp.equations import Environment, ExpEquation
from qexp.exponential import ExpWord, hl_length, omega
from qexp.quadwords import surface_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundStats:
    """All statistics of a boundary tuple, recomputable from ``z`` alone."""

    n: int
    chi: int
    W0: int
    W1: int
    W2: int
    W3: int
    s_length: int
    M0: int
    M1: int
    M2: int
    Mz: int
    B1: int
    B: int

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)


def relator_length(env: Environment) -> int:
    """``|s|``: the longest relator over every index (0 without relators)."""
    return max((len(rel) for k in env.supports for rel in env.relators_of(k)), default=0)


def w_statistics(z: Sequence[ExpWord], s_length: int) -> Dict[str, int]:
    """``W0`` to ``W3``. ``W2`` is 1 when ``z`` has no letters."""
    W0 = sum(omega(u) for u in z)
    W1 = sum(hl_length(u) for u in z)
    W2 = max((a.length for u in z for a in u.letters), default=1)
    W3 = max(s_length, W2 * W2)
    return {"W0": W0, "W1": W1, "W2": W2, "W3": W3}


def m_number(j: int, W2: int, W3: int, s_length: int) -> int:
    """Arc bound ``M(j)`` for a ``j``-corridor.

    ``M(1)`` contains ``(|s|/2 + 1)²``; for odd ``|s|`` the exact value is
    rounded up.

    Raises:
        ValueError: If ``j`` is not 0, 1 or 2
    """
    s = s_length
    if j == 0:
        return W2 * W2 + 1
    if j == 1:
        exact = W3 * W2 * W2 * (W2 * W2 + 2 * s * s * (Fraction(s, 2) + 1) ** 2)
        return math.ceil(exact)
    if j == 2:
        return 8 * s ** 12 * W2 * W2 + s
    raise ValueError(f"Corridor type must be 0, 1 or 2, got {j}")


def n_number(W0: int, W1: int, ml: int, chi: int) -> int:
    """Upper bound ``30(2(ml+1)W1 + W0 - 2χ)`` on the number of non-designated vertices."""
    return 30 * (2 * (ml + 1) * W1 + W0 - 2 * chi)


def d_number(ml: int, g_vertices: int) -> int:
    """Upper bound ``(ml)³·|V_G|`` on the vertices near good vertices."""
    return ml ** 3 * g_vertices


def corridor_number(n: int, W0: int, W1: int, ml: int, chi: int, g_vertices: int) -> int:
    """Upper bound on the number of maximal designated corridors."""
    return n + 3 * ((ml + 1) ** 4 * g_vertices + W0 - 2 * chi) + (6 * ml + 10) * W1


def b1_number(W0: int, W1: int, ml: int, chi: int) -> int:
    return 2 * W1 + n_number(W0, W1, ml, chi)


def b_number(n: int, W0: int, W1: int, ml: int, chi: int, Mz: int) -> int:
    """Arc bound ``B`` for a picture with ``n`` boundary components."""
    B1 = b1_number(W0, W1, ml, chi)
    return (
        2 * W1
        + ml * (ml ** 3 + 1) * B1
        + Mz * (n + 3 * ((ml + 1) ** 4 * B1 + W0 - 2 * chi) + (6 * ml + 10) * W1)
    )


def bounds(z: Sequence[ExpWord], env: Environment, chi: int = 1, s_length: Optional[int] = None) -> BoundStats:
    """Compute every statistic of ``z``.

    Args:
        z: Boundary labels
        env: Environment providing the relators
        chi: Euler characteristic of the surface carrying the picture
        s_length: Override for ``|s|``

    Returns:
        BoundStats with ``ml = |s|``
    """
    s = relator_length(env) if s_length is None else s_length
    w = w_statistics(z, s)
    M = [m_number(j, w["W2"], w["W3"], s) for j in range(3)]
    Mz = max(M)
    n = len(z)
    stats = BoundStats(
        n=n,
        chi=chi,
        s_length=s,
        M0=M[0],
        M1=M[1],
        M2=M[2],
        Mz=Mz,
        B1=b1_number(w["W0"], w["W1"], s, chi),
        B=b_number(n, w["W0"], w["W1"], s, chi, Mz),
        **w,
    )
    logger.debug("bounds for %d labels: %s", n, stats)
    return stats


def picture_arc_bound(z: Sequence[ExpWord], env: Environment, chi: int) -> int:
    """``B``: no minimal picture with boundary labels ``z`` has more arcs."""
    return bounds(z, env, chi).B


def equation_chi(W: ExpEquation) -> int:
    """Euler characteristic of the surface of ``W``, summed over components."""
    return sum(surface_of(w).euler_characteristic for w in W.system)


def equation_bounds(W: ExpEquation, chi: Optional[int] = None) -> BoundStats:
    """Statistics of the coefficient images ``β(d)`` in letter order."""
    z = [W.beta[a] for a in W.coefficients]
    return bounds(z, W.env, equation_chi(W) if chi is None else chi)


if __name__ == "__main__":
    for j in range(3):
        print(f"M({j}) with W2=2, |s|=2:", m_number(j, 2, 4, 2))
    print("N-number:", n_number(10, 6, 4, 1), " D-number:", d_number(4, 3))
