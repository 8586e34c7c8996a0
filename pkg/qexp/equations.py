"""Constrained quadratic exponential equations and their solutions.

An ``ExpEquation`` bundles a quadratic system ``w_1, …, w_k``, a coefficient
map ``β`` from the coefficient letters to exponential words, a parameter
system ``L`` and a basis ``(a_1, …, a_k)`` of environment indices. The
component ``w_i`` is read in ``H_{*,a_i} = *_{j ∈ X_{a_i}} H_j`` modulo the
normal closure of the relators ``s_{a_i}``.

A ``Solution`` pairs a letter assignment ``φ`` with a retraction ``α``. Every
rewrite of the resolution pipeline returns, next to the new equation, a
*transfer*: a function taking a solution of the new equation to a solution
of the old one.

Usage:
    from qexp.equations import Environment, ExpEquation, Solution

    env = Environment(H, {"1": frozenset({"A", "B"})}, {"1": []})
    W = ExpEquation(env, system, beta, L, ("1",))
    W.validate()
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from qexp.exponential import ExpWord, exponential_length, h_length, hl_length, is_constrained
from qexp.params import ParamSystem, Retraction
from qexp.quadwords import Letter, QuadSystem, QuadWord
from qexp.words import FreeProduct, Relator, Word

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Environment:
    """Factors, supports ``X_k`` and relator sets ``s_k`` indexed by ``K``."""

    product: FreeProduct
    supports: Dict[str, FrozenSet[str]]
    relators: Dict[str, List[Relator]] = field(default_factory=dict)

    def __post_init__(self):
        for k, support in self.supports.items():
            for factor_id in support:
                self.product.factor(factor_id)
        for k, rels in self.relators.items():
            if k not in self.supports:
                raise ValueError(f"Relators given for unknown index '{k}'")
            for rel in rels:
                if not rel.s.support <= self.supports[k]:
                    raise ValueError(
                        f"Relator {rel} uses factors outside X_{k} = {sorted(self.supports[k])}"
                    )

    @property
    def indices(self) -> List[str]:
        return list(self.supports)

    def relators_of(self, k: str) -> List[Relator]:
        return list(self.relators.get(k, []))

    def is_free(self, k: str) -> bool:
        """True iff ``G_k`` is the free product itself (no relators)."""
        return not self.relators.get(k)


@dataclass(frozen=True, eq=False)
class ExpEquation:
    """``(w = 1, β, L)`` with environment and basis."""

    env: Environment
    system: QuadSystem
    beta: Dict[Letter, ExpWord]
    L: ParamSystem
    basis: Tuple[str, ...]

    def validate(self) -> None:
        """Raises:
        ValueError: If ``β`` does not match the coefficient letters, a basis
            index is unknown or ``β(d)`` leaves the support of its component
        """
        if len(self.basis) != len(self.system):
            raise ValueError(f"Basis has {len(self.basis)} entries for {len(self.system)} words")
        for k in self.basis:
            if k not in self.env.supports:
                raise ValueError(f"Basis index '{k}' is not declared in the environment")
        coefficients = self.system.coefficients
        if set(self.beta) != set(coefficients):
            missing = sorted(str(a) for a in set(coefficients) - set(self.beta))
            extra = sorted(str(a) for a in set(self.beta) - set(coefficients))
            raise ValueError(f"beta must cover exactly the coefficient letters (missing {missing}, extra {extra})")
        for dd in sorted(coefficients):
            k = self.index_of(dd)
            if not self.beta[dd].support <= self.env.supports[k]:
                raise ValueError(
                    f"beta({dd}) = {self.beta[dd]} leaves X_{k} = {sorted(self.env.supports[k])}"
                )

    # Accessors ---------------------------------------------------------------

    @property
    def product(self) -> FreeProduct:
        return self.env.product

    @property
    def coefficients(self) -> List[Letter]:
        return sorted(self.beta)

    def component(self, a: Letter) -> int:
        return self.system.component_of(a)

    def index_of(self, a: Letter) -> str:
        """Environment index ``a_i`` of the component containing ``a``."""
        return self.basis[self.system.component_of(a)]

    def relators_for(self, a: Letter) -> List[Relator]:
        return self.env.relators_of(self.index_of(a))

    @property
    def parameters(self) -> FrozenSet[int]:
        found = set(self.L.parameters)
        for u in self.beta.values():
            found |= u.parameters
        return frozenset(found)

    @property
    def support(self) -> FrozenSet[str]:
        """``supp(W)``: factors used by the coefficient images."""
        found = set()
        for u in self.beta.values():
            found |= u.support
        return frozenset(found)

    def is_constrained(self) -> bool:
        return all(is_constrained(u, self.L) for u in self.beta.values())

    def hl_length(self) -> int:
        return sum(hl_length(u) for u in self.beta.values())

    def h_length(self) -> int:
        return sum(h_length(u) for u in self.beta.values())

    def exponential_length(self) -> int:
        return sum(exponential_length(u) for u in self.beta.values())

    def measure(self) -> Tuple[int, int, int]:
        """``(H^Λ-length, H-length, exponential length)``."""
        return self.hl_length(), self.h_length(), self.exponential_length()

    # Rebuilding ---------------------------------------------------------------

    def with_beta(self, a: Letter, u: ExpWord) -> "ExpEquation":
        beta = dict(self.beta)
        beta[a] = u
        return replace(self, beta=beta)

    def with_L(self, L: ParamSystem) -> "ExpEquation":
        return replace(self, L=L)

    def signature(self) -> Tuple:
        """Hashable key identifying the equation up to equality of its parts."""
        return (
            self.system,
            tuple((a, self.beta[a]) for a in self.coefficients),
            tuple(self.L.lines()),
            self.basis,
        )

    def lines(self) -> List[str]:
        out = [f"w{i + 1} [{k}]: {w}" for i, (w, k) in enumerate(zip(self.system, self.basis))]
        out += [f"beta {a} = {self.beta[a]}" for a in self.coefficients]
        out += self.L.lines()
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


@dataclass(frozen=True)
class Solution:
    """Letter assignment ``φ`` together with a retraction ``α``."""

    phi: Dict[Letter, Word]
    alpha: Retraction

    def value(self, a: Letter, product: FreeProduct) -> Word:
        return self.phi.get(a, product.identity)

    def evaluate(self, w: QuadWord, product: FreeProduct) -> Word:
        """``φ(w)`` with unassigned letters read as 1."""
        out = product.identity
        for a, sign in w:
            value = self.value(a, product)
            out = out * (value if sign == 1 else value.inverse())
        return out

    def complete(self, W: ExpEquation) -> "Solution":
        """Fill in ``φ(d) = α̂β(d)`` and missing variables with 1."""
        phi = {a: v for a, v in self.phi.items()}
        for a in W.system.variables:
            phi.setdefault(a, W.product.identity)
        for a, u in W.beta.items():
            phi[a] = u.evaluate(self.alpha, W.product)
        return Solution(phi, self.alpha)

    def restricted(self, letters) -> "Solution":
        keep = set(letters)
        return Solution({a: v for a, v in self.phi.items() if a in keep}, self.alpha)


# Solution transfer ----------------------------------------------------------

Transfer = Callable[[Solution], Solution]


def identity_transfer(solution: Solution) -> Solution:
    return solution


def compose(outer: Transfer, inner: Transfer) -> Transfer:
    """``outer ∘ inner``: first ``inner``, then ``outer``."""
    return lambda solution: outer(inner(solution))


def recompute_coefficients(parent: ExpEquation) -> Transfer:
    """Transfer for rewrites that only change ``β`` and ``L``.

    The variables are kept and ``φ(d)`` is recomputed as ``α̂β(d)`` for the
    parent's coefficient map.
    """

    def transfer(solution: Solution) -> Solution:
        return solution.restricted(parent.system.variables).complete(parent)

    return transfer


def shift_conjugator(parent: ExpEquation, conjugator: Letter, left: Callable[[Retraction], Word]) -> Transfer:
    """Transfer with ``φ(x) = left(α) · φ′(x)`` for the conjugator ``x``."""

    def transfer(solution: Solution) -> Solution:
        product = parent.product
        phi = dict(solution.phi)
        phi[conjugator] = left(solution.alpha) * solution.value(conjugator, product)
        return Solution(phi, solution.alpha).restricted(parent.system.variables).complete(parent)

    return transfer


def find_conjugator(w: QuadWord, a: Letter) -> Optional[Letter]:
    """Letter ``x`` with ``x⁻¹ a x`` a cyclic subword of ``w``, if any."""
    n = len(w)
    items = w.letters
    for i in range(n):
        if items[i] == (a, 1):
            before, after = items[(i - 1) % n], items[(i + 1) % n]
            if n >= 3 and before[0] == after[0] and before[1] == -1 and after[1] == 1:
                return before[0]
    return None


def coefficient_values(W: ExpEquation, alpha: Retraction) -> Dict[Letter, Word]:
    """``α̂β(d)`` for every coefficient letter."""
    return {a: u.evaluate(alpha, W.product) for a, u in W.beta.items()}


def component_values(W: ExpEquation, solution: Solution) -> List[Word]:
    """``φ(w_i)`` for every component."""
    return [solution.evaluate(w, W.product) for w in W.system]


if __name__ == "__main__":
    from qexp.exponential import ExpLetter
    from qexp.groups import CyclicGroup
    from qexp.params import LinPoly

    H = FreeProduct([CyclicGroup("A", 0, "a")])
    env = Environment(H, {"1": frozenset({"A"})})
    a = H.parse_word("A:a")
    system = QuadSystem([QuadWord.parse("x1^-1 d1 x1 x2^2")])
    beta = {Letter("d", 1): ExpWord.of(ExpLetter.make(a, LinPoly.param(1)))}
    W = ExpEquation(env, system, beta, ParamSystem().with_equation(LinPoly.param(1) + 2), ("1",))
    W.validate()
    print(W)
    sol = Solution({Letter("x", 2): a}, Retraction({1: -2})).complete(W)
    print("phi(w1) =", component_values(W, sol)[0])
