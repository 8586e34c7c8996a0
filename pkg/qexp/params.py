"""Linear exponent polynomials, parameter systems and integer feasibility.

A ``LinPoly`` is an element ``c + Σ a_i λ_i`` of the free Z-module on the
parameters. A ``ParamSystem`` is a conjunction of equations ``g = 0``,
congruences ``f ≡ 0 (mod m)`` and inequalities ``h >= 0``. A solution is a
``Retraction``: an integer assignment of the parameters (unlisted ones are 0).

Feasibility is decided exactly:

1. congruences become equations ``f - m·μ = 0`` with fresh ``μ``;
2. equations are eliminated by unit substitution or by the Euclid-style
   ``x_k = t - Σ (a_i // a) x_i - c // a`` substitution;
3. the remaining inequalities are decided by an omega-test style projection
   (exact elimination, dark shadow, real shadow, splinters).

Usage:
    from qexp.params import LinPoly, ParamSystem, is_consistent

    l1, l2 = LinPoly.param(1), LinPoly.param(2)
    L = ParamSystem().with_congruence(l1, 2).with_strict(l1 - 4)
    is_consistent(L)            # Retraction({1: 6})
"""

import logging
import threading
from dataclasses import dataclass, field
from itertools import count
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from sympy import igcd

logger = logging.getLogger(__name__)

PolyLike = Union["LinPoly", int]


@dataclass(frozen=True)
class LinPoly:
    """Linear polynomial ``constant + Σ coeff·λ_id`` with no zero coefficients."""

    constant: int = 0
    coeffs: Tuple[Tuple[int, int], ...] = ()

    @staticmethod
    def build(coeffs: Mapping[int, int], constant: int = 0) -> "LinPoly":
        items = tuple(sorted((pid, int(a)) for pid, a in coeffs.items() if a))
        return LinPoly(int(constant), items)

    @staticmethod
    def const(value: int) -> "LinPoly":
        return LinPoly(int(value), ())

    @staticmethod
    def param(pid: int, coeff: int = 1) -> "LinPoly":
        return LinPoly.build({pid: coeff})

    @staticmethod
    def coerce(value: PolyLike) -> "LinPoly":
        return value if isinstance(value, LinPoly) else LinPoly.const(value)

    # Structure ----------------------------------------------------------

    def as_dict(self) -> Dict[int, int]:
        return dict(self.coeffs)

    def coeff(self, pid: int) -> int:
        return self.as_dict().get(pid, 0)

    @property
    def parameters(self) -> FrozenSet[int]:
        return frozenset(pid for pid, _ in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def content(self) -> int:
        """gcd of the coefficients (0 for a constant)."""
        g = 0
        for _, a in self.coeffs:
            g = igcd(g, a)
        return g

    # Arithmetic ---------------------------------------------------------

    def __add__(self, other: PolyLike) -> "LinPoly":
        other = LinPoly.coerce(other)
        merged = self.as_dict()
        for pid, a in other.coeffs:
            merged[pid] = merged.get(pid, 0) + a
        return LinPoly.build(merged, self.constant + other.constant)

    __radd__ = __add__

    def __neg__(self) -> "LinPoly":
        return LinPoly(-self.constant, tuple((pid, -a) for pid, a in self.coeffs))

    def __sub__(self, other: PolyLike) -> "LinPoly":
        return self + (-LinPoly.coerce(other))

    def __rsub__(self, other: PolyLike) -> "LinPoly":
        return LinPoly.coerce(other) + (-self)

    def __mul__(self, k: int) -> "LinPoly":
        if not isinstance(k, int):
            return NotImplemented
        return LinPoly.build({pid: a * k for pid, a in self.coeffs}, self.constant * k)

    __rmul__ = __mul__

    def substitute(self, mapping: Mapping[int, PolyLike]) -> "LinPoly":
        """Replace parameters by polynomials (or integers)."""
        result = LinPoly.const(self.constant)
        for pid, a in self.coeffs:
            if pid in mapping:
                result = result + LinPoly.coerce(mapping[pid]) * a
            else:
                result = result + LinPoly.param(pid, a)
        return result

    def evaluate(self, assignment: Mapping[int, int]) -> int:
        return self.constant + sum(a * assignment.get(pid, 0) for pid, a in self.coeffs)

    def __str__(self) -> str:
        parts: List[str] = []
        for pid, a in self.coeffs:
            name = f"l{pid}" if pid > 0 else f"t{-pid}"
            mag = abs(a)
            term = name if mag == 1 else f"{mag}*{name}"
            if not parts:
                parts.append(term if a > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if a > 0 else f"- {term}")
        if self.constant or not parts:
            if not parts:
                parts.append(str(self.constant))
            else:
                parts.append(f"+ {self.constant}" if self.constant > 0 else f"- {-self.constant}")
        return " ".join(parts)


FALSE_EQUATION = LinPoly.const(1)


def _sort_key(item) -> str:
    return str(item)


@dataclass(frozen=True)
class ParamSystem:
    """Conjunction of equations, congruences and inequalities over Λ."""

    equations: FrozenSet[LinPoly] = frozenset()
    congruences: FrozenSet[Tuple[LinPoly, int]] = frozenset()
    inequalities: FrozenSet[LinPoly] = frozenset()
    normalized: bool = False

    def with_equation(self, g: PolyLike) -> "ParamSystem":
        return ParamSystem(self.equations | {LinPoly.coerce(g)}, self.congruences, self.inequalities)

    def with_congruence(self, f: PolyLike, modulus: int) -> "ParamSystem":
        if modulus <= 0:
            raise ValueError(f"Congruence modulus must be positive, got {modulus}")
        return ParamSystem(
            self.equations, self.congruences | {(LinPoly.coerce(f), modulus)}, self.inequalities
        )

    def with_inequality(self, h: PolyLike) -> "ParamSystem":
        """Add ``h >= 0``."""
        return ParamSystem(self.equations, self.congruences, self.inequalities | {LinPoly.coerce(h)})

    def with_strict(self, h: PolyLike) -> "ParamSystem":
        """Add ``h > 0`` as ``h - 1 >= 0``."""
        return self.with_inequality(LinPoly.coerce(h) - 1)

    def union(self, other: "ParamSystem") -> "ParamSystem":
        return ParamSystem(
            self.equations | other.equations,
            self.congruences | other.congruences,
            self.inequalities | other.inequalities,
        )

    @property
    def parameters(self) -> FrozenSet[int]:
        found = set()
        for g in self.equations:
            found |= g.parameters
        for f, _ in self.congruences:
            found |= f.parameters
        for h in self.inequalities:
            found |= h.parameters
        return frozenset(found)

    def is_empty(self) -> bool:
        return not (self.equations or self.congruences or self.inequalities)

    def satisfied_by(self, alpha: Mapping[int, int]) -> bool:
        if isinstance(alpha, Retraction):
            alpha = alpha.assignment
        return (
            all(g.evaluate(alpha) == 0 for g in self.equations)
            and all(f.evaluate(alpha) % m == 0 for f, m in self.congruences)
            and all(h.evaluate(alpha) >= 0 for h in self.inequalities)
        )

    def substitute(self, mapping: Mapping[int, PolyLike]) -> "ParamSystem":
        return ParamSystem(
            frozenset(g.substitute(mapping) for g in self.equations),
            frozenset((f.substitute(mapping), m) for f, m in self.congruences),
            frozenset(h.substitute(mapping) for h in self.inequalities),
        )

    def lines(self) -> List[str]:
        """Canonical text lines in the ``eq:`` / ``cong:`` / ``ineq:`` syntax."""
        out = [f"eq: {g} = 0" for g in sorted(self.equations, key=_sort_key)]
        out += [
            f"cong: {f} = 0 mod {m}"
            for f, m in sorted(self.congruences, key=lambda fm: (str(fm[0]), fm[1]))
        ]
        out += [f"ineq: {h} >= 0" for h in sorted(self.inequalities, key=_sort_key)]
        return out

    def __str__(self) -> str:
        return "{" + "; ".join(self.lines()) + "}"


@dataclass(frozen=True)
class Retraction:
    """Integer assignment of parameters; unlisted parameters map to 0."""

    assignment: Dict[int, int] = field(default_factory=dict)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.assignment.items())))

    def __call__(self, f: PolyLike) -> int:
        return LinPoly.coerce(f).evaluate(self.assignment)

    def __getitem__(self, pid: int) -> int:
        return self.assignment.get(pid, 0)

    def extended(self, values: Mapping[int, int]) -> "Retraction":
        merged = dict(self.assignment)
        merged.update(values)
        return Retraction(merged)

    def restricted(self, pids: Iterable[int]) -> "Retraction":
        keep = set(pids)
        return Retraction({p: v for p, v in self.assignment.items() if p in keep})

    def __repr__(self) -> str:
        return f"Retraction({dict(sorted(self.assignment.items()))})"


def evaluate(alpha: Retraction, f: PolyLike) -> int:
    """Parameter evaluation ``α(f) = constant + Σ coeff·α(λ)``."""
    return alpha(f)


# Normalization --------------------------------------------------------------


def _normalize_equation(g: LinPoly) -> Optional[LinPoly]:
    """Return the canonical equation, None if trivially true, FALSE if false."""
    content = g.content()
    if content == 0:
        return None if g.constant == 0 else FALSE_EQUATION
    if g.constant % content:
        return FALSE_EQUATION
    sign = 1 if g.coeffs[0][1] > 0 else -1
    return LinPoly.build({pid: sign * a // content for pid, a in g.coeffs}, sign * g.constant // content)


def _normalize_congruence(f: LinPoly, m: int) -> Optional[Tuple[LinPoly, int]]:
    coeffs = {pid: a % m for pid, a in f.coeffs}
    constant = f.constant % m
    g = m
    for a in coeffs.values():
        g = igcd(g, a)
    g = igcd(g, constant)
    m //= g
    coeffs = {pid: a // g for pid, a in coeffs.items()}
    constant //= g
    if m == 1:
        return None
    if not any(coeffs.values()):
        return None if constant == 0 else (LinPoly.const(constant), m)
    return LinPoly.build(coeffs, constant), m


def _normalize_inequality(h: LinPoly) -> Optional[LinPoly]:
    content = h.content()
    if content == 0:
        return None if h.constant >= 0 else FALSE_EQUATION
    return LinPoly.build({pid: a // content for pid, a in h.coeffs}, h.constant // content)


def normalize_system(L: ParamSystem) -> ParamSystem:
    """Return an equivalent normalized system.

    Congruence constants are reduced into ``[0, m)``, common factors are
    divided out, trivially true constraints are dropped and trivially false
    ones collapse the system to the single equation ``1 = 0``.
    """
    false_system = ParamSystem(frozenset({FALSE_EQUATION}), frozenset(), frozenset(), True)
    equations = set()
    for g in L.equations:
        n = _normalize_equation(g)
        if n == FALSE_EQUATION:
            return false_system
        if n is not None:
            equations.add(n)
    congruences = set()
    for f, m in L.congruences:
        n = _normalize_congruence(f, m)
        if n is not None and n[0].is_constant():
            return false_system
        if n is not None:
            congruences.add(n)
    inequalities = set()
    for h in L.inequalities:
        n = _normalize_inequality(h)
        if n == FALSE_EQUATION:
            return false_system
        if n is not None:
            inequalities.add(n)
    return ParamSystem(frozenset(equations), frozenset(congruences), frozenset(inequalities), True)


def is_normalized(L: ParamSystem) -> bool:
    """Check the normalized-system conditions on the stored constraints."""
    return all(m > 0 and 0 <= f.constant < m for f, m in L.congruences)


# Integer feasibility --------------------------------------------------------

Form = Dict[int, int]  # parameter id -> coefficient, key 0 is the constant


def _form(p: LinPoly) -> Form:
    d = p.as_dict()
    d[0] = p.constant
    return d


def _subst_form(form: Form, var: int, expr: Form) -> Form:
    a = form.get(var, 0)
    if not a:
        return form
    out = {k: v for k, v in form.items() if k != var}
    for k, v in expr.items():
        out[k] = out.get(k, 0) + a * v
    return {k: v for k, v in out.items() if v or k == 0}


def _vars(form: Form) -> List[int]:
    return [k for k, v in form.items() if k != 0 and v]


def _content(form: Form) -> int:
    g = 0
    for k in _vars(form):
        g = igcd(g, form[k])
    return g


class _Solver:
    """Exact integer feasibility for equations plus inequalities."""

    def __init__(self, fresh_start: int):
        self._fresh = count(fresh_start, -1)

    def fresh(self) -> int:
        return next(self._fresh)

    def solve(self, eqs: List[Form], ineqs: List[Form]) -> Optional[Dict[int, int]]:
        eqs = [dict(e) for e in eqs]
        ineqs = [dict(h) for h in ineqs]
        substitutions: List[Tuple[int, Form]] = []

        while eqs:
            e = eqs.pop()
            vs = _vars(e)
            if not vs:
                if e.get(0, 0):
                    return None
                continue
            g = _content(e)
            if e.get(0, 0) % g:
                return None
            e = {k: v // g for k, v in e.items()}
            unit = next((k for k in vs if abs(e[k]) == 1), None)
            if unit is not None:
                a = e[unit]
                expr = {k: -a * v for k, v in e.items() if k != unit}
                self._apply(unit, expr, eqs, ineqs, substitutions)
                continue
            k = min(vs, key=lambda v: abs(e[v]))
            if e[k] < 0:
                e = {key: -v for key, v in e.items()}
            a = e[k]
            t = self.fresh()
            expr = {t: 1}
            for v in vs:
                if v != k:
                    expr[v] = -(e[v] // a)
            expr[0] = -(e.get(0, 0) // a)
            self._apply(k, expr, eqs, ineqs, substitutions)
            eqs.append(_subst_form(e, k, expr))

        assignment = self.omega(ineqs)
        if assignment is None:
            return None
        for var, expr in reversed(substitutions):
            assignment[var] = expr.get(0, 0) + sum(
                c * assignment.setdefault(v, 0) for v, c in expr.items() if v != 0
            )
        return assignment

    @staticmethod
    def _apply(var, expr, eqs, ineqs, substitutions):
        eqs[:] = [_subst_form(e, var, expr) for e in eqs]
        ineqs[:] = [_subst_form(h, var, expr) for h in ineqs]
        substitutions.append((var, expr))

    def omega(self, ineqs: List[Form]) -> Optional[Dict[int, int]]:
        cons: List[Form] = []
        seen = set()
        for h in ineqs:
            vs = _vars(h)
            if not vs:
                if h.get(0, 0) < 0:
                    return None
                continue
            g = _content(h)
            h = {k: v // g for k, v in h.items() if k == 0 or v}
            key = tuple(sorted(h.items()))
            if key not in seen:
                seen.add(key)
                cons.append(h)
        if not cons:
            return {}

        variables = sorted({v for h in cons for v in _vars(h)})
        x = self._choose(cons, variables)
        lowers = [h for h in cons if h.get(x, 0) > 0]
        uppers = [h for h in cons if h.get(x, 0) < 0]
        rest = [h for h in cons if not h.get(x, 0)]

        if not lowers or not uppers:
            sub = self.omega(rest)
            if sub is None:
                return None
            return self._lift(x, lowers + uppers, sub)

        exact = all(h[x] == 1 for h in lowers) or all(h[x] == -1 for h in uppers)
        shadow = self._shadow(lowers, uppers, x, dark=not exact)
        sub = self.omega(rest + shadow)
        if sub is not None:
            return self._lift(x, lowers + uppers, sub)
        if exact:
            return None

        real = self._shadow(lowers, uppers, x, dark=False)
        if self.omega(rest + real) is None:
            return None
        max_upper = max(-h[x] for h in uppers)
        for low in lowers:
            a = low[x]
            for i in range((max_upper * a - max_upper - a) // max_upper + 1):
                splinter = dict(low)
                splinter[0] = splinter.get(0, 0) - i
                found = self.solve([splinter], cons)
                if found is not None:
                    return found
        return None

    @staticmethod
    def _choose(cons: List[Form], variables: List[int]) -> int:
        def cost(v: int) -> Tuple[int, int]:
            low = [h[v] for h in cons if h.get(v, 0) > 0]
            up = [-h[v] for h in cons if h.get(v, 0) < 0]
            if not low or not up:
                return (0, 0)
            exact = 0 if (all(a == 1 for a in low) or all(b == 1 for b in up)) else 1
            return (1 + exact, len(low) * len(up))

        return min(variables, key=lambda v: (cost(v), v))

    @staticmethod
    def _shadow(lowers, uppers, x, dark: bool) -> List[Form]:
        out = []
        for low in lowers:
            a = low[x]
            for up in uppers:
                b = -up[x]
                combo: Form = {}
                for k, v in low.items():
                    if k != x:
                        combo[k] = combo.get(k, 0) + b * v
                for k, v in up.items():
                    if k != x:
                        combo[k] = combo.get(k, 0) + a * v
                if dark:
                    combo[0] = combo.get(0, 0) - (a - 1) * (b - 1)
                out.append(combo)
        return out

    @staticmethod
    def _lift(x: int, bounds: List[Form], sub: Dict[int, int]) -> Dict[int, int]:
        assignment = dict(sub)
        for h in bounds:
            for v in _vars(h):
                if v != x:
                    assignment.setdefault(v, 0)
        lo, hi = None, None
        for h in bounds:
            a = h[x]
            rest = h.get(0, 0) + sum(c * assignment[v] for v, c in h.items() if v not in (0, x))
            if a > 0:
                bound = -(rest // a)
                lo = bound if lo is None else max(lo, bound)
            else:
                bound = rest // (-a)
                hi = bound if hi is None else min(hi, bound)
        value = 0
        if lo is not None:
            value = max(value, lo)
        if hi is not None:
            value = min(value, hi)
        assignment[x] = value
        return assignment


def _solve_system(L: ParamSystem) -> Optional[Dict[int, int]]:
    L = normalize_system(L)
    params = L.parameters
    solver = _Solver(fresh_start=-1)
    eqs = [_form(g) for g in L.equations]
    for f, m in L.congruences:
        mu = solver.fresh()
        form = _form(f)
        form[mu] = -m
        eqs.append(form)
    ineqs = [_form(h) for h in L.inequalities]
    found = solver.solve(eqs, ineqs)
    if found is None:
        return None
    return {p: found.get(p, 0) for p in params}


def is_consistent(L: ParamSystem) -> Optional[Retraction]:
    """Return an integer solution of ``L``, or None if there is none."""
    found = _solve_system(L)
    if found is None:
        logger.debug("inconsistent parameter system %s", L)
        return None
    alpha = Retraction(found)
    if not L.satisfied_by(alpha):
        raise AssertionError(f"solver produced a non-solution {alpha} for {L}")
    return alpha


def implies_congruence(L: ParamSystem, f: PolyLike, m: int) -> Optional[int]:
    """Return the unique ``k`` in ``[0, m)`` with ``L ⊨ f ≡ k (mod m)``.

    Raises:
        ValueError: If ``m <= 0``
    """
    if m <= 0:
        raise ValueError(f"Modulus must be positive, got {m}")
    f = LinPoly.coerce(f)
    alpha = is_consistent(L)
    if alpha is None:
        return None
    k = alpha(f) % m
    for other in range(m):
        if other != k and is_consistent(L.with_congruence(f - other, m)) is not None:
            return None
    return k


def implies_value(L: ParamSystem, f: PolyLike) -> Optional[int]:
    """Return ``c`` if ``L`` forces ``f = c``, else None."""
    f = LinPoly.coerce(f)
    if f.is_constant():
        return f.constant
    alpha = is_consistent(L)
    if alpha is None:
        return None
    c = alpha(f)
    if is_consistent(L.with_inequality(f - c - 1)) is not None:
        return None
    if is_consistent(L.with_inequality(c - 1 - f)) is not None:
        return None
    return c


def implies_positive(L: ParamSystem, f: PolyLike) -> bool:
    """True iff ``L ⊨ f > 0``."""
    return is_consistent(L.with_inequality(-LinPoly.coerce(f))) is None


class ParameterPool:
    """Monotone source of parameter ids not used elsewhere."""

    def __init__(self, start: int = 1):
        self._next = max(1, start)
        self._lock = threading.Lock()

    @classmethod
    def above(cls, used: Iterable[int]) -> "ParameterPool":
        return cls(max([0, *used]) + 1)

    def reserve(self, used: Iterable[int]) -> None:
        with self._lock:
            self._next = max([self._next, *(u + 1 for u in used)])

    def fresh(self) -> int:
        with self._lock:
            pid = self._next
            self._next += 1
            return pid

    def fresh_poly(self) -> LinPoly:
        return LinPoly.param(self.fresh())


if __name__ == "__main__":
    l1, l2 = LinPoly.param(1), LinPoly.param(2)
    L1 = (
        ParamSystem()
        .with_congruence(l1, 2)
        .with_congruence(l2, 2)
        .with_strict(l1 - 4)
        .with_strict(l2 - 2)
    )
    print("system:", L1)
    print("solution:", is_consistent(L1))
    print("l1 mod 2:", implies_congruence(L1, l1, 2))
