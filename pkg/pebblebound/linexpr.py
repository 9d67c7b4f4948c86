"""
pebblebound/linexpr.py
Exact rational linear expressions and constraints.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, Mapping, Tuple, Union

Number = Union[int, Fraction]

LE, GE, EQ = "<=", ">=", "="


class LinExpr:
    """sum(coef * var) + constant with Fraction coefficients; zero terms are dropped."""

    __slots__ = ("terms", "constant")

    def __init__(self, terms: Mapping[str, Number] | None = None, constant: Number = 0):
        self.terms: Dict[str, Fraction] = {}
        for name, coef in (terms or {}).items():
            self._add(name, Fraction(coef))
        self.constant = Fraction(constant)

    def _add(self, name: str, coef: Fraction) -> None:
        total = self.terms.get(name, 0) + coef
        if total:
            self.terms[name] = total
        else:
            self.terms.pop(name, None)

    @staticmethod
    def var(name: str, coef: Number = 1) -> "LinExpr":
        return LinExpr({name: coef})

    @staticmethod
    def total(names: Iterable[str], coef: Number = 1) -> "LinExpr":
        expr = LinExpr()
        for name in names:
            expr._add(name, Fraction(coef))
        return expr

    def copy(self) -> "LinExpr":
        clone = LinExpr()
        clone.terms = dict(self.terms)
        clone.constant = self.constant
        return clone

    def __add__(self, other: Union["LinExpr", Number]) -> "LinExpr":
        result = self.copy()
        if isinstance(other, LinExpr):
            for name, coef in other.terms.items():
                result._add(name, coef)
            result.constant += other.constant
        else:
            result.constant += Fraction(other)
        return result

    __radd__ = __add__

    def __neg__(self) -> "LinExpr":
        return self * -1

    def __sub__(self, other: Union["LinExpr", Number]) -> "LinExpr":
        return self + (-other if isinstance(other, LinExpr) else -Fraction(other))

    def __rsub__(self, other: Number) -> "LinExpr":
        return (-self) + other

    def __mul__(self, factor: Number) -> "LinExpr":
        factor = Fraction(factor)
        result = LinExpr()
        if factor:
            result.terms = {name: coef * factor for name, coef in self.terms.items()}
        result.constant = self.constant * factor
        return result

    __rmul__ = __mul__

    def __truediv__(self, divisor: Number) -> "LinExpr":
        return self * (1 / Fraction(divisor))

    def value(self, assignment: Mapping[str, int]) -> Fraction:
        return self.constant + sum((coef * assignment[name] for name, coef in self.terms.items()), Fraction(0))


@dataclass(frozen=True)
class LinearConstraint:
    """terms (sense) rhs, labeled by family and index tuple."""
    family: str
    index: Tuple
    terms: Tuple[Tuple[str, Fraction], ...]
    sense: str
    rhs: Fraction

    @property
    def label(self) -> str:
        """Deterministic LP-safe name, e.g. A2_G_3_1_2.4.5"""
        parts = [self.family]
        for item in self.index:
            if isinstance(item, tuple):
                parts.append(".".join(str(x) for x in item))
            else:
                parts.append(str(item))
        return "_".join(parts)

    def violated_by(self, assignment: Mapping[str, int]) -> bool:
        lhs = sum((coef * assignment[name] for name, coef in self.terms), Fraction(0))
        if self.sense == LE:
            return lhs > self.rhs
        if self.sense == GE:
            return lhs < self.rhs
        return lhs != self.rhs

    def integer_form(self) -> Tuple[Tuple[Tuple[str, int], ...], str, int]:
        """Terms, sense and rhs multiplied by the common denominator."""
        scale = lcm(*(coef.denominator for _, coef in self.terms), self.rhs.denominator)
        terms = tuple((name, int(coef * scale)) for name, coef in self.terms)
        return terms, self.sense, int(self.rhs * scale)


def constraint(family: str, index: Tuple, lhs: LinExpr, sense: str, rhs: Union[LinExpr, Number]) -> LinearConstraint:
    """Move everything to the left, constants to the right; terms sorted by name."""
    if sense not in (LE, GE, EQ):
        raise ValueError(f"unknown sense {sense!r}")
    moved = lhs - rhs
    terms = tuple(sorted(moved.terms.items()))
    return LinearConstraint(family=family, index=tuple(index), terms=terms, sense=sense, rhs=-moved.constant)
