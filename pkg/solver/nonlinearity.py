"""
Nonlinearities P = Q0(u, ux, uxx) uxxx + Q1(u, ux, uxx).

Terms are written as multi-index monomials with a rational coefficient,
e.g. ``"-3/2 u^2 ux"`` or ``"10 u uxxx"``. A term containing ``uxxx``
belongs to Q0 and needs total degree >= 1 in (u, ux, uxx); any other term
belongs to Q1 and needs total degree >= 2.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from core.services.base import ValidationError
from .enums import Preset


FACTOR_ORDER = {'u': 0, 'ux': 1, 'uxx': 2, 'uxxx': 3}
_FACTOR = re.compile(r'^(u|ux|uxx|uxxx)(?:\^(\d+))?$')


@dataclass(frozen=True)
class Term:
    """coeff · u^p ux^q uxx^r (· uxxx when `third`)."""
    coeff: float
    p: int = 0
    q: int = 0
    r: int = 0
    third: bool = False

    @property
    def degree(self) -> int:
        """Total degree in (u, ux, uxx); uxxx not counted."""
        return self.p + self.q + self.r

    @property
    def polynomial_degree(self) -> int:
        return self.degree + int(self.third)

    @property
    def highest_order(self) -> int:
        if self.third:
            return 3
        return max((o for o, e in ((2, self.r), (1, self.q), (0, self.p)) if e), default=0)

    def evaluate(self, u, ux, uxx, uxxx) -> np.ndarray:
        out = self.coeff * u ** self.p * ux ** self.q * uxx ** self.r
        return out * uxxx if self.third else out

    def label(self) -> str:
        factors = []
        for name, power in (('u', self.p), ('ux', self.q), ('uxx', self.r)):
            if power == 1:
                factors.append(name)
            elif power > 1:
                factors.append(f'{name}^{power}')
        if self.third:
            factors.append('uxxx')
        return ' '.join([repr(float(self.coeff))] + factors)


def parse_term(text: str) -> Term:
    """
    Parse ``"[coeff] factor [factor ...]"``.

    Raises:
        ValidationError: On unknown factors, repeated uxxx or a term whose
            degree is too low for its class
    """
    tokens = text.split()
    if not tokens:
        raise ValidationError("empty term", {'terms': repr(text)})
    coeff = Fraction(1)
    if not _FACTOR.match(tokens[0]):
        try:
            coeff = Fraction(tokens[0])
        except (ValueError, ZeroDivisionError):
            raise ValidationError("invalid coefficient", {'terms': f"{tokens[0]!r} in {text!r}"})
        tokens = tokens[1:]
    powers = {'u': 0, 'ux': 0, 'uxx': 0, 'uxxx': 0}
    for token in tokens:
        match = _FACTOR.match(token)
        if not match:
            raise ValidationError("invalid factor", {'terms': f"{token!r} in {text!r}"})
        powers[match.group(1)] += int(match.group(2) or 1)
    if powers['uxxx'] > 1:
        raise ValidationError("uxxx may appear at most once per term", {'terms': repr(text)})
    term = Term(float(coeff), powers['u'], powers['ux'], powers['uxx'], bool(powers['uxxx']))
    _check_degree(term, text)
    return term


def _check_degree(term: Term, text: str = '') -> None:
    need = 1 if term.third else 2
    if term.degree < need:
        raise ValidationError(
            "term degree too low",
            {'terms': f"{text or term.label()!r} needs degree >= {need} in (u, ux, uxx)"},
        )


def parse_terms(terms: Union[str, Sequence[str]]) -> List[Term]:
    """Terms separated by ';' (or given as a list)."""
    if isinstance(terms, str):
        terms = [t for t in terms.split(';') if t.strip()]
    return [parse_term(t) for t in terms]


@dataclass(frozen=True)
class NonlinearitySpec:
    q0_terms: Tuple[Term, ...] = ()
    q1_terms: Tuple[Term, ...] = ()
    name: str = 'custom'

    def __post_init__(self):
        for term in self.q0_terms:
            if not term.third:
                raise ValidationError("Q0 terms multiply uxxx", {'terms': term.label()})
            _check_degree(term)
        for term in self.q1_terms:
            if term.third:
                raise ValidationError("Q1 terms cannot contain uxxx", {'terms': term.label()})
            _check_degree(term)

    @classmethod
    def from_terms(cls, terms: Iterable[Term], name: str = 'custom') -> 'NonlinearitySpec':
        terms = [t for t in terms if t.coeff != 0]
        return cls(
            q0_terms=tuple(t for t in terms if t.third),
            q1_terms=tuple(t for t in terms if not t.third),
            name=name,
        )

    @classmethod
    def zero(cls) -> 'NonlinearitySpec':
        return cls(name=Preset.ZERO.value)

    @property
    def terms(self) -> Tuple[Term, ...]:
        return self.q0_terms + self.q1_terms

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Highest polynomial degree of P, counting uxxx."""
        return max((t.polynomial_degree for t in self.terms), default=0)

    @property
    def required_dealias_fraction(self) -> float:
        """Fraction that removes all aliasing from degree-d products: 2/(d+1)."""
        return 2.0 / (self.degree + 1) if self.degree > 1 else 1.0

    def __call__(self, u, ux, uxx, uxxx) -> np.ndarray:
        out = np.zeros_like(u)
        for term in self.terms:
            out = out + term.evaluate(u, ux, uxx, uxxx)
        return out

    def linearized_rate(self, amplitude: float, k: float) -> float:
        """
        Size of the linearization of P at amplitude A on wavenumber k:
        sum of |coeff| · degree · A^{degree-1} · k^{order}.
        """
        rate = 0.0
        for t in self.terms:
            factors = t.polynomial_degree
            rate += abs(t.coeff) * factors * amplitude ** (factors - 1) * k ** t.highest_order
        return rate

    def coefficients(self) -> List[str]:
        return [t.label() for t in self.terms]


def _spec(name: str, terms: Sequence[Tuple[float, int, int, int, bool]]) -> NonlinearitySpec:
    return NonlinearitySpec.from_terms((Term(*t) for t in terms), name=name)


def preset(name: Union[str, Preset], **coefficients: float) -> NonlinearitySpec:
    """
    Named nonlinearity.

    Args:
        name: One of `Preset`
        **coefficients: c1 (benney1), c (benney2, d2d3), b1, b2, b3 (ivp17)

    Raises:
        ValidationError: On unknown names
    """
    try:
        name = Preset(name)
    except ValueError:
        raise ValidationError("unknown preset", {'preset': f"{name!r}; choose from {Preset.values}"})
    get = coefficients.get
    if name == Preset.ZERO:
        return NonlinearitySpec.zero()
    if name == Preset.KDV5:
        return _spec(name.value, [(10.0, 1, 0, 0, True), (20.0, 0, 1, 1, False), (-30.0, 2, 1, 0, False)])
    if name == Preset.BENNEY1:
        return _spec(name.value, [(get('c1', 1.0), 1, 1, 0, False)])
    if name == Preset.BENNEY2:
        c = get('c', 1.0)
        return _spec(name.value, [(c, 1, 0, 0, True), (2.0 * c, 0, 1, 1, False)])
    if name == Preset.LISHER:
        return _spec(name.value, [
            (1.0, 1, 1, 0, False), (1.0, 2, 1, 0, False),
            (1.0, 0, 1, 1, False), (1.0, 1, 1, 1, False),
            (1.0, 1, 0, 0, True), (1.0, 2, 0, 0, True),
        ])
    if name == Preset.IVP17:
        return _spec(name.value, [
            (get('b1', 1.0), 1, 0, 0, True),
            (get('b2', 1.0), 0, 1, 1, False),
            (get('b3', 1.0), 2, 1, 0, False),
        ])
    return _spec(name.value, [(get('c', 1.0), 0, 0, 1, True)])
