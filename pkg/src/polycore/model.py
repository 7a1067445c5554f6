"""Exact multivariate polynomials over the rationals and polynomial maps."""

from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from src.utils.exceptions import ArityMismatch, IndexOutOfRange

Rat = Fraction
Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]
RatLike = Union[int, Fraction, str]


def to_rat(value: RatLike) -> Fraction:
    """Parse an int, Fraction or "p/q" string into a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational coefficients")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rat_to_str(value: Fraction) -> str:
    """Wire form of a rational: always "p/q"."""
    return f"{value.numerator}/{value.denominator}"


def _format_rat(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def default_names(arity: int, prefix: str = "x") -> Tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(arity))


class Poly:
    """
    Polynomial in `arity` variables with Fraction coefficients.

    Terms are keyed by exponent vectors; zero coefficients are never stored.
    Instances are immutable and hashable. Arity 0 is allowed and holds plain
    rational constants (used for series without auxiliary parameters).
    """

    __slots__ = ("arity", "_terms", "_hash")

    arity: int
    _terms: Mapping[Monomial, Fraction]
    _hash: Optional[int]

    def __init__(self, arity: int, terms: Optional[Mapping[Monomial, RatLike]] = None):
        if arity < 0:
            raise ValueError(f"arity must be non-negative, got {arity}")
        cleaned: Dict[Monomial, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            key = tuple(int(e) for e in exps)
            if len(key) != arity:
                raise ArityMismatch(
                    f"exponent vector {key} does not have length {arity}"
                )
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            c = to_rat(coeff)
            if c:
                cleaned[key] = cleaned.get(key, Fraction(0)) + c
                if not cleaned[key]:
                    del cleaned[key]
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "_terms", MappingProxyType(cleaned))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Poly is immutable")

    def __reduce__(self) -> Tuple[type, Tuple[int, Dict[Monomial, Fraction]]]:
        return (Poly, (self.arity, dict(self._terms)))

    # ------------------------------------------------------------------ #
    # Constructors
    # ------------------------------------------------------------------ #

    @classmethod
    def _raw(cls, arity: int, terms: Dict[Monomial, Fraction]) -> "Poly":
        # Trusted fast path: terms already validated and zero-free
        obj = cls.__new__(cls)
        object.__setattr__(obj, "arity", arity)
        object.__setattr__(obj, "_terms", MappingProxyType(terms))
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def zero(cls, arity: int) -> "Poly":
        return cls._raw(arity, {})

    @classmethod
    def constant(cls, arity: int, value: RatLike) -> "Poly":
        c = to_rat(value)
        return cls._raw(arity, {(0,) * arity: c} if c else {})

    @classmethod
    def variable(cls, arity: int, index: int) -> "Poly":
        if not 0 <= index < arity:
            raise IndexOutOfRange(f"variable index {index} outside 0..{arity - 1}")
        exps = [0] * arity
        exps[index] = 1
        return cls._raw(arity, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, coeff: RatLike, exps: Sequence[int]) -> "Poly":
        return cls(len(exps), {tuple(exps): coeff})

    # ------------------------------------------------------------------ #
    # Inspection
    # ------------------------------------------------------------------ #

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(exps) for exps in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.arity, Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(exps) for exps in self._terms), default=-1)

    def degree_in(self, index: int) -> int:
        self._check_index(index)
        return max((exps[index] for exps in self._terms), default=-1)

    def homogeneous_part(self, degree: int) -> "Poly":
        return Poly._raw(
            self.arity,
            {e: c for e, c in self._terms.items() if sum(e) == degree},
        )

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Canonical order: descending total degree, then descending exponents."""
        return sorted(
            self._terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True
        )

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # ------------------------------------------------------------------ #
    # Arithmetic
    # ------------------------------------------------------------------ #

    def _coerce(self, other: object) -> Optional["Poly"]:
        if isinstance(other, Poly):
            if other.arity != self.arity:
                raise ArityMismatch(
                    f"arity {self.arity} does not match arity {other.arity}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly.constant(self.arity, other)
        return None

    def __add__(self, other: Union["Poly", Scalar]) -> "Poly":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        result = dict(self._terms)
        for exps, c in q._terms.items():
            s = result.get(exps, Fraction(0)) + c
            if s:
                result[exps] = s
            else:
                result.pop(exps, None)
        return Poly._raw(self.arity, result)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.arity, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Union["Poly", Scalar]) -> "Poly":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other: Scalar) -> "Poly":
        return (-self) + other

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return Poly.zero(self.arity)
            return Poly._raw(self.arity, {e: c * other for e, c in self._terms.items()})
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        result: Dict[Monomial, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in q._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                s = result.get(key, Fraction(0)) + c1 * c2
                if s:
                    result[key] = s
                else:
                    result.pop(key, None)
        return Poly._raw(self.arity, result)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Poly":
        if isinstance(other, bool) or not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise ValueError("negative powers of a polynomial are not polynomials")
        result = Poly.constant(self.arity, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.arity == other.arity and dict(self._terms) == dict(other._terms)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return dict(self._terms) == dict(Poly.constant(self.arity, other)._terms)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((self.arity, frozenset(self._terms.items())))
            )
        return self._hash  # type: ignore[return-value]

    # ------------------------------------------------------------------ #
    # Calculus and substitution
    # ------------------------------------------------------------------ #

    def _check_index(self, index: int) -> None:
        if not 0 <= index < self.arity:
            raise IndexOutOfRange(
                f"variable index {index} outside 0..{self.arity - 1}"
            )

    def partial(self, index: int) -> "Poly":
        """Formal partial derivative with respect to variable `index` (0-based)."""
        self._check_index(index)
        result: Dict[Monomial, Fraction] = {}
        for exps, c in self._terms.items():
            e = exps[index]
            if e == 0:
                continue
            key = exps[:index] + (e - 1,) + exps[index + 1 :]
            result[key] = result.get(key, Fraction(0)) + c * e
        return Poly._raw(self.arity, {k: v for k, v in result.items() if v})

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace variable i by images[i]; all images share one arity."""
        if len(images) != self.arity:
            raise ArityMismatch(
                f"expected {self.arity} substitutions, got {len(images)}"
            )
        if not images:
            return self
        target = images[0].arity
        if any(p.arity != target for p in images):
            raise ArityMismatch("substituted polynomials disagree on arity")

        powers: List[Dict[int, Poly]] = [{0: Poly.constant(target, 1)} for _ in images]

        def power(i: int, e: int) -> Poly:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        result = Poly.zero(target)
        for exps, c in self._terms.items():
            term = Poly.constant(target, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, point: Sequence[complex]) -> complex:
        """Floating evaluation at a complex point."""
        if len(point) != self.arity:
            raise ArityMismatch(
                f"point has {len(point)} coordinates, polynomial has arity {self.arity}"
            )
        total = 0j
        for exps, c in self._terms.items():
            term = complex(float(c))
            for x, e in zip(point, exps):
                if e:
                    term *= x**e
            total += term
        return total

    def evaluate_rat(self, point: Sequence[RatLike]) -> Fraction:
        """Exact evaluation at a rational point."""
        if len(point) != self.arity:
            raise ArityMismatch(
                f"point has {len(point)} coordinates, polynomial has arity {self.arity}"
            )
        values = [to_rat(v) for v in point]
        total = Fraction(0)
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(values, exps):
                if e:
                    term *= x**e
            total += term
        return total

    # ------------------------------------------------------------------ #
    # Printing
    # ------------------------------------------------------------------ #

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        """Canonical text such as "x1*x2 + x2^2" or "2*e^2 - 1"."""
        names = tuple(names) if names is not None else default_names(self.arity)
        if len(names) != self.arity:
            raise ArityMismatch(f"{len(names)} names for arity {self.arity}")
        if not self._terms:
            return "0"

        pieces: List[str] = []
        for exps, c in self.sorted_terms():
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(names, exps)
                if e
            ]
            magnitude = abs(c)
            if not factors:
                body = _format_rat(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_format_rat(magnitude)] + factors)
            if not pieces:
                pieces.append(f"-{body}" if c < 0 else body)
            else:
                pieces.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Poly({self.arity}, {self.format()!r})"


class PolyMap:
    """A polynomial self-map f = (f_1, .., f_n) of affine n-space."""

    __slots__ = ("arity", "components", "names")

    arity: int
    components: Tuple[Poly, ...]
    names: Tuple[str, ...]

    def __init__(
        self, components: Sequence[Poly], names: Optional[Sequence[str]] = None
    ):
        if not components:
            raise ArityMismatch("a polynomial map needs at least one component")
        arity = len(components)
        for i, p in enumerate(components):
            if p.arity != arity:
                raise ArityMismatch(
                    f"component {i + 1} has arity {p.arity}, map has {arity} components"
                )
        resolved = tuple(names) if names is not None else default_names(arity)
        if len(resolved) != arity:
            raise ArityMismatch(f"{len(resolved)} variable names for arity {arity}")
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "components", tuple(components))
        object.__setattr__(self, "names", resolved)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("PolyMap is immutable")

    def __reduce__(self) -> Tuple[type, Tuple[Tuple[Poly, ...], Tuple[str, ...]]]:
        return (PolyMap, (self.components, self.names))

    @classmethod
    def identity(cls, arity: int) -> "PolyMap":
        return cls([Poly.variable(arity, i) for i in range(arity)])

    def __getitem__(self, index: int) -> Poly:
        return self.components[index]

    def __iter__(self) -> Iterator[Poly]:
        return iter(self.components)

    def __len__(self) -> int:
        return self.arity

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def evaluate(self, point: Sequence[complex]) -> Tuple[complex, ...]:
        return tuple(p.evaluate(point) for p in self.components)

    def evaluate_rat(self, point: Sequence[RatLike]) -> Tuple[Fraction, ...]:
        return tuple(p.evaluate_rat(point) for p in self.components)

    def format(self) -> str:
        return "(" + ", ".join(p.format(self.names) for p in self.components) + ")"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"PolyMap{self.format()}"


Matrix = List[List[Poly]]
