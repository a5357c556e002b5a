"""Exact scalar fields: GF(p^k) with an explicit modulus, and the rationals.

Matrices never carry a FieldSpec themselves. Over a finite field they are galois FieldArrays, whose class
identifies the field; over the rationals they are numpy object arrays of Fraction.
"""

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator

import galois
import numpy as np

from exact_linalg.utils import memoize


class FieldKind(str, enum.Enum):
    RATIONALS = "q"
    FINITE = "gf"


class InvalidFieldSpec(ValueError):
    def __init__(self, spec: Any, reason: str):
        self.spec = spec
        self.reason = reason

    def __str__(self):
        return f"Invalid field spec {self.spec!r}: {self.reason}"


class IncompatibleFields(ArithmeticError):
    def __init__(self, source: "FieldSpec", target: "FieldSpec"):
        self.source = source
        self.target = target

    def __str__(self):
        return f"{self.target} is not an extension of {self.source}."


@memoize
def minimal_modulus(p: int, k: int) -> tuple:
    """The lexicographically smallest monic irreducible polynomial of degree k over GF(p), little-endian."""
    poly = galois.irreducible_poly(p, k, method="min")
    return tuple(int(c) for c in poly.coeffs[::-1])


@memoize
def _is_irreducible(p: int, modulus: tuple) -> bool:
    return galois.Poly(list(modulus), field=galois.GF(p), order="asc").is_irreducible()


@memoize
def _galois_field(p: int, k: int, modulus: tuple | None):
    if k == 1:
        return galois.GF(p)
    irreducible = galois.Poly(list(modulus), field=galois.GF(p), order="asc")
    return galois.GF(p**k, irreducible_poly=irreducible)


_SPEC_BY_CLASS: dict = {}


@dataclass(frozen=True)
class FieldSpec:
    """A field K: the rationals, or GF(p^k) given by a monic irreducible modulus (little-endian coefficients)."""

    kind: FieldKind
    p: int | None = None
    k: int = 1
    modulus: tuple | None = None

    def __post_init__(self):
        if self.kind is FieldKind.RATIONALS:
            if self.p is not None or self.k != 1 or self.modulus is not None:
                raise InvalidFieldSpec(self, "the rationals take no characteristic, degree or modulus")
            return
        if self.p is None or not galois.is_prime(self.p):
            raise InvalidFieldSpec(self, f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise InvalidFieldSpec(self, f"degree {self.k} must be positive")
        if self.k == 1:
            if self.modulus is not None:
                raise InvalidFieldSpec(self, "a prime field takes no modulus")
            return
        if self.modulus is None or len(self.modulus) != self.k + 1:
            raise InvalidFieldSpec(self, f"expected {self.k + 1} modulus coefficients")
        if self.modulus[-1] != 1 or any(not 0 <= c < self.p for c in self.modulus):
            raise InvalidFieldSpec(self, "modulus must be monic with coefficients in [0, p)")
        if not _is_irreducible(self.p, self.modulus):
            raise InvalidFieldSpec(self, "modulus is reducible")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(FieldKind.RATIONALS)

    @classmethod
    def gf(cls, p: int, k: int = 1, modulus=None) -> "FieldSpec":
        if k > 1 and modulus is None:
            modulus = minimal_modulus(p, k)
        return cls(FieldKind.FINITE, p, k, tuple(int(c) for c in modulus) if modulus is not None else None)

    @classmethod
    def parse(cls, obj: Any) -> "FieldSpec":
        """Read "q", "gf:p", "gf:p^k", "gf:q" (prime power) or {"p": p, "k": k, "modulus": [c0, ..., ck]}."""
        if isinstance(obj, FieldSpec):
            return obj
        if isinstance(obj, dict):
            try:
                return cls.gf(int(obj["p"]), int(obj.get("k", 1)), obj.get("modulus"))
            except KeyError:
                raise InvalidFieldSpec(obj, "missing characteristic 'p'")
        if not isinstance(obj, str):
            raise InvalidFieldSpec(obj, "expected a string or an object")
        text = obj.strip().lower()
        if text in ("q", "qq", "rationals"):
            return cls.rationals()
        if not text.startswith("gf:"):
            raise InvalidFieldSpec(obj, "expected 'q' or 'gf:<order>'")
        body = text[3:]
        try:
            if "^" in body:
                p, k = (int(part) for part in body.split("^"))
                return cls.gf(p, k)
            order = int(body)
        except ValueError:
            raise InvalidFieldSpec(obj, "order is not an integer")
        if galois.is_prime(order):
            return cls.gf(order)
        if not galois.is_prime_power(order):
            raise InvalidFieldSpec(obj, f"{order} is not a prime power")
        primes, exponents = galois.factors(order)
        return cls.gf(int(primes[0]), int(exponents[0]))

    def to_json(self) -> Any:
        if self.kind is FieldKind.RATIONALS:
            return "q"
        if self.k == 1:
            return f"gf:{self.p}"
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    def __str__(self):
        if self.kind is FieldKind.RATIONALS:
            return "Q"
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"

    @property
    def is_finite(self) -> bool:
        return self.kind is FieldKind.FINITE

    @property
    def order(self) -> int | None:
        return self.p**self.k if self.is_finite else None

    def galois_field(self):
        GF = _galois_field(self.p, self.k, self.modulus)
        _SPEC_BY_CLASS.setdefault(GF, self)
        return GF

    def extension(self, d: int) -> "FieldSpec":
        """GF(p^{kd}) with its minimal modulus; d = 1 returns this field."""
        if not self.is_finite:
            raise IncompatibleFields(self, self)
        return self if d == 1 else FieldSpec.gf(self.p, self.k * d)

    # elements

    def element_int(self, x: Any) -> int:
        """Integer code of an element of a finite field (base-p digits are the little-endian coefficients)."""
        if isinstance(x, galois.FieldArray):
            return int(x)
        if isinstance(x, (list, tuple)):
            if len(x) > self.k:
                raise InvalidFieldSpec(self, f"element {x!r} has more than {self.k} coefficients")
            return sum((int(c) % self.p) * self.p**i for i, c in enumerate(x))
        if isinstance(x, str):
            x = int(x.strip())
        if isinstance(x, Fraction):
            if x.denominator != 1:
                x = x.numerator * pow(x.denominator, -1, self.p)
            else:
                x = x.numerator
        # a bare integer names an element of the prime subfield
        return int(x) % self.p

    def scalar(self, x: Any):
        if self.is_finite:
            return self.galois_field()(self.element_int(x))
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def zero(self):
        return self.scalar(0)

    def one(self):
        return self.scalar(1)

    def coefficients(self, x: Any) -> list:
        return _digits(self.element_int(x), self.p, self.k)

    def sort_key(self, x: Any) -> tuple:
        """Canonical order: numerator then denominator over Q, coefficient vector over GF(p^k)."""
        if self.is_finite:
            return tuple(self.coefficients(x))
        x = Fraction(x)
        return (x.numerator, x.denominator)

    def encode(self, x: Any) -> Any:
        if self.is_finite:
            return self.coefficients(x)
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def decode(self, obj: Any):
        return self.scalar(obj)

    def elements(self) -> Iterator:
        if not self.is_finite:
            raise InvalidFieldSpec(self, "the rationals cannot be enumerated")
        GF = self.galois_field()
        for code in range(self.order):
            yield GF(code)

    # arrays

    def zeros(self, rows: int, cols: int | None = None):
        shape = (rows,) if cols is None else (rows, cols)
        if self.is_finite:
            return self.galois_field().Zeros(shape)
        return np.full(shape, Fraction(0), dtype=object)

    def identity(self, n: int):
        if self.is_finite:
            return self.galois_field().Identity(n)
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def array(self, entries: Any, ndim: int = 2, shape: tuple | None = None):
        """Build an ndim-dimensional array from nested lists of element encodings."""
        leaves = []

        def walk(level, depth):
            if depth == ndim:
                leaves.append(level)
                return
            for item in level:
                walk(item, depth + 1)

        walk(entries, 0)
        if shape is None:
            shape, level = [], entries
            for _ in range(ndim):
                shape.append(len(level))
                level = level[0] if len(level) else []
            shape = tuple(shape)
        if len(leaves) != int(np.prod(shape, dtype=np.int64)):
            raise ValueError(f"{len(leaves)} entries do not fill shape {shape}")
        if self.is_finite:
            codes = np.array([self.element_int(x) for x in leaves], dtype=np.int64).reshape(shape)
            return self.galois_field()(codes)
        out = np.empty(shape, dtype=object)
        for idx, x in zip(np.ndindex(*shape), leaves):
            out[idx] = self.scalar(x)
        return out

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int | None = None, bound: int = 3):
        """Uniform over GF(p^k); integers in [-bound, bound] over the rationals."""
        shape = (rows,) if cols is None else (rows, cols)
        if self.is_finite:
            return self.galois_field()(rng.integers(0, self.order, size=shape))
        ints = rng.integers(-bound, bound + 1, size=shape)
        out = np.empty(shape, dtype=object)
        for idx, value in np.ndenumerate(ints):
            out[idx] = Fraction(int(value))
        return out

    def random_scalar(self, rng: np.random.Generator, nonzero: bool = False):
        while True:
            x = self.random_matrix(rng, 1)[0]
            if not nonzero or x != 0:
                return x

    def encode_array(self, A) -> list:
        if A.ndim == 1:
            return [self.encode(x) for x in A]
        return [[self.encode(x) for x in row] for row in A]


RATIONALS = FieldSpec.rationals()


def _digits(code: int, p: int, k: int) -> list:
    digits = []
    for _ in range(k):
        code, digit = divmod(code, p)
        digits.append(digit)
    return digits


def field_of(A: Any) -> FieldSpec:
    """The field an array (or a scalar) lives over."""
    if isinstance(A, galois.FieldArray):
        GF = type(A)
        spec = _SPEC_BY_CLASS.get(GF)
        if spec is None:
            modulus = None
            if GF.degree > 1:
                modulus = tuple(int(c) for c in GF.irreducible_poly.coeffs[::-1])
            spec = FieldSpec.gf(int(GF.characteristic), int(GF.degree), modulus)
            _SPEC_BY_CLASS[GF] = spec
        return spec
    return RATIONALS


@memoize
def embedding_table(small: FieldSpec, big: FieldSpec) -> np.ndarray:
    """Integer codes in `big` of every element of `small`, indexed by the element's code in `small`."""
    if not (small.is_finite and big.is_finite) or small.p != big.p or big.k % small.k:
        raise IncompatibleFields(small, big)
    GFb = big.galois_field()
    if small.k == 1:
        return np.arange(small.p, dtype=np.int64)
    roots = galois.Poly(list(small.modulus), field=GFb, order="asc").roots()
    root = min(roots, key=big.sort_key)
    powers = [root**i for i in range(small.k)]
    table = np.zeros(small.order, dtype=np.int64)
    for code in range(small.order):
        image = GFb(0)
        for i, c in enumerate(_digits(code, small.p, small.k)):
            if c:
                image = image + GFb(c) * powers[i]
        table[code] = int(image)
    return table
