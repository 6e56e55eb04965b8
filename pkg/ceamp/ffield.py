"""Arithmetic over prime fields F_p."""

import dataclasses
import functools

from ceamp.errors import FieldError


@functools.lru_cache(maxsize=None)
def is_prime(x: int) -> bool:
    if x < 2:
        return False
    d = 2
    while d * d <= x:
        if x % d == 0:
            return False
        d += 1
    return True


def smallest_prime_geq(x: int) -> int:
    """Returns the least prime p with p >= x."""
    p = max(x, 2)
    while not is_prime(p):
        p += 1
    return p


@dataclasses.dataclass(frozen=True, order=True)
class FieldElement:
    """An element of F_p.

    Attributes:
      value: Representative in 0..p-1.
      modulus: The prime p.
    """
    value: int
    modulus: int

    def __post_init__(self):
        if not is_prime(self.modulus):
            raise FieldError(f"{self.modulus} is not prime")
        if not 0 <= self.value < self.modulus:
            raise FieldError(f"{self.value} is not a representative of F_{self.modulus}")

    @classmethod
    def of(cls, value: int, modulus: int) -> "FieldElement":
        return cls(value % modulus, modulus)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)

    def _coerce(self, other: "FieldElement | int") -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise FieldError(
                    f"cannot combine elements of F_{self.modulus} and F_{other.modulus}"
                )
            return other.value
        return other

    def __add__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement.of(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement.of(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other: int) -> "FieldElement":
        return FieldElement.of(other - self.value, self.modulus)

    def __mul__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement.of(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self) -> "FieldElement":
        return FieldElement.of(-self.value, self.modulus)


def elements(p: int) -> list[FieldElement]:
    """Returns 0..p-1 as elements of F_p."""
    return [FieldElement(v, p) for v in range(p)]


def f_inv(a: FieldElement) -> FieldElement:
    """Returns the multiplicative inverse of `a`.

    Raises:
      FieldError: If `a` is zero.
    """
    if a.value == 0:
        raise FieldError(f"0 has no inverse in F_{a.modulus}")
    return FieldElement(pow(a.value, -1, a.modulus), a.modulus)


def progression_third(pv: FieldElement, q: FieldElement) -> FieldElement:
    """Returns r = 2q - pv, the unique r with q - pv = r - q."""
    return 2 * q - pv


def progression_center(pv: FieldElement, r: FieldElement) -> FieldElement:
    """Returns q = (pv + r) / 2, the middle term of the progression pv, q, r.

    Over F_2 the middle term is only defined for pv = r, in which case it is pv.

    Raises:
      FieldError: On a modulus mismatch, or over F_2 with pv != r.
    """
    total = pv + r
    if pv.modulus == 2:
        if total.value != 0:
            raise FieldError("2 is not invertible in F_2")
        return pv
    return total * f_inv(FieldElement(2, pv.modulus))
