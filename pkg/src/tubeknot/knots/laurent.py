"""Integer Laurent polynomials normalised as Alexander invariants."""
from __future__ import annotations

from functools import total_ordering
from typing import Sequence


def _strip(c: list[int]) -> list[int]:
    lo, hi = 0, len(c)
    while lo < hi and c[lo] == 0:
        lo += 1
    while hi > lo and c[hi - 1] == 0:
        hi -= 1
    return c[lo:hi]


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_divmod(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]] | None:
    """Exact division over the integers, or ``None`` if a quotient
    coefficient is not integral.  Coefficient lists run from degree 0."""
    num = list(num)
    den = _strip(list(den))
    if not den:
        raise ZeroDivisionError
    if len(num) < len(den):
        return [0], num
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % lead:
            return None
        c //= lead
        q[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    return q, num[: len(den) - 1]


@total_ordering
class SymmetricLaurent:
    """Palindromic integer Laurent polynomial with value ``+1`` at ``t=1``.

    Parameters
    ----------
    coeffs : sequence of int
        Coefficients of ``t^0, t^1, ...`` of any representative; the
        unit factor ``+-t^k`` is removed.

    Notes
    -----
    Stored as the list ``c`` of length ``2d + 1`` where ``c[i]`` is the
    coefficient of ``t^(i - d)``.  The zero polynomial is representable
    (it arises for split links) and is flagged by :attr:`is_zero`.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence[int]):
        c = _strip([int(x) for x in coeffs])
        if c and sum(c) < 0:
            c = [-x for x in c]
        self.c = tuple(c)

    @classmethod
    def from_symmetric(cls, sym: Sequence[int]) -> "SymmetricLaurent":
        """Build from ``[a0, a1, ..., ad]`` meaning ``a0 + sum a_i (t^i + t^-i)``."""
        sym = list(sym)
        return cls(list(reversed(sym[1:])) + sym)

    @classmethod
    def one(cls) -> "SymmetricLaurent":
        return cls([1])

    @property
    def is_zero(self) -> bool:
        return not self.c

    @property
    def degree(self) -> int:
        """Half-width ``d``: the polynomial spans ``t^-d .. t^d``."""
        return (len(self.c) - 1) // 2

    @property
    def is_palindromic(self) -> bool:
        return self.c == self.c[::-1] and len(self.c) % 2 == 1

    def symmetric(self) -> list[int]:
        """``[a0, a1, ..., ad]`` for a palindromic polynomial."""
        d = self.degree
        return list(self.c[d:])

    def __call__(self, t):
        d = self.degree
        return sum(a * t ** (i - d) for i, a in enumerate(self.c))

    @property
    def determinant(self) -> int:
        """Knot determinant ``|Delta(-1)|``."""
        d = self.degree
        return abs(sum(a if (i - d) % 2 == 0 else -a for i, a in enumerate(self.c)))

    def __mul__(self, other: "SymmetricLaurent") -> "SymmetricLaurent":
        return SymmetricLaurent(poly_mul(self.c, other.c))

    def divides(self, other: "SymmetricLaurent") -> bool:
        """True if ``other / self`` is an integer Laurent polynomial."""
        if self.is_zero:
            return other.is_zero
        if other.is_zero:
            return True
        r = poly_divmod(other.c, self.c)
        return r is not None and not any(r[1])

    def quotient(self, divisor: "SymmetricLaurent") -> "SymmetricLaurent | None":
        r = poly_divmod(self.c, divisor.c)
        if r is None or any(r[1]):
            return None
        return SymmetricLaurent(r[0])

    def __eq__(self, other):
        return isinstance(other, SymmetricLaurent) and self.c == other.c

    def __lt__(self, other):
        return (len(self.c), self.c) < (len(other.c), other.c)

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"SymmetricLaurent({self})"

    def __str__(self):
        if self.is_zero:
            return "0"
        d = self.degree
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if not a:
                continue
            e = i - d
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            mag = abs(a)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            terms.append(("-" if a < 0 else "+", body))
        first, rest = terms[0], terms[1:]
        s = ("-" if first[0] == "-" else "") + first[1]
        for sign, body in rest:
            s += f" {sign} {body}"
        return s
