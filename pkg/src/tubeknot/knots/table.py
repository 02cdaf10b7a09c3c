"""Knot table and identification by Alexander polynomial.

The table holds every prime knot through eight crossings (mirror images
identified).  :func:`identify` also recognises connected sums of table
primes with total crossing number at most :data:`COMPOSITE_CROSSING_CAP`
by exact factorisation.

When several factorisations share one polynomial (for example ``8_20``
and ``3_1#3_1``) the result keeps all of them; callers that need a
definite answer must treat such an id as ambiguous.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .laurent import SymmetricLaurent

#: Symmetric coefficient lists ``[a0, a1, ...]`` of the normalised
#: Alexander polynomials ``a0 + sum a_i (t^i + t^-i)``.
PRIME_TABLE: dict[str, tuple[int, ...]] = {
    "3_1": (-1, 1),
    "4_1": (3, -1),
    "5_1": (1, -1, 1),
    "5_2": (-3, 2),
    "6_1": (5, -2),
    "6_2": (-3, 3, -1),
    "6_3": (5, -3, 1),
    "7_1": (-1, 1, -1, 1),
    "7_2": (-5, 3),
    "7_3": (3, -3, 2),
    "7_4": (-7, 4),
    "7_5": (5, -4, 2),
    "7_6": (-7, 5, -1),
    "7_7": (9, -5, 1),
    "8_1": (7, -3),
    "8_2": (3, -3, 3, -1),
    "8_3": (9, -4),
    "8_4": (-5, 5, -2),
    "8_5": (5, -4, 3, -1),
    "8_6": (-7, 6, -2),
    "8_7": (-5, 5, -3, 1),
    "8_8": (9, -6, 2),
    "8_9": (7, -5, 3, -1),
    "8_10": (-7, 6, -3, 1),
    "8_11": (-9, 7, -2),
    "8_12": (13, -7, 1),
    "8_13": (11, -7, 2),
    "8_14": (-11, 8, -2),
    "8_15": (11, -8, 3),
    "8_16": (-9, 8, -4, 1),
    "8_17": (11, -8, 4, -1),
    "8_18": (13, -10, 5, -1),
    "8_19": (1, 0, -1, 1),
    "8_20": (3, -2, 1),
    "8_21": (-5, 4, -1),
}

#: Largest total crossing number of a composite considered by identify.
COMPOSITE_CROSSING_CAP = 10

#: Curves with at most this many edges are assumed to carry only table
#: knots, so ``Delta = 1`` is reported as the unknot.  Alexander-trivial
#: nontrivial knots have crossing number at least 11, and every lattice
#: knot in the tubes studied here (W <= 8) at the censused lengths is far
#: below the length such knots require.
UNKNOT_SAFE_LENGTH = 200


def crossing_number(name: str) -> int:
    return int(name.split("_")[0])


def _sort_key(name: str) -> tuple[int, int]:
    a, b = name.split("_")
    return int(a), int(b)


PRIMES: tuple[str, ...] = tuple(sorted(PRIME_TABLE, key=_sort_key))
PRIME_POLY: dict[str, SymmetricLaurent] = {
    k: SymmetricLaurent.from_symmetric(v) for k, v in PRIME_TABLE.items()
}


@dataclass(frozen=True)
class KnotId:
    """An identified knot type.

    Attributes
    ----------
    kind : {"unknot", "prime", "composite", "unknown"}
    factors : tuple of str
        Prime summands of the preferred reading, sorted.
    poly : SymmetricLaurent
        The Alexander polynomial the id was derived from.
    alternatives : tuple of tuple of str
        Other factorisations consistent with :attr:`poly`.
    """

    kind: str
    factors: tuple[str, ...]
    poly: SymmetricLaurent
    alternatives: tuple[tuple[str, ...], ...] = ()

    @property
    def name(self) -> str:
        if self.kind == "unknot":
            return "0_1"
        if self.kind == "unknown":
            return f"unknown[{self.poly}]"
        return "#".join(self.factors)

    @property
    def readings(self) -> tuple[tuple[str, ...], ...]:
        return (self.factors,) + self.alternatives

    @property
    def is_ambiguous(self) -> bool:
        return bool(self.alternatives)

    @property
    def is_unknot(self) -> bool:
        return self.kind == "unknot"

    def has_summand(self, prime: str) -> bool | None:
        """Whether ``prime`` is a connect summand.

        Returns ``None`` when the readings disagree or the knot is
        unidentified.  A summand is excluded outright when its polynomial
        does not divide :attr:`poly`.
        """
        if not PRIME_POLY[prime].divides(self.poly):
            return False
        if self.kind == "unknown":
            return None
        votes = {prime in r for r in self.readings}
        return votes.pop() if len(votes) == 1 else None

    def __str__(self):
        return self.name


UNKNOT = KnotId("unknot", (), SymmetricLaurent.one())


def parse_knot(name: str) -> KnotId:
    """Parse ``"0_1"``, ``"3_1"`` or ``"3_1#4_1"`` into a KnotId."""
    name = name.strip()
    if name in ("0_1", "unknot"):
        return UNKNOT
    parts = tuple(sorted(name.split("#"), key=_sort_key))
    poly = SymmetricLaurent.one()
    for p in parts:
        if p not in PRIME_POLY:
            raise ValueError(f"unknown knot name {p!r}")
        poly = poly * PRIME_POLY[p]
    if len(parts) == 0:
        return UNKNOT
    # keep the requested reading first; other factorisations stay as alternatives
    found = identify(poly)
    others = tuple(r for r in found.readings if r != parts)
    return KnotId("prime" if len(parts) == 1 else "composite", parts, poly, others)


@lru_cache(maxsize=None)
def _factorisations(c: tuple[int, ...], start: int, budget: int) -> tuple[tuple[str, ...], ...]:
    poly = SymmetricLaurent(c)
    if poly == SymmetricLaurent.one():
        return ((),)
    out = []
    for i in range(start, len(PRIMES)):
        p = PRIMES[i]
        cn = crossing_number(p)
        if cn > budget:
            break
        q = poly.quotient(PRIME_POLY[p])
        if q is None:
            continue
        for rest in _factorisations(q.c, i, budget - cn):
            out.append((p,) + rest)
    return tuple(out)


def identify(poly: SymmetricLaurent) -> KnotId:
    """Look up a normalised Alexander polynomial."""
    if poly == SymmetricLaurent.one():
        return UNKNOT
    found = _factorisations(poly.c, 0, COMPOSITE_CROSSING_CAP) if poly.c else ()
    if not found:
        return KnotId("unknown", (), poly)
    found = sorted(found, key=lambda f: (len(f), sum(map(crossing_number, f)), [_sort_key(x) for x in f]))
    best = found[0]
    kind = "prime" if len(best) == 1 else "composite"
    return KnotId(kind, best, poly, tuple(found[1:]))
