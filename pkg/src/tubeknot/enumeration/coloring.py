"""Fox p-colourings of denominator closures, carried column by column.

A knot admits a nontrivial Fox p-colouring exactly when p divides its
determinant, so a census for a knot K only needs candidates whose
denominator closure is p-colourable for a prime p dividing det(K).  This
module decides that property for all patterns at once with a dynamic
programme over ``(mate, R, dK)``:

* ``R`` is the subspace of colour vectors on the strands crossing the
  current interface that extend to a colouring of everything to the left
  (the left closure arc included), in reduced row-echelon form;
* ``dK`` counts (capped at one) the extra dimensions of colourings that
  vanish on the interface.

The crossings inside one column slab are read off the default
projection: a hinge y-edge passes under every incoming x-edge at the same
``y`` that is higher in z, and over every outgoing x-edge at ``y + 1``
that is lower in z.  See :mod:`tubeknot.knots.diagram`.
"""
from __future__ import annotations

from ..transfer.columns import CrossSection, Mate

Basis = tuple[tuple[int, ...], ...]


def rref(rows, n: int, p: int) -> tuple[Basis, list[int]]:
    """Reduced row-echelon form over GF(p)."""
    rows = [[x % p for x in r] for r in rows]
    piv: list[int] = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    return tuple(tuple(x) for x in rows[:r]), piv


def nullspace(rows, n: int, p: int) -> list[list[int]]:
    R, piv = rref(rows, n, p)
    pivset = set(piv)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-R[i][f]) % p
        basis.append(v)
    return basis


class SlabColoring:
    """Transition rule of the colouring programme for one tube."""

    def __init__(self, cs: CrossSection, p: int = 3):
        self.cs = cs
        self.p = p
        self._cache: dict = {}

    def slab_equations(self, S: list[int], mask: int, So: list[int]):
        """Arc classes and crossing equations of one column slab.

        Returns ``(n_classes, in_class, out_class, equations)`` where
        ``in_class[p]`` / ``out_class[p]`` give the arc class at an incoming
        / outgoing interface position and each equation is a triple
        ``(over, under_a, under_b)`` of class indices.
        """
        M = self.cs.tube.M
        pos = self.cs.tube.position
        parent: dict = {}

        def find(a):
            parent.setdefault(a, a)
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            parent[find(a)] = find(b)

        Sset = set(S)
        E = self.cs.mask_edges(mask)
        Eset = set(E)
        eqs = []
        for a, b in E:
            ya, za = divmod(a, M + 1)
            if b - a == M + 1:  # y-edge (ya, za) -> (ya + 1, za)
                prev = ("v", a)
                for zz in range(za + 1, M + 1):
                    if pos(ya, zz) in Sset:
                        nxt = ("y", a, zz)
                        eqs.append((("v", pos(ya, zz)), prev, nxt))
                        prev = nxt
                union(prev, ("v", b))
            else:
                union(("v", a), ("v", b))
        out_arc = {}
        for q in So:
            y, z = divmod(q, M + 1)
            prev = ("v", q)
            if y > 0:
                for zz in range(z + 1, M + 1):
                    if (pos(y - 1, zz), pos(y, zz)) in Eset:
                        nxt = ("o", q, zz)
                        eqs.append((("v", pos(y, zz)), prev, nxt))
                        prev = nxt
            out_arc[q] = prev
        occupied = Sset | set(So)
        for a, b in E:
            occupied |= {a, b}
        for q in occupied:
            find(("v", q))
        for e in eqs:
            for x in e:
                find(x)
        index: dict = {}
        for k in list(parent):
            index.setdefault(find(k), len(index))
        cls = lambda k: index[find(k)]
        return (
            len(index),
            {q: cls(("v", q)) for q in S},
            {q: cls(out_arc[q]) for q in So},
            [(cls(o), cls(a), cls(b)) for o, a, b in eqs],
        )

    def advance(self, mate: Mate, R: Basis, dK: int, mask: int, new_mate: Mate) -> tuple[Basis, int]:
        key = (mate, R, dK, mask)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        p = self.p
        S = [q for q, m in enumerate(mate) if m >= 0]
        So = [q for q, m in enumerate(new_mate) if m >= 0]
        n, in_cls, out_cls, eqs = self.slab_equations(S, mask, So)
        rows = []
        for o, a, b in eqs:
            r = [0] * n
            r[o] += 2
            r[a] -= 1
            r[b] -= 1
            rows.append(r)
        # incoming colours must lie in R: impose its annihilator
        for c in nullspace([list(v) for v in R], len(S), p) if R else [
                [int(i == j) for i in range(len(S))] for j in range(len(S))]:
            r = [0] * n
            for coef, q in zip(c, S):
                r[in_cls[q]] += coef
            rows.append(r)
        J = nullspace(rows, n, p)
        proj = [[v[out_cls[q]] for q in So] for v in J]
        Rn, _ = rref(proj, len(So), p)
        res = (Rn, min(1, dK + len(J) - len(Rn)))
        self._cache[key] = res
        return res


#: Initial subspace: the left closure arc forces equal colours on the pair.
PAIR_BASIS: Basis = ((1, 1),)


def closes_colourable(R: Basis, dK: int) -> bool:
    """Whether the right closure yields a nontrivial colouring.

    Constant colourings always extend, so ``R`` contains ``(1, 1)`` and the
    closed curve has a nontrivial colouring iff ``dK >= 1``.
    """
    return dK >= 1
