"""Exact chain algebra on graph windows: degrees 0..2, rings Z and Z/2.

Simplices are stored under canonical keys (vertices sorted lexicographically);
the orientation sign of the original ordering is absorbed into the
coefficient.  Degenerate simplices (repeated vertices) carry coefficient 0
and are dropped.  All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, Optional, Tuple

Z = "Z"
Z2 = "Z2"
RINGS = (Z, Z2)


class ChainError(ValueError):
    pass


def _canon_simplex(simplex: tuple, degree: int):
    """Canonical key and orientation sign; None when degenerate."""
    if degree == 0:
        return simplex, 1
    if degree == 1:
        u, v = simplex
        if u == v:
            return None
        return ((u, v), 1) if u < v else ((v, u), -1)
    if degree == 2:
        a, b, c = simplex
        if a == b or b == c or a == c:
            return None
        key = tuple(sorted(simplex))
        # parity of the permutation taking the sorted order to the given order
        perm = [key.index(x) for x in simplex]
        sign = 1 if perm in ([0, 1, 2], [1, 2, 0], [2, 0, 1]) else -1
        return key, sign
    raise ChainError("unsupported degree {}".format(degree))


def _normalize(coeff: int, ring: str) -> int:
    if ring == Z2:
        return coeff % 2
    return coeff


class Chain:
    """A finitely supported chain of fixed degree over Z or Z/2."""

    __slots__ = ("degree", "ring", "_c")

    def __init__(self, degree: int, ring: str = Z, terms: Iterable[tuple] = ()):
        if ring not in RINGS:
            raise ChainError("unknown ring {!r}".format(ring))
        if degree not in (0, 1, 2):
            raise ChainError("unsupported degree {}".format(degree))
        self.degree = degree
        self.ring = ring
        self._c: Dict[tuple, int] = {}
        for simplex, coeff in terms:
            self.add_term(simplex, coeff)

    # -- construction ----------------------------------------------------

    def add_term(self, simplex: tuple, coeff: int) -> None:
        """Add coeff on an (ordered) simplex, canonicalizing orientation."""
        canon = _canon_simplex(simplex, self.degree)
        if canon is None:
            return
        key, sign = canon
        new = _normalize(self._c.get(key, 0) + sign * coeff, self.ring)
        if new:
            self._c[key] = new
        else:
            self._c.pop(key, None)

    def copy(self) -> "Chain":
        out = Chain(self.degree, self.ring)
        out._c = dict(self._c)
        return out

    # -- queries ---------------------------------------------------------

    def get(self, simplex: tuple) -> int:
        """Coefficient of an ordered simplex, orientation sign included."""
        canon = _canon_simplex(simplex, self.degree)
        if canon is None:
            return 0
        key, sign = canon
        return sign * self._c.get(key, 0)

    def support(self) -> Tuple[tuple, ...]:
        return tuple(sorted(self._c))

    def terms(self) -> Iterator[tuple]:
        """Sorted (canonical simplex, coefficient) pairs."""
        for key in sorted(self._c):
            yield key, self._c[key]

    def sup_norm(self) -> int:
        return max((abs(c) for c in self._c.values()), default=0)

    def is_zero(self) -> bool:
        return not self._c

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Chain)
            and self.degree == other.degree
            and self.ring == other.ring
            and self._c == other._c
        )

    def __hash__(self):
        return hash((self.degree, self.ring, tuple(sorted(self._c.items()))))

    def __repr__(self) -> str:
        return "Chain(deg={}, ring={}, terms={})".format(
            self.degree, self.ring, list(self.terms())
        )

    # -- algebra ---------------------------------------------------------

    def _check_compatible(self, other: "Chain") -> None:
        if self.degree != other.degree or self.ring != other.ring:
            raise ChainError("degree or ring mismatch")

    def __add__(self, other: "Chain") -> "Chain":
        self._check_compatible(other)
        out = self.copy()
        for key, coeff in other._c.items():
            new = _normalize(out._c.get(key, 0) + coeff, self.ring)
            if new:
                out._c[key] = new
            else:
                out._c.pop(key, None)
        return out

    def __sub__(self, other: "Chain") -> "Chain":
        return self + other.scale(-1)

    def __neg__(self) -> "Chain":
        return self.scale(-1)

    def scale(self, k: int) -> "Chain":
        out = Chain(self.degree, self.ring)
        for key, coeff in self._c.items():
            new = _normalize(k * coeff, self.ring)
            if new:
                out._c[key] = new
        return out

    def boundary(self) -> "Chain":
        """Simplicial boundary: (u,v) -> v - u; (a,b,c) -> (b,c) - (a,c) + (a,b)."""
        if self.degree == 0:
            raise ChainError("boundary of a degree-0 chain is not defined here")
        out = Chain(self.degree - 1, self.ring)
        if self.degree == 1:
            for (u, v), coeff in self._c.items():
                out.add_term((v,), coeff)
                out.add_term((u,), -coeff)
        else:
            for (a, b, c), coeff in self._c.items():
                out.add_term((b, c), coeff)
                out.add_term((a, c), -coeff)
                out.add_term((a, b), coeff)
        return out

    def reduce_mod2(self) -> "Chain":
        out = Chain(self.degree, Z2)
        for key, coeff in self._c.items():
            if coeff % 2:
                out._c[key] = 1
        return out

    def restrict(self, keep) -> "Chain":
        """Chain with only the canonical simplices for which keep(key) is true."""
        out = Chain(self.degree, self.ring)
        for key, coeff in self._c.items():
            if keep(key):
                out._c[key] = coeff
        return out


# -- convenience constructors -------------------------------------------


def zero(degree: int, ring: str = Z) -> Chain:
    return Chain(degree, ring)


def unit_edge(u: tuple, v: tuple, ring: str = Z) -> Chain:
    return Chain(1, ring, [((u, v), 1)])


def edge_chain_of_path(path: Iterable[tuple], ring: str = Z) -> Chain:
    """Sum of directed edges along a vertex sequence."""
    out = Chain(1, ring)
    path = list(path)
    for u, v in zip(path, path[1:]):
        out.add_term((u, v), 1)
    return out


def circuit_chain(circuit: Iterable[tuple], ring: str = Z) -> Chain:
    """Edge chain of a closed vertex sequence (closing edge appended)."""
    circuit = list(circuit)
    if len(circuit) < 3:
        raise ChainError("a circuit needs at least 3 vertices")
    return edge_chain_of_path(circuit + [circuit[0]], ring)


# -- cycle conditions on windows ----------------------------------------


def defect(c: Chain, window, margin: int = 1) -> Chain:
    """Boundary of a degree-1 chain restricted to the inner region."""
    if c.degree != 1:
        raise ChainError("defect is defined for degree-1 chains")
    b = c.boundary()
    return b.restrict(lambda key: window.is_inner(key[0], margin))


def is_cycle(c: Chain, window, margin: int = 1) -> bool:
    """True iff the boundary vanishes on all inner vertices of the window."""
    return defect(c, window, margin).is_zero()


def directed_value(c: Chain, tail: tuple, head: tuple) -> int:
    """Flow value along the directed edge tail -> head."""
    return c.get((tail, head))
