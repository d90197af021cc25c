"""Finite root systems from Cartan matrices.

A root is an integer coordinate vector over the simple roots.  The positive
roots are generated by closing the simple roots under the simple reflections

    s_i(a_j) = a_j - A[i][j] * a_i,

where ``A`` is the Cartan matrix (so ``A[i][j] = 2(a_i,a_j)/(a_i,a_i)``).
Generation is deterministic: simple roots first, in Cartan order, then the
remaining positive roots sorted by height and lexicographic coordinates.
The invariant bilinear form is carried as exact rationals, normalized per
connected component so that short roots have squared length 2.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

Root = tuple[int, ...]

# Per-component height of the highest root is at most max(2*rank-1, 29)
# (29 is E8); anything past this bound cannot be finite type.
_HEIGHT_SLACK = 30

_LABEL_RE = re.compile(r"^([A-G])(\d+)$")


class NotFiniteTypeError(ValueError):
    """Raised when a Cartan matrix does not define a finite root system."""


def _builtin_entries(family: str, rank: int) -> list[list[int]]:
    """Cartan matrix for a classical family, Bourbaki node numbering."""
    a = [[2 * (i == j) for j in range(rank)] for i in range(rank)]

    def chain(i: int, j: int) -> None:
        a[i][j] = a[j][i] = -1

    if family == "A":
        if rank < 1:
            raise ValueError("A family needs rank >= 1")
        for i in range(rank - 1):
            chain(i, i + 1)
    elif family in ("B", "C"):
        if rank < 2:
            raise ValueError(f"{family} family needs rank >= 2")
        for i in range(rank - 1):
            chain(i, i + 1)
        # B: last node short; C: last node long.
        if family == "B":
            a[rank - 1][rank - 2] = -2
        else:
            a[rank - 2][rank - 1] = -2
    elif family == "D":
        if rank < 4:
            raise ValueError("D family needs rank >= 4")
        for i in range(rank - 3):
            chain(i, i + 1)
        chain(rank - 3, rank - 2)
        chain(rank - 3, rank - 1)
    elif family == "E":
        if rank not in (6, 7, 8):
            raise ValueError("E family needs rank 6, 7 or 8")
        # Bourbaki: node 2 hangs off node 4 of the chain 1-3-4-5-...-rank.
        chain(0, 2)
        chain(1, 3)
        for i in range(2, rank - 1):
            chain(i, i + 1)
    elif family == "F":
        if rank != 4:
            raise ValueError("F family needs rank 4")
        chain(0, 1)
        chain(2, 3)
        a[1][2] = -1
        a[2][1] = -2
    elif family == "G":
        if rank != 2:
            raise ValueError("G family needs rank 2")
        a[0][1] = -3
        a[1][0] = -1
    else:
        raise ValueError(f"unknown family {family!r}")
    return a


def positive_root_count(family: str, rank: int) -> int:
    """Closed-form |Phi+| for a classical family."""
    if family == "A":
        return rank * (rank + 1) // 2
    if family in ("B", "C"):
        return rank * rank
    if family == "D":
        return rank * (rank - 1)
    if family == "E":
        return {6: 36, 7: 63, 8: 120}[rank]
    if family == "F":
        return 24
    if family == "G":
        return 6
    raise ValueError(f"unknown family {family!r}")


def weyl_group_order(family: str, rank: int) -> int:
    """Closed-form |W| for a classical family."""
    if family == "A":
        return math.factorial(rank + 1)
    if family in ("B", "C"):
        return 2**rank * math.factorial(rank)
    if family == "D":
        return 2 ** (rank - 1) * math.factorial(rank)
    if family == "E":
        return {6: 51840, 7: 2903040, 8: 696729600}[rank]
    if family == "F":
        return 1152
    if family == "G":
        return 12
    raise ValueError(f"unknown family {family!r}")


def parse_label(label: str) -> tuple[str, int]:
    """Split a type tag like ``"B7"`` into family and rank."""
    m = _LABEL_RE.match(label.strip())
    if m is None:
        raise ValueError(f"bad Cartan type label {label!r}")
    return m.group(1), int(m.group(2))


@dataclass(frozen=True)
class CartanMatrix:
    """Integer Cartan matrix of finite type.

    ``entries[i][j]`` is the pairing ``2(a_i,a_j)/(a_i,a_i)``; the simple
    reflection acts by ``s_i(a_j) = a_j - entries[i][j] * a_i``.
    """

    rank: int
    entries: tuple[tuple[int, ...], ...]
    label: str

    def __post_init__(self) -> None:
        a = self.entries
        if self.rank < 1 or len(a) != self.rank:
            raise ValueError("rank/matrix size mismatch")
        for i, row in enumerate(a):
            if len(row) != self.rank:
                raise ValueError("Cartan matrix must be square")
            for j, v in enumerate(row):
                if not isinstance(v, int):
                    raise ValueError("Cartan matrix entries must be integers")
                if i == j and v != 2:
                    raise ValueError("diagonal Cartan entries must equal 2")
                if i != j and v > 0:
                    raise ValueError("off-diagonal Cartan entries must be <= 0")
                if (v == 0) != (a[j][i] == 0):
                    raise ValueError("zero pattern must be symmetric")
                if i != j and v * a[j][i] >= 4:
                    raise NotFiniteTypeError(
                        f"not finite type: bond {i},{j} has "
                        f"a_ij*a_ji = {v * a[j][i]} >= 4"
                    )

    @classmethod
    def from_label(cls, label: str) -> "CartanMatrix":
        family, rank = parse_label(label)
        rows = _builtin_entries(family, rank)
        return cls(rank, tuple(tuple(r) for r in rows), f"{family}{rank}")

    @classmethod
    def from_matrix(cls, rows, label: str = "custom") -> "CartanMatrix":
        entries = tuple(tuple(int(v) for v in row) for row in rows)
        return cls(len(entries), entries, label)


def _bilinear_form(cartan: CartanMatrix) -> tuple[tuple[Fraction, ...], ...]:
    """Symmetrize the Cartan matrix; short roots get squared length 2."""
    n = cartan.rank
    a = cartan.entries
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        component = [start]
        queue = [start]
        while queue:
            i = queue.pop()
            for j in range(n):
                if i == j or a[i][j] == 0:
                    continue
                dj = d[i] * Fraction(a[i][j], a[j][i])
                if d[j] is None:
                    d[j] = dj
                    component.append(j)
                    queue.append(j)
                elif d[j] != dj:
                    raise NotFiniteTypeError("not finite type: not symmetrizable")
        scale = min(d[i] for i in component)
        for i in component:
            d[i] /= scale
    form = [
        [d[i] * a[i][j] if i != j else 2 * d[i] for j in range(n)] for i in range(n)
    ]
    for i in range(n):
        for j in range(n):
            if form[i][j] != form[j][i]:
                raise NotFiniteTypeError("not finite type: not symmetrizable")
    return tuple(tuple(row) for row in form)


@dataclass(frozen=True)
class RootSystem:
    """All positive roots of a finite-type Cartan matrix, in fixed order."""

    cartan: CartanMatrix
    positive_roots: tuple[Root, ...]
    form: tuple[tuple[Fraction, ...], ...]
    root_index: dict[Root, int] = field(repr=False, compare=False)
    # simple_perms[i][j] = signed 1-based index of s_i(beta_j); the sign
    # flips exactly on j == i.
    simple_perms: np.ndarray = field(repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.cartan.rank

    @property
    def nroots(self) -> int:
        return len(self.positive_roots)


def _reflect_coords(cartan: CartanMatrix, i: int, coords: Root) -> Root:
    pairing = sum(cartan.entries[i][j] * c for j, c in enumerate(coords))
    new = list(coords)
    new[i] -= pairing
    return tuple(new)


def build_root_system(cartan: CartanMatrix) -> RootSystem:
    """Generate all positive roots by reflection closure.

    Raises :class:`NotFiniteTypeError` when generation exceeds the height
    bound possible for a finite type of this rank.

    >>> rs = build_root_system(CartanMatrix.from_label("A2"))
    >>> rs.positive_roots
    ((1, 0), (0, 1), (1, 1))
    """
    n = cartan.rank
    height_cap = 2 * n + _HEIGHT_SLACK
    simples: list[Root] = [
        tuple(1 if j == i else 0 for j in range(n)) for i in range(n)
    ]
    seen: set[Root] = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for r in frontier:
            for i in range(n):
                img = _reflect_coords(cartan, i, r)
                if img in seen or any(c < 0 for c in img):
                    continue
                if sum(img) > height_cap:
                    raise NotFiniteTypeError(
                        f"not finite type: root height exceeds {height_cap}"
                    )
                seen.add(img)
                nxt.append(img)
        frontier = nxt
    others = sorted(
        (r for r in seen if sum(r) > 1), key=lambda r: (sum(r), r)
    )
    roots = tuple(simples) + tuple(others)
    if len(roots) > 64:
        raise NotFiniteTypeError(
            f"{len(roots)} positive roots exceed the 64-bit fingerprint limit"
        )
    index = {r: k for k, r in enumerate(roots)}

    perms = np.zeros((n, len(roots)), dtype=np.int8)
    for i in range(n):
        for j, r in enumerate(roots):
            img = _reflect_coords(cartan, i, r)
            if j == i:
                perms[i, j] = -(i + 1)
            else:
                perms[i, j] = index[img] + 1

    return RootSystem(cartan, roots, _bilinear_form(cartan), index, perms)


def root_system(label_or_cartan) -> RootSystem:
    """Convenience: build a root system from a label or a CartanMatrix."""
    if isinstance(label_or_cartan, CartanMatrix):
        return build_root_system(label_or_cartan)
    return build_root_system(CartanMatrix.from_label(label_or_cartan))


def _check_root(rs: RootSystem, r: Root) -> Root:
    r = tuple(r)
    if r in rs.root_index:
        return r
    if tuple(-c for c in r) in rs.root_index:
        return r
    raise ValueError(f"{r} is not a root of {rs.cartan.label}")


def reflect(rs: RootSystem, i: int, r: Root) -> Root:
    """Image of the root ``r`` under the simple reflection ``s_i``.

    Simple reflections are named 1-based, matching the s1, s2, ... notation
    used in words and printed output.
    """
    if not 1 <= i <= rs.rank:
        raise ValueError(f"simple index {i} out of range 1..{rs.rank}")
    return _reflect_coords(rs.cartan, i - 1, _check_root(rs, r))


def pairing(rs: RootSystem, beta: Root, gamma: Root) -> Fraction:
    """Invariant bilinear form; (a,a) = 2 for short roots."""
    beta = _check_root(rs, beta)
    gamma = _check_root(rs, gamma)
    total = Fraction(0)
    for i, b in enumerate(beta):
        if b == 0:
            continue
        for j, c in enumerate(gamma):
            if c:
                total += b * c * rs.form[i][j]
    return total


def positive_roots_json(rs: RootSystem) -> str:
    """Positive roots as a JSON array of coordinate vectors."""
    return json.dumps([list(r) for r in rs.positive_roots])
