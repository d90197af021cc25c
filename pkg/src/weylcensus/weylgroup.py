"""Enumeration of finite Weyl groups with inversion-set fingerprints.

Elements live in flat numpy arrays indexed by element id.  Ids are assigned
by (length, canonical word) where the canonical word of ``w`` is its
lexicographically smallest reduced word; the identity is id 0.  The
fingerprint of ``w`` is the inversion set Phi+(w) = {a in Phi+ : w^-1 a < 0}
packed into a single 64-bit integer (every accepted type has at most 64
positive roots), which determines the element uniquely.

Simple reflections are named 1-based (s1, s2, ...) in words, descent sets
and all printed output; positions into the positive-root list are 0-based.

The right weak order has three interchangeable backends: inversion-bitset
containment (production), the definitional length test, and reachability
in the BFS prefix graph.  They exist to cross-check one another.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .rootsys import Root, RootSystem, parse_label, weyl_group_order

DEFAULT_ORDER_CAP = 10_000_000

# The bfs weak-order backend materializes an |W| x |W| bit matrix.
_REACH_MATRIX_LIMIT = 20_000

_ONE = np.uint64(1)

LEQ_METHODS = ("bitset", "definitional", "bfs")


class GroupTooLargeError(RuntimeError):
    """Raised when enumeration would exceed the configured order cap."""


@dataclass(frozen=True, eq=False)
class WeylElement:
    """One group element, viewed out of a GroupTable row."""

    index: int
    perm: np.ndarray
    inv: int
    length: int
    word: tuple[int, ...]

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.index == other.index and self.inv == other.inv

    def __hash__(self) -> int:
        return hash((self.index, self.inv))

    def __repr__(self) -> str:
        return f"WeylElement({self.index}, {format_word(self.word, 10)})"


@dataclass(eq=False)
class GroupTable:
    """The whole group: one row per element, identity at row 0.

    perm[w][j] is the signed 1-based positive-root index of w(beta_j);
    inv[w] is the inversion bitset; canonical words are 0-based letters in
    a shared arena sliced by word_offsets.  right_mult[w][i] is the id of
    w*s_{i+1}.  All arrays are immutable after enumeration.
    """

    rs: RootSystem
    perm: np.ndarray
    inv: np.ndarray
    length: np.ndarray
    word_data: np.ndarray
    word_offsets: np.ndarray
    right_mult: np.ndarray
    inv_sorted: np.ndarray = field(repr=False)
    inv_order: np.ndarray = field(repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.inv)

    @property
    def rank(self) -> int:
        return self.rs.rank

    def word_of(self, i: int) -> tuple[int, ...]:
        lo, hi = self.word_offsets[i], self.word_offsets[i + 1]
        return tuple(int(c) + 1 for c in self.word_data[lo:hi])

    def element(self, i: int) -> WeylElement:
        if not 0 <= i < self.size:
            raise IndexError(f"element id {i} out of range")
        return WeylElement(
            i, self.perm[i], int(self.inv[i]), int(self.length[i]), self.word_of(i)
        )

    def elements(self):
        """Iterate all elements lazily in id order."""
        for i in range(self.size):
            yield self.element(i)

    def lookup(self, inv_bits: int) -> int:
        """Element id with the given inversion bitset."""
        bits = np.uint64(inv_bits)
        pos = int(np.searchsorted(self.inv_sorted, bits))
        if pos == self.size or self.inv_sorted[pos] != bits:
            raise KeyError(f"no element with inversion bitset {inv_bits:#x}")
        return int(self.inv_order[pos])

    def from_word(self, letters) -> int:
        """Multiply out a (not necessarily reduced) 1-based word."""
        w = 0
        for c in letters:
            if not 1 <= c <= self.rank:
                raise ValueError(f"letter {c} out of range 1..{self.rank}")
            w = int(self.right_mult[w, c - 1])
        return w


def _permute_bits(vals: np.ndarray, sigma) -> np.ndarray:
    """Bitset image under an index permutation: out bit k = in bit sigma[k]."""
    out = np.zeros_like(vals)
    for k in range(len(sigma)):
        out |= ((vals >> np.uint64(sigma[k])) & _ONE) << np.uint64(k)
    return out


def _lookup_many(table: GroupTable, bits: np.ndarray) -> np.ndarray:
    pos = np.minimum(np.searchsorted(table.inv_sorted, bits), table.size - 1)
    if not np.array_equal(table.inv_sorted[pos], bits):
        raise KeyError("inversion bitset not present in group table")
    return table.inv_order[pos]


def enumerate_group(rs: RootSystem, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    """Breadth-first closure under right multiplication by the s_i.

    Layer L holds the elements of length L, deduplicated by inversion
    bitset; within a layer elements are sorted by canonical word, so ids
    are reproducible.  Aborts once more than ``order_cap`` elements appear.
    """
    n, m = rs.rank, rs.nroots
    abs_sp = np.abs(rs.simple_perms).astype(np.intp) - 1
    sign_sp = np.sign(rs.simple_perms).astype(np.int8)

    layer_perm = [np.arange(1, m + 1, dtype=np.int8)[None, :]]
    layer_inv = [np.zeros(1, dtype=np.uint64)]
    total = 1
    while True:
        P, I = layer_perm[-1], layer_inv[-1]
        blocks_P, blocks_I = [], []
        for i in range(n):
            up = P[:, i] > 0
            if not up.any():
                continue
            Pu = P[up]
            blocks_P.append(sign_sp[i][None, :] * Pu[:, abs_sp[i]])
            blocks_I.append(I[up] ^ (_ONE << (Pu[:, i].astype(np.uint64) - _ONE)))
        if not blocks_P:
            break
        cand_inv = np.concatenate(blocks_I)
        uniq, first = np.unique(cand_inv, return_index=True)
        total += len(uniq)
        if total > order_cap:
            raise GroupTooLargeError(
                f"group order exceeds the cap of {order_cap} while enumerating "
                f"{rs.cartan.label}; pass a larger order_cap to proceed"
            )
        layer_inv.append(uniq)
        layer_perm.append(np.concatenate(blocks_P, axis=0)[first])

    # Canonical words, shortest layers first: the lexicographically
    # smallest reduced word starts with the smallest left descent i and
    # continues with the canonical word of s_i * w.  Layers stay sorted by
    # inversion bitset throughout this pass (parents are found by binary
    # search); the final (length, word) order is applied afterwards.
    pow2 = _ONE << np.arange(n, dtype=np.uint64)
    low_mask = np.uint64((1 << n) - 1)
    words = [np.zeros((1, 0), dtype=np.uint8)]
    for L in range(1, len(layer_inv)):
        I, prev_inv, prev_words = layer_inv[L], layer_inv[L - 1], words[-1]
        W = np.empty((len(I), L), dtype=np.uint8)
        low = I & low_mask
        min_desc = np.searchsorted(pow2, low & (~low + _ONE))
        for i in range(n):
            mask = min_desc == i
            if not mask.any():
                continue
            # Phi+(s_i w) = s_i(Phi+(w) minus alpha_i), a bit permutation.
            parent_bits = _permute_bits(I[mask] ^ pow2[i], abs_sp[i])
            pos = np.searchsorted(prev_inv, parent_bits)
            W[mask, 0] = i
            W[mask, 1:] = prev_words[pos]
        words.append(W)
    for L in range(1, len(layer_inv)):
        W = words[L]
        order = np.lexsort(tuple(W[:, c] for c in range(L - 1, -1, -1)))
        layer_inv[L] = layer_inv[L][order]
        layer_perm[L] = layer_perm[L][order]
        words[L] = W[order]

    perm = np.concatenate(layer_perm, axis=0)
    inv = np.concatenate(layer_inv)
    length = np.concatenate(
        [np.full(len(block), L, dtype=np.uint16) for L, block in enumerate(layer_inv)]
    )
    word_data = (
        np.concatenate([w.ravel() for w in words]) if total > 1 else np.zeros(0, np.uint8)
    )
    word_offsets = np.zeros(total + 1, dtype=np.int64)
    np.cumsum(length, dtype=np.int64, out=word_offsets[1:])

    inv_order = np.argsort(inv).astype(np.int32)
    inv_sorted = inv[inv_order]
    if len(inv_sorted) > 1 and not np.all(np.diff(inv_sorted) > 0):
        raise AssertionError("inversion bitsets are not unique")

    right_mult = np.empty((total, n), dtype=np.int32)
    for i in range(n):
        tgt = inv ^ (_ONE << (np.abs(perm[:, i]).astype(np.uint64) - _ONE))
        pos = np.searchsorted(inv_sorted, tgt)
        if not np.array_equal(inv_sorted[pos], tgt):
            raise AssertionError("right multiplication left the enumerated set")
        right_mult[:, i] = inv_order[pos]

    if np.count_nonzero(length == m) != 1:
        raise AssertionError("expected exactly one longest element")
    try:
        family, rk = parse_label(rs.cartan.label)
        expected = weyl_group_order(family, rk)
    except ValueError:
        expected = total
    if total != expected:
        raise AssertionError(
            f"enumerated {total} elements for {rs.cartan.label}, expected {expected}"
        )

    for arr in (perm, inv, length, word_data, word_offsets, right_mult):
        arr.setflags(write=False)
    return GroupTable(
        rs, perm, inv, length, word_data, word_offsets, right_mult, inv_sorted, inv_order
    )


def _as_id(table: GroupTable, a) -> int:
    if isinstance(a, WeylElement):
        a = a.index
    i = int(a)
    if not 0 <= i < table.size:
        raise IndexError(f"element id {i} out of range")
    return i


def _inv_bits_of_perm_row(row: np.ndarray) -> int:
    """Phi+(w) bits from w's own root action: w^-1 beta_k < 0 exactly when
    some column j has w(beta_j) = -beta_k, so negative entries mark targets."""
    neg = row < 0
    if not neg.any():
        return 0
    targets = (-row[neg]).astype(np.uint64) - _ONE
    return int(np.bitwise_or.reduce(_ONE << targets))


def _inv_bits_of_inverse(row: np.ndarray) -> int:
    """Phi+(w^-1) bits from w's root action: the source columns sent negative."""
    sources = np.nonzero(row < 0)[0]
    if len(sources) == 0:
        return 0
    return int(np.bitwise_or.reduce(_ONE << sources.astype(np.uint64)))


def multiply(table: GroupTable, a, b) -> int:
    """Group product a*b via composition of the root actions."""
    pa = table.perm[_as_id(table, a)]
    pb = table.perm[_as_id(table, b)]
    comp = np.sign(pb) * pa[np.abs(pb).astype(np.intp) - 1]
    return table.lookup(_inv_bits_of_perm_row(comp))


def inverse(table: GroupTable, a) -> int:
    return table.lookup(_inv_bits_of_inverse(table.perm[_as_id(table, a)]))


def length(table: GroupTable, a) -> int:
    return int(table.length[_as_id(table, a)])


def left_descents(table: GroupTable, a) -> frozenset[int]:
    """{i : l(s_i a) < l(a)}, 1-based: the simple bits of the inversion set."""
    bits = int(table.inv[_as_id(table, a)])
    return frozenset(i + 1 for i in range(table.rank) if bits >> i & 1)


def right_descents(table: GroupTable, a) -> frozenset[int]:
    """{i : l(a s_i) < l(a)}, 1-based: simple columns sent negative."""
    row = table.perm[_as_id(table, a)]
    return frozenset(i + 1 for i in range(table.rank) if row[i] < 0)


def phi_plus(table: GroupTable, a) -> frozenset[Root]:
    """The inversion set Phi+(a) as actual roots."""
    bits = int(table.inv[_as_id(table, a)])
    roots = table.rs.positive_roots
    return frozenset(roots[j] for j in range(table.rs.nroots) if bits >> j & 1)


def phi_plus_indices(table: GroupTable, a) -> tuple[int, ...]:
    """Positions of Phi+(a) in the positive-root list (0-based, sorted)."""
    bits = int(table.inv[_as_id(table, a)])
    return tuple(j for j in range(table.rs.nroots) if bits >> j & 1)


def inverse_ids(table: GroupTable) -> np.ndarray:
    """ids of all inverses at once (cached)."""
    cached = table._cache.get("inverse_ids")
    if cached is None:
        bits = np.zeros((table.size, 64), dtype=bool)
        bits[:, : table.rs.nroots] = table.perm < 0
        packed = np.packbits(bits, axis=1, bitorder="little").view("<u8").ravel()
        cached = _lookup_many(table, packed).astype(np.int32)
        cached.setflags(write=False)
        table._cache["inverse_ids"] = cached
    return cached


def left_mult_column(table: GroupTable, i: int) -> np.ndarray:
    """ids of s_i * w for every w (1-based i, cached); s_i w = (w^-1 s_i)^-1."""
    key = ("left_mult", i)
    cached = table._cache.get(key)
    if cached is None:
        inv_ids = inverse_ids(table)
        cached = inv_ids[table.right_mult[inv_ids, i - 1]]
        cached.setflags(write=False)
        table._cache[key] = cached
    return cached


def leq_weak(table: GroupTable, u, x, method: str = "bitset") -> bool:
    """u <=_R x in the right weak (Duflo) order.

    method selects the backend: "bitset" tests Phi+(u) subseteq Phi+(x);
    "definitional" tests l(u) + l(u^-1 x) = l(x); "bfs" tests reachability
    in the prefix graph.  All three agree; the slower two exist as oracles.
    """
    u = _as_id(table, u)
    x = _as_id(table, x)
    if method == "bitset":
        return int(table.inv[u]) & ~int(table.inv[x]) == 0
    if method == "definitional":
        rest = multiply(table, inverse(table, u), x)
        return length(table, u) + length(table, rest) == length(table, x)
    if method == "bfs":
        reach = _reach_matrix(table)
        return bool(reach[x, u >> 6] >> np.uint64(u & 63) & _ONE)
    raise ValueError(f"unknown weak-order method {method!r}")


def _reach_matrix(table: GroupTable) -> np.ndarray:
    """reach[x] = bitset (over element ids) of {u : u <=_R x}, by prefix BFS."""
    cached = table._cache.get("reach")
    if cached is None:
        n_el = table.size
        if n_el > _REACH_MATRIX_LIMIT:
            raise MemoryError(
                f"bfs weak-order backend needs a {n_el}x{n_el} bit matrix; "
                f"limit is {_REACH_MATRIX_LIMIT} elements"
            )
        nwords = (n_el + 63) // 64
        reach = np.zeros((n_el, nwords), dtype=np.uint64)
        for x in range(n_el):  # ids are sorted by length: covers come first
            reach[x, x >> 6] |= _ONE << np.uint64(x & 63)
            row = table.perm[x]
            for i in range(table.rank):
                if row[i] < 0:
                    reach[x] |= reach[table.right_mult[x, i]]
        reach.setflags(write=False)
        table._cache["reach"] = reach
        cached = reach
    return cached


def leq_weak_matrix(table: GroupTable, method: str = "bitset") -> np.ndarray:
    """Boolean matrix M[u, x] = (u <=_R x), for cross-checking backends."""
    if method == "bitset":
        return (table.inv[:, None] & ~table.inv[None, :]) == 0
    if method == "definitional":
        n_el = table.size
        out = np.empty((n_el, n_el), dtype=bool)
        abs_cols = np.abs(table.perm).astype(np.intp) - 1
        sign_all = np.sign(table.perm)
        inv_ids = inverse_ids(table)
        lengths = table.length.astype(np.int64)
        for u in range(n_el):
            pu = table.perm[inv_ids[u]]
            comp = sign_all * pu[abs_cols]  # row x: perm of u^-1 * x
            rest_len = (comp < 0).sum(axis=1)
            out[u] = lengths[u] + rest_len == lengths
        return out
    if method == "bfs":
        reach = _reach_matrix(table)
        expanded = np.unpackbits(
            reach.view(np.uint8), axis=1, bitorder="little", count=table.size
        )
        return expanded.astype(bool).T
    raise ValueError(f"unknown weak-order method {method!r}")


def longest_parabolic(table: GroupTable, J) -> int:
    """Longest element w_J of the parabolic subgroup W_J (J 1-based)."""
    J = sorted(set(int(j) for j in J))
    if any(not 1 <= j <= table.rank for j in J):
        raise ValueError(f"J must be a subset of 1..{table.rank}, got {J}")
    w = 0
    while True:
        for j in J:
            if table.perm[w, j - 1] > 0:
                w = int(table.right_mult[w, j - 1])
                break
        else:
            return w


def pi_cap_xpi(table: GroupTable, x) -> frozenset[int]:
    """Simple roots that are x-images of simple roots (1-based).

    Computed two independent ways and compared: directly from the simple
    columns of the root action, and via the characterization that
    x s_a x^-1 is again a simple reflection with l(x s_a) = l(x) + 1.
    """
    x = _as_id(table, x)
    row = table.perm[x]
    n = table.rank
    direct = frozenset(int(row[j]) for j in range(n) if 1 <= row[j] <= n)

    x_inv = inverse(table, x)
    conjugated = set()
    for j in range(n):
        if row[j] > 0:
            conj = multiply(table, multiply(table, x, table.right_mult[0, j]), x_inv)
            if table.length[conj] == 1:
                conjugated.add(int(table.word_data[table.word_offsets[conj]]) + 1)
    if direct != conjugated:
        raise AssertionError(
            f"pi_cap_xpi characterizations disagree at id {x}: "
            f"{sorted(direct)} vs {sorted(conjugated)}"
        )
    return direct


def pi_cap_xpi_masks(table: GroupTable) -> np.ndarray:
    """Bitmask of Pi cap x.Pi for every x at once (bit i-1 for alpha_i)."""
    cached = table._cache.get("pi_masks")
    if cached is None:
        n = table.rank
        masks = np.zeros(table.size, dtype=np.uint64)
        for j in range(n):
            col = table.perm[:, j]
            valid = (col >= 1) & (col <= n)
            masks[valid] |= _ONE << (col[valid].astype(np.uint64) - _ONE)
        masks.setflags(write=False)
        table._cache["pi_masks"] = masks
        cached = masks
    return cached


def parse_word(s: str, rank: int) -> tuple[int, ...]:
    """Read a word: "e" or "" is empty; digits concatenated for rank <= 9
    ("121"), comma-separated integers otherwise ("1,2,1" always accepted)."""
    s = s.strip()
    if s in ("e", ""):
        return ()
    tokens = [t.strip() for t in s.split(",")] if "," in s else list(s)
    try:
        letters = tuple(int(t) for t in tokens)
    except ValueError:
        raise ValueError(f"malformed word {s!r}") from None
    for c in letters:
        if not 1 <= c <= rank:
            raise ValueError(f"letter {c} out of range 1..{rank} in word {s!r}")
    return letters


def format_word(letters, rank: int) -> str:
    letters = tuple(letters)
    if not letters:
        return "e"
    if rank <= 9:
        return "".join(str(c) for c in letters)
    return ",".join(str(c) for c in letters)


def element_json(table: GroupTable, a) -> str:
    i = _as_id(table, a)
    return json.dumps(
        {
            "word": list(table.word_of(i)),
            "length": int(table.length[i]),
            "inversions": list(phi_plus_indices(table, i)),
        },
        separators=(",", ":"),
    )
