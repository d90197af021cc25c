"""Triples (x,u,J), pairs (v,w), and the bijection between them.

A triple is admissible when J is contained in Pi cap x.Pi and u^-1 lies
below x in the right weak order; these triples parametrize the homogeneous
right coideal subalgebras.  The forward map sends (x,u,J) to the pair
(u w_J, u w_J x); the inverse map factors v over the parabolic generated
by Pi cap x.Pi and is partial: pairs on which it fails are exactly the
pairs outside the image.  Membership of a pair in that image is decided
here purely combinatorially, by running the inverse map.

check_lemma_suite re-verifies, exhaustively over a whole group, the four
combinatorial facts the classification rests on.  It is meant for small
ranks; everything is quadratic in |W|.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .weylgroup import (
    GroupTable,
    WeylElement,
    _as_id,
    format_word,
    inverse,
    inverse_ids,
    left_mult_column,
    leq_weak,
    longest_parabolic,
    multiply,
    pi_cap_xpi_masks,
)


@dataclass(frozen=True)
class Triple:
    """Census parameter: x, u in W and J a set of 1-based simple indices."""

    x: WeylElement
    u: WeylElement
    J: frozenset[int]


@dataclass(frozen=True)
class Pair:
    v: WeylElement
    w: WeylElement


def _check_J(table: GroupTable, J) -> int:
    """Validate J and pack it into a bitmask (bit i-1 for alpha_i)."""
    mask = 0
    for j in J:
        j = int(j)
        if not 1 <= j <= table.rank:
            raise ValueError(f"J contains {j}, outside 1..{table.rank}")
        mask |= 1 << (j - 1)
    return mask


def _mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(j + 1 for j in range(mask.bit_length()) if mask >> j & 1)


def is_triple_valid(table: GroupTable, tr: Triple) -> bool:
    """Both defining conditions: J inside Pi cap x.Pi, and u^-1 <=_R x."""
    x = _as_id(table, tr.x)
    u = _as_id(table, tr.u)
    j_mask = _check_J(table, tr.J)
    pi_mask = int(pi_cap_xpi_masks(table)[x])
    if j_mask & ~pi_mask:
        return False
    return leq_weak(table, inverse(table, u), x)


def triple_to_pair(table: GroupTable, tr: Triple) -> Pair:
    """(x,u,J) -> (u w_J, u w_J x), with both length identities asserted."""
    if not is_triple_valid(table, tr):
        raise ValueError("triple is not admissible")
    x = _as_id(table, tr.x)
    u = _as_id(table, tr.u)
    w_j = longest_parabolic(table, tr.J)
    v = multiply(table, u, w_j)
    w = multiply(table, v, x)
    lv, lu, lwj = (int(table.length[i]) for i in (v, u, w_j))
    lw, lx = int(table.length[w]), int(table.length[x])
    if lv != lu + lwj:
        raise AssertionError(
            f"l(v) = l(u) + l(w_J) violated: {lv} != {lu} + {lwj}"
        )
    if lw != lx + lwj - lu:
        raise AssertionError(
            f"l(w) = l(x) + l(w_J) - l(u) violated: {lw} != {lx} + {lwj} - {lu}"
        )
    return Pair(table.element(v), table.element(w))


def _decompose_ids(table: GroupTable, v: int, w: int):
    """Invert the pair map on ids.  Returns (x, u, J-mask) or None.

    Follows the uniqueness argument: x = v^-1 w is forced; u must be the
    minimal-length representative of v's coset modulo W_M with
    M = Pi cap x.Pi; the parabolic part m must be a longest element w_J.
    """
    x = multiply(table, inverse(table, v), w)
    pi_mask = int(pi_cap_xpi_masks(table)[x])
    m_letters = [j + 1 for j in range(table.rank) if pi_mask >> j & 1]

    u = v
    peeled = []
    while True:
        for j in m_letters:
            if table.perm[u, j - 1] < 0:
                u = int(table.right_mult[u, j - 1])
                peeled.append(j)
                break
        else:
            break
    m = 0
    for j in reversed(peeled):
        m = int(table.right_mult[m, j - 1])
    assert table.length[v] == table.length[u] + len(peeled)
    assert table.length[m] == len(peeled)

    j_mask = int(table.inv[m]) & ((1 << table.rank) - 1)
    if m != longest_parabolic(table, _mask_to_set(j_mask)):
        return None
    if not leq_weak(table, inverse(table, u), x):
        return None
    return x, u, j_mask


def pair_to_triple(table: GroupTable, p: Pair):
    """Inverse of triple_to_pair; None when (v,w) is not in its image."""
    out = _decompose_ids(table, _as_id(table, p.v), _as_id(table, p.w))
    if out is None:
        return None
    x, u, j_mask = out
    return Triple(table.element(x), table.element(u), _mask_to_set(j_mask))


def _ascending_submasks(mask: int):
    t = 0
    while True:
        yield t
        t = (t - mask) & mask
        if t == 0:
            return


def downset_candidates(table: GroupTable, x: int) -> np.ndarray:
    """ids of every u with u^-1 <=_R x, ascending."""
    inv_of_inverse = table._cache.get("inv_of_inverse")
    if inv_of_inverse is None:
        inv_of_inverse = table.inv[inverse_ids(table)]
        inv_of_inverse.setflags(write=False)
        table._cache["inv_of_inverse"] = inv_of_inverse
    return np.nonzero((inv_of_inverse & ~table.inv[x]) == 0)[0]


def enumerate_triples(table: GroupTable):
    """Yield every admissible triple once, ordered by (x id, u id, J mask)."""
    masks = pi_cap_xpi_masks(table)
    for x in range(table.size):
        ex = table.element(x)
        pi_mask = int(masks[x])
        for u in downset_candidates(table, x):
            eu = table.element(int(u))
            for j_mask in _ascending_submasks(pi_mask):
                yield Triple(ex, eu, _mask_to_set(j_mask))


def random_triples(table: GroupTable, count: int, seed: int = 0):
    """Deterministic sample of admissible triples (uniform x, then u, then J)."""
    rng = np.random.default_rng(seed)
    masks = pi_cap_xpi_masks(table)
    for _ in range(count):
        x = int(rng.integers(0, table.size))
        cand = downset_candidates(table, x)
        u = int(cand[rng.integers(0, len(cand))])
        pi_mask = int(masks[x])
        positions = [j for j in range(table.rank) if pi_mask >> j & 1]
        j_mask = 0
        if positions:
            r = int(rng.integers(0, 1 << len(positions)))
            for k, j in enumerate(positions):
                if r >> k & 1:
                    j_mask |= 1 << j
        yield Triple(table.element(x), table.element(u), _mask_to_set(j_mask))


def triple_json(table: GroupTable, tr: Triple) -> str:
    """One-line JSON record of a triple and its image pair."""
    p = triple_to_pair(table, tr)
    return json.dumps(
        {
            "x": list(tr.x.word),
            "u": list(tr.u.word),
            "J": sorted(tr.J),
            "v": list(p.v.word),
            "w": list(p.w.word),
        },
        separators=(",", ":"),
    )


@dataclass
class LemmaCheck:
    name: str
    checked: int
    counterexamples: list[str]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


@dataclass
class LemmaReport:
    label: str
    checks: list[LemmaCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def summary_lines(self):
        for c in self.checks:
            status = "PASS" if c.ok else "FAIL"
            yield f"{self.label} {c.name}: {status} ({c.checked} cases checked)"
            for ce in c.counterexamples:
                yield f"  counterexample: {ce}"


def pair_success_matrix(table: GroupTable) -> np.ndarray:
    """S[v,w] = the pair (v,w) decomposes.  Quadratic; small ranks only."""
    cached = table._cache.get("pair_success")
    if cached is None:
        n_el = table.size
        cached = np.zeros((n_el, n_el), dtype=bool)
        for v in range(n_el):
            for w in range(n_el):
                cached[v, w] = _decompose_ids(table, v, w) is not None
        cached.setflags(write=False)
        table._cache["pair_success"] = cached
    return cached


def check_lemma_suite(table: GroupTable) -> LemmaReport:
    """Exhaustively verify the four pair-set facts on one group.

    (a) symmetry: (v,w) decomposes iff (w,v) does.
    (b) transfer: with l(s_a v) = l(v)+1 and l(s_a w) = l(w)+1,
        (s_a v, w) decomposes iff (v, s_a w) does.
    (c) descent restriction: under the same length hypotheses, if
        (s_a v, s_a w) decomposes then a is an image of a simple root
        under both v and w.
    (d) parabolic characterization: if every left descent a of v satisfies
        v s_b = s_a v for some simple b, then v is the longest element of
        the parabolic generated by its left descents.
    """
    n_el = table.size
    rank = table.rank
    S = pair_success_matrix(table)
    lengths = table.length.astype(np.int64)

    def word(i: int) -> str:
        return format_word(table.word_of(int(i)), rank)

    sym_bad = [
        f"v={word(v)}, w={word(w)}: ({word(v)},{word(w)}) decomposes "
        f"but ({word(w)},{word(v)}) does not"
        for v, w in zip(*np.nonzero(S != S.T))
    ]
    checks = [LemmaCheck("symmetry", n_el * n_el, sym_bad)]

    transfer_bad: list[str] = []
    transfer_n = 0
    restrict_bad: list[str] = []
    restrict_n = 0
    for a in range(1, rank + 1):
        lifted = left_mult_column(table, a)
        asc = np.nonzero(lengths[lifted] == lengths + 1)[0]
        lift_asc = lifted[asc]
        transfer_n += len(asc) ** 2
        t1 = S[np.ix_(lift_asc, asc)]
        t2 = S[np.ix_(asc, lift_asc)]
        for i, k in zip(*np.nonzero(t1 != t2)):
            v, w = asc[i], asc[k]
            transfer_bad.append(
                f"alpha={a}, v={word(v)}, w={word(w)}: "
                f"(s_a v, w) success={bool(t1[i, k])} but (v, s_a w) success={bool(t2[i, k])}"
            )
        both = S[np.ix_(lift_asc, lift_asc)]
        restrict_n += len(asc) ** 2
        has_img = np.any(table.perm[:, :rank] == a, axis=1)
        good = has_img[asc]
        for i, k in zip(*np.nonzero(both & ~(good[:, None] & good[None, :]))):
            v, w = asc[i], asc[k]
            restrict_bad.append(
                f"alpha={a}, v={word(v)}, w={word(w)}: (s_a v, s_a w) decomposes "
                f"but alpha is not a simple image under both"
            )
    checks.append(LemmaCheck("transfer", transfer_n, transfer_bad))
    checks.append(LemmaCheck("descent-restriction", restrict_n, restrict_bad))

    parab_bad: list[str] = []
    low_mask = (1 << rank) - 1
    left_cols = [left_mult_column(table, a) for a in range(1, rank + 1)]
    for v in range(n_el):
        j_mask = int(table.inv[v]) & low_mask
        descents = [a for a in range(1, rank + 1) if j_mask >> (a - 1) & 1]
        row = set(int(r) for r in table.right_mult[v])
        if all(int(left_cols[a - 1][v]) in row for a in descents):
            if v != longest_parabolic(table, descents):
                parab_bad.append(
                    f"v={word(v)}: every left descent transfers to the right "
                    f"but v is not the longest element over J={descents}"
                )
    checks.append(LemmaCheck("parabolic-characterization", n_el, parab_bad))

    return LemmaReport(table.rs.cartan.label, checks)
