"""Downset counting and the census aggregation."""

import re

import numpy as np
import pytest

from conftest import get_table
from weylcensus.census import (
    CSV_HEADER,
    census_run,
    count_BW,
    csv_lines,
    downset_sizes,
)
from weylcensus.coideal import downset_candidates, enumerate_triples
from weylcensus.rootsys import CartanMatrix
from weylcensus.weylgroup import pi_cap_xpi_masks

COUNTS = {
    "A1": 4, "A2": 26, "A3": 252, "A4": 3368,
    "B2": 38, "B3": 664, "B4": 17848, "C2": 38, "C3": 664, "C4": 17848,
    "D4": 6512, "F4": 91244, "G2": 68,
}


def test_g2_worksheet(g2):
    d = downset_sizes(g2)
    assert list(d.values) == [1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 12]
    widths = np.bitwise_count(pi_cap_xpi_masks(g2))
    assert list(widths) == [2, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0]
    assert d[0] == 1 and d[11] == 12
    assert len(d) == 12
    assert d.method == "bitset"


def test_a2_downsets(a2):
    assert list(downset_sizes(a2).values) == [1, 2, 2, 3, 3, 6]


@pytest.mark.parametrize("label", ["A3", "B3", "D4"])
def test_downset_endpoints_and_growth(label):
    t = get_table(label)
    d = downset_sizes(t).values
    assert d[0] == 1
    assert d[t.size - 1] == t.size
    # The downset grows strictly along every upward cover.
    for i in range(t.rank):
        asc = np.nonzero(t.perm[:, i] > 0)[0]
        assert (d[t.right_mult[asc, i]] > d[asc]).all()


@pytest.mark.parametrize("label", ["A3", "B3", "G2", "D4", "F4"])
def test_downset_methods_agree(label):
    t = get_table(label)
    fast = downset_sizes(t, "bitset").values
    slow = downset_sizes(t, "definitional").values
    assert np.array_equal(fast, slow)


def test_downset_bad_method(a2):
    with pytest.raises(ValueError):
        downset_sizes(a2, method="nope")


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3"])
def test_downset_matches_candidate_lists(label):
    t = get_table(label)
    d = downset_sizes(t)
    for x in range(t.size):
        assert len(downset_candidates(t, x)) == d[x]


@pytest.mark.parametrize("label,expected", sorted(COUNTS.items()))
def test_count_values(label, expected):
    assert count_BW(get_table(label)) == expected


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2", "A3"])
def test_count_matches_enumeration(label):
    t = get_table(label)
    assert count_BW(t) == sum(1 for _ in enumerate_triples(t))


def test_threads_do_not_change_values(b3):
    a = downset_sizes(b3, threads=1).values
    b = downset_sizes(b3, threads=8).values
    assert np.array_equal(a, b)
    assert count_BW(b3, threads=2) == COUNTS["B3"]


def test_census_run():
    rows, failures = census_run(["A2", "B2"])
    assert failures == []
    assert [(r.label, r.group_order, r.b_count) for r in rows] == [
        ("A2", 6, 26), ("B2", 8, 38)]
    assert all(r.elapsed_ms >= 0 for r in rows)


def test_census_run_accepts_matrices():
    m = CartanMatrix.from_matrix([[2, -1], [-1, 2]], label="mystery")
    rows, failures = census_run([m])
    assert failures == []
    assert rows[0].label == "mystery"
    assert rows[0].b_count == 26


def test_census_run_reports_failures():
    rows, failures = census_run(["A2", "Q9", "B2"])
    assert [r.label for r in rows] == ["A2", "B2"]
    assert len(failures) == 1
    assert failures[0][0] == "Q9"
    assert "bad Cartan type label" in failures[0][1]
    # A hard order cap is reported the same way.
    rows, failures = census_run(["A3"], order_cap=10)
    assert rows == []
    assert failures[0][0] == "A3"
    assert "GroupTooLargeError" in failures[0][1]


def test_csv_lines():
    rows, _ = census_run(["A1", "G2"])
    lines = csv_lines(rows)
    assert lines[0] == CSV_HEADER == "type,group_order,b_count,elapsed_ms"
    assert len(lines) == 3
    for line in lines[1:]:
        assert re.fullmatch(r"[A-Za-z0-9_]+,\d+,\d+,\d+", line)
    assert lines[1].startswith("A1,2,4,")
    assert lines[2].startswith("G2,12,68,")
