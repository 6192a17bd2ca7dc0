import logging
from fractions import Fraction as F

import pytest

from conftest import quadratic
from schur_stability.jury import JuryVerdict, _next_row, jury_table, jury_verdict, table_csv, table_frame, table_text
from schur_stability.poly import MonicPolynomial, normalize
from schur_stability.regions import c2_membership, c3_membership


def test_example_quintic_table(example_quintic):
    table = jury_table(example_quintic)
    assert table.verdict is JuryVerdict.STABLE
    assert len(table.rows) == 7
    assert table.rows[0] == (F(-1, 2), F(-1, 2), F(0), F(0), F(1, 2), F(1))
    assert table.rows[1] == tuple(reversed(table.rows[0]))
    assert table.rows[2] == (F(-3, 4), F(-1, 4), F(0), F(0), F(1, 4))
    assert table.rows[4] == (F(1, 2), F(3, 16), F(0), F(1, 16))
    assert table.rows[6] == (F(63, 256), F(3, 32), F(-3, 256))
    assert table.derived_rows == (table.rows[2], table.rows[4], table.rows[6])


def test_row_rule_on_hand_computed_rows(example_quintic):
    row3 = jury_table(example_quintic).rows[2]
    # x^0, x^2 and x^3 entries of row 3
    assert (row3[0], row3[2], row3[3]) == (F(-3, 4), F(0), F(0))
    # a row 5 carrying a slipped x^0 entry still yields a consistent row 7
    assert _next_row((F(35, 16), F(3, 16), F(0), F(1, 16))) == (F(153, 32), F(105, 256), F(-3, 256))


def test_row_lengths_shrink_every_two_rows():
    table = jury_table(normalize(["1", "1/3", "-1/5", "1/7", "1/9", "-1/11", "1/13"]))
    lengths = [len(row) for row in table.rows]
    assert lengths == [7, 7, 6, 6, 5, 5, 4, 4, 3]


def test_simple_verdicts(cournot_cubic):
    assert jury_verdict(quadratic(F(3, 10), F(2, 5))) is JuryVerdict.STABLE
    assert jury_verdict(cournot_cubic) is JuryVerdict.STABLE
    unstable = jury_table(normalize([1, -3, 1]))
    assert unstable.verdict is JuryVerdict.UNSTABLE
    assert unstable.deciding_row == 1
    assert not unstable.on_boundary


def test_verdict_is_logged_at_debug(cournot_cubic, caplog):
    caplog.set_level(logging.DEBUG, logger="schur_stability.jury")
    table = jury_table(cournot_cubic)
    assert f"Jury {cournot_cubic}: Stable ({len(table.rows)} rows)" in caplog.text


def test_root_on_unit_circle_is_never_stable():
    # (x - 1)(x^2 - 0.3x + 0.4)
    table = jury_table(normalize(["1", "-1.3", "0.7", "-0.4"]))
    assert table.verdict is JuryVerdict.UNSTABLE
    assert table.on_boundary


def test_zero_pivot_is_singular():
    # x^3 + x = x(x^2 + 1)
    table = jury_table(MonicPolynomial((F(0), F(1), F(0))))
    assert table.verdict is JuryVerdict.SINGULAR
    assert table.deciding_row == 3


def test_derived_row_failure_is_unstable():
    # x^3 + 7/5x + 1/2 passes the three pre-checks but has a root outside the disk
    table = jury_table(normalize(["1", "0", "7/5", "1/2"]))
    assert table.necessary_checks == (True, True, True)
    assert table.verdict is JuryVerdict.UNSTABLE
    assert table.deciding_row == 3


def test_table_csv():
    assert table_csv(jury_table(quadratic(F(3, 10), F(2, 5)))) == "Step,x^0,x^1,x^2\n1,2/5,-3/10,1\n2,1,-3/10,2/5\n"


def test_table_frame_pads_short_rows(example_quintic):
    frame = table_frame(jury_table(example_quintic))
    assert list(frame.columns) == ["Step", "x^0", "x^1", "x^2", "x^3", "x^4", "x^5"]
    assert frame.iloc[6].tolist() == [7, "63/256", "3/32", "-3/256", "", "", ""]


def test_table_text(example_quintic):
    text = table_text(jury_table(example_quintic))
    assert text.endswith("verdict: Stable\n")
    assert "63/256" in text
    assert text.splitlines()[0].split() == ["Step", "x^0", "x^1", "x^2", "x^3", "x^4", "x^5"]


def _grid(lo, hi, step):
    value = F(lo)
    while value <= hi:
        yield value
        value += step


def test_jury_agrees_with_quadratic_locus():
    for a0 in _grid(-2, 2, F(1, 4)):
        for a1 in _grid(-3, 3, F(1, 4)):
            stable = jury_verdict(MonicPolynomial((a0, a1))) is JuryVerdict.STABLE
            assert stable == c2_membership(a0, a1), (a0, a1)


@pytest.mark.parametrize("a2", [F(-3, 2), F(-1, 2), F(0), F(1, 3), F(1)])
def test_jury_agrees_with_cubic_locus(a2):
    for a0 in _grid(-F(3, 2), F(3, 2), F(1, 4)):
        for a1 in _grid(-3, 3, F(1, 4)):
            stable = jury_verdict(MonicPolynomial((a0, a1, a2))) is JuryVerdict.STABLE
            assert stable == c3_membership(a0, a1, a2), (a0, a1, a2)
