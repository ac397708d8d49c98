import random
from decimal import Decimal

import pytest

from conftest import GAMMA_1, GAMMA_2, GAMMA_3
from zetasum.errors import InsufficientTable, MalformedLine, NotAscending, VerificationFailed
from zetasum.numkern import PrecisionContext, hardy_Z, zeta
from zetasum.zeros import (
    ZeroTable,
    _bisect_polish,
    count_zeros_rvm,
    export_zeros,
    find_zeros,
    import_zeros,
    safe_truncation_height,
)

CTX = PrecisionContext(40)
MP = CTX.mp


def test_below_first_ordinate():
    assert len(find_zeros(14.0, CTX)) == 0
    assert count_zeros_rvm(14.0) == 0


def test_first_zeros():
    # 17.8455995... is the Gram point g_0, not an ordinate; the second zero is 21.022...
    table = find_zeros(20, CTX)
    assert len(table) == 1
    assert abs(MP.mpf(table.ordinates[0]) - MP.mpf(GAMMA_1)) < MP.mpf(10) ** -38
    assert count_zeros_rvm(20) == 1
    table = find_zeros(26, CTX)
    assert [round(float(g), 10) for g in table.ordinates] == [
        round(float(g), 10) for g in (GAMMA_1, GAMMA_2, GAMMA_3)
    ]


def test_count_at_100():
    assert count_zeros_rvm(100) == 29


def test_table_invariants(table):
    g = table.decimals
    assert all(a < b for a, b in zip(g, g[1:]))
    assert len(table) == 653
    rng = random.Random(7)
    for T in sorted(rng.uniform(15, table.verified_height) for _ in range(10)):
        assert table.count_upto(T) == count_zeros_rvm(T)


def test_ordinates_are_sign_changes(table):
    eps = MP.mpf("1e-6")
    for text in table.truncated(100).ordinates:
        g = MP.mpf(text)
        assert hardy_Z(g - eps, CTX) * hardy_Z(g + eps, CTX) < 0
        assert abs(zeta(MP.mpc(0.5, g), CTX)) < MP.mpf(10) ** -32


def test_ordinate_strings_carry_requested_digits(table):
    for text in table.ordinates[:5] + table.ordinates[-5:]:
        assert len(text.replace(".", "")) >= CTX.digits


def test_deterministic_and_worker_independent():
    a = export_zeros(find_zeros(60, CTX))
    b = export_zeros(find_zeros(60, CTX))
    c = export_zeros(find_zeros(60, CTX, workers=2))
    assert a == b == c


def test_bisection_fallback_agrees_with_newton():
    g = _bisect_polish(MP.mpf(14), MP.mpf("14.2"), CTX)
    assert abs(g - MP.mpf(GAMMA_1)) < MP.mpf(10) ** -38


def test_import_two_entries():
    table = import_zeros("14.134725141734693\n21.022039638771555\n")
    assert len(table) == 2
    assert table.source == "imported"
    assert table.precision_digits == 17
    assert 21.02 < table.verified_height < 25.01


def test_import_rejects_gram_point():
    with pytest.raises(VerificationFailed):
        import_zeros("14.134725141734693\n17.845599540320452\n")


def test_import_rejects_incomplete_table():
    with pytest.raises(VerificationFailed):
        import_zeros(f"{GAMMA_1}\n{GAMMA_3}\n")


def test_import_trust_skips_verification():
    table = import_zeros("14.134725141734693\n17.845599540320452\n", trust=True)
    assert len(table) == 2
    assert table.verified_height == pytest.approx(17.845599540320452)


def test_import_empty():
    table = import_zeros("")
    assert len(table) == 0
    assert table.verified_height == 0


def test_import_format_errors():
    with pytest.raises(NotAscending) as exc:
        import_zeros("17.8\n14.1\n", trust=True)
    assert exc.value.line_no == 2
    with pytest.raises(MalformedLine) as exc:
        import_zeros("# header\n14.13\n1e3\n", trust=True)
    assert exc.value.line_no == 3
    with pytest.raises(MalformedLine):
        import_zeros("-14.13\n", trust=True)


def test_round_trip(table):
    small = table.truncated(50)
    text = export_zeros(small)
    again = import_zeros(text, CTX)
    assert again.ordinates == small.ordinates
    assert export_zeros(again).splitlines()[1:] == text.splitlines()[1:]


def test_count_upto_is_exact_decimal():
    t = ZeroTable(("14.5", "21.0"), 22.0, "imported", 3)
    assert t.count_upto("14.5") == 1
    assert t.count_upto(Decimal("14.4999999999999999999")) == 0
    assert t.count_upto(MP.mpf("21.0")) == 2


def test_safe_truncation_height(table):
    assert safe_truncation_height(100, table) == 100
    mid = safe_truncation_height(float(GAMMA_1), table)
    assert mid == pytest.approx((float(GAMMA_1) + float(GAMMA_2)) / 2)
    assert safe_truncation_height(12, table) == 12
    with pytest.raises(InsufficientTable):
        safe_truncation_height(table.verified_height - 0.5, table)
