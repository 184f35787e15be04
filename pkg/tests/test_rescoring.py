import json
import math
from decimal import Decimal, getcontext

import pytest

from btselect.errors import ConfigError, FactorError
from btselect.rescoring import (
    SystemFactorTable,
    SystemMeasurement,
    build_factor_table,
    compute_phi,
)

# Published EN-DE and ES-EU Transformer scores and backtranslation MTLD.
DE = (32.24, 46.83, 53.70)
EU = (12.21, 66.53, 13.79)


def _decimal_phi(bleu, ter, mtld):
    getcontext().prec = 40
    return float((Decimal(str(bleu)) * (100 - Decimal(str(ter))) * Decimal(str(mtld))).ln())


def test_phi_published_inputs():
    assert compute_phi(*DE) == pytest.approx(_decimal_phi(*DE), abs=1e-12)
    assert compute_phi(*DE) == pytest.approx(11.430115, abs=1e-6)
    assert compute_phi(*EU) == pytest.approx(_decimal_phi(*EU), abs=1e-12)
    assert compute_phi(*EU) == pytest.approx(8.636848, abs=1e-6)


def test_phi_equals_one():
    assert compute_phi(math.e, 0.0, 0.01) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "args",
    [(0.0, 50, 10), (-1, 50, 10), (30, 100, 10), (30, 120, 10), (30, 50, 0),
     (0.01, 99.5, 100), (float("nan"), 50, 10), (30, 50, None)],
)
def test_phi_rejections(args):
    with pytest.raises(FactorError):
        compute_phi(*args, system="X")


def test_phi_error_names_system():
    with pytest.raises(FactorError, match="'sysB'") as info:
        compute_phi(10, 100, 10, system="sysB")
    assert info.value.system == "sysB"


def test_phi_monotonic():
    base = compute_phi(*DE)
    assert compute_phi(32.25, 46.83, 53.70) > base
    assert compute_phi(32.24, 46.83, 53.71) > base
    assert compute_phi(32.24, 46.84, 53.70) < base
    assert compute_phi(33, 40, 60) > compute_phi(30, 45, 50)


def test_table_roundtrip(tmp_path):
    table = SystemFactorTable.from_values({"A": dict(zip(("bleu", "ter", "mtld"), DE))})
    p = tmp_path / "f.json"
    table.write(p)
    again = SystemFactorTable.read(p)
    assert again.phis() == table.phis()
    assert json.loads(p.read_text())["systems"]["A"]["phi"] == table["A"].phi


def test_table_rejects_inconsistent_phi():
    with pytest.raises(FactorError):
        SystemFactorTable.from_values({"A": {"bleu": 30, "ter": 50, "mtld": 10, "phi": 1.0}})


def test_table_read_bad_json(tmp_path):
    p = tmp_path / "f.json"
    p.write_text("{")
    with pytest.raises(ConfigError):
        SystemFactorTable.read(p)
    p.write_text('{"x": 1}')
    with pytest.raises(ConfigError):
        SystemFactorTable.read(p)


def _files(write):
    ref = write("ref.txt", "a b c d\ne f g h\ni j k l\n")
    good = write("good.txt", "a b c d\ne f g x\ni j k l\n")
    bad = write("bad.txt", "x\ny\nz\n")
    bt = write("bt.txt", "a b a b c d e a b\nq r s q r s\n")
    return ref, good, bad, bt


def test_build_factor_table_computed_matches_supplied(write):
    ref, good, _, bt = _files(write)
    table = build_factor_table([SystemMeasurement("A", good, bt), SystemMeasurement("B", ref, bt)], ref)
    assert len(table) == 2 and all(p > 0 for p in table.phis().values())
    assert table["A"].provenance == "computed"
    raw = {n: {"bleu": e.bleu, "ter": e.ter, "mtld": e.mtld} for n, e in table.entries.items()}
    supplied = SystemFactorTable.from_values(raw)
    for n in raw:
        assert supplied[n].phi == pytest.approx(table[n].phi, abs=1e-12)


def test_build_factor_table_names_failing_system(write):
    ref, good, bad, bt = _files(write)
    with pytest.raises(FactorError, match="'B'"):
        build_factor_table([SystemMeasurement("A", good, bt), SystemMeasurement("B", bad, bt)], ref)


def test_build_factor_table_mtld_undefined(write):
    ref, good, _, _ = _files(write)
    hapax = write("hapax.txt", "u v w\n")
    with pytest.raises(FactorError, match="MTLD"):
        build_factor_table([SystemMeasurement("A", good, hapax)], ref)


def test_build_factor_table_missing_file(write):
    ref, good, _, _ = _files(write)
    with pytest.raises(FileNotFoundError):
        build_factor_table([SystemMeasurement("A", good, "/nonexistent")], ref)
