import numpy as np

from conftest import write_curve
from rovib.potential import MorseCurve
from rovib.reproduce import B_FILE, DIPOLE_FILE, X_FILE, Check, data_gated, format_table


def test_data_gated_runs_on_stand_in_curves(tmp_path):
    R = np.linspace(2.2, 30.0, 1200)
    write_curve(tmp_path / X_FILE, R, MorseCurve(6000.0, 0.9, 3.7)(R), unit_R="angstrom", unit_V="cm-1")
    write_curve(tmp_path / B_FILE, R, MorseCurve(3500.0, 0.8, 3.9, Te=13500.0)(R),
                unit_R="angstrom", unit_V="cm-1")
    write_curve(tmp_path / DIPOLE_FILE, R, 6.0 - 0.1 * R, unit_R="angstrom", unit_d="debye")
    out = data_gated(tmp_path)
    assert len(out) == 3
    assert all(c.status in ("pass", "fail") for c in out)
    assert "GHz" in out[1].detail and "cm-1" in out[2].detail


def test_data_gated_without_dipole(tmp_path, monkeypatch):
    monkeypatch.delenv("ROVIB_DATA_DIR", raising=False)
    monkeypatch.chdir(tmp_path)
    R = np.linspace(2.2, 30.0, 1200)
    write_curve(tmp_path / X_FILE, R, MorseCurve(6000.0, 0.9, 3.7)(R), unit_R="angstrom", unit_V="cm-1")
    write_curve(tmp_path / B_FILE, R, MorseCurve(3500.0, 0.8, 3.9, Te=13500.0)(R),
                unit_R="angstrom", unit_V="cm-1")
    out = data_gated(tmp_path)
    assert [c.status for c in out][0] == "skipped"


def test_format_table_aligns():
    text = format_table([Check("a", "pass", "x"), Check("longer name", "skipped", "y")])
    lines = text.splitlines()
    assert lines[0].startswith("PASS") and lines[1].startswith("SKIPPED")
    assert lines[0].index("x") == lines[1].index("y")
