"""Small file helpers shared by the command line tools."""

from __future__ import annotations

import csv
import os
from importlib import resources
from pathlib import Path

DATA_ENV = "ROVIB_DATA_DIR"


def read_params(path) -> dict[str, str]:
    """Read a ``key: value`` parameter file; ``#`` starts a comment."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'key: value'")
            out[key.strip()] = value.strip()
    return out


def packaged_data(name: str) -> Path:
    return Path(str(resources.files("rovib") / "data" / name))


def find_data_file(name: str, data_dir=None) -> Path | None:
    """Locate ``name`` as given, in ``data_dir``, or in $ROVIB_DATA_DIR."""
    candidates = [Path(name)]
    for d in (data_dir, os.environ.get(DATA_ENV)):
        if d:
            candidates.append(Path(d) / name)
    for c in candidates:
        if c.is_file():
            return c
    return None


def write_header(fh, header: dict):
    for key, value in header.items():
        fh.write(f"# {key}: {value}\n")


def write_rows(path, columns, rows, header: dict | None = None):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        write_header(fh, header or {})
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in row])


def write_decay_table(path, table, header: dict | None = None):
    v, J, parity = table.upper
    meta = {"upper_level": f"v'={v}, J'={J}, parity={parity}",
            "total_A_per_s": repr(table.total_A),
            "continuum_leakage": repr(table.continuum_leakage)}
    meta.update(header or {})
    write_rows(path, ["v''", "J''", "A_per_s", "rel_pop"],
               [(r.v, r.J, r.A, r.rel_pop) for r in table.rows], meta)


def write_report(path, items: dict):
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in items.items():
            fh.write(f"{key}: {value}\n")


def gnuplot_script(csv_path, xcol: str, ycol: str = "signal") -> Path:
    """Write ``<csv>.gp`` that plots column ``ycol`` against ``xcol``."""
    csv_path = Path(csv_path)
    gp = csv_path.with_suffix(csv_path.suffix + ".gp")
    gp.write_text(
        "set datafile separator ','\n"
        "set datafile commentschars '#'\n"
        f"set xlabel '{xcol}'\nset ylabel '{ycol}'\n"
        f"plot '{csv_path.name}' using '{xcol}':'{ycol}' skip 0 with lines title '{ycol}'\n",
        encoding="utf-8",
    )
    return gp
