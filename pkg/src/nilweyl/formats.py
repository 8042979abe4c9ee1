"""File formats: JSON lines and CSV for orbits and sequences, JSON/CSV reports.

Every file opens with a versioned schema tag.  High-precision coordinates
are written as decimal strings with enough digits to recover the exact
fixed-point mantissa; doubles are written with ``repr``.
"""

import csv
import json
import math
from fractions import Fraction

from .numeric import PRECISION, CirclePoint, PreciseReal

ORBIT_SCHEMA = "nilweyl.orbit/1"
SEQUENCE_SCHEMA = "nilweyl.sequence/1"
VDC_SCHEMA = "nilweyl.vdc/1"


def decimal_digits():
    return math.ceil(PRECISION.bits * math.log10(2)) + 2


def to_decimal(x):
    """Exact-enough decimal string of a PreciseReal or CirclePoint."""
    m = x.m
    b = PRECISION.bits
    D = decimal_digits()
    sign = "-" if m < 0 else ""
    m = abs(m)
    scaled = (m * 10 ** D + (1 << (b - 1))) >> b
    whole, rest = divmod(scaled, 10 ** D)
    return f"{sign}{whole}.{rest:0{D}d}"


def from_decimal(text, circle=True):
    q = Fraction(text)
    m = round(q * PRECISION.one)
    return CirclePoint(m) if circle else PreciseReal(m)


def infer_format(path, default):
    if path:
        for ext, fmt in ((".jsonl", "jsonl"), (".json", "json"), (".csv", "csv")):
            if str(path).endswith(ext):
                return fmt
    return default


def _header_line(header):
    return json.dumps(header, sort_keys=True)


def write_records(stream, header, records, fmt, columns=None):
    """Write a header and flat records as JSON lines or CSV.

    ``records`` are dicts; for CSV, list values are expanded into numbered
    columns and the header goes into a leading ``#`` comment line.
    """
    if fmt == "jsonl":
        stream.write(_header_line(header) + "\n")
        for rec in records:
            stream.write(json.dumps(rec) + "\n")
        return
    if fmt != "csv":
        raise ValueError(f"unsupported record format {fmt!r}")
    stream.write("# " + _header_line(header) + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    wrote_header = False
    for rec in records:
        flat = {}
        for key, value in rec.items():
            if isinstance(value, list):
                for i, v in enumerate(value):
                    flat[f"{key}{i + 1}"] = v
            else:
                flat[key] = value
        if not wrote_header:
            columns = columns or list(flat)
            writer.writerow(columns)
            wrote_header = True
        writer.writerow([flat[c] for c in columns])


def read_jsonl(stream):
    """Return ``(header, records)`` from a JSON-lines file."""
    lines = [json.loads(line) for line in stream if line.strip()]
    return lines[0], lines[1:]


def read_csv(stream):
    lines = stream.read().splitlines()
    header = json.loads(lines[0][2:]) if lines and lines[0].startswith("# ") else {}
    body = lines[1:] if header else lines
    return header, list(csv.DictReader(body))


def write_report(stream, report, fmt):
    if fmt == "json":
        stream.write(report.to_json() + "\n")
        return
    if fmt != "csv":
        raise ValueError(f"unsupported report format {fmt!r}")
    meta = {"schema": report.to_dict()["schema"], "sequence": report.sequence,
            "degree": report.degree, "fit": report.fit}
    if report.config is not None:
        meta["config"] = report.config
    stream.write("# " + _header_line(meta) + "\n")
    columns, rows = report.csv_rows()
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
