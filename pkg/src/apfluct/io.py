"""CSV and JSON writers with matching readers.

JSON is UTF-8 with sorted keys; non-finite floats are written as the strings
"inf", "-inf" and "nan" so every document is strict JSON.  Fractions are
written as "a/b" strings.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Iterable, List, Sequence

from .census import PairCensus

CENSUS_HEADER = ["n", "ell", "ellPrime", "r", "count"]
KERNEL_HEADER = ["x", "phi(x)"]
BATCH_HEADER = ["replica", "x_ell1", "x_ell2", "std_x_ell1", "std_x_ell2"]
PMF_HEADER = ["x_ell1", "x_ell2", "prob"]

_NONFINITE = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _csv_rows(text: str, header: Sequence[str]) -> List[List[str]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != list(header):
        raise ValueError(f"expected CSV header {','.join(header)}")
    return rows[1:]


def census_to_csv(census: PairCensus) -> str:
    return _csv_text(
        CENSUS_HEADER,
        ([census.n, census.ell, census.ell_prime, r, c] for r, c in enumerate(census.counts)),
    )


def census_from_csv(text: str) -> PairCensus:
    rows = _csv_rows(text, CENSUS_HEADER)
    n, ell, ell_prime = (int(v) for v in rows[0][:3])
    counts = [0] * (ell_prime + 1)
    for row in rows:
        counts[int(row[3])] = int(row[4])
    return PairCensus(n, ell, ell_prime, tuple(counts))


def _number(x) -> str:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    return repr(float(x)) if isinstance(x, float) else str(x)


def kernel_samples_to_csv(samples) -> str:
    return _csv_text(KERNEL_HEADER, ([_number(x), _number(y)] for x, y in samples))


def parse_number(text: str):
    if "/" in text:
        return Fraction(text)
    try:
        return int(text)
    except ValueError:
        return float(text)


def kernel_samples_from_csv(text: str):
    return [(parse_number(x), parse_number(y)) for x, y in _csv_rows(text, KERNEL_HEADER)]


def batch_to_csv(batch) -> str:
    rows = (
        [i, int(batch.counts[i, 0]), int(batch.counts[i, 1]), repr(float(batch.standardized[i, 0])), repr(float(batch.standardized[i, 1]))]
        for i in range(batch.replicas)
    )
    return _csv_text(BATCH_HEADER, rows)


def batch_from_csv(text: str):
    """(counts, standardized) as lists of pairs."""
    rows = _csv_rows(text, BATCH_HEADER)
    counts = [(int(r[1]), int(r[2])) for r in rows]
    std = [(float(r[3]), float(r[4])) for r in rows]
    return counts, std


def pmf_to_csv(dist) -> str:
    return _csv_text(PMF_HEADER, ([x1, x2, _number(pr)] for (x1, x2), pr in zip(dist.support, dist.probs)))


def pmf_from_csv(text: str):
    return {(int(a), int(b)): Fraction(p) for a, b, p in _csv_rows(text, PMF_HEADER)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return _number(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if hasattr(obj, "item"):  # numpy scalars
        return _jsonable(obj.item())
    return obj


def to_json(obj) -> str:
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _restore(obj):
    if isinstance(obj, dict):
        return {k: _restore(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_restore(v) for v in obj]
    if isinstance(obj, str) and obj in _NONFINITE:
        return _NONFINITE[obj]
    return obj


def from_json(text: str):
    return _restore(json.loads(text))
