"""Read and write campaign data as CSV.

Two schemas are supported, both with a mandatory header row:

aggregate
    ``subgroup,group,responders,total``, exactly one row for each of the
    four (subgroup, group) combinations.
individual
    ``subgroup,group,response``, one row per person, ``response`` 0 or 1.

``group`` is ``target`` or ``control`` (any case). Subgroup labels are kept
as given; labels ``1`` and ``2`` map to themselves, any other pair of labels
is numbered by first appearance. Extra columns are ignored with a warning.
"""

from __future__ import annotations

import csv
import io
import os
import warnings
from collections import Counter

from .domain import CampaignPair, SubgroupCounts
from .errors import ParseError, SchemaError, ValidationError

AGGREGATE_HEADER = ("subgroup", "group", "responders", "total")
INDIVIDUAL_HEADER = ("subgroup", "group", "response")
_GROUPS = ("target", "control")


def _open_rows(source):
    """Yield ``(line_number, row_dict)`` and the header from a path or text stream."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="", encoding="utf-8-sig") as fh:
            text = fh.read()
    else:
        text = source.read()
    reader = csv.DictReader(io.StringIO(text, newline=""))
    header = [h.strip().lower() for h in (reader.fieldnames or [])]
    reader.fieldnames = header
    rows = [(reader.line_num, row) for row in reader if any((v or "").strip() for v in row.values() if isinstance(v, str))]
    return header, rows


def _check_header(header, required, kind):
    if not header:
        raise SchemaError(f"{kind} file is empty or has no header")
    missing = [c for c in required if c not in header]
    if missing:
        raise SchemaError(f"{kind} header lacks column(s): {', '.join(missing)}")
    extra = [c for c in header if c not in required]
    if extra:
        warnings.warn(f"ignoring extra column(s): {', '.join(extra)}", stacklevel=3)


def _int_field(row, name, line):
    text = (row.get(name) or "").strip()
    if not text:
        raise ParseError(f"missing value for {name!r}", line)
    try:
        return int(text)
    except ValueError:
        pass
    try:
        float(text)
    except ValueError:
        raise ParseError(f"{name}={text!r} is not a number", line) from None
    raise ValidationError(f"line {line}: {name}={text!r} is not a whole number")


def _group_field(row, line):
    text = (row.get("group") or "").strip().lower()
    if text not in _GROUPS:
        raise ParseError(f"group must be 'target' or 'control', got {row.get('group')!r}", line)
    return text


def _subgroup_field(row, line):
    text = (row.get("subgroup") or "").strip()
    if not text:
        raise ParseError("missing subgroup label", line)
    return text


def _label_order(labels_seen: list[str]) -> tuple[str, str]:
    distinct = list(dict.fromkeys(labels_seen))
    if len(distinct) != 2:
        raise SchemaError(f"expected exactly two subgroups, found {len(distinct)}: {distinct}")
    if set(distinct) == {"1", "2"}:
        return ("1", "2")
    return (distinct[0], distinct[1])


def _assemble(cells: dict, labels: tuple[str, str]) -> CampaignPair:
    subs = []
    for label in labels:
        a_T, n = cells[(label, "target")]
        a_C, k = cells[(label, "control")]
        subs.append(SubgroupCounts(n, k, a_T, a_C))
    return CampaignPair(subs[0], subs[1], labels)


def read_aggregate(source) -> CampaignPair:
    """Parse an aggregate count table (path or text stream) into a pair."""
    header, rows = _open_rows(source)
    _check_header(header, AGGREGATE_HEADER, "aggregate")
    if not rows:
        raise SchemaError("aggregate file has no data rows")
    cells = {}
    order = []
    for line, row in rows:
        label = _subgroup_field(row, line)
        group = _group_field(row, line)
        responders = _int_field(row, "responders", line)
        total = _int_field(row, "total", line)
        if responders < 0 or total < 0:
            raise ValidationError(f"line {line}: counts must be non-negative")
        if responders > total:
            raise ValidationError(f"line {line}: responders {responders} exceed total {total}")
        if (label, group) in cells:
            raise SchemaError(f"line {line}: duplicate row for subgroup {label!r}, group {group!r}")
        cells[(label, group)] = (responders, total)
        order.append(label)
    labels = _label_order(order)
    missing = [(s, g) for s in labels for g in _GROUPS if (s, g) not in cells]
    if missing:
        raise SchemaError("missing row(s) for " + ", ".join(f"({s}, {g})" for s, g in missing))
    return _assemble(cells, labels)


def read_individual(source) -> CampaignPair:
    """Tally a person-level 0/1 response file into a pair."""
    header, rows = _open_rows(source)
    _check_header(header, INDIVIDUAL_HEADER, "individual")
    if not rows:
        raise SchemaError("individual file has no data rows")
    responders = Counter()
    totals = Counter()
    order = []
    for line, row in rows:
        label = _subgroup_field(row, line)
        group = _group_field(row, line)
        response = _int_field(row, "response", line)
        if response not in (0, 1):
            raise ValidationError(f"line {line}: response must be 0 or 1, got {response}")
        totals[(label, group)] += 1
        responders[(label, group)] += response
        order.append(label)
    labels = _label_order(order)
    missing = [(s, g) for s in labels for g in _GROUPS if totals[(s, g)] == 0]
    if missing:
        raise SchemaError("no persons for " + ", ".join(f"({s}, {g})" for s, g in missing))
    cells = {key: (responders[key], totals[key]) for key in totals}
    return _assemble(cells, labels)


def sniff_schema(path) -> str:
    """Return ``"aggregate"`` or ``"individual"`` from a file's header."""
    header, _ = _open_rows(path)
    if all(c in header for c in AGGREGATE_HEADER):
        return "aggregate"
    if all(c in header for c in INDIVIDUAL_HEADER):
        return "individual"
    raise SchemaError(f"header {header} matches neither schema")


def read_pair(path) -> CampaignPair:
    if sniff_schema(path) == "aggregate":
        return read_aggregate(path)
    return read_individual(path)


def _sink(target):
    if isinstance(target, (str, os.PathLike)):
        return open(target, "w", newline="", encoding="utf-8")
    return None


def write_aggregate(pair: CampaignPair, target) -> None:
    fh = _sink(target)
    try:
        writer = csv.writer(fh or target, lineterminator="\n")
        writer.writerow(AGGREGATE_HEADER)
        for label, sub in zip(pair.labels, (pair.sub1, pair.sub2)):
            writer.writerow((label, "target", sub.a_T, sub.n))
            writer.writerow((label, "control", sub.a_C, sub.k))
    finally:
        if fh:
            fh.close()


def write_individual(pair: CampaignPair, target) -> None:
    """Expand counts into one row per person (responders first)."""
    fh = _sink(target)
    try:
        out = fh or target
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(INDIVIDUAL_HEADER)
        for label, sub in zip(pair.labels, (pair.sub1, pair.sub2)):
            for group, hits, size in (("target", sub.a_T, sub.n), ("control", sub.a_C, sub.k)):
                writer.writerows([(label, group, 1)] * hits)
                writer.writerows([(label, group, 0)] * (size - hits))
    finally:
        if fh:
            fh.close()
