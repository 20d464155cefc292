"""
Rendering of command reports as a human table, a flat JSON object or CSV.

A report is an ordered list of named fields. Fields of kind ``entropy``
are stored in nats and converted to bits on output when asked; every
other field is printed as is. Numbers are printed with a fixed number of
significant digits, so identical runs give byte-identical output.
"""
import csv
import io
import json
import math
import numbers
from dataclasses import dataclass, field
from typing import Any, Sequence, Union

from erasure.conf import erasure_settings
from erasure.entropy import LN2

ENTROPY = 'entropy'
PLAIN = 'plain'

Scalar = Union[float, int, bool, str, None]


@dataclass
class Field:
    name: str
    value: Union[Scalar, Sequence[Scalar]]
    kind: str = PLAIN


@dataclass
class Report:
    command: str
    fields: list[Field] = field(default_factory=list)
    # all fields are equal-length columns, rendered one row per index
    columnar: bool = False

    def add(self, name: str, value: Any, kind: str = PLAIN) -> 'Report':
        self.fields.append(Field(name, value, kind))
        return self

    def entropy(self, name: str, value: Any) -> 'Report':
        return self.add(name, value, ENTROPY)

    def __getitem__(self, name: str) -> Any:
        for item in self.fields:
            if item.name == name:
                return item.value
        raise KeyError(name)


def _number(value: Scalar, kind: str, units: str, digits: int) -> Scalar:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral):
        return int(value)
    value = float(value)
    if kind == ENTROPY and units == 'bits':
        value = value / LN2
    if not math.isfinite(value):
        return None if math.isnan(value) else ('inf' if value > 0 else '-inf')
    return float(f'{value:.{digits}g}')


def _converted(report: Report, units: str, digits: int) -> list[tuple[str, Any]]:
    rows = []
    for item in report.fields:
        if isinstance(item.value, (list, tuple)):
            rows.append((item.name, [_number(v, item.kind, units, digits) for v in item.value]))
        else:
            rows.append((item.name, _number(item.value, item.kind, units, digits)))
    return rows


def _text(value: Any, digits: int) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return ''
    if isinstance(value, float):
        return f'{value:.{digits}g}'
    if isinstance(value, list):
        return ' '.join(_text(v, digits) for v in value)
    return str(value)


def render_json(report: Report, units: str, digits: int) -> str:
    payload: dict[str, Any] = {'command': report.command, 'units': units}
    payload.update(_converted(report, units, digits))
    return json.dumps(payload, indent=2) + '\n'


def render_csv(report: Report, units: str, digits: int) -> str:
    rows = _converted(report, units, digits)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    if report.columnar:
        writer.writerow([name for name, _ in rows])
        for values in zip(*(value for _, value in rows)):
            writer.writerow([_text(v, digits) for v in values])
        return buffer.getvalue()
    writer.writerow(['field', 'value'])
    for name, value in rows:
        if isinstance(value, list):
            for index, item in enumerate(value):
                writer.writerow([f'{name}[{index}]', _text(item, digits)])
        else:
            writer.writerow([name, _text(value, digits)])
    return buffer.getvalue()


def render_table(report: Report, units: str, digits: int) -> str:
    rows = _converted(report, units, digits)
    lines = [f'{report.command} ({units})']
    if report.columnar:
        header = [name for name, _ in rows]
        body = [[_text(v, digits) for v in values] for values in zip(*(value for _, value in rows))]
        widths = [max(len(cell) for cell in column) for column in zip(header, *body)]
        for cells in [header, *body]:
            lines.append('  '.join(cell.rjust(width) for cell, width in zip(cells, widths)))
        return '\n'.join(lines) + '\n'
    width = max(len(name) for name, _ in rows) if rows else 0
    for name, value in rows:
        lines.append(f'{name.ljust(width)}  {_text(value, digits)}')
    return '\n'.join(lines) + '\n'


RENDERERS = {
    'table': render_table,
    'json': render_json,
    'csv': render_csv,
}


def render(report: Report, output_format: str = 'table', units: str = 'nats') -> str:
    digits = erasure_settings.SIGNIFICANT_DIGITS
    return RENDERERS[output_format](report, units, digits)
