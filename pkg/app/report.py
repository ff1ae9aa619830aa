"""Report assembly and its text and structured renderings.

The structured form is one ``key = value`` line per scalar. Keys are dotted
paths with numeric list indexes, strings are double-quoted with ``\\"`` and
``\\\\`` escapes, lists of scalars are written inline as ``[a, b]``. Field
order is insertion order, and nothing time-dependent is included, so equal
inputs give byte-identical output.
"""

import logging
import os
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

from app import __version__
from app.kernel import Element, Monoid, Verdict
from app.profile import sign

logger = logging.getLogger(__name__)

FORMATS = ('text', 'structured')


@dataclass
class Report:
    """Run metadata plus nested result data (dicts, lists and scalars)."""

    command: str
    meta: dict[str, Any] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)
    ok: bool = True
    started: float = field(default_factory=time.monotonic)
    generated_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started


def verdict_data(m: Monoid | None, verdict: Verdict) -> dict[str, Any]:
    """A verdict as plain data, witnesses rendered in m's notation."""
    data: dict[str, Any] = {'verdict': verdict.label(), 'sign': sign(verdict)}
    if verdict.witness:
        data['witness'] = [render_item(m, w) for w in verdict.witness]
    if verdict.note:
        data['note'] = verdict.note
    if verdict.source:
        data['source'] = verdict.source
    return data


def render_item(m: Monoid | None, item: Any) -> Any:
    if isinstance(item, Element):
        return m.render(item) if m is not None and item.family == m.key else f"{item.payload}"
    if hasattr(item, 'render') and m is not None:
        return item.render(m)
    if isinstance(item, (bool, int, str)) or item is None:
        return item
    if isinstance(item, (list, tuple)):
        return [render_item(m, x) for x in item]
    return str(item)


# Structured rendering


def _scalar(value: Any) -> str:
    if value is None:
        return 'null'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    text = str(value).replace('\\', '\\\\').replace('"', '\\"')
    return f'"{text}"'


def _is_scalar(value: Any) -> bool:
    return not isinstance(value, (dict, list, tuple))


def flatten(data: Any, prefix: str = '') -> list[tuple[str, str]]:
    """(dotted key, rendered value) pairs in insertion order."""
    if isinstance(data, dict):
        pairs: list[tuple[str, str]] = []
        for key, value in data.items():
            pairs.extend(flatten(value, f"{prefix}.{key}" if prefix else str(key)))
        return pairs
    if isinstance(data, (list, tuple)):
        if all(_is_scalar(v) for v in data):
            return [(prefix, '[' + ', '.join(_scalar(v) for v in data) + ']')]
        pairs = []
        for i, value in enumerate(data):
            pairs.extend(flatten(value, f"{prefix}.{i}"))
        return pairs
    return [(prefix, _scalar(data))]


def render_structured(report: Report) -> str:
    body = {'command': report.command, 'version': __version__, 'ok': report.ok,
            'meta': report.meta, 'result': report.data}
    return ''.join(f"{key} = {value}\n" for key, value in flatten(body))


# Text rendering


def _text_lines(data: Any, indent: int) -> list[str]:
    pad = '  ' * indent
    lines: list[str] = []
    if isinstance(data, dict):
        for key, value in data.items():
            if _is_scalar(value) or (isinstance(value, (list, tuple)) and all(_is_scalar(v) for v in value)):
                lines.append(f"{pad}{key}: {_text_value(value)}")
            else:
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(value, indent + 1))
    elif isinstance(data, (list, tuple)):
        for i, value in enumerate(data):
            if _is_scalar(value):
                lines.append(f"{pad}- {_text_value(value)}")
            else:
                lines.append(f"{pad}[{i}]")
                lines.extend(_text_lines(value, indent + 1))
    else:
        lines.append(f"{pad}{_text_value(data)}")
    return lines


def _text_value(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ', '.join(_text_value(v) for v in value) or '(none)'
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if value is None:
        return '-'
    return str(value)


def render_text(report: Report) -> str:
    lines = [
        f"sqfree-lab {__version__} {report.command}",
        f"generated at {report.generated_at.isoformat(timespec='seconds')}",
    ]
    lines.extend(_text_lines(report.meta, 0))
    lines.append('')
    lines.extend(_text_lines(report.data, 0))
    lines.append('')
    lines.append(f"status: {'ok' if report.ok else 'FAILED'}")
    lines.append(f"elapsed: {report.elapsed:.2f}s")
    return '\n'.join(lines) + '\n'


def render(report: Report, fmt: str = 'text') -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}")
    return render_structured(report) if fmt == 'structured' else render_text(report)


def write_report(report: Report, fmt: str, out: str | None) -> str:
    """Render the report and write it to ``out`` when given; returns the rendering."""
    text = render(report, fmt)
    if out:
        directory = os.path.dirname(out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(out, 'w') as f:
            f.write(text)
        logger.info(f"Wrote {fmt} report to {out}")
    return text
