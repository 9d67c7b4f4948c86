"""
pebblebound/report.py
Comparison frames against the reference tables, the JSON report file, the
HTML report and the on-disk cache of search reports.
"""

import os
import json
import html
import hashlib
import logging
import tempfile
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd
from pathvalidate import sanitize_filename

from pebblebound import __version__
from pebblebound.constants import CACHE_FOLDER_NAME, SCHEMA_VERSION
from pebblebound.errors import ConfigurationError, SerializationError
from pebblebound.search import SearchReport

MATCH = "match"
BETTER = "better"
WORSE = "worse"
SKIPPED = "skipped-budget"
FAILED = "failed"
DISAGREE = "disagree"

_STATUS_ORDER = {WORSE: 0, FAILED: 1, DISAGREE: 2, SKIPPED: 3, BETTER: 4, MATCH: 5}

COLUMNS = ['table', 'instance', 'published', 'computed', 'graham', 'status', 'seconds', 'published_seconds', 'note']


def compare_bound(published: Optional[int], computed: Optional[int]) -> str:
    """Smaller computed bounds are better; both sides are upper bounds."""
    if computed is None or published is None:
        return SKIPPED
    if computed == published:
        return MATCH
    return BETTER if computed < published else WORSE


def safe_stem(*parts: str) -> str:
    """File-name stem for graph names such as complete-bipartite:4,4."""
    return sanitize_filename("__".join(parts), platform="universal", replacement_text="_").replace(",", "_")


def create_dataframe(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    """Comparison rows in table order, one column per COLUMNS entry."""
    df = pd.DataFrame(rows, columns=COLUMNS)
    if df.empty:
        return df
    df['status_order'] = df['status'].map(_STATUS_ORDER).fillna(99).astype(int)
    return df


def status_counts(df: pd.DataFrame) -> Dict[str, int]:
    if df.empty:
        return {}
    return {str(k): int(v) for k, v in df['status'].value_counts().items()}


def save_report_data(rows: List[Dict[str, Any]], output_path: Path, title: str,
                     notes: Optional[List[str]] = None,
                     reports: Optional[List[SearchReport]] = None) -> None:
    """
    Save comparison rows and the search reports behind them.

    Structure::

        {
            "schema_version": 1,
            "version": "0.1.0",
            "generated_at": "2026-10-17T14:30:00+00:00",
            "title": "Table 4",
            "notes": [ ... ],
            "rows": [ {table, instance, published, computed, graham, status, ...} ],
            "reports": [ SearchReport.to_dict(), ... ]
        }
    """
    payload = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "title": title,
        "notes": list(notes or []),
        "rows": rows,
        "reports": [r.to_dict() for r in (reports or [])],
    }
    try:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w', encoding='utf-8') as fh:
            json.dump(payload, fh, ensure_ascii=False, indent=2, default=str)
    except OSError as exc:
        raise SerializationError(f"Failed to write report data {output_path}: {exc}") from exc
    logging.info(f"Report data saved: {output_path}")


def load_report_data(json_path: Path) -> Tuple[List[Dict[str, Any]], str, List[str], List[SearchReport]]:
    """(rows, title, notes, reports) from a saved report file."""
    try:
        with open(json_path, 'r', encoding='utf-8') as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"Cannot read report data {json_path}: {exc}") from exc
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise ConfigurationError(
            f"{json_path}: schema_version {payload.get('schema_version')!r}, expected {SCHEMA_VERSION}"
        )
    reports = [SearchReport.from_dict(r) for r in payload.get("reports", [])]
    logging.info(
        f"Loaded report data: {len(payload.get('rows', []))} rows"
        f" (generated by v{payload.get('version', '?')} at {payload.get('generated_at', '?')})"
    )
    return payload.get("rows", []), payload.get("title", ""), payload.get("notes", []), reports


# ---------------------------------------------------------------------------
# HTML report template, %%MARKER%% placeholders filled by generate_html_report.
# ---------------------------------------------------------------------------
_HTML_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>%%TITLE%%</title>
<style>
body { font-family: -apple-system, "Segoe UI", Roboto, sans-serif; margin: 2em; color: #222; }
h1 { font-size: 1.4em; }
.summary { display: flex; gap: 1.5em; margin: 1em 0; }
.summary-item { padding: .4em .8em; border-radius: 4px; background: #f2f2f2; }
.notes { color: #555; font-size: .9em; }
table.comparison { border-collapse: collapse; width: 100%; }
table.comparison th, table.comparison td { border: 1px solid #ddd; padding: .3em .6em; text-align: right; }
table.comparison th { background: #f7f7f7; }
table.comparison td:nth-child(2), table.comparison td:last-child { text-align: left; }
tr.status-match td { background: #eefbee; }
tr.status-better td { background: #e6f0ff; }
tr.status-worse td, tr.status-failed td, tr.status-disagree td { background: #fdecec; }
tr.status-skipped-budget td { color: #888; }
footer { margin-top: 2em; font-size: .8em; color: #888; }
</style>
</head>
<body>
<h1>%%TITLE%%</h1>
<div class="summary">%%SUMMARY%%</div>
<ul class="notes">%%NOTES%%</ul>
%%TABLE%%
<footer>pebblebound %%VERSION%%, generated %%GENERATED%%</footer>
</body>
</html>
"""


def _table_html(df: pd.DataFrame) -> str:
    visible = df[[c for c in COLUMNS if c in df.columns]].fillna('')
    text = visible.to_html(index=False, classes='comparison', border=0, escape=True)
    # tag rows with their status for styling
    lines = text.splitlines()
    statuses = iter(visible['status'].tolist())
    tagged = []
    in_body = False
    for line in lines:
        if '<tbody>' in line:
            in_body = True
        if in_body and line.strip() == '<tr>':
            line = line.replace('<tr>', f'<tr class="status-{next(statuses, "")}">')
        tagged.append(line)
    return "\n".join(tagged)


def generate_html_report(df: pd.DataFrame, output_path: Path, title: str,
                         notes: Optional[List[str]] = None) -> None:
    """Static comparison page: summary counts, notes, then one row per instance."""
    summary = "".join(
        f'<div class="summary-item"><strong>{html.escape(status)}:</strong> {count}</div>'
        for status, count in status_counts(df).items()
    ) or '<div class="summary-item">no rows</div>'
    notes_html = "".join(f"<li>{html.escape(n)}</li>" for n in (notes or []))
    table_html = _table_html(df) if not df.empty else "<p>No rows.</p>"

    page = _HTML_TEMPLATE
    page = page.replace('%%TITLE%%', html.escape(title))
    page = page.replace('%%VERSION%%', html.escape(__version__))
    page = page.replace('%%GENERATED%%', datetime.now(timezone.utc).strftime('%Y-%m-%d %H:%M UTC'))
    page = page.replace('%%SUMMARY%%', summary)
    page = page.replace('%%NOTES%%', notes_html)
    page = page.replace('%%TABLE%%', table_html)
    try:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(page, encoding='utf-8')
    except OSError as exc:
        raise SerializationError(f"Failed to write HTML report {output_path}: {exc}") from exc
    logging.info(f"HTML report generated: {output_path}")


class ResultsCache:
    """Search reports on disk, one JSON file per key; a single writer at a time."""

    def __init__(self, workdir: Path):
        self.folder = Path(workdir) / CACHE_FOLDER_NAME
        self._lock = threading.Lock()

    @staticmethod
    def key(g: str, h: str, root_policy: str, policy_digest: str, solver_id: str,
            profile_digest: str = "") -> str:
        text = json.dumps([g, h, root_policy, policy_digest, solver_id, profile_digest])
        return hashlib.sha256(text.encode('utf-8')).hexdigest()[:24]

    def path_for(self, g: str, h: str, key: str) -> Path:
        return self.folder / f"{safe_stem(g, h)}_{key}.json"

    def get(self, g: str, h: str, key: str) -> Optional[SearchReport]:
        path = self.path_for(g, h, key)
        if not path.is_file():
            return None
        try:
            payload = json.loads(path.read_text(encoding='utf-8'))
        except (OSError, json.JSONDecodeError) as exc:
            logging.warning(f"[yellow]⚠[/yellow] Ignoring unreadable cache entry {path.name}: {exc}")
            return None
        if payload.get("schema_version") != SCHEMA_VERSION or payload.get("key") != key:
            return None
        logging.debug(f"Cache hit: {path.name}")
        return SearchReport.from_dict(payload["report"])

    def put(self, g: str, h: str, key: str, report: SearchReport) -> Path:
        path = self.path_for(g, h, key)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "version": __version__,
            "generated_at": datetime.now(timezone.utc).isoformat(),
            "key": key,
            "report": report.to_dict(),
        }
        with self._lock:
            self.folder.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(prefix=".cache_", suffix=".json", dir=self.folder)
            try:
                with os.fdopen(fd, 'w', encoding='utf-8') as fh:
                    json.dump(payload, fh, ensure_ascii=False, indent=2)
                os.replace(tmp_name, path)
            except OSError as exc:
                Path(tmp_name).unlink(missing_ok=True)
                raise SerializationError(f"Failed to write cache entry {path}: {exc}") from exc
        logging.debug(f"Cache stored: {path.name}")
        return path
