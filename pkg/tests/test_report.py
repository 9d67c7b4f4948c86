import json
from fractions import Fraction

import pytest

from pebblebound.errors import ConfigurationError
from pebblebound.report import (
    BETTER, MATCH, SKIPPED, WORSE, ResultsCache, compare_bound, create_dataframe, generate_html_report,
    load_report_data, safe_stem, save_report_data, status_counts,
)
from pebblebound.search import RootSolve, SearchReport


def _report(incumbent=63):
    return SearchReport(
        g="lemke", h="complete:8", pi_g=8, pi_h=8, vertex_count=64, diameter=4, solver_id="highs",
        policy_digest="abc", gap_schedule=(Fraction(0),), candidate_roots=[(1, 1)], orbit_pruned=63,
        incumbent_n=incumbent, solves=[RootSolve((1, 1), Fraction(0), incumbent, incumbent, "optimal", 1.0)],
    )


def _rows():
    return [
        {'table': 4, 'instance': 'L x K8', 'published': 64, 'computed': 64, 'graham': 64, 'status': MATCH,
         'seconds': 1.0, 'published_seconds': 5.5, 'note': ''},
        {'table': 4, 'instance': 'L x C7', 'published': 108, 'computed': None, 'graham': 88, 'status': SKIPPED,
         'seconds': None, 'published_seconds': 29.0, 'note': 'budget'},
    ]


@pytest.mark.parametrize("published,computed,status", [
    (64, 64, MATCH), (108, 100, BETTER), (108, 110, WORSE), (None, 64, SKIPPED), (64, None, SKIPPED),
])
def test_compare_bound(published, computed, status):
    assert compare_bound(published, computed) == status


def test_safe_stem_has_no_separators():
    stem = safe_stem("complete-bipartite:4,4", "path:8")
    assert ":" not in stem and "," not in stem and "/" not in stem


def test_dataframe_and_counts():
    df = create_dataframe(_rows())
    assert list(df['status_order']) == [5, 3]
    assert status_counts(df) == {MATCH: 1, SKIPPED: 1}
    assert status_counts(create_dataframe([])) == {}


def test_report_data_round_trip(tmp_path):
    path = tmp_path / "table4.json"
    save_report_data(_rows(), path, "Table 4", ["a note"], [_report()])
    rows, title, notes, reports = load_report_data(path)
    assert title == "Table 4"
    assert notes == ["a note"]
    assert rows == _rows()
    assert reports[0].final_bound == 64


def test_report_schema_mismatch(tmp_path):
    path = tmp_path / "old.json"
    path.write_text(json.dumps({"schema_version": 0, "rows": []}), encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_report_data(path)


def test_html_report(tmp_path):
    path = tmp_path / "table4.html"
    generate_html_report(create_dataframe(_rows()), path, "Table <4>", ["note & more"])
    page = path.read_text(encoding="utf-8")
    assert "Table &lt;4&gt;" in page
    assert 'class="status-match"' in page
    assert 'class="status-skipped-budget"' in page
    assert "note &amp; more" in page
    assert "%%" not in page


def test_cache_put_and_get(tmp_path):
    cache = ResultsCache(tmp_path)
    key = ResultsCache.key("lemke", "complete:8", "orbit", "abc", "highs")
    assert cache.get("lemke", "complete:8", key) is None
    cache.put("lemke", "complete:8", key, _report())
    assert cache.get("lemke", "complete:8", key).final_bound == 64
    assert ResultsCache.key("lemke", "complete:8", "orbit", "abc", "cbc") != key


def test_cache_ignores_stale_entries(tmp_path):
    cache = ResultsCache(tmp_path)
    key = ResultsCache.key("lemke", "complete:8", "orbit", "abc", "highs")
    path = cache.put("lemke", "complete:8", key, _report())
    payload = json.loads(path.read_text(encoding="utf-8"))
    payload["schema_version"] = 0
    path.write_text(json.dumps(payload), encoding="utf-8")
    assert cache.get("lemke", "complete:8", key) is None
    path.write_text("{ not json", encoding="utf-8")
    assert cache.get("lemke", "complete:8", key) is None
