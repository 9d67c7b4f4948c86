"""
pebblebound/reference.py
Published reference data: the thirteen base graphs with their printed
pebbling numbers, the Lemke 2-pebbling rows and the product bounds of the
reproduction tables.

Path values: the tables multiply pi(P8) = 2^7 and pi(P12) = 2^11 while the
base-graph table prints 2^8 and 2^12. K_{4,4} is printed as 12 while its
products use 8. The profiles below feed the multiplied values to the model
and keep the printed ones as `printed_pi`.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional

from pebblebound.errors import CatalogError
from pebblebound.profiles import PebblingProfile

LEMKE_TWO_PEB = {1: 16, 2: 15, 3: 14, 4: 13, 5: 14, 6: 11, 7: 10, 8: 9}
LEMKE_TWO_PEB_MON = {1: 16, 2: 15, 3: 14, 4: 14, 5: 14, 6: 11, 7: 10, 8: 9}


@dataclass(frozen=True)
class BaseGraphEntry:
    key: str
    catalog_id: str
    display: str
    vertices: int
    edges: int
    printed_pi: int
    pi: int
    two_pebbling_property: bool


BASE_GRAPHS: Dict[str, BaseGraphEntry] = {
    e.key: e for e in (
        BaseGraphEntry("L", "lemke", "L", 8, 13, 8, 8, False),
        BaseGraphEntry("L1", "lemke1", "L1", 8, 12, 8, 8, False),
        BaseGraphEntry("L2", "lemke2", "L2", 8, 14, 8, 8, False),
        BaseGraphEntry("C7", "cycle:7", "C7", 7, 7, 11, 11, True),
        BaseGraphEntry("C8", "cycle:8", "C8", 8, 8, 16, 16, True),
        BaseGraphEntry("P8", "path:8", "P8", 8, 7, 256, 128, True),
        BaseGraphEntry("K44", "complete-bipartite:4,4", "K4,4", 8, 16, 12, 8, True),
        BaseGraphEntry("K8", "complete:8", "K8", 8, 28, 8, 8, True),
        BaseGraphEntry("C11", "cycle:11", "C11", 11, 11, 43, 43, True),
        BaseGraphEntry("C12", "cycle:12", "C12", 12, 12, 64, 64, True),
        BaseGraphEntry("P12", "path:12", "P12", 12, 11, 4096, 2048, True),
        BaseGraphEntry("K66", "complete-bipartite:6,6", "K6,6", 12, 36, 12, 12, True),
        BaseGraphEntry("K12", "complete:12", "K12", 12, 66, 12, 12, True),
    )
}

_BY_CATALOG_ID = {e.catalog_id: e for e in BASE_GRAPHS.values()}


def catalog_entry(name: str) -> BaseGraphEntry:
    """Base-graph record by table key (``K44``) or catalog identifier (``complete-bipartite:4,4``)."""
    entry = BASE_GRAPHS.get(name) or _BY_CATALOG_ID.get(name)
    if entry is None:
        raise CatalogError(f"'{name}' is not one of the reference base graphs")
    return entry


def published_profiles() -> Dict[str, PebblingProfile]:
    """Profiles as used for the reproduction tables, keyed by catalog identifier."""
    profiles = {}
    for entry in BASE_GRAPHS.values():
        two_peb = None if entry.two_pebbling_property else LEMKE_TWO_PEB
        notes = []
        if entry.printed_pi != entry.pi:
            notes.append(f"printed pi {entry.printed_pi}; products use {entry.pi}")
        profiles[entry.catalog_id] = PebblingProfile.build(
            entry.catalog_id, entry.vertices, entry.pi, two_peb, source="published",
            printed_pi=entry.printed_pi, notes=notes,
        )
    return profiles


@dataclass(frozen=True)
class ReferenceRecord:
    """One product instance: printed bound, Graham value and flags."""
    table: int
    g: str
    h: str
    bound: Optional[int]
    graham: int
    verified: bool
    graham_tight: bool
    seconds: Optional[float]
    note: str = ""

    @property
    def g_id(self) -> str:
        return BASE_GRAPHS[self.g].catalog_id

    @property
    def h_id(self) -> str:
        return BASE_GRAPHS[self.h].catalog_id

    @property
    def label(self) -> str:
        return f"{self.g} x {self.h}"

    @property
    def status(self) -> str:
        return "verified" if self.verified else "open"


def _rows(table: int, g: str, cells: List[tuple]) -> List[ReferenceRecord]:
    """cells: (h, bound, graham, flags, seconds) with flags from {'b', 'u'}"""
    return [
        ReferenceRecord(table, g, h, bound, graham, "b" in flags, "u" in flags, seconds)
        for h, bound, graham, flags, seconds in cells
    ]


TABLES: Dict[int, List[ReferenceRecord]] = {
    3: (
        _rows(3, "L", [("L", 85, 64, "u", 897.0), ("L1", 85, 64, "u", 374.0), ("L2", 84, 64, "u", 1209.9)])
        + _rows(3, "L1", [("L1", 84, 64, "u", 635.5), ("L2", 84, 64, "u", 665.1)])
        + _rows(3, "L2", [("L2", 84, 64, "u", 1183.1)])
    ),
    4: (
        _rows(4, "L", [("C7", 108, 88, "", 29.0), ("C8", 152, 128, "u", 23.5), ("P8", 1043, 1024, "ub", 132.9),
                       ("K44", 64, 64, "u", 3.8), ("K8", 64, 64, "ub", 5.5)])
        + _rows(4, "L1", [("C7", 108, 88, "", 9.999), ("C8", 152, 128, "u", 24.6), ("P8", 1043, 1024, "u", 133.0),
                          ("K44", 64, 64, "u", 4.0), ("K8", 64, 64, "u", 5.2)])
        + _rows(4, "L2", [("C7", 107, 88, "", 10.8), ("C8", 150, 128, "u", 8.8), ("P8", 1041, 1024, "u", 12.3),
                          ("K44", 64, 64, "u", 3.8), ("K8", 64, 64, "u", 5.1)])
    ),
    5: (
        _rows(5, "L", [("C11", 383, 344, "", 15.9), ("C12", 553, 512, "", 20.0), ("P12", 16415, 16384, "b", 20.5),
                       ("K66", 96, 96, "u", 46.7), ("K12", 96, 96, "ub", 4145.7)])
        + _rows(5, "L1", [("C11", 389, 344, "", 17.1), ("C12", 554, 512, "", 30.5), ("P12", 16416, 16384, "", 14.7),
                          ("K66", 96, 96, "u", 48.1), ("K12", 96, 96, "u", 234.8)])
        + _rows(5, "L2", [("C11", 379, 344, "", 5.6), ("C12", 548, 512, "", 25.1), ("P12", 16411, 16384, "", 13.0),
                          ("K66", 96, 96, "u", 49.4), ("K12", 96, 96, "u", 247.1)])
    ),
    6: (
        _rows(6, "C7", [("C7", 140, 121, "b", 3.5)])
        + _rows(6, "C8", [("C7", 196, 176, "b", 4.5), ("C8", 278, 256, "ub", 12.1)])
        + _rows(6, "P8", [("C7", 1188, 1408, "b", 16.1), ("C8", 2063, 2048, "ub", 23.8),
                          ("P8", 16399, 16384, "ub", 728.2)])
        + _rows(6, "K44", [("C7", 76, 88, "b", 3.3), ("C8", 104, 128, "b", 3.0), ("P8", 562, 1024, "b", 16.8),
                           ("K44", 64, 64, "ub", 5.6)])
        + _rows(6, "K8", [("C7", 67, 88, "b", 5.3), ("C8", 86, 128, "b", 5.2), ("P8", 311, 1024, "b", 28.0),
                          ("K44", 64, 64, "ub", 5.7), ("K8", 64, 64, "ub", 7.0)])
    ),
    7: (
        _rows(7, "C7", [("C11", 491, 473, "b", 3.8), ("C12", 712, 704, "b", 4.8), ("P12", 16636, 22528, "b", 15.9),
                        ("K66", 106, 132, "b", 49.0), ("K12", 95, 132, "b", 49.5)])
        + _rows(7, "C8", [("C11", 721, 688, "b", 6.2), ("C12", 1060, 1024, "ub", 16.7),
                          ("P12", 32797, 32768, "ub", 332.9), ("K66", 140, 192, "b", 73.7),
                          ("K12", 118, 192, "b", 304.1)])
        + _rows(7, "P8", [("C11", 4975, 5504, "b", 253.8), ("C12", 8217, 8192, "ub", 365.3),
                          ("P12", 262164, 262144, "ub", 144.9), ("K66", 611, 1536, "b", 455.8),
                          ("K12", 343, 1536, "b", 437.6)])
        + _rows(7, "K44", [("C11", 240, 344, "b", 5.8), ("C12", 331, 512, "b", 5.1), ("P12", 8267, 16384, "b", 123.9),
                           ("K66", 96, 96, "ub", 48.9), ("K12", 96, 96, "ub", 45.0)])
        + _rows(7, "K8", [("C11", 162, 344, "b", 4.9), ("C12", 211, 512, "b", 5.2), ("P12", 4179, 16384, "b", 139.5),
                          ("K66", 96, 96, "ub", 44.6), ("K12", 96, 96, "ub", 47.3)])
    ),
    8: (
        _rows(8, "C11", [("C11", 1908, 1849, "b", 56.0)])
        + _rows(8, "C12", [("C11", 2804, 2752, "b", 66.3), ("C12", 4158, 4096, "ub", 76.4)])
        + _rows(8, "P12", [("C11", 66873, 88064, "b", 72.8), ("C12", 131110, 131072, "ub", 183.6)])
        + [ReferenceRecord(8, "P12", "P12", None, 16777216, True, True, None,
                           note="model ran out of memory; printed Graham value matches neither path convention")]
        + _rows(8, "K66", [("C11", 306, 516, "b", 83.3), ("C12", 406, 768, "b", 77.7), ("P12", 8342, 24576, "b", 1621.8),
                           ("K66", 144, 144, "ub", 94.1)])
        + _rows(8, "K12", [("C11", 206, 516, "b", 271.9), ("C12", 259, 768, "b", 282.5),
                           ("P12", 4227, 24576, "b", 7280.6), ("K66", 144, 144, "ub", 87.9),
                           ("K12", 144, 144, "ub", 487.7)])
    ),
}


def reference_record(g: str, h: str) -> Optional[ReferenceRecord]:
    """Printed record for G x H by table key or catalog identifier, either order."""
    try:
        g_key, h_key = catalog_entry(g).key, catalog_entry(h).key
    except CatalogError:
        return None
    for records in TABLES.values():
        for record in records:
            if (record.g, record.h) in ((g_key, h_key), (h_key, g_key)):
                return record
    return None


def graham_inconsistencies(profiles: Optional[Dict[str, PebblingProfile]] = None) -> List[ReferenceRecord]:
    """Records whose printed Graham value is not the product of the profile pi values."""
    profiles = profiles or published_profiles()
    return [
        record
        for records in TABLES.values()
        for record in records
        if profiles[record.g_id].pi * profiles[record.h_id].pi != record.graham
    ]
