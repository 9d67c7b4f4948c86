"""
pebblebound/profiles.py
Pebbling profiles (pi, 2-pebbling tables and the data derived from them) and
their JSON interchange file.
"""

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from pebblebound import __version__
from pebblebound.constants import SCHEMA_VERSION
from pebblebound.errors import ConfigurationError, SerializationError


def monotone_envelope(table: Dict[int, int]) -> Dict[int, int]:
    """s -> max over s' >= s of table[s']."""
    envelope: Dict[int, int] = {}
    running = None
    for s in sorted(table, reverse=True):
        running = table[s] if running is None else max(running, table[s])
        envelope[s] = running
    return dict(sorted(envelope.items()))


@dataclass(frozen=True)
class PebblingProfile:
    """Pebbling data for one base graph.

    Values may be upper bounds rather than exact numbers; the model stays
    valid with weaker constraints.
    """
    name: str
    vertex_count: int
    pi: int
    two_peb: Dict[int, int]
    two_peb_mon: Dict[int, int]
    source: str = "oracle"
    printed_pi: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    @classmethod
    def build(cls, name: str, vertex_count: int, pi: int, two_peb: Optional[Dict[int, int]] = None,
              source: str = "oracle", printed_pi: Optional[int] = None,
              notes: Optional[List[str]] = None) -> "PebblingProfile":
        """Derive the monotone table; without a 2-pebbling table the graph is taken to have
        the 2-pebbling property and 2*pi - s + 1 is used."""
        if two_peb is None:
            two_peb = {s: 2 * pi - s + 1 for s in range(1, vertex_count + 1)}
        two_peb = {int(s): int(v) for s, v in two_peb.items()}
        profile = cls(
            name=name,
            vertex_count=vertex_count,
            pi=pi,
            two_peb=dict(sorted(two_peb.items())),
            two_peb_mon=monotone_envelope(two_peb),
            source=source,
            printed_pi=printed_pi,
            notes=list(notes or []),
        )
        profile.validate()
        return profile

    def validate(self) -> None:
        if self.pi < self.vertex_count:
            raise ConfigurationError(f"{self.name}: pi = {self.pi} is below the vertex count {self.vertex_count}")
        expected = set(range(1, self.vertex_count + 1))
        if set(self.two_peb) != expected:
            raise ConfigurationError(f"{self.name}: 2-pebbling table must cover s = 1..{self.vertex_count}")
        if self.two_peb_mon != monotone_envelope(self.two_peb):
            raise ConfigurationError(f"{self.name}: monotone table is not the envelope of the 2-pebbling table")

    def baseline(self, s: int) -> int:
        """2*pi - s + 1, the 2-pebbling-property value."""
        return 2 * self.pi - s + 1

    @property
    def has_two_pebbling_property(self) -> bool:
        return all(value <= self.baseline(s) for s, value in self.two_peb.items())

    @property
    def u_set(self) -> List[int]:
        return [0] + [s for s, value in self.two_peb.items() if value > self.baseline(s)]

    @property
    def u_mon_set(self) -> List[int]:
        return [0] + [s for s, value in self.two_peb_mon.items() if value > self.baseline(s)]

    @property
    def difference(self) -> Dict[int, int]:
        table = {0: -1}
        table.update({s: self.two_peb[s] - self.baseline(s) for s in self.u_set if s})
        return table

    @property
    def difference_mon(self) -> Dict[int, int]:
        table = {0: -1}
        table.update({s: self.two_peb_mon[s] - self.baseline(s) for s in self.u_mon_set if s})
        return table

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'vertex_count': self.vertex_count,
            'pi': self.pi,
            'two_peb': {str(s): v for s, v in self.two_peb.items()},
            'two_peb_mon': {str(s): v for s, v in self.two_peb_mon.items()},
            'source': self.source,
            'printed_pi': self.printed_pi,
            'notes': self.notes,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PebblingProfile":
        try:
            two_peb = data.get('two_peb')
            profile = cls.build(
                name=data['name'],
                vertex_count=int(data['vertex_count']),
                pi=int(data['pi']),
                two_peb={int(s): int(v) for s, v in two_peb.items()} if two_peb else None,
                source=data.get('source', 'override'),
                printed_pi=data.get('printed_pi'),
                notes=data.get('notes'),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"Malformed profile entry {data!r}: {exc}") from exc
        stored_mon = data.get('two_peb_mon')
        if stored_mon and {int(s): int(v) for s, v in stored_mon.items()} != profile.two_peb_mon:
            raise ConfigurationError(f"{profile.name}: stored monotone table disagrees with its 2-pebbling table")
        return profile


def save_profiles(profiles: Iterable[PebblingProfile], output_path: Path) -> None:
    """
    Write profiles to the interchange file.

    Structure::

        {
            "schema_version": 1,
            "version": "0.1.0",
            "generated_at": "2026-10-17T14:30:00+00:00",
            "profiles": [ {name, vertex_count, pi, two_peb, two_peb_mon, ...} ]
        }
    """
    payload = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "profiles": [p.to_dict() for p in profiles],
    }
    try:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w', encoding='utf-8') as fh:
            json.dump(payload, fh, ensure_ascii=False, indent=2)
    except OSError as exc:
        raise SerializationError(f"Failed to write profiles to {output_path}: {exc}") from exc
    logging.debug(f"Profiles saved: {output_path}")


def load_profiles(json_path: Path) -> Dict[str, PebblingProfile]:
    """Read an interchange file back into name -> profile."""
    try:
        with open(json_path, 'r', encoding='utf-8') as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"Cannot read profile file {json_path}: {exc}") from exc

    if payload.get("schema_version") != SCHEMA_VERSION:
        raise ConfigurationError(
            f"{json_path}: schema_version {payload.get('schema_version')!r}, expected {SCHEMA_VERSION}"
        )
    profiles = [PebblingProfile.from_dict(entry) for entry in payload.get("profiles", [])]
    return {p.name: p for p in profiles}
