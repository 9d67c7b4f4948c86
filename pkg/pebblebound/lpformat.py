"""
pebblebound/lpformat.py
CPLEX-LP text for a ModelIR, a summary reader for written files and the
constraint listing used when inspecting models by hand.
"""

import logging
import re
from pathlib import Path
from typing import Dict, Iterable, List

from pebblebound.errors import SerializationError
from pebblebound.model import BINARY, FAMILY_DESCRIPTIONS, INTEGER, ModelIR

# Solvers read coefficients as doubles.
_MAX_EXACT_COEFFICIENT = 2 ** 53
_LINE_WIDTH = 200
_SECTIONS = ("maximize", "subject to", "bounds", "general", "binaries", "end")


def _terms_text(terms: Iterable[tuple]) -> List[str]:
    pieces: List[str] = []
    for name, coef in terms:
        if abs(coef) > _MAX_EXACT_COEFFICIENT:
            raise SerializationError(f"coefficient {coef} on {name} is not exactly representable")
        sign = "-" if coef < 0 else "+"
        magnitude = abs(coef)
        body = name if magnitude == 1 else f"{magnitude} {name}"
        if not pieces:
            pieces.append(f"-{body}" if coef < 0 else body)
        else:
            pieces.append(f"{sign} {body}")
    return pieces


def _wrap(head: str, pieces: List[str], tail: str) -> List[str]:
    lines: List[str] = []
    current = head
    for piece in pieces:
        if len(current) + len(piece) + 1 > _LINE_WIDTH and current.strip():
            lines.append(current)
            current = "   "
        current = f"{current} {piece}" if current.strip() else f"{current}{piece}"
    lines.append(f"{current} {tail}" if tail else current)
    return lines


def render_lp(model: ModelIR) -> str:
    """Deterministic LP text: objective, constraints in emission order, General and Binaries."""
    if not model.objective:
        raise SerializationError("model has an empty objective")
    seen = set()
    lines = [
        f"\\ pebblebound model {model.instance.name} root {model.instance.root}",
        f"\\ policy {model.policy.digest}",
        "Maximize",
    ]
    lines += _wrap(" obj:", _terms_text((name, 1) for name in model.objective), "")
    lines.append("Subject To")
    for con in model.constraints:
        label = con.label
        if label in seen:
            raise SerializationError(f"duplicate constraint name {label}")
        seen.add(label)
        terms, sense, rhs = con.integer_form()
        if abs(rhs) > _MAX_EXACT_COEFFICIENT:
            raise SerializationError(f"right-hand side {rhs} of {label} is not exactly representable")
        if not terms:
            # constant row, written against the first objective variable
            pieces = [f"0 {model.objective[0]}"]
        else:
            pieces = _terms_text(terms)
        lines += _wrap(f" {label}:", pieces, f"{sense} {rhs}")

    general = model.catalog.names(INTEGER)
    binaries = model.catalog.names(BINARY)
    if general:
        lines.append("General")
        lines += _wrap("", general, "")
    if binaries:
        lines.append("Binaries")
        lines += _wrap("", binaries, "")
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_lp(model: ModelIR, destination: Path) -> Path:
    destination = Path(destination)
    text = render_lp(model)
    try:
        destination.parent.mkdir(parents=True, exist_ok=True)
        destination.write_text(text, encoding='utf-8', newline='\n')
    except OSError as exc:
        raise SerializationError(f"Failed to write {destination}: {exc}") from exc
    logging.debug(f"LP written: {destination} ({model.constraint_count} constraints)")
    return destination


def read_lp_summary(text: str) -> Dict[str, int]:
    """Counts of objective terms, constraint rows, general and binary variables in LP text."""
    summary = {"objective_terms": 0, "constraints": 0, "general": 0, "binaries": 0}
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        if line.lower() in _SECTIONS:
            section = line.lower()
            continue
        if section == "maximize":
            summary["objective_terms"] += len(re.findall(r"[A-Za-z_][\w.]*", line.split(":", 1)[-1]))
        elif section == "subject to":
            if re.match(r"^[A-Za-z_][\w.]*:", line):
                summary["constraints"] += 1
        elif section == "general":
            summary["general"] += len(line.split())
        elif section == "binaries":
            summary["binaries"] += len(line.split())
    summary["variables"] = summary["general"] + summary["binaries"]
    return summary


def write_listing(model: ModelIR, destination: Path) -> Path:
    """One line per constraint: its name and what its family states."""
    destination = Path(destination)
    lines = [f"# {model.instance.name} root {model.instance.root}: {model.constraint_count} constraints"]
    for family, count in model.family_counts().items():
        lines.append(f"# {family}: {count}")
    for con in model.constraints:
        lines.append(f"{con.label}\t{FAMILY_DESCRIPTIONS.get(con.family, con.family)}")
    try:
        destination.write_text("\n".join(lines) + "\n", encoding='utf-8', newline='\n')
    except OSError as exc:
        raise SerializationError(f"Failed to write {destination}: {exc}") from exc
    return destination
