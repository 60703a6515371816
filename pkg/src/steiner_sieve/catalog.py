"""Registry of candidate (T, T_alpha) pairs with their order polynomials."""

from __future__ import annotations

import hashlib
import json
import os
import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Optional, Union

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .arith import PrimePower, is_prime, prime_power, prime_powers_upto
from .polycert import PolySyntaxError, QPoly, poly_parse, poly_print

__all__ = [
    "FAMILIES",
    "CatalogError",
    "QConstraints",
    "CandidateEntry",
    "Catalog",
    "catalog_load",
    "catalog_parse",
    "catalog_builtin",
    "CATALOG_ENV",
]

FAMILIES = ("2B2", "2G2", "2F4", "3D4", "2E6", "G2", "F4", "E6", "E7", "E8")
CATALOG_ENV = "STEINER_SIEVE_CATALOG"

_HEADER = re.compile(r'^\[\s*entry\.(?:"([^"]+)"|([A-Za-z0-9_-]+))\s*\]')
_KEY = re.compile(r"^([A-Za-z0-9_-]+)\s*=")

_POLY_FIELDS = ("t_order", "stab_order")
_KNOWN_FIELDS = {
    "family", "t_order", "stab_order", "out_coeff", "p", "e_parity", "e_min",
    "q_min", "q_fixed", "q_excluded", "subdegrees", "subdegrees_complete",
    "expected_survivors", "resolved_survivors", "notes",
}


class CatalogError(ValueError):
    """Parse or validation failure; names the entry, field and/or line."""

    def __init__(self, msg: str, entry: Optional[str] = None, field: Optional[str] = None,
                 line: Optional[int] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if entry is not None:
            where.append(f"entry {entry!r}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)
        self.entry = entry
        self.field = field
        self.line = line


@dataclass(frozen=True)
class QConstraints:
    p: Union[int, str] = "any"
    e_parity: str = "any"
    e_min: int = 1
    q_min: int = 2
    q_fixed: Optional[int] = None
    q_excluded: tuple[int, ...] = ()

    def admits(self, pp: PrimePower) -> bool:
        if self.q_fixed is not None:
            return pp.q == self.q_fixed
        if self.p != "any" and pp.p != self.p:
            return False
        if self.e_parity == "odd" and pp.e % 2 == 0:
            return False
        if self.e_parity == "even" and pp.e % 2 == 1:
            return False
        return pp.e >= self.e_min and pp.q >= self.q_min and pp.q not in self.q_excluded

    def admitted(self, qmax: int, qmin: int = 2) -> Iterator[PrimePower]:
        """Admitted prime powers with qmin <= q <= qmax, ascending."""
        if self.q_fixed is not None:
            pp = prime_power(self.q_fixed)
            if qmin <= pp.q <= qmax:
                yield pp
            return
        for pp in prime_powers_upto(qmax):
            if pp.q >= qmin and self.admits(pp):
                yield pp


@dataclass(frozen=True)
class CandidateEntry:
    id: str
    family: str
    t_order: QPoly
    stab_order: QPoly
    out_coeff: int
    q_constraints: QConstraints
    subdegrees: tuple[QPoly, ...] = ()
    subdegrees_complete: bool = False
    v_poly: Optional[QPoly] = None
    expected_survivors: Optional[str] = None
    resolved_survivors: tuple[tuple[int, int], ...] = ()
    notes: str = ""
    source: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def is_fixed(self) -> bool:
        return self.q_constraints.q_fixed is not None

    def v(self, q: int) -> int:
        val = self.v_poly(q)
        if not isinstance(val, int):
            raise ArithmeticError(f"{self.id}: v({q}) = {val} is not an integer")
        return val

    def out_bound(self, pp: PrimePower) -> int:
        """Upper bound c*e for |Out(T)| and hence for |G : T|."""
        return self.out_coeff * pp.e

    def survivor_expected(self, q: int, k: int) -> bool:
        """Known survivor: a member of the surviving family, or a pair that is
        ruled out by an explicit block-orbit computation instead."""
        if (q, k) in self.resolved_survivors:
            return True
        if self.expected_survivors is None:
            return False
        if self.expected_survivors == "any":
            return True
        return poly_parse(self.expected_survivors)(q) == k

    def checksum(self) -> str:
        canon = json.dumps({"id": self.id, **self.source}, sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()

    def describe(self) -> dict:
        return {
            "id": self.id,
            "family": self.family,
            "t_order": poly_print(self.t_order),
            "stab_order": poly_print(self.stab_order),
            "v": poly_print(self.v_poly),
            "out_coeff": self.out_coeff,
            "subdegrees": [poly_print(d) for d in self.subdegrees],
        }


class Catalog:
    """Entries keyed by id; lookups ignore case."""

    def __init__(self, entries):
        self.entries: tuple[CandidateEntry, ...] = tuple(entries)
        self._by_id: dict[str, CandidateEntry] = {}
        for e in self.entries:
            key = e.id.lower()
            if key in self._by_id:
                raise CatalogError("duplicate id", entry=e.id)
            self._by_id[key] = e

    def __getitem__(self, id_: str) -> CandidateEntry:
        try:
            return self._by_id[id_.lower()]
        except KeyError:
            raise KeyError(f"unknown candidate {id_!r}") from None

    def __contains__(self, id_: str) -> bool:
        return id_.lower() in self._by_id

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def ids(self) -> list[str]:
        return [e.id for e in self.entries]

    def fixed_entries(self) -> list[CandidateEntry]:
        return [e for e in self.entries if e.is_fixed]


# ---------------------------------------------------------------------------
# parsing


def _line_index(text: str):
    """Header and key line numbers, used only to locate errors."""
    heads, keys, cur = [], {}, None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        m = _HEADER.match(line)
        if m:
            cur = m.group(1) or m.group(2)
            heads.append((cur, lineno))
        elif cur is not None:
            m = _KEY.match(line)
            if m:
                keys[(cur, m.group(1))] = lineno
    return heads, keys


def _read_sections(text: str) -> list[tuple[str, int, dict[str, tuple[int, object]]]]:
    heads, keys = _line_index(text)
    where: dict[str, int] = {}
    for eid, lineno in heads:
        if eid in where:
            raise CatalogError("duplicate id", entry=eid, line=lineno)
        where[eid] = lineno
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise CatalogError(f"bad TOML ({exc})", line=getattr(exc, "lineno", None)) from None
    stray = sorted(set(doc) - {"entry"})
    if stray:
        raise CatalogError(f"key {stray[0]!r} outside an [entry.<id>] section")
    sections = []
    for eid, fields in doc.get("entry", {}).items():
        if not isinstance(fields, dict):
            raise CatalogError("entry must be a table", entry=eid)
        located = {k: (keys.get((eid, k)), v) for k, v in fields.items()}
        sections.append((eid, where.get(eid), located))
    return sections


def _poly_field(eid, key, val, lineno) -> QPoly:
    if not isinstance(val, str):
        raise CatalogError("expected a polynomial string", entry=eid, field=key, line=lineno)
    try:
        return poly_parse(val)
    except PolySyntaxError as exc:
        raise CatalogError(str(exc), entry=eid, field=key, line=lineno) from None


def _int_field(eid, key, val, lineno, minimum=None) -> int:
    if not isinstance(val, int) or isinstance(val, bool):
        raise CatalogError("expected an integer", entry=eid, field=key, line=lineno)
    if minimum is not None and val < minimum:
        raise CatalogError(f"must be >= {minimum}", entry=eid, field=key, line=lineno)
    return val


def _build_entry(eid: str, fields: dict[str, tuple[int, object]]) -> CandidateEntry:
    for key, (lineno, _) in fields.items():
        if key not in _KNOWN_FIELDS:
            raise CatalogError("unknown field", entry=eid, field=key, line=lineno)
    for key in ("family", "t_order", "stab_order", "out_coeff"):
        if key not in fields:
            raise CatalogError("missing required field", entry=eid, field=key)

    def get(key, default=None):
        return fields[key][1] if key in fields else default

    def line(key):
        return fields[key][0] if key in fields else None

    family = get("family")
    if family not in FAMILIES:
        raise CatalogError(f"family must be one of {', '.join(FAMILIES)}", entry=eid,
                           field="family", line=line("family"))
    t_order = _poly_field(eid, "t_order", get("t_order"), line("t_order"))
    stab_order = _poly_field(eid, "stab_order", get("stab_order"), line("stab_order"))
    out_coeff = _int_field(eid, "out_coeff", get("out_coeff"), line("out_coeff"), 1)

    p = get("p", "any")
    if p != "any":
        p = _int_field(eid, "p", p, line("p"))
        if not is_prime(p):
            raise CatalogError("p must be prime or \"any\"", entry=eid, field="p", line=line("p"))
    e_parity = get("e_parity", "any")
    if e_parity not in ("odd", "even", "any"):
        raise CatalogError('e_parity must be "odd", "even" or "any"', entry=eid,
                           field="e_parity", line=line("e_parity"))
    e_min = _int_field(eid, "e_min", get("e_min", 1), line("e_min"), 1)
    q_min = _int_field(eid, "q_min", get("q_min", 2), line("q_min"), 2)
    q_fixed = get("q_fixed")
    if q_fixed is not None:
        q_fixed = _int_field(eid, "q_fixed", q_fixed, line("q_fixed"), 2)
        pp = prime_power(q_fixed)
        if pp is None:
            raise CatalogError("q_fixed must be a prime power", entry=eid, field="q_fixed",
                               line=line("q_fixed"))
        if p != "any" and pp.p != p:
            raise CatalogError("q_fixed is not a power of p", entry=eid, field="q_fixed",
                               line=line("q_fixed"))
        for key, poly in (("t_order", t_order), ("stab_order", stab_order)):
            if poly.degree > 0:
                raise CatalogError("fixed-q entries take constant orders", entry=eid,
                                   field=key, line=line(key))
    q_excluded = get("q_excluded", [])
    if not isinstance(q_excluded, list) or not all(isinstance(x, int) for x in q_excluded):
        raise CatalogError("expected a list of integers", entry=eid, field="q_excluded",
                           line=line("q_excluded"))
    constraints = QConstraints(p, e_parity, e_min, q_min, q_fixed, tuple(q_excluded))

    subdeg_raw = get("subdegrees", [])
    if not isinstance(subdeg_raw, list):
        raise CatalogError("expected a list of polynomial strings", entry=eid,
                           field="subdegrees", line=line("subdegrees"))
    subdegrees = tuple(_poly_field(eid, "subdegrees", s, line("subdegrees")) for s in subdeg_raw)
    complete = get("subdegrees_complete", False)
    if not isinstance(complete, bool):
        raise CatalogError("expected true or false", entry=eid, field="subdegrees_complete",
                           line=line("subdegrees_complete"))

    # invariants
    if stab_order.is_zero():
        raise CatalogError("stab_order is zero", entry=eid, field="stab_order")
    quot, rem = divmod(t_order, stab_order)
    if not rem.is_zero():
        raise CatalogError("stab_order does not divide t_order", entry=eid, field="stab_order",
                           line=line("stab_order"))
    v_poly = quot
    if complete and sum(subdegrees, QPoly.const(1)) != v_poly:
        raise CatalogError("1 + sum(subdegrees) != v", entry=eid, field="subdegrees",
                           line=line("subdegrees"))

    expected = get("expected_survivors")
    if expected is not None and expected != "any":
        _poly_field(eid, "expected_survivors", expected, line("expected_survivors"))

    resolved = get("resolved_survivors", [])
    if not (isinstance(resolved, list) and all(
            isinstance(x, list) and len(x) == 2 and all(isinstance(y, int) for y in x)
            for x in resolved)):
        raise CatalogError("expected a list of [q, k] pairs", entry=eid,
                           field="resolved_survivors", line=line("resolved_survivors"))

    entry = CandidateEntry(
        id=eid,
        family=family,
        t_order=t_order,
        stab_order=stab_order,
        out_coeff=out_coeff,
        q_constraints=constraints,
        subdegrees=subdegrees,
        subdegrees_complete=complete,
        v_poly=v_poly,
        expected_survivors=expected,
        resolved_survivors=tuple(tuple(x) for x in resolved),
        notes=get("notes", ""),
        source={k: v for k, (_, v) in fields.items()},
    )
    _sanity_check(entry)
    return entry


def _sanity_check(entry: CandidateEntry, samples: int = 4) -> None:
    """Orders must be positive integers, and v >= 2, at the first admitted q."""
    qmax = entry.q_constraints.q_fixed or 10**4
    for i, pp in enumerate(entry.q_constraints.admitted(qmax)):
        if i >= samples:
            break
        t, s = entry.t_order(pp.q), entry.stab_order(pp.q)
        if not (isinstance(t, int) and isinstance(s, int) and t > 0 and s > 0):
            raise CatalogError(f"orders are not positive integers at q = {pp.q}", entry=entry.id)
        if t % s:
            raise CatalogError(f"stab_order does not divide t_order at q = {pp.q}", entry=entry.id)
        if entry.v(pp.q) < 2:
            raise CatalogError(f"v < 2 at q = {pp.q}", entry=entry.id)


def catalog_parse(text: str) -> Catalog:
    return Catalog(_build_entry(eid, fields) for eid, _, fields in _read_sections(text))


def catalog_load(path) -> Catalog:
    """Load and validate a catalog file."""
    return catalog_parse(Path(path).read_text(encoding="utf-8"))


def catalog_builtin() -> Catalog:
    """The bundled catalog, or the file named by ``$STEINER_SIEVE_CATALOG``."""
    override = os.environ.get(CATALOG_ENV)
    if override:
        return catalog_load(override)
    text = resources.files("steiner_sieve").joinpath("data/catalog.toml").read_text("utf-8")
    return catalog_parse(text)
