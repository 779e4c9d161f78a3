"""Content-addressable hypergraph store.

The unit of storage is a *nerve*: a triple of identity, ordered reference
list, and an opaque record string. Identity is the truncated SHA-256 of the
record alone; references are deliberately excluded from the hash, so editing
one entry never changes the identity of another and reference cycles are
representable.

A store is *well-formed* when six axioms hold:

  0. content-addressing: id == compute_id(record)        (strict mode only)
  1. self-reference:     width-0 nerves have ref == [id]
  2. injectivity:        one id names one nerve
  3. closure:            every referenced id resolves in the store
  4. no duplicates:      refs of a width>0 nerve are pairwise distinct
  5. no self-reference:  a width>0 nerve never references itself

``structural`` mode skips axiom 0 so hand-labelled fixture files (ids like
"a1") remain loadable and checkable.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

HASH_HEX_LEN = 12
_HASH_RE = re.compile(r"^[0-9a-f]{%d}$" % HASH_HEX_LEN)

STRICT = "strict"
STRUCTURAL = "structural"


class StoreError(Exception):
    """Base class for store domain errors. ``code`` is a stable string."""

    code = "store_error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class DuplicateRecordConflict(StoreError):
    """The record already names a nerve with a different reference list."""

    code = "duplicate_record_conflict"


class HashCollision(StoreError):
    """Two byte-different records truncate to the same 48-bit id."""

    code = "hash_collision"


class UnknownRef(StoreError):
    code = "unknown_ref"


class DuplicateRef(StoreError):
    code = "duplicate_ref"


class SelfRef(StoreError):
    code = "self_ref"


class NotFound(StoreError):
    code = "not_found"


class WouldBreakClosure(StoreError):
    """Removal refused: other nerves still reference the target."""

    code = "would_break_closure"

    def __init__(self, message: str, dependents: list[str]):
        super().__init__(message, dependents=dependents)
        self.dependents = dependents


class MalformedFile(StoreError):
    code = "malformed_file"


def compute_id(record: str) -> str:
    """First 12 lowercase hex chars of SHA-256 over the record's UTF-8 bytes.

    Depends on the record only; reference lists never enter the hash.
    """
    return hashlib.sha256(record.encode("utf-8")).hexdigest()[:HASH_HEX_LEN]


def is_hash_id(value: str) -> bool:
    return bool(_HASH_RE.match(value))


@dataclass(frozen=True)
class Nerve:
    id: str
    ref: tuple[str, ...]
    record: str = ""

    @property
    def width(self) -> int:
        return len(self.ref) - 1

    def is_atom(self) -> bool:
        return self.width == 0


@dataclass(frozen=True)
class Violation:
    axiom: int  # 0..5
    nerve_id: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def is_well_formed(self) -> bool:
        return not self.violations

    def axioms_hit(self) -> set[int]:
        return {v.axiom for v in self.violations}


class Store:
    """A finite id-keyed set of nerves plus the hashing mode.

    Mutating methods keep a well-formed store well-formed; ``validate``
    re-checks the axioms on arbitrary (e.g. freshly loaded) content.
    Single-writer, multiple-reader: mutations need exclusive access.
    """

    def __init__(self, mode: str = STRICT):
        if mode not in (STRICT, STRUCTURAL):
            raise ValueError(f"unknown hash mode: {mode!r}")
        self.mode = mode
        self.nerves: dict[str, Nerve] = {}

    def __len__(self) -> int:
        return len(self.nerves)

    def __contains__(self, nerve_id: str) -> bool:
        return nerve_id in self.nerves

    def __iter__(self):
        return iter(self.nerves.values())

    def get(self, nerve_id: str) -> Optional[Nerve]:
        return self.nerves.get(nerve_id)

    def ids(self) -> list[str]:
        return sorted(self.nerves)

    def atoms(self) -> list[Nerve]:
        return [n for n in self.nerves.values() if n.is_atom()]

    def copy(self) -> "Store":
        dup = Store(self.mode)
        dup.nerves = dict(self.nerves)  # Nerve is immutable, shallow is enough
        return dup

    # -- authoring ----------------------------------------------------------

    def insert_atom(self, record: str) -> str:
        """Insert a width-0 nerve; idempotent on identical content."""
        self._require_strict("insert_atom")
        nerve_id = compute_id(record)
        existing = self.nerves.get(nerve_id)
        if existing is not None:
            if existing.record != record:
                raise HashCollision(
                    f"id {nerve_id} already stores a byte-different record"
                )
            if existing.ref != (nerve_id,):
                raise DuplicateRecordConflict(
                    f"record already names nerve {nerve_id} with refs "
                    f"{list(existing.ref)}"
                )
            return nerve_id
        self.nerves[nerve_id] = Nerve(nerve_id, (nerve_id,), record)
        return nerve_id

    def insert_nerve(self, record: str, refs: Iterable[str]) -> str:
        """Insert a width>=1 nerve over already-present references."""
        self._require_strict("insert_nerve")
        refs = tuple(refs)
        if len(refs) < 2:
            raise ValueError("a width>=1 nerve needs at least two refs")
        if len(set(refs)) != len(refs):
            raise DuplicateRef(f"refs are not pairwise distinct: {list(refs)}")
        nerve_id = compute_id(record)
        if nerve_id in refs:
            raise SelfRef(f"record hashes to {nerve_id}, which appears in refs")
        missing = [r for r in refs if r not in self.nerves]
        if missing:
            raise UnknownRef(f"refs not present in store: {missing}", missing=missing)
        existing = self.nerves.get(nerve_id)
        if existing is not None:
            if existing.record != record:
                raise HashCollision(
                    f"id {nerve_id} already stores a byte-different record"
                )
            if existing.ref != refs:
                raise DuplicateRecordConflict(
                    f"record already names nerve {nerve_id} with refs "
                    f"{list(existing.ref)}"
                )
            return nerve_id
        self.nerves[nerve_id] = Nerve(nerve_id, refs, record)
        return nerve_id

    def remove(self, nerve_id: str) -> None:
        """Remove one nerve; refused while anything else references it."""
        self.remove_many([nerve_id])

    def remove_many(self, nerve_ids: Iterable[str]) -> None:
        """Remove a batch atomically; the batch may contain whole cycles.

        Closure is checked against the remainder: any nerve outside the
        batch that references into it blocks the removal.
        """
        batch = set(nerve_ids)
        missing = sorted(b for b in batch if b not in self.nerves)
        if missing:
            raise NotFound(f"no such nerve: {missing}")
        dependents = sorted(
            n.id
            for n in self.nerves.values()
            if n.id not in batch and any(r in batch for r in n.ref)
        )
        if dependents:
            raise WouldBreakClosure(
                f"still referenced by {dependents}", dependents=dependents
            )
        for b in batch:
            del self.nerves[b]

    def _require_strict(self, op: str) -> None:
        if self.mode != STRICT:
            raise StoreError(f"{op} requires a strict-mode store")

    # -- validation ---------------------------------------------------------

    def validate(self) -> ValidationReport:
        """Check the well-formedness axioms; violations are data, not errors.

        Strict mode checks axioms 0-5; structural mode skips axiom 0.
        """
        out: list[Violation] = []
        for key, nerve in self.nerves.items():
            if key != nerve.id:
                out.append(
                    Violation(2, key, f"store key {key!r} != nerve id {nerve.id!r}")
                )
            if self.mode == STRICT and nerve.id != compute_id(nerve.record):
                out.append(
                    Violation(
                        0,
                        nerve.id,
                        f"id is not the content hash "
                        f"(expected {compute_id(nerve.record)})",
                    )
                )
            if len(nerve.ref) == 0:
                out.append(Violation(1, nerve.id, "ref list is empty"))
            elif nerve.width == 0:
                if nerve.ref != (nerve.id,):
                    out.append(
                        Violation(
                            1,
                            nerve.id,
                            f"width-0 nerve must self-reference, has {list(nerve.ref)}",
                        )
                    )
            else:
                if len(set(nerve.ref)) != len(nerve.ref):
                    out.append(Violation(4, nerve.id, "refs are not pairwise distinct"))
                if nerve.id in nerve.ref:
                    out.append(Violation(5, nerve.id, "nerve references itself"))
            for r in dict.fromkeys(nerve.ref):
                if r not in self.nerves:
                    out.append(Violation(3, nerve.id, f"ref {r!r} does not resolve"))
        out.sort(key=lambda v: (v.axiom, v.nerve_id, v.message))
        return ValidationReport(out)

    # -- persistence --------------------------------------------------------

    def to_canonical_json(self) -> str:
        """Canonical serialized form: ids sorted bytewise, two-space indent,
        ``ref`` before ``record``, record always present, final newline."""
        doc = {
            nerve_id: {"ref": list(n.ref), "record": n.record}
            for nerve_id, n in sorted(self.nerves.items())
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def save(store: Store, path: str | Path) -> None:
    """Write the canonical form. save(load(f)) is the identity on canonical files."""
    Path(path).write_text(store.to_canonical_json(), encoding="utf-8", newline="\n")


def load(path: str | Path, mode: str = STRICT) -> Store:
    """Load a store file. Axioms are not enforced here; run ``validate`` after."""
    raw = Path(path).read_text(encoding="utf-8")
    return loads(raw, mode=mode)


def loads(raw: str, mode: str = STRICT) -> Store:
    try:
        doc = json.loads(raw, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedFile("top level must be a JSON object keyed by id")
    store = Store(mode)
    for key, entry in doc.items():
        if not isinstance(entry, dict):
            raise MalformedFile(f"entry {key!r} is not an object")
        unknown = set(entry) - {"ref", "record"}
        if unknown:
            raise MalformedFile(f"entry {key!r} has unknown fields {sorted(unknown)}")
        ref = entry.get("ref")
        if not isinstance(ref, list) or not all(isinstance(r, str) for r in ref):
            raise MalformedFile(f"entry {key!r}: 'ref' must be a list of strings")
        record = entry.get("record", "")
        if not isinstance(record, str):
            raise MalformedFile(f"entry {key!r}: 'record' must be a string")
        store.nerves[key] = Nerve(key, tuple(ref), record)
    return store


def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise MalformedFile(f"duplicate id {key!r} in file")
        seen[key] = value
    return seen
