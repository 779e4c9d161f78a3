"""Astrolabe: a content-addressable hypergraph knowledge store.

Entries ("nerves") are identified by the truncated SHA-256 of their record
string; reference lists stay outside the hash, which keeps identities local
to edits and lets the reference structure carry cycles. On top of the store
sit a depth/width decomposition, a semantic-network plugin bridging LaTeX
and Lean sources, a graph-metrics engine, a CLI, and a local HTTP API.
"""

from .store import (
    STRICT,
    STRUCTURAL,
    DuplicateRecordConflict,
    DuplicateRef,
    HashCollision,
    MalformedFile,
    Nerve,
    NotFound,
    SelfRef,
    Store,
    StoreError,
    UnknownRef,
    ValidationReport,
    Violation,
    WouldBreakClosure,
    compute_id,
    load,
    loads,
    save,
)

__version__ = "0.1.0"

__all__ = [
    "STRICT",
    "STRUCTURAL",
    "DuplicateRecordConflict",
    "DuplicateRef",
    "HashCollision",
    "MalformedFile",
    "Nerve",
    "NotFound",
    "SelfRef",
    "Store",
    "StoreError",
    "UnknownRef",
    "ValidationReport",
    "Violation",
    "WouldBreakClosure",
    "compute_id",
    "load",
    "loads",
    "save",
    "__version__",
]
