"""Parsers turning LaTeX and Lean sources into atoms and edges.

Both parsers are total: arbitrary input yields parsed units plus
diagnostics, never an exception. Parsing is text-level and desk-scale by
design (no macro expansion, no elaborator); it recognizes the environments
and declaration keywords of the record conventions and splits statements
from proofs so the two keep independent identities.

Spans are byte offsets into the UTF-8 encoding of the source, and each
unit's ``body`` is exactly the decoded slice at its span.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from .leannets import STATEMENT_PROOF_RECORD, parse_record, scan_entryrefs
from .store import Store

TEX_ENVIRONMENTS = (
    "theorem",
    "definition",
    "lemma",
    "proposition",
    "corollary",
    "example",
    "proof",
)

_TEX_TOKEN_RE = re.compile(
    r"\\(begin|end)\{(%s)\}" % "|".join(TEX_ENVIRONMENTS)
)
_TEX_OPT_ARG_RE = re.compile(r"\[([^\]]*)\]")
_LEAN_DECL_RE = re.compile(r"^(theorem|lemma|def)\s+([^\s(\[{:]+)", re.MULTILINE)

Span = tuple[int, int]


@dataclass(frozen=True)
class ParsedUnit:
    sort: str
    title: Optional[str]
    body: str
    span: Span
    kind: str  # "statement" or "proof"


@dataclass
class IngestResult:
    atoms: list[tuple[str, list[str]]] = field(default_factory=list)
    edges: list[tuple[int, int, str]] = field(default_factory=list)
    diagnostics: list[tuple[Span, str]] = field(default_factory=list)
    units: list[ParsedUnit] = field(default_factory=list)

    def add_atom(self, record: str, unit: ParsedUnit) -> int:
        links = [h for h, _ in scan_entryrefs(parse_record(record)).refs]
        self.atoms.append((record, links))
        self.units.append(unit)
        return len(self.atoms) - 1


def build_record(
    sort: str,
    source: str,
    title: Optional[str] = None,
    state: Optional[str] = None,
    content: Optional[str] = None,
    notes: Optional[str] = None,
) -> str:
    """Deterministic record emission; identity is the hash of these bytes.

    Fixed field order, empty fields dropped, compact separators, UTF-8
    preserved verbatim.
    """
    doc = {}
    for key, value in (
        ("sort", sort),
        ("source", source),
        ("title", title),
        ("state", state),
        ("content", content),
        ("notes", notes),
    ):
        if value:
            doc[key] = value
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":"))


class _ByteOffsets:
    """Lazily convert character offsets to UTF-8 byte offsets."""

    def __init__(self, text: str):
        self.text = text
        self._cache: dict[int, int] = {0: 0}

    def at(self, char_index: int) -> int:
        if char_index not in self._cache:
            self._cache[char_index] = len(
                self.text[:char_index].encode("utf-8")
            )
        return self._cache[char_index]


def parse_tex(text: str) -> IngestResult:
    """Extract recognized LaTeX environments as atoms.

    A proof environment binds to the nearest preceding statement
    environment, producing a statement-proof edge. Environments only nest
    to depth one; inner begins and unbalanced ends are reported as
    diagnostics and skipped.
    """
    result = IngestResult()
    offsets = _ByteOffsets(text)
    open_env: Optional[tuple[str, int, Optional[str], int]] = None
    last_statement: Optional[int] = None

    for match in _TEX_TOKEN_RE.finditer(text):
        kind, env = match.group(1), match.group(2)
        if kind == "begin":
            if open_env is not None:
                result.diagnostics.append(
                    (
                        (offsets.at(match.start()), offsets.at(match.end())),
                        f"nested \\begin{{{env}}} inside {open_env[0]}; skipped",
                    )
                )
                continue
            body_start = match.end()
            title = None
            opt = _TEX_OPT_ARG_RE.match(text, body_start)
            if opt:
                title = opt.group(1)
                body_start = opt.end()
            open_env = (env, body_start, title, match.start())
        else:
            if open_env is None:
                result.diagnostics.append(
                    (
                        (offsets.at(match.start()), offsets.at(match.end())),
                        f"stray \\end{{{env}}}",
                    )
                )
                continue
            name, body_start, title, env_start = open_env
            if env != name:
                result.diagnostics.append(
                    (
                        (offsets.at(env_start), offsets.at(match.end())),
                        f"\\begin{{{name}}} closed by \\end{{{env}}}; span skipped",
                    )
                )
                open_env = None
                continue
            body = text[body_start:match.start()]
            span = (offsets.at(body_start), offsets.at(match.start()))
            unit_kind = "proof" if env == "proof" else "statement"
            unit = ParsedUnit(env, title, body, span, unit_kind)
            record = build_record(
                sort=env, source="tex", title=title, notes=body.strip()
            )
            index = result.add_atom(record, unit)
            if unit_kind == "proof":
                if last_statement is not None:
                    result.edges.append(
                        (last_statement, index, STATEMENT_PROOF_RECORD)
                    )
            else:
                last_statement = index
            open_env = None

    if open_env is not None:
        name, body_start, _, env_start = open_env
        result.diagnostics.append(
            (
                (offsets.at(env_start), offsets.at(len(text))),
                f"unterminated \\begin{{{name}}}; span skipped",
            )
        )
    return result


def _lean_boundary(decl: str) -> int:
    """Offset of the first top-level ``:=`` or ``by`` in a declaration.

    Top-level means outside (), [], {}. Returns -1 when neither occurs.
    """
    depth = 0
    i = 0
    n = len(decl)
    while i < n:
        c = decl[i]
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth = max(0, depth - 1)
        elif depth == 0:
            if c == ":" and decl[i : i + 2] == ":=":
                return i
            if (
                c == "b"
                and decl[i : i + 2] == "by"
                and (i == 0 or not (decl[i - 1].isalnum() or decl[i - 1] in "_."))
                and (i + 2 == n or not (decl[i + 2].isalnum() or decl[i + 2] in "_."))
            ):
                return i
        i += 1
    return -1


def parse_lean(text: str) -> IngestResult:
    """Scan for top-level theorem/lemma/def declarations.

    Theorems and lemmas split at the first top-level ``:=`` or ``by``: the
    signature becomes a statement atom and the rest a proof atom joined by
    a statement-proof edge, so proof edits never move the statement's id.
    Defs stay whole. A declaration with no recognizable boundary yields a
    single atom plus a diagnostic.
    """
    result = IngestResult()
    offsets = _ByteOffsets(text)
    matches = list(_LEAN_DECL_RE.finditer(text))
    for pos, match in enumerate(matches):
        keyword, name = match.group(1), match.group(2)
        block_end = matches[pos + 1].start() if pos + 1 < len(matches) else len(text)
        block = text[match.start() : block_end].rstrip()
        block_end = match.start() + len(block)
        sort = "definition" if keyword == "def" else keyword

        if keyword == "def":
            span = (offsets.at(match.start()), offsets.at(block_end))
            unit = ParsedUnit(sort, name, block, span, "statement")
            record = build_record(
                sort=sort, source="lean", title=name, state="checked", content=block
            )
            result.add_atom(record, unit)
            continue

        boundary = _lean_boundary(block)
        if boundary < 0:
            span = (offsets.at(match.start()), offsets.at(block_end))
            unit = ParsedUnit(sort, name, block, span, "statement")
            record = build_record(sort=sort, source="lean", title=name, content=block)
            result.add_atom(record, unit)
            result.diagnostics.append(
                (span, f"{keyword} {name}: no ':=' or 'by' boundary found")
            )
            continue

        statement_text = block[:boundary]
        proof_start = boundary if block[boundary : boundary + 2] == "by" else boundary + 2
        proof_text = block[proof_start:]

        stmt_span = (
            offsets.at(match.start()),
            offsets.at(match.start() + len(statement_text)),
        )
        stmt_unit = ParsedUnit(sort, name, statement_text, stmt_span, "statement")
        stmt_record = build_record(
            sort=sort,
            source="lean",
            title=name,
            state="proven" if proof_text.strip() else None,
            content=statement_text.strip(),
        )
        stmt_index = result.add_atom(stmt_record, stmt_unit)

        proof_span = (
            offsets.at(match.start() + proof_start),
            offsets.at(block_end),
        )
        proof_unit = ParsedUnit("proof", None, proof_text, proof_span, "proof")
        proof_record = build_record(
            sort="proof", source="lean", content=proof_text.strip()
        )
        proof_index = result.add_atom(proof_record, proof_unit)
        result.edges.append((stmt_index, proof_index, STATEMENT_PROOF_RECORD))
    return result


def commit(store: Store, result: IngestResult) -> list[str]:
    """Insert a parse result; returns ids in insertion order.

    Atoms first (identical content deduplicates to the same id), then
    edges with indices resolved to those ids. All-or-nothing: the store is
    only updated after every insert succeeds, so a conflict midway leaves
    it untouched. Committing the same result twice is a no-op.
    """
    work = store.copy()
    ids: list[str] = []
    atom_ids: list[str] = []
    for record, _links in result.atoms:
        atom_id = work.insert_atom(record)
        atom_ids.append(atom_id)
        ids.append(atom_id)
    for src_index, dst_index, record in result.edges:
        ids.append(
            work.insert_nerve(record, (atom_ids[src_index], atom_ids[dst_index]))
        )
    store.nerves = work.nerves
    return ids
