"""In-memory triple store with SPO/POS/OSP indexes and snapshot reads.

Readers work against immutable :class:`Snapshot` objects; every mutation
batch builds fresh index structures and publishes a new snapshot atomically,
so a snapshot taken at revision r never observes later writes. Writers are
serialized through a single lock. Durability is opt-in: an append-only
write-ahead log of Turtle batches plus explicit snapshot export.
"""

from __future__ import annotations

import re
import threading
from pathlib import Path
from typing import Iterable, Iterator

from .terms import WELL_KNOWN_PREFIXES, BlankNode, IRI, Literal, Term, Triple
from .turtle import parse_turtle, serialize_turtle

_Index = dict  # Term -> Term -> set[Term]

_GEN_BLANK_RE = re.compile(r"^b(\d+)$")


def _index_add(index: _Index, a: Term, b: Term, c: Term):
    index.setdefault(a, {}).setdefault(b, set()).add(c)


def _index_remove(index: _Index, a: Term, b: Term, c: Term):
    try:
        inner = index[a][b]
    except KeyError:
        return
    inner.discard(c)
    if not inner:
        del index[a][b]
        if not index[a]:
            del index[a]


def _copy_index(index: _Index) -> _Index:
    return {a: {b: set(cs) for b, cs in inner.items()} for a, inner in index.items()}


class Snapshot:
    """Immutable view of the store at one revision."""

    __slots__ = ("revision", "prefixes", "_spo", "_pos", "_osp", "_size", "_nodes")

    def __init__(self, revision: int, prefixes: dict[str, str], spo, pos, osp, size):
        self.revision = revision
        self.prefixes = prefixes
        self._spo = spo
        self._pos = pos
        self._osp = osp
        self._size = size
        self._nodes: frozenset[Term] | None = None

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[Triple]:
        return self.match()

    def __contains__(self, triple: Triple) -> bool:
        try:
            return triple.object in self._spo[triple.subject][triple.predicate]
        except KeyError:
            return False

    def match(
        self,
        subject: Term | None = None,
        predicate: Term | None = None,
        object: Term | None = None,
    ) -> Iterator[Triple]:
        """All triples matching the bound positions; index picked to suit."""
        s, p, o = subject, predicate, object
        # Impossible positions (literal subject, non-IRI predicate) match nothing.
        if isinstance(s, Literal) or (p is not None and not isinstance(p, IRI)):
            return
        if s is not None and p is not None and o is not None:
            if o in self._spo.get(s, {}).get(p, ()):
                yield Triple(s, p, o)
        elif s is not None and p is not None:
            for obj in self._spo.get(s, {}).get(p, ()):
                yield Triple(s, p, obj)
        elif s is not None and o is not None:
            for pred in self._osp.get(o, {}).get(s, ()):
                yield Triple(s, pred, o)
        elif p is not None and o is not None:
            for subj in self._pos.get(p, {}).get(o, ()):
                yield Triple(subj, p, o)
        elif s is not None:
            for pred, objs in self._spo.get(s, {}).items():
                for obj in objs:
                    yield Triple(s, pred, obj)
        elif p is not None:
            for obj, subjs in self._pos.get(p, {}).items():
                for subj in subjs:
                    yield Triple(subj, p, obj)
        elif o is not None:
            for subj, preds in self._osp.get(o, {}).items():
                for pred in preds:
                    yield Triple(subj, pred, o)
        else:
            for subj, inner in self._spo.items():
                for pred, objs in inner.items():
                    for obj in objs:
                        yield Triple(subj, pred, obj)

    def objects(self, subject: Term, predicate: Term) -> list[Term]:
        return list(self._spo.get(subject, {}).get(predicate, ()))

    def value(self, subject: Term, predicate: Term) -> Term | None:
        for obj in self._spo.get(subject, {}).get(predicate, ()):
            return obj
        return None

    def subjects(self, predicate: Term, object: Term) -> list[Term]:
        return list(self._pos.get(predicate, {}).get(object, ()))

    def nodes(self) -> frozenset[Term]:
        """Terms appearing in subject or object position."""
        if self._nodes is None:
            out: set[Term] = set(self._spo.keys())
            out.update(self._osp.keys())
            self._nodes = frozenset(out)
        return self._nodes

    def terms(self) -> set[Term]:
        out: set[Term] = set(self._spo.keys())
        out.update(self._pos.keys())
        out.update(self._osp.keys())
        return out


def _empty_snapshot(prefixes: dict[str, str]) -> Snapshot:
    return Snapshot(0, dict(prefixes), {}, {}, {}, 0)


class TripleStore:
    def __init__(self, prefixes: dict[str, str] | None = None, wal_path: Path | str | None = None):
        self._lock = threading.Lock()
        self._prefixes: dict[str, str] = {**WELL_KNOWN_PREFIXES, **(prefixes or {})}
        self._snapshot = _empty_snapshot(self._prefixes)
        self._blank_seq = 0
        self.wal_path = Path(wal_path) if wal_path else None

    # -- reading -----------------------------------------------------------

    def snapshot(self) -> Snapshot:
        return self._snapshot

    @property
    def revision(self) -> int:
        return self._snapshot.revision

    def __len__(self) -> int:
        return len(self._snapshot)

    def match(self, subject=None, predicate=None, object=None) -> Iterator[Triple]:
        return self._snapshot.match(subject, predicate, object)

    @property
    def prefixes(self) -> dict[str, str]:
        return dict(self._prefixes)

    # -- blank node minting --------------------------------------------------

    def new_blank(self) -> BlankNode:
        with self._lock:
            node = BlankNode(f"b{self._blank_seq}")
            self._blank_seq += 1
            return node

    def _note_blank_ids(self, triples: Iterable[Triple]):
        # Keep the mint counter ahead of any b<N> id entering the store.
        for t in triples:
            for term in t:
                if isinstance(term, BlankNode):
                    m = _GEN_BLANK_RE.match(term.id)
                    if m:
                        self._blank_seq = max(self._blank_seq, int(m.group(1)) + 1)

    # -- mutation -------------------------------------------------------------

    def insert(self, triples: Iterable[Triple]) -> int:
        return self.apply(add=triples)

    def remove(self, triples: Iterable[Triple]) -> int:
        return self.apply(remove=triples)

    def apply(
        self,
        add: Iterable[Triple] = (),
        remove: Iterable[Triple] = (),
        _log: bool = True,
    ) -> int:
        """Apply one batch; bumps the revision once when anything changed."""
        add_set = set(add)
        remove_set = set(remove)
        with self._lock:
            current = self._snapshot
            # A triple both removed and re-added in one batch stays put.
            effective_removes = [
                t for t in remove_set if t in current and t not in add_set
            ]
            effective_adds = [t for t in add_set if t not in current]
            if not effective_adds and not effective_removes:
                return current.revision

            spo = _copy_index(current._spo)
            pos = _copy_index(current._pos)
            osp = _copy_index(current._osp)
            size = len(current)
            for t in effective_removes:
                _index_remove(spo, t.subject, t.predicate, t.object)
                _index_remove(pos, t.predicate, t.object, t.subject)
                _index_remove(osp, t.object, t.subject, t.predicate)
                size -= 1
            for t in effective_adds:
                _index_add(spo, t.subject, t.predicate, t.object)
                _index_add(pos, t.predicate, t.object, t.subject)
                _index_add(osp, t.object, t.subject, t.predicate)
                size += 1
            self._note_blank_ids(effective_adds)
            revision = current.revision + 1
            if _log and self.wal_path is not None:
                self._append_wal(revision, effective_adds, effective_removes)
            self._snapshot = Snapshot(revision, dict(self._prefixes), spo, pos, osp, size)
            return revision

    def define_prefix(self, prefix: str, namespace: str):
        with self._lock:
            self._prefixes[prefix] = namespace
            cur = self._snapshot
            self._snapshot = Snapshot(
                cur.revision, dict(self._prefixes), cur._spo, cur._pos, cur._osp, len(cur)
            )

    # -- turtle I/O ----------------------------------------------------------

    def load_turtle(
        self, text: str | None = None, path: Path | str | None = None, base: str | None = None
    ) -> int:
        """Parse Turtle and insert as one batch, remapping document blank ids."""
        if text is None:
            if path is None:
                raise ValueError("either text or path is required")
            text = Path(path).read_text(encoding="utf-8")
        triples, prefixes = parse_turtle(text, base=base)
        remap: dict[str, BlankNode] = {}

        def fresh(term: Term) -> Term:
            if isinstance(term, BlankNode):
                if term.id not in remap:
                    remap[term.id] = self.new_blank()
                return remap[term.id]
            return term

        remapped = [Triple(fresh(t.subject), t.predicate, fresh(t.object)) for t in triples]
        for p, ns in prefixes.items():
            self.define_prefix(p, ns)
        return self.insert(remapped)

    def export_turtle(self, path: Path | str | None = None) -> str:
        text = serialize_turtle(self.snapshot(), self._prefixes)
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text

    # -- write-ahead log -------------------------------------------------------

    def _append_wal(self, revision: int, adds: list[Triple], removes: list[Triple]):
        chunks = []
        if removes:
            chunks.append(f"#! txn {revision} remove\n")
            chunks.extend(t.n3() + "\n" for t in removes)
        if adds:
            chunks.append(f"#! txn {revision} add\n")
            chunks.extend(t.n3() + "\n" for t in adds)
        self.wal_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.wal_path, "a", encoding="utf-8") as fh:
            fh.writelines(chunks)

    def replay_wal(self, path: Path | str | None = None) -> int:
        """Re-apply logged batches. Blank ids are kept verbatim (store-scoped)."""
        wal = Path(path) if path else self.wal_path
        if wal is None or not wal.exists():
            return self.revision
        mode = "add"
        adds: list[Triple] = []
        removes: list[Triple] = []

        def flush():
            nonlocal adds, removes
            if adds or removes:
                self.apply(add=adds, remove=removes, _log=False)
                adds, removes = [], []

        for raw in wal.read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#! txn"):
                new_mode = line.rsplit(" ", 1)[-1]
                if new_mode == "remove" and mode == "add":
                    flush()
                mode = new_mode
                continue
            triples, _ = parse_turtle(line)
            if mode == "add":
                adds.extend(triples)
            else:
                removes.extend(triples)
        flush()
        return self.revision
