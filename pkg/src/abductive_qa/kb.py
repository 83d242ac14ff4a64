"""ConceptNet dump ingestion and the immutable semantic-network index.

The index stores every retained assertion twice (once per endpoint) in a
CSR layout over numpy arrays, so neighbor scans and direct-relation lookups
are binary searches. Weights are signed: a fixed set of negating relations
(NotCapableOf, Antonym, ...) flips the dump's non-negative weight so that
incompatible concepts carry negative assertion strength.
"""

from __future__ import annotations

import gzip
import hashlib
import io
import json
import re
import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator, NamedTuple, Optional

import numpy as np

MAGIC = b"PTSEMNET"
FORMAT_VERSION = 1

# Relations whose presence asserts the *opposite*; their weights are negated
# at parse time so bond energies land in (-1, 0).
NEGATIVE_RELATIONS = frozenset(
    {
        "NotCapableOf",
        "NotDesires",
        "NotHasProperty",
        "Antonym",
        "DistinctFrom",
        "NotUsedFor",
    }
)

_WEIGHT_RE = re.compile(rb'"weight"\s*:\s*(-?[0-9]+(?:\.[0-9]+)?(?:[eE][-+]?[0-9]+)?)')

DIR_OUT = 0
DIR_IN = 1


class MalformedLine(ValueError):
    """A dump line that cannot be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line_number: int = -1):
        super().__init__(message)
        self.line_number = line_number


class UnknownConcept(LookupError):
    """A concept id or uri that is not present in the network."""


class VersionMismatch(RuntimeError):
    """Index file written by an incompatible format version."""


class CorruptIndex(RuntimeError):
    """Index file failed structural or checksum validation."""


class Assertion(NamedTuple):
    """One directed, relation-labeled edge with signed strength."""

    start: int | str
    end: int | str
    relation: str
    weight: float


class Edge(NamedTuple):
    """A neighbor-list entry; direction is 'out' (g -> neighbor) or 'in'."""

    neighbor: int
    relation: str
    weight: float
    direction: str


@dataclass(frozen=True)
class IngestConfig:
    language: str = "en"
    negative_relations: frozenset[str] = NEGATIVE_RELATIONS
    aggregation: str = "max"
    max_edges: Optional[int] = None

    def __post_init__(self):
        if self.aggregation not in ("max", "sum"):
            raise ValueError(f"unsupported aggregation rule: {self.aggregation!r}")


def _concept_uri(raw: str, language: str) -> Optional[str]:
    """Normalize `/c/<lang>/<term>[/...]` to `<lang>/<term>`; None if filtered."""
    parts = raw.split("/")
    # ['', 'c', lang, term, ...optional sense tags]
    if len(parts) < 4 or parts[1] != "c" or not parts[3]:
        raise ValueError(f"bad concept uri: {raw!r}")
    if parts[2] != language:
        return None
    return f"{parts[2]}/{parts[3].lower()}"


def parse_assertion_line(
    line: str | bytes, config: IngestConfig = IngestConfig(), line_number: int = -1
) -> Optional[Assertion]:
    """Parse one record of the tab-separated assertion dump.

    Returns an Assertion with uri endpoints, or None when either endpoint
    falls outside the configured language. Raises MalformedLine on wrong
    field count, unparsable metadata, or a missing weight.
    """
    if isinstance(line, str):
        line = line.encode("utf-8")
    fields = line.rstrip(b"\r\n").split(b"\t")
    if len(fields) != 5:
        raise MalformedLine(
            f"expected 5 tab-separated fields, got {len(fields)}", line_number
        )
    _, rel_raw, start_raw, end_raw, meta = fields
    relation = rel_raw.decode("utf-8", "replace").rstrip("/").rsplit("/", 1)[-1]
    if not relation:
        raise MalformedLine("empty relation uri", line_number)
    try:
        start = _concept_uri(start_raw.decode("utf-8"), config.language)
        end = _concept_uri(end_raw.decode("utf-8"), config.language)
    except ValueError as exc:
        raise MalformedLine(str(exc), line_number) from None
    if start is None or end is None:
        return None

    m = _WEIGHT_RE.search(meta)
    if m:
        weight = float(m.group(1))
    else:
        try:
            weight = float(json.loads(meta)["weight"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            raise MalformedLine("metadata has no parsable weight", line_number) from None
    if not np.isfinite(weight):
        raise MalformedLine(f"non-finite weight {weight}", line_number)
    if relation in config.negative_relations:
        weight = -abs(weight)
    return Assertion(start, end, relation, weight)


class SemanticNetwork:
    """Immutable indexed view of the retained assertions.

    Adjacency is CSR over dense concept ids; each assertion is reachable from
    both endpoints, entries sorted by neighbor id. Construction goes through
    `build_network` or `load_index`.
    """

    def __init__(
        self,
        uris: list[str],
        relations: list[str],
        indptr: np.ndarray,
        nbr: np.ndarray,
        rel: np.ndarray,
        wt: np.ndarray,
        direction: np.ndarray,
        stats: Optional[dict] = None,
        checksum: Optional[int] = None,
    ):
        self._uris = uris
        self._uri_to_id = {u: i for i, u in enumerate(uris)}
        self._relations = relations
        self._indptr = indptr
        self._nbr = nbr
        self._rel = rel
        self._wt = wt
        self._dir = direction
        for arr in (indptr, nbr, rel, wt, direction):
            arr.flags.writeable = False
        # Surface-phrase vocabulary: term text (uri minus language tag) -> id.
        self.vocabulary = {u.split("/", 1)[1]: i for i, u in enumerate(uris)}
        self.stats = dict(stats or {})
        self._checksum = checksum
        # Read cache for hot adjacency scans; safe because the index is
        # immutable. Bounded by wholesale eviction, dropped on pickling.
        self._best_edges_cache: dict[int, dict[int, Assertion]] = {}

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_best_edges_cache"] = {}
        return state

    # -- identity ------------------------------------------------------

    @property
    def concept_count(self) -> int:
        return len(self._uris)

    @property
    def edge_count(self) -> int:
        return len(self._nbr) // 2

    @property
    def relation_labels(self) -> list[str]:
        return list(self._relations)

    def concept_id(self, uri: str) -> int:
        try:
            return self._uri_to_id[uri]
        except KeyError:
            raise UnknownConcept(uri) from None

    def concept_uri(self, concept: int) -> str:
        self._check_id(concept)
        return self._uris[concept]

    def term(self, concept: int) -> str:
        """Surface phrase of a concept (uri without the language tag)."""
        return self.concept_uri(concept).split("/", 1)[1]

    def vocab_id(self, phrase: str) -> Optional[int]:
        return self.vocabulary.get(phrase)

    def _check_id(self, concept: int) -> None:
        if not 0 <= concept < len(self._uris):
            raise UnknownConcept(concept)

    # -- queries -------------------------------------------------------

    def _slice(self, concept: int) -> slice:
        return slice(int(self._indptr[concept]), int(self._indptr[concept + 1]))

    def neighbors(self, concept: int) -> list[Edge]:
        """All edges touching `concept` (outgoing and incoming), sorted."""
        self._check_id(concept)
        s = self._slice(concept)
        return [
            Edge(
                int(n),
                self._relations[r],
                float(w),
                "out" if d == DIR_OUT else "in",
            )
            for n, r, w, d in zip(
                self._nbr[s], self._rel[s], self._wt[s], self._dir[s]
            )
        ]

    def neighbor_ids(self, concept: int) -> np.ndarray:
        """Distinct neighbor ids of `concept` (ascending)."""
        self._check_id(concept)
        s = self._slice(concept)
        out = np.unique(self._nbr[s])
        return out

    def best_edges(self, concept: int) -> dict[int, Assertion]:
        """Strongest assertion per distinct neighbor (phi against each).

        One adjacency scan, cached; ties resolve exactly as in `phi`.
        """
        cached = self._best_edges_cache.get(concept)
        if cached is not None:
            return cached
        self._check_id(concept)
        s = self._slice(concept)
        best: dict[int, tuple[tuple[float, int, int], int]] = {}
        for idx in range(s.start, s.stop):
            n = int(self._nbr[idx])
            key = (-abs(float(self._wt[idx])), int(self._rel[idx]), int(self._dir[idx]))
            prev = best.get(n)
            if prev is None or key < prev[0]:
                best[n] = (key, idx)
        out = {}
        for n, (_, idx) in best.items():
            w = float(self._wt[idx])
            rel = self._relations[int(self._rel[idx])]
            if int(self._dir[idx]) == DIR_OUT:
                out[n] = Assertion(concept, n, rel, w)
            else:
                out[n] = Assertion(n, concept, rel, w)
        if len(self._best_edges_cache) >= 4096:
            self._best_edges_cache.clear()
        self._best_edges_cache[concept] = out
        return out

    def phi(self, g_i: int, g_j: int) -> Optional[Assertion]:
        """Strongest direct assertion between two concepts, either direction.

        Returns the max-|weight| edge as an Assertion whose start/end reflect
        the stored direction, or None when no direct edge exists. Ties break
        on relation id then outgoing-before-incoming.
        """
        self._check_id(g_i)
        self._check_id(g_j)
        s = self._slice(g_i)
        nbrs = self._nbr[s]
        lo = int(np.searchsorted(nbrs, g_j, side="left"))
        hi = int(np.searchsorted(nbrs, g_j, side="right"))
        if lo == hi:
            return None
        best = None
        for off in range(lo, hi):
            idx = s.start + off
            key = (-abs(float(self._wt[idx])), int(self._rel[idx]), int(self._dir[idx]))
            if best is None or key < best[0]:
                best = (key, idx)
        idx = best[1]
        w = float(self._wt[idx])
        rel = self._relations[int(self._rel[idx])]
        if int(self._dir[idx]) == DIR_OUT:
            return Assertion(g_i, g_j, rel, w)
        return Assertion(g_j, g_i, rel, w)

    # -- persistence ---------------------------------------------------

    @property
    def checksum(self) -> int:
        """64-bit digest of the serialized index (computed lazily)."""
        if self._checksum is None:
            buf = io.BytesIO()
            _write_index(self, buf)
            self._checksum = struct.unpack("<Q", buf.getvalue()[-8:])[0]
        return self._checksum


def build_network(
    lines: Iterable[str | bytes], config: IngestConfig = IngestConfig()
) -> SemanticNetwork:
    """Stream the dump into a SemanticNetwork.

    Per-line failures are counted, never fatal. Duplicate (start, end,
    relation) edges aggregate to the strongest assertion (max |weight|; the
    sign is fixed by the relation, so this is max over the dump's raw
    weights). Self-loops are dropped.
    """
    uri_to_id: dict[str, int] = {}
    uris: list[str] = []
    rel_to_id: dict[str, int] = {}
    relations: list[str] = []
    agg: dict[tuple[int, int, int], float] = {}
    counters = {
        "lines": 0,
        "retained": 0,
        "skipped_language": 0,
        "skipped_self_loop": 0,
        "errors": 0,
        "duplicates": 0,
    }

    def intern_uri(u: str) -> int:
        i = uri_to_id.get(u)
        if i is None:
            i = len(uris)
            uri_to_id[u] = i
            uris.append(u)
        return i

    for lineno, line in enumerate(lines, start=1):
        counters["lines"] += 1
        if not line or (isinstance(line, (str, bytes)) and not line.strip()):
            continue
        try:
            assertion = parse_assertion_line(line, config, lineno)
        except MalformedLine:
            counters["errors"] += 1
            continue
        if assertion is None:
            counters["skipped_language"] += 1
            continue
        if assertion.start == assertion.end:
            counters["skipped_self_loop"] += 1
            continue
        s = intern_uri(assertion.start)
        e = intern_uri(assertion.end)
        r = rel_to_id.get(assertion.relation)
        if r is None:
            r = len(relations)
            rel_to_id[assertion.relation] = r
            relations.append(assertion.relation)
        key = (s, e, r)
        prev = agg.get(key)
        if prev is None:
            agg[key] = assertion.weight
            counters["retained"] += 1
            if config.max_edges is not None and counters["retained"] >= config.max_edges:
                break
        else:
            counters["duplicates"] += 1
            if config.aggregation == "sum":
                agg[key] = prev + assertion.weight
            elif abs(assertion.weight) > abs(prev):
                agg[key] = assertion.weight

    n = len(uris)
    m = len(agg)
    starts = np.empty(m, dtype=np.int64)
    ends = np.empty(m, dtype=np.int64)
    rels = np.empty(m, dtype=np.int64)
    wts = np.empty(m, dtype=np.float64)
    for i, ((s, e, r), w) in enumerate(agg.items()):
        starts[i], ends[i], rels[i], wts[i] = s, e, r, w

    # Double every edge: once under its start (outgoing), once under its end.
    src = np.concatenate([starts, ends])
    nbr = np.concatenate([ends, starts])
    rel = np.concatenate([rels, rels])
    wt = np.concatenate([wts, wts])
    direction = np.concatenate(
        [np.zeros(m, dtype=np.uint8), np.ones(m, dtype=np.uint8)]
    )
    order = np.lexsort((direction, rel, nbr, src))
    src, nbr, rel, wt, direction = (
        src[order],
        nbr[order],
        rel[order],
        wt[order],
        direction[order],
    )
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])

    counters["concepts"] = n
    counters["edges"] = m
    return SemanticNetwork(
        uris,
        relations,
        indptr.astype("<i8"),
        nbr.astype("<i4"),
        rel.astype("<i4"),
        wt.astype("<f8"),
        direction,
        stats=counters,
    )


# -- binary index format ------------------------------------------------
#
# magic(8) | version(<u2) | sections | blake2b-64 digest of all prior bytes
# sections, in order, each preceded by its byte length (<u8):
#   relation string table, concept string table, adjacency arrays, vocabulary


def _string_section(items: list[str]) -> bytes:
    encoded = [s.encode("utf-8") for s in items]
    offsets = np.zeros(len(encoded) + 1, dtype="<i8")
    np.cumsum([len(b) for b in encoded], out=offsets[1:])
    blob = b"".join(encoded)
    head = struct.pack("<q", len(encoded))
    return head + offsets.tobytes() + blob


def _read_string_section(payload: bytes) -> list[str]:
    if len(payload) < 8:
        raise CorruptIndex("truncated string section")
    (count,) = struct.unpack_from("<q", payload, 0)
    off_end = 8 + (count + 1) * 8
    if count < 0 or len(payload) < off_end:
        raise CorruptIndex("truncated string offsets")
    offsets = np.frombuffer(payload, dtype="<i8", count=count + 1, offset=8)
    blob = payload[off_end:]
    if len(blob) != int(offsets[-1]):
        raise CorruptIndex("string blob length mismatch")
    return [
        blob[int(offsets[i]) : int(offsets[i + 1])].decode("utf-8")
        for i in range(count)
    ]


def _write_section(out: BinaryIO, payload: bytes, hasher) -> None:
    head = struct.pack("<Q", len(payload))
    out.write(head)
    out.write(payload)
    hasher.update(head)
    hasher.update(payload)


def _write_index(network: SemanticNetwork, out: BinaryIO) -> None:
    hasher = hashlib.blake2b(digest_size=8)
    header = MAGIC + struct.pack("<H", FORMAT_VERSION)
    out.write(header)
    hasher.update(header)

    _write_section(out, _string_section(network._relations), hasher)
    _write_section(out, _string_section(network._uris), hasher)

    adj = (
        struct.pack(
            "<qq", network.concept_count, len(network._nbr)
        )
        + network._indptr.astype("<i8").tobytes()
        + network._nbr.astype("<i4").tobytes()
        + network._rel.astype("<i4").tobytes()
        + network._wt.astype("<f8").tobytes()
        + network._dir.astype("u1").tobytes()
    )
    _write_section(out, adj, hasher)

    vocab = _string_section([u.split("/", 1)[1] for u in network._uris])
    _write_section(out, vocab, hasher)

    stats_blob = json.dumps(network.stats, sort_keys=True).encode("utf-8")
    _write_section(out, stats_blob, hasher)

    out.write(hasher.digest())


def persist_index(network: SemanticNetwork, path: str) -> None:
    """Write the network to `path` in the versioned binary index format."""
    with open(path, "wb") as f:
        _write_index(network, f)


def _read_exact(buf: memoryview, pos: int, size: int, what: str) -> memoryview:
    if pos + size > len(buf):
        raise CorruptIndex(f"truncated index: {what}")
    return buf[pos : pos + size]


def load_index(path: str) -> SemanticNetwork:
    """Load a persisted index; verifies magic, version, and checksum.

    The checksum pass touches every byte regardless, so the whole file is
    read up front; adjacency arrays are copied out of the buffer once.
    """
    with open(path, "rb") as f:
        data = f.read()
    return _parse_index(memoryview(data))


def _parse_index(raw: memoryview) -> SemanticNetwork:
    if len(raw) < len(MAGIC) + 2 + 8:
        raise CorruptIndex("file too small")
    if bytes(raw[: len(MAGIC)]) != MAGIC:
        raise CorruptIndex("bad magic bytes")
    (version,) = struct.unpack_from("<H", raw, len(MAGIC))
    if version != FORMAT_VERSION:
        raise VersionMismatch(
            f"index format version {version}, expected {FORMAT_VERSION}"
        )
    body, trailer = raw[:-8], raw[-8:]
    digest = hashlib.blake2b(body, digest_size=8).digest()
    if digest != bytes(trailer):
        raise CorruptIndex("checksum mismatch")
    checksum = struct.unpack("<Q", trailer)[0]

    pos = len(MAGIC) + 2
    sections = []
    for name in ("relations", "concepts", "adjacency", "vocabulary", "stats"):
        head = _read_exact(body, pos, 8, f"{name} header")
        (size,) = struct.unpack("<Q", head)
        pos += 8
        sections.append(bytes(_read_exact(body, pos, size, name)))
        pos += size
    if pos != len(body):
        raise CorruptIndex("trailing bytes after sections")

    relations = _read_string_section(sections[0])
    uris = _read_string_section(sections[1])

    adj = sections[2]
    if len(adj) < 16:
        raise CorruptIndex("truncated adjacency header")
    n, entries = struct.unpack_from("<qq", adj, 0)
    if n != len(uris) or n < 0 or entries < 0:
        raise CorruptIndex("adjacency header inconsistent")
    expected = 16 + (n + 1) * 8 + entries * (4 + 4 + 8 + 1)
    if len(adj) != expected:
        raise CorruptIndex("adjacency size mismatch")
    pos = 16
    indptr = np.frombuffer(adj, dtype="<i8", count=n + 1, offset=pos).copy()
    pos += (n + 1) * 8
    nbr = np.frombuffer(adj, dtype="<i4", count=entries, offset=pos).copy()
    pos += entries * 4
    rel = np.frombuffer(adj, dtype="<i4", count=entries, offset=pos).copy()
    pos += entries * 4
    wt = np.frombuffer(adj, dtype="<f8", count=entries, offset=pos).copy()
    pos += entries * 8
    direction = np.frombuffer(adj, dtype="u1", count=entries, offset=pos).copy()

    vocab_terms = _read_string_section(sections[3])
    if vocab_terms != [u.split("/", 1)[1] for u in uris]:
        raise CorruptIndex("vocabulary section disagrees with concept table")
    stats = json.loads(sections[4].decode("utf-8")) if sections[4] else {}

    return SemanticNetwork(
        uris, relations, indptr, nbr, rel, wt, direction, stats=stats, checksum=checksum
    )


def open_dump(path: str) -> Iterator[bytes]:
    """Iterate lines of a dump file, transparently un-gzipping by magic bytes."""
    with open(path, "rb") as f:
        head = f.read(2)
        f.seek(0)
        if head == b"\x1f\x8b":
            with gzip.open(f) as gz:
                yield from gz
        else:
            yield from f
