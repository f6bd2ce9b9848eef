"""Edge-update streams, pass counting and word-level space accounting.

A stream is a fixed sequence of edge updates over the vertex set ``[0, n)``.
Algorithms never index into it; they ask a :class:`PassCounter` to replay it,
and every replay is one pass.  All retained state is charged to a
:class:`SpaceLedger` in words, where one word is a vertex id, a counter, or a
bit string of at most ``word_bits(n)`` bits, and an edge costs two words.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence


class StreamError(ValueError):
    """A malformed update sequence or stream file.

    ``position`` is the 1-based index of the offending update (or the line
    number when parsing a file).
    """

    def __init__(self, message: str, position: int | None = None, unit: str = "position"):
        self.reason = message
        self.position = position
        if position is not None:
            message = f"{message} (at {unit} {position})"
        super().__init__(message)


class ModelError(ValueError):
    """An algorithm was handed a stream in a model it does not support."""


class Op(enum.Enum):
    INSERT = "+"
    DELETE = "-"


class Model(enum.Enum):
    INSERT_ONLY = "insert-only"
    INSERT_DELETE = "insert-delete"

    @classmethod
    def parse(cls, text: str) -> "Model":
        try:
            return cls(text)
        except ValueError:
            raise StreamError(f"unknown stream model {text!r}") from None


class EdgeUpdate(NamedTuple):
    """One update, stored canonically with ``u < v``."""

    u: int
    v: int
    op: Op = Op.INSERT

    @property
    def edge(self) -> tuple[int, int]:
        return (self.u, self.v)


def canonical(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def word_bits(n: int) -> int:
    """Bits in one word for a stream over ``n`` vertices (at least 1)."""
    return max(1, math.ceil(math.log2(max(n, 2))))


def bitstring_words(bits: int, n: int) -> int:
    return -(-bits // word_bits(n)) if bits > 0 else 0


@dataclass(frozen=True)
class ReplayableStream:
    """An immutable, replayable update sequence.

    Construct through :func:`open_stream`, which validates the model
    invariants; the constructor itself trusts its arguments.
    """

    n: int
    updates: tuple[EdgeUpdate, ...]
    model: Model = Model.INSERT_ONLY

    def __len__(self) -> int:
        return len(self.updates)

    def net_edges(self) -> set[tuple[int, int]]:
        """Edges with net multiplicity one at the end of the stream."""
        mult: Counter[tuple[int, int]] = Counter()
        for u, v, op in self.updates:
            mult[(u, v)] += 1 if op is Op.INSERT else -1
        return {e for e, c in mult.items() if c}

    def edge_pairs(self) -> tuple[tuple[int, int], ...]:
        """The ``(u, v)`` pairs of an insert-only stream, in stream order."""
        if self.model is not Model.INSERT_ONLY:
            raise ModelError("edge_pairs() is only defined for insert-only streams")
        return self._pairs

    @cached_property
    def _pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u, v, _ in self.updates)


def open_stream(
    updates: Iterable[EdgeUpdate | tuple],
    n: int,
    model: Model | str = Model.INSERT_ONLY,
) -> ReplayableStream:
    """Validate ``updates`` and freeze them into a :class:`ReplayableStream`.

    Updates may be :class:`EdgeUpdate` values or plain ``(u, v)`` /
    ``(u, v, op)`` tuples; endpoints are canonicalised to ``u < v``.
    Raises :class:`StreamError` naming the 1-based position of the first
    self-loop, out-of-range id, delete without a live copy, or (at the end)
    an edge left with net multiplicity above one.
    """
    if isinstance(model, str):
        model = Model.parse(model)
    if n < 0:
        raise StreamError(f"vertex count must be non-negative, got {n}")
    out: list[EdgeUpdate] = []
    mult: Counter[tuple[int, int]] = Counter()
    for pos, raw in enumerate(updates, start=1):
        if isinstance(raw, EdgeUpdate):
            u, v, op = raw
        elif len(raw) == 2:
            (u, v), op = raw, Op.INSERT
        else:
            u, v, op = raw
            if isinstance(op, str):
                op = Op(op)
        if u == v:
            raise StreamError(f"self-loop on vertex {u}", pos)
        if not (0 <= u < n and 0 <= v < n):
            raise StreamError(f"edge ({u}, {v}) outside vertex range [0, {n})", pos)
        u, v = canonical(u, v)
        if op is Op.DELETE:
            if model is Model.INSERT_ONLY:
                raise StreamError("delete in an insert-only stream", pos)
            if mult[(u, v)] <= 0:
                raise StreamError(f"delete of ({u}, {v}) makes its multiplicity negative", pos)
            mult[(u, v)] -= 1
        else:
            mult[(u, v)] += 1
            if model is Model.INSERT_ONLY and mult[(u, v)] > 1:
                raise StreamError(f"parallel edge ({u}, {v})", pos)
        out.append(EdgeUpdate(u, v, op))
    for (u, v), c in mult.items():
        if c > 1:
            last = max(i for i, e in enumerate(out, start=1) if e.edge == (u, v))
            raise StreamError(f"edge ({u}, {v}) ends with net multiplicity {c}", last)
    return ReplayableStream(n, tuple(out), model)


def insert_only(n: int, edges: Iterable[tuple[int, int]]) -> ReplayableStream:
    """Shorthand for an insert-only stream over ``edges`` in the given order."""
    return open_stream(edges, n, Model.INSERT_ONLY)


@dataclass
class SpaceLedger:
    """Word-level accounting of retained algorithm state."""

    current_words: int = 0
    peak_words: int = 0

    def charge(self, delta_words: int) -> "SpaceLedger":
        new = self.current_words + delta_words
        if new < 0:
            raise ValueError(
                f"ledger underflow: {self.current_words} + ({delta_words}) < 0"
            )
        self.current_words = new
        if new > self.peak_words:
            self.peak_words = new
        return self

    def release(self, words: int) -> "SpaceLedger":
        return self.charge(-words)


def ledger_charge(ledger: SpaceLedger, delta_words: int) -> SpaceLedger:
    return ledger.charge(delta_words)


@dataclass
class PassCounter:
    """Counts how many times a stream has been replayed from the start.

    A pass is counted when the replay begins, so an algorithm that stops
    reading part way through still pays for the pass.
    """

    stream: ReplayableStream
    passes: int = 0

    def replay(self) -> Iterator[EdgeUpdate]:
        self.passes += 1
        return iter(self.stream.updates)

    def replay_edges(self) -> Iterator[tuple[int, int]]:
        """Replay an insert-only stream as bare ``(u, v)`` pairs."""
        self.passes += 1
        return iter(self.stream.edge_pairs())


# -- text format -----------------------------------------------------------

def parse_stream(text: str) -> ReplayableStream:
    """Parse the update-stream text format.

    The header is ``n <count> <insert-only|insert-delete>``; each following
    non-blank line is ``+ u v``, ``- u v`` or (insert-only) ``u v``.  Lines
    starting with ``#`` or ``truth`` are ignored.
    """
    lines = text.splitlines()
    header_seen = False
    n = 0
    model = Model.INSERT_ONLY
    updates: list[tuple[int, int, Op]] = []
    line_of: list[int] = []
    for lineno, line in enumerate(lines, start=1):
        parts = line.split()
        if not parts or parts[0].startswith("#") or parts[0] == "truth":
            continue
        if not header_seen:
            if parts[0] != "n" or len(parts) not in (2, 3):
                raise StreamError("expected header 'n <count> <model>'", lineno, "line")
            try:
                n = int(parts[1])
            except ValueError:
                raise StreamError(f"bad vertex count {parts[1]!r}", lineno, "line") from None
            if len(parts) == 3:
                try:
                    model = Model.parse(parts[2])
                except StreamError as exc:
                    raise StreamError(exc.reason, lineno, "line") from None
            header_seen = True
            continue
        if parts[0] in "+-" and len(parts) == 3:
            op = Op(parts[0])
            fields = parts[1:]
        elif len(parts) == 2:
            op = Op.INSERT
            fields = parts
        else:
            raise StreamError(f"cannot parse update {line.strip()!r}", lineno, "line")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise StreamError(f"non-integer vertex in {line.strip()!r}", lineno, "line") from None
        updates.append((u, v, op))
        line_of.append(lineno)
    if not header_seen:
        raise StreamError("missing header line", 1, "line")
    try:
        return open_stream(updates, n, model)
    except StreamError as exc:
        pos = exc.position
        lineno = line_of[pos - 1] if pos else None
        raise StreamError(exc.reason, lineno, "line") from None


def format_stream(stream: ReplayableStream, comments: Sequence[str] = ()) -> str:
    out = [f"n {stream.n} {stream.model.value}"]
    out.extend(f"# {c}" for c in comments)
    for u, v, op in stream.updates:
        out.append(f"{op.value} {u} {v}")
    return "\n".join(out) + "\n"


def read_stream(path: str | Path) -> ReplayableStream:
    return parse_stream(Path(path).read_text())


def write_stream(stream: ReplayableStream, path: str | Path, comments: Sequence[str] = ()) -> None:
    Path(path).write_text(format_stream(stream, comments))
