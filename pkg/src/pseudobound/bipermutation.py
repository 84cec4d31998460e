"""
Rerouting counts of a patch computed from its bipermutation alone.

A bipermutation is the cyclic sequence of segment labels met when walking
once around the boundary of a patch; every label occurs exactly twice.
Two segments cross inside the patch exactly when their occurrences
interleave (``a z a z``) and are parallel when they nest (``a a z z``).

The number of reroutings F is computed by cutting along a segment ``z``:
every legal order of the crossings on ``z`` is a linear extension of a
partial order read off the bipermutation, and each order splits the patch
into two smaller patches whose counts multiply::

    F(P) = sum over orders of F(P1) * F(P2)

Sub-results are memoized under a canonical form that is invariant under
relabeling, rotation and reflection.

>>> count_reroutings((1, 2, 3, 1, 2, 3))
2
>>> count_reroutings(gen_complete_sequence(5))
62
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterator, Sequence

import mpmath

__all__ = [
    "Bipermutation",
    "CrossingPoset",
    "MemoTable",
    "CapacityExceeded",
    "crossing_pairs",
    "choose_cut",
    "crossing_poset",
    "linear_extensions",
    "split",
    "canonical_form",
    "count_reroutings",
    "ReroutingCounter",
    "log2_floor",
    "log2_of_count",
    "gen_complete_sequence",
    "iter_bipermutations",
    "canonical_bipermutations",
    "format_decimal",
]

Label = Hashable


class CapacityExceeded(RuntimeError):
    """The counter ran out of memory or recursion depth; no count was produced."""


@dataclass(frozen=True)
class Bipermutation:
    """Cyclic sequence of segment labels, each appearing exactly twice.

    Equality and hashing use the raw sequence. Use :func:`canonical_form`
    to compare up to relabeling, rotation and reflection.
    """

    sequence: tuple

    def __post_init__(self):
        seq = tuple(self.sequence)
        object.__setattr__(self, "sequence", seq)
        counts: dict = {}
        for x in seq:
            counts[x] = counts.get(x, 0) + 1
        bad = sorted((str(k) for k, v in counts.items() if v != 2))
        if bad:
            raise ValueError(f"labels must occur exactly twice: {', '.join(bad)}")

    @classmethod
    def parse(cls, text: str) -> "Bipermutation":
        """Build from whitespace- or comma-separated integer tokens."""
        tokens = text.replace(",", " ").split()
        try:
            return cls(tuple(int(t) for t in tokens))
        except ValueError as exc:
            raise ValueError(f"malformed bipermutation {text!r}: {exc}") from None

    @property
    def labels(self) -> list:
        seen = []
        for x in self.sequence:
            if x not in seen:
                seen.append(x)
        return seen

    @property
    def segment_count(self) -> int:
        return len(self.sequence) // 2

    def __len__(self):
        return len(self.sequence)

    def __iter__(self):
        return iter(self.sequence)

    def __str__(self):
        return " ".join(str(x) for x in self.sequence)


@dataclass(frozen=True)
class CrossingPoset:
    """Forced order of the crossings along a cut segment ``z``.

    ``elements`` are the labels crossing ``z``, listed in the order their
    endpoints appear after the first occurrence of ``z``. ``forced_pairs``
    holds ``(a, b)`` when the crossing with ``a`` must precede the crossing
    with ``b`` on the walk from the first occurrence of ``z`` to the second.
    """

    cut: Label
    elements: tuple
    forced_pairs: frozenset = field(default_factory=frozenset)

    def is_forced(self, a, b) -> bool:
        return (a, b) in self.forced_pairs

    def is_extension(self, order: Sequence) -> bool:
        if len(order) != len(self.elements) or set(order) != set(self.elements):
            return False
        where = {x: i for i, x in enumerate(order)}
        return all(where[a] < where[b] for a, b in self.forced_pairs)


def _seq(bip) -> tuple:
    if isinstance(bip, Bipermutation):
        return bip.sequence
    return tuple(bip)


def _positions(seq: Sequence) -> dict:
    pos: dict = {}
    for i, x in enumerate(seq):
        if x in pos:
            pos[x] = (pos[x][0], i)
        else:
            pos[x] = (i, -1)
    return pos


def _interleave(p, q) -> bool:
    return p[0] < q[0] < p[1] < q[1] or q[0] < p[0] < q[1] < p[1]


def crossing_pairs(bip) -> set:
    """Unordered pairs ``frozenset({a, b})`` of segments that cross."""
    pos = _positions(_seq(bip))
    labels = list(pos)
    out = set()
    for i, a in enumerate(labels):
        pa = pos[a]
        for b in labels[i + 1:]:
            if _interleave(pa, pos[b]):
                out.add(frozenset((a, b)))
    return out


def _arcs(seq: tuple, z) -> tuple[tuple, tuple]:
    p = seq.index(z)
    q = seq.index(z, p + 1)
    return seq[p + 1:q], seq[q + 1:] + seq[:p]


def choose_cut(bip) -> Label:
    """Pick the cut segment.

    Minimizes the size of the larger side, then the number of crossings on
    the cut, then the label itself.  A side's size counts the segments met
    on that arc that cross something other than the cut; the rest cannot
    cross anything after the split.
    """
    seq = _seq(bip)
    pos = _positions(seq)
    labels = list(pos)
    adj: dict = {x: set() for x in labels}
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            if _interleave(pos[a], pos[b]):
                adj[a].add(b)
                adj[b].add(a)
    best = None
    for z in labels:
        if not adj[z]:
            continue
        first, second = _arcs(seq, z)
        sizes = [sum(1 for x in set(side) if len(adj[x]) > (z in adj[x])) for side in (first, second)]
        key = (max(sizes), len(adj[z]), z)
        if best is None or key < best:
            best = key
    if best is None:
        raise ValueError("bipermutation has no crossing pair; nothing to cut")
    return best[2]


def crossing_poset(bip, z) -> CrossingPoset:
    """Partial order of the crossings on segment ``z``.

    For two segments crossing ``z`` that are parallel to each other, the
    one whose endpoint comes first after the first ``z`` must be crossed
    first. Pairs that cross each other stay incomparable.
    """
    seq = _seq(bip)
    first, second = _arcs(seq, z)
    in_second = {x: i for i, x in enumerate(second)}
    elements = tuple(x for x in first if x in in_second)
    forced = set()
    for i, a in enumerate(elements):
        for b in elements[i + 1:]:
            # a precedes b in the first arc; nested iff b precedes a in the second
            if in_second[b] < in_second[a]:
                forced.add((a, b))
    return CrossingPoset(z, elements, frozenset(forced))


def linear_extensions(poset: CrossingPoset) -> Iterator[tuple]:
    """Yield every linear extension once.

    At each step the available minimal elements are tried in ascending
    label order.
    """
    elements = poset.elements
    n = len(elements)
    try:
        scan = sorted(range(n), key=elements.__getitem__)
    except TypeError:
        scan = list(range(n))
    index = {x: i for i, x in enumerate(elements)}
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for a, b in poset.forced_pairs:
        succ[index[a]].append(index[b])
        indeg[index[b]] += 1
    used = [False] * n
    order: list = []

    def rec():
        if len(order) == n:
            yield tuple(elements[i] for i in order)
            return
        for i in scan:
            if used[i] or indeg[i]:
                continue
            used[i] = True
            order.append(i)
            for j in succ[i]:
                indeg[j] -= 1
            yield from rec()
            for j in succ[i]:
                indeg[j] += 1
            order.pop()
            used[i] = False

    yield from rec()


def _split(seq: tuple, z, order: Sequence) -> tuple[tuple, tuple]:
    first, second = _arcs(seq, z)
    return first + tuple(reversed(order)), second + tuple(order)


def split(bip, z, order: Sequence) -> tuple[Bipermutation, Bipermutation]:
    """Cut along ``z`` with the crossings on ``z`` in ``order``.

    Returns the side bounded by the arc from the first to the second
    occurrence of ``z`` and the side bounded by the remaining arc.
    """
    seq = _seq(bip)
    poset = crossing_poset(seq, z)
    if not poset.is_extension(order):
        raise ValueError(f"{tuple(order)} is not a legal crossing order on {z!r}")
    p1, p2 = _split(seq, z, order)
    return Bipermutation(p1), Bipermutation(p2)


def _relabel_from(seq: Sequence, start: int, step: int) -> tuple:
    n = len(seq)
    names: dict = {}
    out = []
    i = start
    for _ in range(n):
        x = seq[i]
        v = names.get(x)
        if v is None:
            v = names[x] = len(names) + 1
        out.append(v)
        i = (i + step) % n
    return tuple(out)


def canonical_form(bip) -> tuple:
    """Lexicographic minimum over rotations and reflections, relabeled by first occurrence."""
    seq = _seq(bip)
    n = len(seq)
    if not n:
        return ()
    best = None
    for step in (1, -1):
        for start in range(n):
            cand = _relabel_from(seq, start, step)
            if best is None or cand < best:
                best = cand
    return best


def gen_complete_sequence(n: int) -> tuple:
    """``(1, ..., n, 1, ..., n)``: n segments crossing pairwise."""
    if n < 1:
        raise ValueError("n must be positive")
    return tuple(range(1, n + 1)) * 2


class MemoTable:
    """Canonical form -> count, with optional entry cap.

    When the cap is reached the table is emptied; that only costs time.
    """

    def __init__(self, cap: int | None = None):
        if cap is not None and cap < 1:
            raise ValueError("memo cap must be positive")
        self.cap = cap
        self._data: dict = {}
        self.hits = 0
        self.misses = 0
        self.discards = 0
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._data)

    def __contains__(self, key):
        return key in self._data

    def get(self, key):
        value = self._data.get(key)
        if value is None:
            self.misses += 1
        else:
            self.hits += 1
        return value

    def insert(self, key, value: int) -> int:
        if self.cap is not None and len(self._data) >= self.cap:
            with self._lock:
                if len(self._data) >= self.cap:
                    self._data.clear()
                    self.discards += 1
        existing = self._data.setdefault(key, value)
        if existing != value:
            raise AssertionError(f"memo conflict for {key}: {existing} != {value}")
        return existing

    def stats(self) -> dict:
        return {
            "entries": len(self._data),
            "hits": self.hits,
            "misses": self.misses,
            "discards": self.discards,
        }


def _reduce(seq: tuple) -> list[tuple]:
    """Drop crossing-free segments and split into crossing-connected blocks."""
    pos = _positions(seq)
    labels = list(pos)
    adj: dict = {x: [] for x in labels}
    for i, a in enumerate(labels):
        pa = pos[a]
        for b in labels[i + 1:]:
            if _interleave(pa, pos[b]):
                adj[a].append(b)
                adj[b].append(a)
    comp: dict = {}
    n_comp = 0
    for x in labels:
        if x in comp or not adj[x]:
            continue
        stack = [x]
        comp[x] = n_comp
        while stack:
            y = stack.pop()
            for w in adj[y]:
                if w not in comp:
                    comp[w] = n_comp
                    stack.append(w)
        n_comp += 1
    if n_comp == 1:
        return [tuple(x for x in seq if x in comp)]
    blocks: list[list] = [[] for _ in range(n_comp)]
    for x in seq:
        c = comp.get(x)
        if c is not None:
            blocks[c].append(x)
    return [tuple(b) for b in blocks]


class ReroutingCounter:
    """Memoized rerouting counter.

    A counter can be reused across patches; its memo table persists.
    ``threads > 1`` evaluates the top-level orders in a thread pool, giving
    the same result as a sequential run.
    """

    def __init__(self, memo: MemoTable | None = None, threads: int = 1):
        if threads < 1:
            raise ValueError("threads must be >= 1")
        self.memo = memo if memo is not None else MemoTable()
        self.threads = threads

    def count(self, bip, cut=None) -> int:
        seq = _seq(bip)
        Bipermutation(seq)
        try:
            if cut is None:
                return self._count(seq, top=True)
            return self._count_cut(seq, cut, top=True)
        except (RecursionError, MemoryError) as exc:
            raise CapacityExceeded(f"capacity exceeded while counting: {type(exc).__name__}") from None

    def _count(self, seq: tuple, top: bool = False) -> int:
        total = 1
        for block in _reduce(seq):
            if len(block) <= 4:
                continue
            key = canonical_form(block)
            value = self.memo.get(key)
            if value is None:
                value = self._count_cut(key, choose_cut(key), top=top)
                self.memo.insert(key, value)
            total *= value
        return total

    def _count_cut(self, seq: tuple, z, top: bool = False) -> int:
        poset = crossing_poset(seq, z)
        if not poset.elements:
            raise ValueError(f"segment {z!r} crosses nothing")
        first, second = _arcs(seq, z)

        def term(order):
            p1 = first + tuple(reversed(order))
            p2 = second + tuple(order)
            return self._count(p1) * self._count(p2)

        orders = linear_extensions(poset)
        if top and self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                return sum(pool.map(term, orders))
        return sum(term(o) for o in orders)


def count_reroutings(bip, memo: MemoTable | None = None, *, cut=None, threads: int = 1) -> int:
    """Exact number of reroutings of the patch with bipermutation ``bip``.

    ``cut`` forces the top-level cut segment; the result does not depend on it.
    """
    return ReroutingCounter(memo, threads).count(bip, cut=cut)


def log2_floor(x: int, places: int) -> Fraction:
    """``log2(x)`` rounded down to ``places`` decimals, as an exact fraction."""
    x = int(x)
    if x < 1:
        raise ValueError("log2 needs a positive count")
    if places < 0:
        raise ValueError("places must be >= 0")
    if x & (x - 1) == 0:
        return Fraction(x.bit_length() - 1)
    scale = 10 ** places
    prec = 64 + 4 * places + x.bit_length().bit_length()
    while True:
        with mpmath.workprec(prec):
            y = mpmath.log(mpmath.mpf(x), 2) * scale
            t = int(mpmath.floor(y))
            frac = y - t
            eps = (scale + abs(y)) * mpmath.mpf(2) ** (8 - prec)
            if eps < frac < 1 - eps:
                return Fraction(t, scale)
        prec *= 2


def format_decimal(value: Fraction, places: int) -> str:
    """Render a fraction already on the ``10**-places`` grid, rounding down otherwise."""
    scale = 10 ** places
    t = (value.numerator * scale) // value.denominator
    sign = "-" if t < 0 else ""
    t = abs(t)
    if not places:
        return f"{sign}{t}"
    return f"{sign}{t // scale}.{t % scale:0{places}d}"


def log2_of_count(x: int, places: int = 2) -> str:
    """Decimal string of ``log2(x)``, rounded down so it stays a lower bound."""
    return format_decimal(log2_floor(x, places), places)


def iter_bipermutations(segments: int) -> Iterator[tuple]:
    """All perfect matchings of ``2*segments`` positions, labeled by first occurrence."""
    n = 2 * segments
    seq = [0] * n

    def rec(next_label):
        try:
            i = seq.index(0)
        except ValueError:
            yield tuple(seq)
            return
        seq[i] = next_label
        for j in range(i + 1, n):
            if seq[j] == 0:
                seq[j] = next_label
                yield from rec(next_label + 1)
                seq[j] = 0
        seq[i] = 0

    if segments == 0:
        yield ()
        return
    yield from rec(1)


def canonical_bipermutations(segments: int) -> list[tuple]:
    """Distinct canonical forms on exactly ``segments`` segments."""
    return sorted({canonical_form(s) for s in iter_bipermutations(segments)})


def relabel(bip, mapping) -> tuple:
    return tuple(mapping[x] for x in _seq(bip))


def rotate(bip, k: int) -> tuple:
    seq = _seq(bip)
    if not seq:
        return seq
    k %= len(seq)
    return seq[k:] + seq[:k]
