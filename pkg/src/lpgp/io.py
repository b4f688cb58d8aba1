"""METIS graph files and partition files.

A METIS file starts with ``n m [fmt]`` followed by one line per node.  With
node weights (``fmt`` 10 or 11) a line starts with the weight; the rest are
1-based neighbour IDs, each followed by the edge weight when ``fmt`` is 1 or
11.  Lines starting with ``%`` are comments.
"""
from __future__ import annotations

import os

import numpy as np

from .graph import Graph, weighted_counts

_FORMATS = {0: (False, False), 1: (False, True), 10: (True, False), 11: (True, True)}


class ParseError(ValueError):
    """Malformed input file; ``line`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message: str, line: int = 0, path=None):
        self.reason = message
        self.line = line
        self.path = path
        where = f"{path}:" if path else ""
        where += f"{line}: " if line else (" " if where else "")
        super().__init__(f"{where}{message}")


def _content_lines(fh):
    for lineno, raw in enumerate(fh, 1):
        s = raw.strip()
        if s.startswith("%"):
            continue
        yield lineno, s


def _ints(tokens, lineno, what):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"non-integer {what}", lineno) from None


def parse_metis(lines) -> Graph:
    """Parse METIS text given as an iterable of lines."""
    it = _content_lines(lines)
    for lineno, s in it:
        if s:
            header_line, header = lineno, s.split()
            break
    else:
        raise ParseError("empty file: missing header", 1)
    if len(header) < 2 or len(header) > 4:
        raise ParseError("header must be 'n m [fmt [ncon]]'", header_line)
    vals = _ints(header[:2], header_line, "header field")
    n, m = vals
    fmt = 0
    if len(header) >= 3:
        try:
            fmt = int(header[2])
        except ValueError:
            raise ParseError(f"bad format code {header[2]!r}", header_line) from None
    if fmt not in _FORMATS:
        raise ParseError(f"unsupported format code {header[2]!r} (use 0, 1, 10 or 11)", header_line)
    if len(header) == 4 and header[3] != "1":
        raise ParseError("multiple node constraints are not supported", header_line)
    if n < 0 or m < 0:
        raise ParseError("header: negative n or m", header_line)
    has_vw, has_ew = _FORMATS[fmt]
    step = 2 if has_ew else 1

    vwgt = np.ones(n, dtype=np.int64)
    src, dst, wt, where = [], [], [], []
    v = 0
    for lineno, s in it:
        if v == n:
            if s:
                raise ParseError(f"more than n={n} node lines", lineno)
            continue
        toks = _ints(s.split(), lineno, "entry")
        if has_vw:
            if not toks:
                raise ParseError(f"node {v + 1}: missing node weight", lineno)
            if toks[0] <= 0:
                raise ParseError(f"node {v + 1}: node weight must be positive", lineno)
            vwgt[v] = toks[0]
            toks = toks[1:]
        if len(toks) % step:
            raise ParseError(f"node {v + 1}: neighbour without edge weight", lineno)
        nb = toks[0::step]
        w = toks[1::step] if has_ew else [1] * len(nb)
        for u, ew in zip(nb, w):
            if u < 1 or u > n:
                raise ParseError(f"node {v + 1}: neighbour {u} outside 1..{n}", lineno)
            if u == v + 1:
                raise ParseError(f"node {v + 1}: self-loop", lineno)
            if ew <= 0:
                raise ParseError(f"node {v + 1}: edge weight must be positive", lineno)
        src.extend([v] * len(nb))
        dst.extend(u - 1 for u in nb)
        wt.extend(w)
        where.extend([lineno] * len(nb))
        v += 1
    if v < n:
        raise ParseError(f"expected {n} node lines, found {v}")
    if len(src) != 2 * m:
        raise ParseError(f"header declares m={m} edges but adjacency lists hold {len(src) / 2:g}",
                         header_line)
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    wt = np.asarray(wt, dtype=np.int64)
    _check_symmetric(n, src, dst, wt, np.asarray(where, dtype=np.int64))
    return Graph._from_directed(n, src, dst, wt, vwgt)


def _check_symmetric(n, src, dst, wt, where):
    """Every directed entry needs a reverse twin of the same (merged) weight."""
    if not len(src):
        return
    key = src * n + dst
    uniq, inv = np.unique(key, return_inverse=True)
    merged = weighted_counts(inv.ravel(), wt)
    rev = (uniq % n) * n + uniq // n
    pos = np.searchsorted(uniq, rev)
    pos[pos == len(uniq)] = 0
    ok = (uniq[pos] == rev) & (merged[pos] == merged)
    if ok.all():
        return
    bad_keys = uniq[~ok]
    first = np.flatnonzero(np.isin(key, bad_keys))[0]
    u, v = int(src[first]) + 1, int(dst[first]) + 1
    raise ParseError(f"asymmetric adjacency: edge {u}-{v} has no matching entry {v}-{u} of equal weight",
                     int(where[first]))


def read_metis(path) -> Graph:
    try:
        with open(path, encoding="ascii") as fh:
            return parse_metis(fh)
    except ParseError as exc:
        raise ParseError(exc.reason, exc.line, path) from None
    except UnicodeDecodeError:
        raise ParseError("not a text file", 0, path) from None


def format_metis(graph: Graph) -> str:
    has_vw = bool((graph.vwgt != 1).any())
    has_ew = bool((graph.adjwgt != 1).any())
    fmt = {(False, False): "", (False, True): " 1", (True, False): " 10", (True, True): " 11"}[(has_vw, has_ew)]
    out = [f"{graph.n} {graph.m}{fmt}"]
    for v in range(graph.n):
        lo, hi = graph.xadj[v], graph.xadj[v + 1]
        parts = [str(int(graph.vwgt[v]))] if has_vw else []
        nb = graph.adjncy[lo:hi] + 1
        if has_ew:
            pairs = np.empty(2 * (hi - lo), dtype=np.int64)
            pairs[0::2], pairs[1::2] = nb, graph.adjwgt[lo:hi]
            parts.extend(map(str, pairs.tolist()))
        else:
            parts.extend(map(str, nb.tolist()))
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


def write_metis(graph: Graph, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_metis(graph))


def read_partition(path, n: int | None = None, k: int | None = None) -> np.ndarray:
    """One block ID per line, node 0 first."""
    labels = []
    try:
        with open(path, encoding="ascii") as fh:
            for lineno, s in _content_lines(fh):
                if not s:
                    continue
                try:
                    b = int(s)
                except ValueError:
                    raise ParseError(f"bad block ID {s!r}", lineno, path) from None
                if b < 0 or (k is not None and b >= k):
                    raise ParseError(f"block ID {b} outside 0..{'k-1' if k is None else k - 1}", lineno, path)
                labels.append(b)
    except UnicodeDecodeError:
        raise ParseError("not a text file", 0, path) from None
    if n is not None and len(labels) != n:
        raise ParseError(f"expected {n} block IDs, found {len(labels)}", 0, path)
    return np.asarray(labels, dtype=np.int64)


def write_partition(labels, path):
    text = "\n".join(str(int(b)) for b in np.asarray(labels)) + "\n"
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write(text)
    os.replace(tmp, path)
