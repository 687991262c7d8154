"""Binary PGM images and GSIG graph-signal text files.

PGM: ``P5`` header (width, height, maxval separated by whitespace, ``#``
comments allowed), a single whitespace byte, then raw samples; 8-bit for
maxval 255, 16-bit big-endian for maxval 65535. Samples map to ``s / maxval``
on read and ``floor(clamp(v, 0, 1) * maxval + 0.5)`` on write.

GSIG::

    GSIG 1 <N> <E> <dim>
    <id> <value> [<coord> x dim]     # N node lines, any order, ids 0..N-1
    <i> <j> <dist>                   # E edge lines

Floats are written with ``repr`` so text round trips are bit exact.
"""

from __future__ import annotations

import os

import numpy as np

from .core import GeneralGraph, Grid2D, Signal
from .errors import FormatError, TopologyError, ValidationError

MAXVALS = (255, 65535)
_WS = b" \t\n\r\v\f"


def read_pgm(path) -> Signal:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_pgm(data, path=os.fspath(path))


def parse_pgm(data: bytes, path=None) -> Signal:
    pos = 0
    line = 1
    tokens = []
    n = len(data)
    while len(tokens) < 4:
        # skip whitespace and comments
        while pos < n and (data[pos] in _WS or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                while pos < n and data[pos] != ord("\n"):
                    pos += 1
                continue
            if data[pos] == ord("\n"):
                line += 1
            pos += 1
        if pos >= n:
            raise FormatError("truncated PGM header", path, line)
        start = pos
        while pos < n and data[pos] not in _WS and data[pos] != ord("#"):
            pos += 1
        tokens.append((data[start:pos], line))
    magic, mline = tokens[0]
    if magic != b"P5":
        raise FormatError(f"expected binary PGM magic 'P5', got {magic[:8]!r}", path, mline)
    dims = []
    for name, (tok, tline) in zip(("width", "height", "maxval"), tokens[1:]):
        try:
            val = int(tok.decode("ascii"))
        except (UnicodeDecodeError, ValueError):
            raise FormatError(f"bad {name} {tok[:16]!r}", path, tline) from None
        if val < 1:
            raise FormatError(f"{name} must be positive, got {val}", path, tline)
        dims.append(val)
    width, height, maxval = dims
    if maxval not in MAXVALS:
        raise FormatError(f"unsupported maxval {maxval} (use 255 or 65535)", path, tokens[3][1])
    if pos >= n or data[pos] not in _WS:
        raise FormatError("missing whitespace after maxval", path, tokens[3][1])
    pos += 1
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    need = width * height * dtype.itemsize
    payload = data[pos:]
    if len(payload) < need:
        raise FormatError(f"truncated payload: {len(payload)} of {need} bytes", path)
    if len(payload) > need:
        raise FormatError(f"{len(payload) - need} trailing bytes after payload", path)
    samples = np.frombuffer(payload, dtype=dtype).astype(np.float64)
    if np.any(samples > maxval):
        raise FormatError(f"sample exceeds maxval {maxval}", path)
    return Signal(samples / maxval, Grid2D(height, width))


def pgm_bytes(signal: Signal, maxval: int = 65535) -> bytes:
    if not isinstance(signal.topology, Grid2D):
        raise TopologyError("PGM output needs a Grid2D signal")
    if maxval not in MAXVALS:
        raise ValidationError(f"unsupported maxval {maxval} (use 255 or 65535)")
    rows, cols = signal.topology.shape
    q = np.floor(np.clip(signal.values, 0.0, 1.0) * maxval + 0.5)
    dtype = ">u2" if maxval > 255 else "u1"
    header = f"P5\n{cols} {rows}\n{maxval}\n".encode("ascii")
    return header + q.astype(dtype).tobytes()


def write_pgm(path, signal: Signal, maxval: int = 65535) -> None:
    data = pgm_bytes(signal, maxval)
    with open(path, "wb") as fh:
        fh.write(data)


def read_graph_signal(path) -> Signal:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_graph_signal(text, path=os.fspath(path))


def parse_graph_signal(text: str, path=None) -> Signal:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty file", path, 1)
    head = lines[0].split()
    if len(head) != 5 or head[0] != "GSIG":
        raise FormatError("header must be 'GSIG 1 <N> <E> <dim>'", path, 1)
    if head[1] != "1":
        raise FormatError(f"unsupported GSIG version {head[1]!r}", path, 1)
    try:
        n, e, dim = (int(t) for t in head[2:])
    except ValueError:
        raise FormatError("N, E and dim must be integers", path, 1) from None
    if n < 1 or e < 0 or dim < 0:
        raise FormatError("need N >= 1, E >= 0, dim >= 0", path, 1)
    if len(lines) != 1 + n + e:
        raise FormatError(f"expected {1 + n + e} lines, found {len(lines)}", path, len(lines))

    values = np.empty(n)
    coords = np.empty((n, dim)) if dim else None
    seen = np.zeros(n, dtype=bool)
    for lineno in range(2, 2 + n):
        parts = lines[lineno - 1].split()
        if len(parts) != 2 + dim:
            raise FormatError(f"node line needs {2 + dim} fields, got {len(parts)}", path, lineno)
        idx = _int(parts[0], "node id", path, lineno)
        if not 0 <= idx < n:
            raise FormatError(f"node id {idx} outside 0..{n - 1}", path, lineno)
        if seen[idx]:
            raise FormatError(f"duplicate node id {idx}", path, lineno)
        seen[idx] = True
        values[idx] = _float(parts[1], "value", path, lineno)
        for c in range(dim):
            coords[idx, c] = _float(parts[2 + c], "coordinate", path, lineno)

    pairs = np.empty((e, 2), dtype=np.int64)
    dists = np.empty(e)
    edge_line = {}
    for k, lineno in enumerate(range(2 + n, 2 + n + e)):
        parts = lines[lineno - 1].split()
        if len(parts) != 3:
            raise FormatError(f"edge line needs 3 fields, got {len(parts)}", path, lineno)
        i = _int(parts[0], "edge endpoint", path, lineno)
        j = _int(parts[1], "edge endpoint", path, lineno)
        for end in (i, j):
            if not 0 <= end < n:
                raise FormatError(f"edge references unknown node {end}", path, lineno)
        if i == j:
            raise FormatError(f"self-loop on node {i}", path, lineno)
        key = (min(i, j), max(i, j))
        if key in edge_line:
            raise FormatError(f"duplicate edge {key} (first on line {edge_line[key]})", path, lineno)
        edge_line[key] = lineno
        d = _float(parts[2], "distance", path, lineno)
        if d < 0:
            raise FormatError(f"negative distance {d}", path, lineno)
        pairs[k] = key
        dists[k] = d
    graph = GeneralGraph(n, pairs, dists, coords)
    return Signal(values, graph)


def _int(tok, what, path, lineno):
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"bad {what} {tok!r}", path, lineno) from None


def _float(tok, what, path, lineno):
    try:
        val = float(tok)
    except ValueError:
        raise FormatError(f"bad {what} {tok!r}", path, lineno) from None
    if not np.isfinite(val):
        raise FormatError(f"non-finite {what} {tok!r}", path, lineno)
    return val


def graph_signal_text(signal: Signal) -> str:
    graph = signal.topology
    if not isinstance(graph, GeneralGraph):
        raise TopologyError("GSIG output needs a GeneralGraph signal")
    out = [f"GSIG 1 {graph.n_nodes} {len(graph.edges)} {graph.dim}"]
    for idx, val in enumerate(signal.values.tolist()):
        fields = [str(idx), repr(val)]
        if graph.positions is not None:
            fields += [repr(c) for c in graph.positions[idx].tolist()]
        out.append(" ".join(fields))
    for (i, j), d in zip(graph.edges.tolist(), graph.distances.tolist()):
        out.append(f"{i} {j} {d!r}")
    return "\n".join(out) + "\n"


def write_graph_signal(path, signal: Signal) -> None:
    text = graph_signal_text(signal)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def read_signal(path) -> Signal:
    """Read a PGM or GSIG file, sniffing the first bytes."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data.startswith(b"GSIG"):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError:
            raise FormatError("GSIG file is not valid UTF-8", os.fspath(path)) from None
        return parse_graph_signal(text, path=os.fspath(path))
    return parse_pgm(data, path=os.fspath(path))


def write_signal(path, signal: Signal, maxval: int = 65535) -> None:
    if isinstance(signal.topology, Grid2D):
        write_pgm(path, signal, maxval)
    else:
        write_graph_signal(path, signal)
