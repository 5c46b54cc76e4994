"""Bit-exact field persistence.

Format: one ASCII header line

    NSFIELD 1 <N> <L> <n> <p> <epsilon> <variant-tag>\n

followed by n^N little-endian IEEE-754 float64 values in row-major order.
Floats in the header are written with repr (shortest round-trip), so a
save/load cycle reproduces the header and the payload bit for bit.
"""

import numpy as np

from .errors import FormatError
from .grid import Field, Grid
from .potential import ProblemSpec, Variant

MAGIC = b"NSFIELD"
VERSION = 1

__all__ = ["save_field", "load_field", "load_field_with_meta"]


def save_field(f: Field, path, spec: ProblemSpec) -> None:
    header = "NSFIELD 1 {} {} {} {} {} {}\n".format(
        f.grid.dim, repr(f.grid.half_width), f.grid.n,
        repr(spec.p), repr(spec.epsilon), spec.variant.value)
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())


def _read_header_line(data: bytes):
    nl = data.find(b"\n")
    if nl < 0:
        raise FormatError("missing header line terminator", len(data))
    return data[:nl], nl + 1


def load_field_with_meta(path):
    """Load a field plus the (p, epsilon, variant) metadata of its header."""
    with open(path, "rb") as fh:
        data = fh.read()
    line, payload_at = _read_header_line(data)
    tokens = line.decode("ascii", errors="replace").split(" ")
    if len(tokens) != 8:
        raise FormatError(f"expected 8 header tokens, got {len(tokens)}", 0)
    if tokens[0] != "NSFIELD":
        raise FormatError(f"bad magic {tokens[0]!r}", 0)
    if tokens[1] != "1":
        raise FormatError(f"unsupported version {tokens[1]!r}", len(tokens[0]) + 1)
    try:
        dim = int(tokens[2])
        half_width = float(tokens[3])
        n = int(tokens[4])
        p = float(tokens[5])
        epsilon = float(tokens[6])
    except ValueError as exc:
        raise FormatError(f"bad header number: {exc}", 0) from None
    try:
        variant = Variant(tokens[7])
    except ValueError:
        raise FormatError(f"unknown variant tag {tokens[7]!r}", 0) from None
    count = n ** dim
    expected = payload_at + 8 * count
    if len(data) != expected:
        offset = min(len(data), expected)
        raise FormatError(
            f"payload size {len(data) - payload_at} bytes, expected {8 * count}",
            offset)
    values = np.frombuffer(data, dtype="<f8", count=count, offset=payload_at)
    field = Field(Grid(dim, half_width, n), values.reshape((n,) * dim).copy())
    meta = {"p": p, "epsilon": epsilon, "variant": variant}
    return field, meta


def load_field(path) -> Field:
    field, _ = load_field_with_meta(path)
    return field
