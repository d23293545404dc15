"""Line-oriented text serialization for keys, ciphertexts and codes.

Every file starts with three header lines::

    grs-squarebreak v1
    field p=<p> m=<m> poly=<int>
    n=<n> k=<k>

followed by named sections, each ``@<name> <rows> <cols>`` and then the rows
as space-separated integer-encoded field elements.  The format is grep-able
and diff-able and round-trips bit-exactly.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import scheme
from .attack import RecoveredKey
from .gf import GF
from .grs import GrsParams

MAGIC = "grs-squarebreak v1"


class FileFormatError(ValueError):
    pass


@dataclass
class ParsedFile:
    field: GF
    n: int
    k: int
    sections: dict[str, np.ndarray]


def dump(stream, f: GF, n: int, k: int, sections: dict[str, np.ndarray]) -> None:
    stream.write(MAGIC + "\n")
    stream.write(f"field p={f.p} m={f.m} poly={f.modulus}\n")
    stream.write(f"n={n} k={k}\n")
    for name, arr in sections.items():
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        stream.write(f"@{name} {arr.shape[0]} {arr.shape[1]}\n")
        for row in arr:
            stream.write(" ".join(str(int(v)) for v in row) + "\n")


def dumps(f: GF, n: int, k: int, sections: dict[str, np.ndarray]) -> str:
    buf = io.StringIO()
    dump(buf, f, n, k, sections)
    return buf.getvalue()


def write_file(path, f: GF, n: int, k: int, sections: dict[str, np.ndarray]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        dump(fh, f, n, k, sections)


def _kv(token: str, key: str) -> int:
    pre = key + "="
    if not token.startswith(pre):
        raise FileFormatError(f"expected '{key}=<int>', got {token!r}")
    try:
        return int(token[len(pre):])
    except ValueError as e:
        raise FileFormatError(f"bad integer in {token!r}") from e


def loads(text: str) -> ParsedFile:
    lines = text.splitlines()
    if len(lines) < 3:
        raise FileFormatError("truncated header")
    if lines[0].strip() != MAGIC:
        raise FileFormatError(f"bad magic line {lines[0]!r}")
    ft = lines[1].split()
    if len(ft) != 4 or ft[0] != "field":
        raise FileFormatError(f"bad field line {lines[1]!r}")
    p, m, poly = _kv(ft[1], "p"), _kv(ft[2], "m"), _kv(ft[3], "poly")
    nk = lines[2].split()
    if len(nk) != 2:
        raise FileFormatError(f"bad dimension line {lines[2]!r}")
    n, k = _kv(nk[0], "n"), _kv(nk[1], "k")
    f = GF(p, m, poly)
    sections: dict[str, np.ndarray] = {}
    i = 3
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        if not line.startswith("@"):
            raise FileFormatError(f"expected a section header, got {line!r}")
        parts = line[1:].split()
        if len(parts) != 3:
            raise FileFormatError(f"bad section header {line!r}")
        name = parts[0]
        try:
            rows, cols = int(parts[1]), int(parts[2])
        except ValueError as e:
            raise FileFormatError(f"bad section shape in {line!r}") from e
        if name in sections:
            raise FileFormatError(f"duplicate section @{name}")
        data = np.zeros((rows, cols), dtype=np.int64)
        for r in range(rows):
            if i >= len(lines):
                raise FileFormatError(f"section @{name} is truncated")
            vals = lines[i].split()
            i += 1
            if len(vals) != cols:
                raise FileFormatError(
                    f"section @{name} row {r} has {len(vals)} entries, expected {cols}"
                )
            try:
                data[r] = [int(v) for v in vals]
            except ValueError as e:
                raise FileFormatError(f"non-integer entry in section @{name}") from e
        if name != "perm" and (np.any(data < 0) or np.any(data >= f.q)):
            raise FileFormatError(f"section @{name} has entries outside [0, {f.q})")
        sections[name] = data
    return ParsedFile(f, n, k, sections)


def read_file(path) -> ParsedFile:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def _section(pf: ParsedFile, name: str, shape: tuple[int, int]) -> np.ndarray:
    if name not in pf.sections:
        raise FileFormatError(f"missing section @{name}")
    arr = pf.sections[name]
    if arr.shape != shape:
        raise FileFormatError(f"section @{name} has shape {arr.shape}, expected {shape}")
    return arr


# -- typed wrappers --------------------------------------------------------


def save_public_key(path, pk: scheme.PublicKey) -> None:
    write_file(path, pk.field, pk.n, pk.k, {"Gpub": pk.g_pub})


def load_public_key(path) -> scheme.PublicKey:
    pf = read_file(path)
    g = _section(pf, "Gpub", (pf.k, pf.n))
    return scheme.PublicKey(pf.field, pf.n, pf.k, g)


def save_secret_key(path, sk: scheme.SecretKey) -> None:
    sections = {
        "Gpub": sk.g_pub,
        "x": sk.grs.x,
        "y": sk.grs.y,
        "S": sk.s_mat,
        "perm": sk.perm,
        "alpha": sk.alpha,
        "beta": sk.beta,
    }
    write_file(path, sk.field, sk.n, sk.k, sections)


def load_secret_key(path) -> tuple[scheme.PublicKey, scheme.SecretKey]:
    pf = read_file(path)
    n, k = pf.n, pf.k
    perm = _section(pf, "perm", (1, n))[0]
    if sorted(perm.tolist()) != list(range(n)):
        raise FileFormatError("@perm is not a permutation of 0..n-1")
    pk, sk = scheme.build_keypair(
        pf.field,
        _section(pf, "x", (1, n))[0],
        _section(pf, "y", (1, n))[0],
        _section(pf, "S", (k, k)),
        perm,
        _section(pf, "alpha", (1, n))[0],
        _section(pf, "beta", (1, n))[0],
    )
    stored = _section(pf, "Gpub", (k, n))
    if not np.array_equal(stored, sk.g_pub):
        raise FileFormatError("@Gpub does not match the key material")
    return pk, sk


def save_vector(path, f: GF, n: int, k: int, v: np.ndarray) -> None:
    write_file(path, f, n, k, {"vec": np.asarray(v, dtype=np.int64).reshape(1, -1)})


def load_vector(path, length: int | None = None) -> tuple[ParsedFile, np.ndarray]:
    pf = read_file(path)
    if "vec" not in pf.sections:
        raise FileFormatError("missing section @vec")
    v = pf.sections["vec"]
    if v.shape[0] != 1 or (length is not None and v.shape[1] != length):
        raise FileFormatError(f"@vec has shape {v.shape}, expected (1, {length})")
    return pf, v[0]


def save_recovered_key(path, f: GF, n: int, k: int, rk: RecoveredKey) -> None:
    sections = {
        "x": rk.grs.x,
        "y": rk.grs.y,
        "a0": rk.a0,
        "lambda0": rk.lam0,
    }
    write_file(path, f, n, k, sections)


def load_recovered_key(path) -> RecoveredKey:
    pf = read_file(path)
    n = pf.n
    params = GrsParams(pf.field, _section(pf, "x", (1, n))[0], _section(pf, "y", (1, n))[0], pf.k)
    return RecoveredKey(
        params,
        _section(pf, "a0", (1, n))[0],
        _section(pf, "lambda0", (1, n))[0],
        None,
    )


def save_code(path, f: GF, g: np.ndarray) -> None:
    g = np.asarray(g, dtype=np.int64)
    write_file(path, f, g.shape[1], g.shape[0], {"G": g})


def load_code_matrix(pf: ParsedFile) -> np.ndarray:
    for name in ("G", "Gpub"):
        if name in pf.sections:
            return pf.sections[name]
    raise FileFormatError("no @G or @Gpub section found")
