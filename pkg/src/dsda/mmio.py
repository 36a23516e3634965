"""Matrix Market reading and writing.

Supports the coordinate and array formats with real, integer and
complex fields and general/symmetric/hermitian symmetry, which covers
the benchmark data this package consumes.  Matrices are returned dense.
The writer emits the array format with 17 significant digits so a
written matrix reloads bit-identically.
"""

from __future__ import annotations

import numpy as np

from .errors import ParseError, UnsupportedFieldError

_FORMATS = {"coordinate", "array"}
_FIELDS = {"real", "integer", "complex"}
_SYMMETRIES = {"general", "symmetric", "hermitian"}


def _fail(path, lineno, msg):
    raise ParseError(f"{path}:{lineno}: {msg}")


def load_matrix_market(path) -> np.ndarray:
    """Read a Matrix Market file into a dense array.

    Symmetric/hermitian storage (lower triangle) is expanded to the full
    matrix.  Raises ``ParseError`` with the offending line number on
    malformed input and ``UnsupportedFieldError`` for pattern data or an
    unsupported symmetry.
    """
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        _fail(path, 1, "empty file")
    header = lines[0].split()
    if len(header) != 5 or header[0] != "%%MatrixMarket" or \
            header[1].lower() != "matrix":
        _fail(path, 1, "malformed header, expected "
              "'%%MatrixMarket matrix <format> <field> <symmetry>'")
    fmt, fld, sym = (tok.lower() for tok in header[2:5])
    if fmt not in _FORMATS:
        _fail(path, 1, f"unsupported format '{fmt}'")
    if fld not in _FIELDS:
        raise UnsupportedFieldError(f"{path}:1: unsupported field '{fld}'")
    if sym not in _SYMMETRIES:
        raise UnsupportedFieldError(f"{path}:1: unsupported symmetry '{sym}'")
    complex_field = fld == "complex"
    dtype = np.complex128 if complex_field else np.float64

    # Skip comments and blank lines to the size line.
    idx = 1
    while idx < len(lines) and (lines[idx].startswith("%") or not lines[idx].strip()):
        idx += 1
    if idx >= len(lines):
        _fail(path, len(lines), "missing size line")
    size_tokens = lines[idx].split()
    lineno = idx + 1

    if fmt == "coordinate":
        if len(size_tokens) != 3:
            _fail(path, lineno, "coordinate size line must be 'rows cols nnz'")
        try:
            rows, cols, nnz = (int(t) for t in size_tokens)
        except ValueError:
            _fail(path, lineno, "size line entries must be integers")
        mat = np.zeros((rows, cols), dtype=dtype)
        seen = 0
        for off, raw in enumerate(lines[idx + 1:], start=lineno + 1):
            if raw.startswith("%") or not raw.strip():
                continue
            tok = raw.split()
            want = 4 if complex_field else 3
            if len(tok) != want:
                _fail(path, off, f"expected {want} fields, got {len(tok)}")
            try:
                i, j = int(tok[0]), int(tok[1])
                if complex_field:
                    val = complex(float(tok[2]), float(tok[3]))
                else:
                    val = float(tok[2])
            except ValueError:
                _fail(path, off, "malformed entry")
            if not (1 <= i <= rows and 1 <= j <= cols):
                _fail(path, off, f"index ({i}, {j}) out of bounds")
            if sym != "general" and i < j:
                _fail(path, off, "symmetric storage must keep the lower triangle")
            mat[i - 1, j - 1] = val
            seen += 1
        if seen != nnz:
            _fail(path, len(lines), f"expected {nnz} entries, found {seen}")
    else:
        if len(size_tokens) != 2:
            _fail(path, lineno, "array size line must be 'rows cols'")
        try:
            rows, cols = (int(t) for t in size_tokens)
        except ValueError:
            _fail(path, lineno, "size line entries must be integers")
        values = []
        for off, raw in enumerate(lines[idx + 1:], start=lineno + 1):
            if raw.startswith("%") or not raw.strip():
                continue
            tok = raw.split()
            try:
                if complex_field:
                    if len(tok) != 2:
                        _fail(path, off, "complex array entries need 're im'")
                    values.append(complex(float(tok[0]), float(tok[1])))
                else:
                    if len(tok) != 1:
                        _fail(path, off, "array entries must be one value per line")
                    values.append(float(tok[0]))
            except ValueError:
                _fail(path, off, "malformed entry")
        if sym == "general":
            expected = rows * cols
        else:
            if rows != cols:
                _fail(path, lineno, "symmetric matrices must be square")
            expected = rows * (rows + 1) // 2
        if len(values) != expected:
            _fail(path, len(lines),
                  f"expected {expected} values, found {len(values)}")
        if sym == "general":
            mat = np.array(values, dtype=dtype).reshape((rows, cols), order="F")
        else:
            mat = np.zeros((rows, cols), dtype=dtype)
            pos = 0
            for j in range(cols):
                for i in range(j, rows):
                    mat[i, j] = values[pos]
                    pos += 1

    if sym != "general":
        lower = np.tril(mat, -1)
        mat = mat + (lower.conj().T if sym == "hermitian" else lower.T)
    return mat


def save_matrix_market(path, mat, comment: str | None = None) -> None:
    """Write a dense matrix in Matrix Market array format.

    Values are printed with 17 significant digits, so reloading the file
    reproduces the float64 entries exactly.
    """
    arr = np.atleast_2d(np.asarray(mat))
    complex_field = np.iscomplexobj(arr)
    field = "complex" if complex_field else "real"
    rows, cols = arr.shape
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"%%MatrixMarket matrix array {field} general\n")
        if comment:
            for line in comment.splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{rows} {cols}\n")
        for j in range(cols):
            for i in range(rows):
                v = arr[i, j]
                if complex_field:
                    fh.write(f"{v.real:.17g} {v.imag:.17g}\n")
                else:
                    fh.write(f"{float(v):.17g}\n")
