"""Shared CSV output helpers: 17-significant-digit floats, LF endings,
atomic replace."""

import os
import tempfile


def fmt(v):
    return f"{float(v):.17g}"


def write_csv(path, header, rows):
    """Atomic CSV write: header plus rows of already-formatted strings."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
