"""LIBSVM sparse-format parsing, serialization, and cached dataset
retrieval.

The text format is ``<label> <idx>:<val> ...`` with 1-based, strictly
increasing indices per line.  Parsed data lands in a zero-based CSR
matrix.  Downloads are verified against a sha256 sidecar next to the
cached file; the checksum is recorded on first fetch and enforced
afterwards (one automatic re-download on mismatch).
"""

import bz2
import hashlib
import io
import os
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from filelock import FileLock

from .errors import FetchError, IntegrityError, ParseError, RegistryError
from .linalg import CsrMatrix

CACHE_ENV_VAR = "GCES_CACHE"

LIBSVM_BASE = "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets"


@dataclass(frozen=True)
class DatasetEntry:
    url: str
    n_features: int
    sha256: str | None = None  # None: record on first fetch, enforce after


#: pinned names used by the benchmark suite
DATASETS = {
    "a1a": DatasetEntry(f"{LIBSVM_BASE}/binary/a1a", 123),
    "rcv1.binary": DatasetEntry(f"{LIBSVM_BASE}/binary/rcv1_train.binary.bz2", 47236),
    "triazine": DatasetEntry(f"{LIBSVM_BASE}/regression/triazines", 60),
}


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    features: CsrMatrix
    labels: np.ndarray
    n_features_declared: int
    labels_remapped: bool = False
    metadata: dict = field(default_factory=dict)


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "gces"


def parse_libsvm(source, n_features: int | None = None) -> LabeledDataset:
    """Parse LIBSVM text into a LabeledDataset.

    `source` may be a string or a text stream.  Blank lines and lines
    starting with '#' are skipped; CRLF is tolerated.  Labels in {0, 1}
    are remapped to {-1, +1} (recorded via labels_remapped).
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    labels = []
    offsets = [0]
    cols: list[int] = []
    vals: list[float] = []
    max_col = -1
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            labels.append(float(parts[0]))
        except ValueError:
            raise ParseError(f"bad label {parts[0]!r}", lineno) from None
        prev = 0
        for tok in parts[1:]:
            idx_s, _, val_s = tok.partition(":")
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise ParseError(f"bad feature token {tok!r}", lineno) from None
            if idx < 1:
                raise ParseError(f"indices are 1-based, got {idx}", lineno)
            if idx <= prev:
                raise ParseError(
                    f"indices must be strictly increasing, got {idx} after {prev}",
                    lineno)
            prev = idx
            cols.append(idx - 1)
            vals.append(val)
            max_col = max(max_col, idx - 1)
        offsets.append(len(cols))

    observed = max_col + 1
    n_cols = max(observed, n_features or 0)
    features = CsrMatrix(len(labels), n_cols, np.asarray(offsets),
                         np.asarray(cols, dtype=np.int64),
                         np.asarray(vals, dtype=np.float64))
    y = np.asarray(labels, dtype=np.float64)
    remapped = False
    present = set(np.unique(y)) if y.size else set()
    if present and present <= {0.0, 1.0}:
        y = np.where(y > 0.5, 1.0, -1.0)
        remapped = True
    return LabeledDataset(features=features, labels=y,
                          n_features_declared=n_cols, labels_remapped=remapped)


def serialize_libsvm(ds: LabeledDataset) -> str:
    """Inverse of parse_libsvm up to float formatting (round-trip exact)."""
    a = ds.features
    lines = []
    for i in range(a.n_rows):
        lo, hi = a.row_offsets[i], a.row_offsets[i + 1]
        toks = [f"{ds.labels[i]:.17g}"]
        toks += [f"{a.col_indices[j] + 1}:{a.values[j]:.17g}" for j in range(lo, hi)]
        lines.append(" ".join(toks))
    return "\n".join(lines) + ("\n" if lines else "")


def truncate(ds: LabeledDataset, max_rows: int | None = None,
             max_cols: int | None = None) -> LabeledDataset:
    """Keep the leading rows/columns; used to reproduce subset shapes."""
    a = ds.features
    rows = a.n_rows if max_rows is None else min(max_rows, a.n_rows)
    cols = a.n_cols if max_cols is None else min(max_cols, a.n_cols)
    offsets = [0]
    keep_cols, keep_vals = [], []
    for i in range(rows):
        lo, hi = a.row_offsets[i], a.row_offsets[i + 1]
        for j in range(lo, hi):
            if a.col_indices[j] < cols:
                keep_cols.append(a.col_indices[j])
                keep_vals.append(a.values[j])
        offsets.append(len(keep_cols))
    feats = CsrMatrix(rows, cols, np.asarray(offsets),
                      np.asarray(keep_cols, dtype=np.int64),
                      np.asarray(keep_vals, dtype=np.float64))
    return LabeledDataset(features=feats, labels=ds.labels[:rows].copy(),
                          n_features_declared=cols,
                          labels_remapped=ds.labels_remapped,
                          metadata=dict(ds.metadata))


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _download(url: str, dest: Path) -> None:
    try:
        with urllib.request.urlopen(url, timeout=60) as resp:
            payload = resp.read()
    except Exception as exc:  # URLError, timeout, HTTP errors
        raise FetchError(f"download failed for {url}: {exc}") from exc
    if url.endswith(".bz2"):
        payload = bz2.decompress(payload)
    tmp = dest.with_suffix(dest.suffix + ".part")
    tmp.write_bytes(payload)
    tmp.replace(dest)


def fetch_dataset(name: str, cache_dir=None, offline: bool = False,
                  registry=None) -> Path:
    """Return the local path of a registry dataset, downloading on demand.

    Fully offline when the cached copy is present and intact.  A checksum
    mismatch triggers an integrity error and a single re-download (unless
    offline).
    """
    registry = DATASETS if registry is None else registry
    if name not in registry:
        raise RegistryError(f"unknown dataset {name!r}; known: {sorted(registry)}")
    entry = registry[name]
    cache = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    cache.mkdir(parents=True, exist_ok=True)
    dest = cache / name
    sidecar = cache / f"{name}.sha256"
    lock = FileLock(str(cache / f"{name}.lock"))
    with lock:
        expected = entry.sha256
        if expected is None and sidecar.exists():
            expected = sidecar.read_text().strip()
        if dest.exists():
            digest = _sha256(dest)
            if expected is None:
                sidecar.write_text(digest + "\n")
                return dest
            if digest == expected:
                return dest
            dest.unlink()  # corrupted cache: retry the download once below
            if offline:
                raise IntegrityError(
                    f"{name}: cached checksum {digest} != expected {expected}")
        elif offline:
            raise FetchError(f"{name}: not cached and offline mode is set")
        _download(entry.url, dest)
        digest = _sha256(dest)
        if expected is not None and digest != expected:
            dest.unlink()
            raise IntegrityError(
                f"{name}: downloaded checksum {digest} != expected {expected}")
        if not sidecar.exists():
            sidecar.write_text(digest + "\n")
        return dest


def load_dataset(name: str, cache_dir=None, offline: bool = False,
                 registry=None) -> LabeledDataset:
    """Fetch (or reuse) and parse a registry dataset."""
    registry = DATASETS if registry is None else registry
    path = fetch_dataset(name, cache_dir=cache_dir, offline=offline,
                         registry=registry)
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        ds = parse_libsvm(fh, n_features=registry[name].n_features)
    return ds
