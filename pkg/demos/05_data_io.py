"""Read, write and subset LIBSVM data.

Writes a synthetic instance in LIBSVM text format, parses it back
bit-exactly, demonstrates label remapping and subsetting, and shows how
a cached real dataset would be loaded (skipped when not fetched yet).
"""

import numpy as np

from gces import SyntheticSpec, make_synthetic, spectral_norm_sq
from gces.libsvm import (LabeledDataset, default_cache_dir, parse_libsvm,
                         serialize_libsvm, truncate)

# a diagonal quadratic instance round-trips through the text format
instance = make_synthetic(SyntheticSpec(m=6, xi=2, seed=5))
ds = LabeledDataset(features=instance.A, labels=instance.b,
                    n_features_declared=6)
text = serialize_libsvm(ds)
print("serialized instance:")
print(text)

back = parse_libsvm(text)
assert np.array_equal(back.features.values, instance.A.values)
assert np.array_equal(back.labels, instance.b)
print("re-parsed bit-exactly\n")

# classification files with 0/1 labels are remapped to -1/+1
labeled = parse_libsvm("0 1:0.5 3:1.5\n1 2:2.0\n1 1:1 2:1 3:1\n")
print(f"labels after remap: {labeled.labels.tolist()} "
      f"(remapped: {labeled.labels_remapped})")

# subsetting reproduces the shapes used in the benchmark configs
subset = truncate(labeled, max_rows=2, max_cols=2)
print(f"truncated to {subset.features.shape}:")
print(subset.features.to_dense(), "\n")

# real data, when cached (gces fetch --name a1a)
a1a = default_cache_dir() / "a1a"
if a1a.exists():
    with open(a1a, "r", encoding="ascii", errors="replace") as fh:
        real = parse_libsvm(fh, n_features=123)
    est = spectral_norm_sq(real.features)
    print(f"a1a: {real.features.shape}, largest squared singular value "
          f"~ {est.value:.0f}")
else:
    print("a1a not cached; `gces fetch --name a1a` downloads and pins it")
