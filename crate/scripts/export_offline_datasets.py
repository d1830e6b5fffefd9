"""Write canonical CSVs for the benchmarks that ship inside Python packages.

Useful when the upstream repositories are unreachable. Covers iris, cancer
and wine (scikit-learn) plus thyroid, glass, ecoli, heart and pima
(`pip install common-datasets`). Anything already present is left alone.

    python scripts/export_offline_datasets.py [DATA_DIR]
"""

import csv
import os
import sys
import warnings
from collections import Counter
from pathlib import Path

warnings.filterwarnings("ignore")


def sklearn_sets():
    from sklearn import datasets

    yield "iris", datasets.load_iris()
    yield "cancer", datasets.load_breast_cancer()
    yield "wine", datasets.load_wine()


def common_sets():
    try:
        import common_datasets.binary_classification as binary
        import common_datasets.multiclass_classification as multi
    except ImportError:
        print("common-datasets not installed; skipping thyroid, glass, ecoli, heart, pima")
        return
    yield "thyroid", multi.load_newthyroid()
    yield "glass", multi.load_glass()
    ecoli = multi.load_ecoli()
    # The two classes with two members each are not part of the benchmark.
    rare = {c for c, n in Counter(ecoli["target"]).items() if n <= 2}
    keep = [i for i, c in enumerate(ecoli["target"]) if c not in rare]
    ecoli = dict(ecoli, data=ecoli["data"][keep], target=ecoli["target"][keep])
    yield "ecoli", ecoli
    yield "heart", multi.load_cleveland()
    yield "pima", binary.load_pima()


def write(path, data, target):
    n_features = data.shape[1]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{k}" for k in range(n_features)] + ["class"])
        for row, label in zip(data, target):
            w.writerow([repr(float(v)) for v in row] + [int(label)])


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else os.environ.get("PNN_CHM_DATA", "data"))
    out.mkdir(parents=True, exist_ok=True)
    for source in (sklearn_sets, common_sets):
        for name, ds in source():
            path = out / f"{name}.csv"
            if path.exists():
                print(f"{name}: cached")
                continue
            write(path, ds["data"], ds["target"])
            print(f"{name}: wrote {len(ds['target'])} rows")


if __name__ == "__main__":
    main()
