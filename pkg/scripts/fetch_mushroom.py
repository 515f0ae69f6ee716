"""Download the UCI mushroom dataset into data/agaricus-lepiota.data.

The file has 8124 rows: a class column (e/p) followed by 22 categorical
attributes, which is exactly the layout the acceptance suite expects
(label column 0, hamming metric).  Needs outbound network access.
"""

import sys
import urllib.request
from pathlib import Path

URLS = [
    "https://archive.ics.uci.edu/ml/machine-learning-databases/mushroom/agaricus-lepiota.data",
    "https://raw.githubusercontent.com/uci-ml-repo/ucimlrepo-datasets/main/mushroom/agaricus-lepiota.data",
]


def main() -> int:
    target = Path(__file__).resolve().parent.parent / "data" / "agaricus-lepiota.data"
    if target.is_file():
        print(f"already present: {target}")
        return 0
    target.parent.mkdir(parents=True, exist_ok=True)
    for url in URLS:
        try:
            print(f"fetching {url} ...")
            with urllib.request.urlopen(url, timeout=60) as resp:
                body = resp.read()
        except OSError as exc:
            print(f"  failed: {exc}")
            continue
        rows = [r for r in body.decode("utf-8").splitlines() if r]
        if len(rows) != 8124 or rows[0].count(",") != 22:
            print(f"  unexpected payload shape ({len(rows)} rows); not saved")
            continue
        target.write_bytes(body)
        print(f"saved {target} ({len(rows)} rows)")
        return 0
    print("could not fetch the mushroom dataset from any mirror", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
