#!/usr/bin/env python3
# Copyright 2026 The splitleak Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the UCI Spambase table in its canonical comma-separated layout.

The KEEL mirror of Spambase ships inside the `keel-ds` wheel on PyPI, which
makes it reachable from hosts that only see a package index. The wheel is
downloaded (no install), the raw KEEL file is read out of it, and rows are
re-emitted as `f1,...,f57,label` with no header.
"""

import argparse
import pathlib
import subprocess
import sys
import tempfile
import zipfile

MEMBER = "keel_ds/data/balanced/raw/spambase.dat"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=pathlib.Path, help="destination file")
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-q",
             "-d", tmp, "keel-ds==0.2.5"],
            check=True)
        wheel = next(pathlib.Path(tmp).glob("keel_ds-*.whl"))
        raw = zipfile.ZipFile(wheel).read(MEMBER).decode()

    rows = []
    for line in raw.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != 58:
            raise SystemExit(f"unexpected column count {len(cells)}")
        rows.append(",".join(cells))

    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text("\n".join(rows) + "\n")
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
