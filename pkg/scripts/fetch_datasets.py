"""Rebuild data/auto_mpg.csv and data/cpu_performance.csv from the raw UCI files.

    python scripts/fetch_datasets.py                 # download from the UCI archive
    python scripts/fetch_datasets.py --raw-dir DIR   # use auto-mpg.data and machine.data from DIR

auto-mpg: the 6 rows with an unknown horsepower are dropped (392 remain) and
the car name is discarded. cpu-performance: vendor and model names and the
published estimate (ERP) are discarded; the output is the measured PRP.
"""
import argparse
import csv
import shlex
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"
SOURCES = {
    "auto-mpg.data": f"{UCI}/auto-mpg/auto-mpg.data",
    "machine.data": f"{UCI}/cpu-performance/machine.data",
}
AUTO_COLUMNS = ["cylinders", "displacement", "horsepower", "weight", "acceleration", "year", "origin", "mpg"]
CPU_COLUMNS = ["syct", "mmin", "mmax", "cach", "chmin", "chmax", "perf"]


def _read(name, raw_dir):
    if raw_dir is not None:
        return (Path(raw_dir) / name).read_text()
    with urllib.request.urlopen(SOURCES[name], timeout=60) as resp:
        return resp.read().decode("ascii")


def auto_rows(text):
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        fields = shlex.split(line)
        mpg, cyl, disp, hp, weight, acc, year, origin = fields[:8]
        if hp == "?":
            continue
        rows.append([cyl, disp, hp, weight, acc, year, origin, mpg])
    return rows


def cpu_rows(text):
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        fields = line.strip().split(",")
        rows.append(fields[2:9])
    return rows


def _fmt(v):
    x = float(v)
    return str(int(x)) if x.is_integer() else repr(x)


def write(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_fmt(v) for v in row] for row in rows)
    print(f"{path}: {len(rows)} rows")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--raw-dir", help="directory holding auto-mpg.data and machine.data")
    parser.add_argument("--out-dir", default=str(Path(__file__).resolve().parents[1] / "data"))
    args = parser.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write(out / "auto_mpg.csv", AUTO_COLUMNS, auto_rows(_read("auto-mpg.data", args.raw_dir)))
    write(out / "cpu_performance.csv", CPU_COLUMNS, cpu_rows(_read("machine.data", args.raw_dir)))


if __name__ == "__main__":
    main()
