"""Plot peak working words against N from a `gridreach bench` CSV.

usage: python3 scripts/plot_bench.py bench.csv [out.png]
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def main() -> None:
    src = sys.argv[1]
    out = sys.argv[2] if len(sys.argv) > 2 else "bench.png"
    rows = pd.read_csv(src)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for mode, part in rows.groupby("mode"):
        peaks = part.groupby("N")["peak_words"].mean()
        slope = np.polyfit(np.log(peaks.index), np.log(peaks.values), 1)[0]
        ax.loglog(peaks.index, peaks.values, "o-", label=f"{mode} (slope {slope:.2f})")
    n = np.array(sorted(rows["N"].unique()), dtype=float)
    ax.loglog(n, n ** (1 / 3) * rows["peak_words"].min() / n[0] ** (1 / 3), "k--", lw=0.8, label="N^(1/3)")
    ax.set_xlabel("N (grid vertices)")
    ax.set_ylabel("peak words")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


if __name__ == "__main__":
    main()
