#!/usr/bin/env python3
"""Plot a finite-key rate sweep CSV produced by `qkdtool rate --sweep`."""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> None:
    if len(sys.argv) != 3:
        sys.exit(f"usage: {sys.argv[0]} sweep.csv out.png")
    signals, r_sifted, r_signal = [], [], []
    with open(sys.argv[1], newline="") as fh:
        for row in csv.DictReader(fh):
            signals.append(float(row["M"]))
            r_sifted.append(float(row["r_sifted"]))
            r_signal.append(float(row["r_per_signal"]))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogx(signals, r_sifted, marker="o", markersize=3, label="r' (per sifted bit)")
    ax.semilogx(signals, r_signal, marker="s", markersize=3, label="r (per signal)")
    ax.set_xlabel("signals M")
    ax.set_ylabel("key rate")
    ax.set_title("Finite-size key rates")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(sys.argv[2], dpi=150)


if __name__ == "__main__":
    main()
