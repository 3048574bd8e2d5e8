#!/usr/bin/env python3
"""Plot a capacity sweep CSV produced by `qkdtool capacity`."""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> None:
    if len(sys.argv) != 3:
        sys.exit(f"usage: {sys.argv[0]} sweep.csv out.png")
    gammas, qs = [], []
    with open(sys.argv[1], newline="") as fh:
        for row in csv.DictReader(fh):
            gammas.append(float(row["gamma"]))
            qs.append(float(row["q"]))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(gammas, qs, marker="o", markersize=3)
    ax.set_xlabel(r"$\gamma$")
    ax.set_ylabel(r"$Q(\mathcal{N})$")
    ax.set_title("Amplitude damping channel capacity")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(sys.argv[2], dpi=150)


if __name__ == "__main__":
    main()
