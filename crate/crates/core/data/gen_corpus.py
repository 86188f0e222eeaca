"""Regenerates corpus.csv from the Rolfsen tables shipped with spherogram.

PD codes are emitted 1-based in the KnotTheory convention (incoming
under-edge first, counterclockwise), which is what the Rust loader expects.
Usage: python3 gen_corpus.py > corpus.csv
"""
import csv
import sys

import spherogram

# (name, crossings, components, writhe, pd, note)
HAND = [
    ("unknot", 0, 1, 0, "PD[]+O^1", "crossingless circle"),
    ("T2", 0, 2, 0, "PD[]+O^2", "two-component unlink"),
    ("T3", 0, 3, 0, "PD[]+O^3", "three-component unlink"),
    ("unknot-curl", 1, 1, -1, "PD[X[2,1,1,2]]", "one negative kink"),
    ("hopf+", 2, 2, 2, "PD[X[1,3,2,4],X[3,1,4,2]]", "positive Hopf clasp"),
    ("hopf-", 2, 2, -2, "PD[X[1,4,2,3],X[3,2,4,1]]", "mirror of hopf+"),
    ("trefoil+", 3, 1, 3, "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]", "mirror of trefoil-"),
    ("trefoil-", 3, 1, -3, "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]", "standard 3_1 table diagram"),
]

KNOTS = ["4_1", "3_1", "5_1", "5_2", "6_1", "6_2", "6_3",
         "7_1", "7_2", "7_3", "7_4", "7_5", "7_6", "7_7"]
LINKS = ["2^2_1", "4^2_1", "5^2_1", "6^2_1", "6^2_2", "6^2_3",
         "6^3_1", "6^3_2", "6^3_3"] + ["7^2_%d" % i for i in range(1, 9)] + ["7^3_1"]
LARGER = ["8_19", "9_42", "10_132", "K12n242"]


def pd_text(link):
    xs = ",".join("X[%s]" % ",".join(str(e + 1) for e in x) for x in link.PD_code())
    return "PD[%s]" % xs


def main():
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["name", "crossings", "components", "writhe", "pd", "source"])
    rows = []
    for name, n, comps, writhe, pd, note in HAND:
        rows.append((name, n, comps, writhe, pd, "hand: " + note))
    for name in KNOTS + LINKS + LARGER:
        link = spherogram.Link(name)
        label = "figure8" if name == "4_1" else name
        rows.append((label, len(link.crossings), len(link.link_components),
                     sum(c.sign for c in link.crossings), pd_text(link),
                     "spherogram Rolfsen/HTW table entry %s" % name))
    for r in rows:
        w.writerow(r)


if __name__ == "__main__":
    main()
