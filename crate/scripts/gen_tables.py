#!/usr/bin/env python3
"""Regenerate the bundled knot/link tables from the KnotInfo/LinkInfo database.

    pip install database_knotinfo
    python3 scripts/gen_tables.py

Writes data/knots-upto-9.csv, data/links-upto-9.csv, data/reidemeister-pairs.csv
and crates/core/tests/data/knotinfo-reference.csv.
"""
import csv
import os
import re

import database_knotinfo

csv.field_size_limit(10**9)
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SRC = os.path.join(os.path.dirname(database_knotinfo.__file__), "csv_data")


def load(name):
    with open(os.path.join(SRC, name)) as f:
        rows = list(csv.reader(f, delimiter="|"))
    head = rows[0]
    return [dict(zip(head, r)) for r in rows[2:]]


def pd_string(tuples):
    return "PD[" + ",".join("X[%s]" % ",".join(str(v) for v in t) for t in tuples) + "]"


def braid_string(word, strands):
    return "braid:%d:%s" % (strands, ",".join(str(v) for v in word))


def strands_of(word):
    return max((abs(v) for v in word), default=0) + 1


TERM = re.compile(r"^(?:(\d+)\*)?(?:t\^\((-?\d+)\)\*?|t\*?)?(?:q\^\((-?\d+)\)|q)?(?:\*T\^\((\d+)\))?$")


def parse_kh(poly):
    free, tors = [], []
    for raw in poly.replace(" ", "").replace("+-", "+").split("+"):
        if not raw:
            continue
        m = TERM.match(raw)
        if m is None:
            raise ValueError("unparsed term %r" % raw)
        mult = int(m.group(1) or 1)
        tdeg = int(m.group(2)) if m.group(2) is not None else (1 if re.search(r"t(?!\^)", raw.split("q")[0]) else 0)
        qdeg = int(m.group(3)) if m.group(3) is not None else (1 if "q" in raw else 0)
        if m.group(4):
            tors.append("%d:%d:%d:%s" % (tdeg, qdeg, mult, m.group(4)))
        else:
            free.append("%d:%d:%d" % (tdeg, qdeg, mult))
    return ";".join(free), ";".join(tors)


def main():
    knots = [k for k in load("knotinfo_data_complete.csv")
             if k["crossing_number"].isdigit() and 0 < int(k["crossing_number"]) <= 9]
    links = [l for l in load("linkinfo_data_complete.csv")
             if l["components"] == "2" and l["crossing_number"].isdigit()
             and int(l["crossing_number"]) <= 9 and l["name"].endswith("{0}")]

    with open(os.path.join(ROOT, "data", "knots-upto-9.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["name", "input"])
        w.writerow(["0_1", "PD[]"])
        for k in knots:
            w.writerow([k["name"], pd_string(eval(k["pd_notation"]))])

    with open(os.path.join(ROOT, "data", "links-upto-9.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["name", "input"])
        for l in links:
            tuples = eval(l["pd_notation_vector"].replace("{", "[").replace("}", "]"))
            w.writerow([l["name"].replace("{0}", ""), pd_string(tuples)])

    with open(os.path.join(ROOT, "data", "reidemeister-pairs.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["name", "left", "right", "move"])
        for k in knots:
            word = eval(k["braid_notation"])
            pd = pd_string(eval(k["pd_notation"]))
            n = strands_of(word)
            if len(word) <= 11:
                w.writerow([k["name"], pd, braid_string(word, n), "pd-vs-braid"])
            if int(k["crossing_number"]) <= 7:
                # R2: insert a cancelling pair after the first letter.
                r2 = word[:1] + [1, -1] + word[1:]
                w.writerow([k["name"], braid_string(word, n), braid_string(r2, n), "r2"])
                # Markov stabilisation: one extra strand and an R1 kink.
                w.writerow([k["name"], braid_string(word, n), braid_string(word + [-n], n + 1), "r1-stabilize"])
                # Conjugation: cyclic rotation of the word.
                w.writerow([k["name"], braid_string(word, n), braid_string(word[1:] + word[:1], n), "conjugate"])

    os.makedirs(os.path.join(ROOT, "crates", "core", "tests", "data"), exist_ok=True)
    with open(os.path.join(ROOT, "crates", "core", "tests", "data", "knotinfo-reference.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["name", "s", "kh_free", "kh_torsion"])
        for k in knots:
            free, tors = parse_kh(k["khovanov_unreduced_integral_polynomial"])
            w.writerow([k["name"], k["rasmussen_invariant"], free, tors])


if __name__ == "__main__":
    main()
