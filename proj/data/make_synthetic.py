#!/usr/bin/env python3
"""Regenerates data/synthetic/. Each entry's good candidate verb is given exactly the
triples of the landmark verb, so its phrase vector equals the landmark's in every mode."""
import os
import random

DIM = 8
ENTRIES = 20
here = os.path.join(os.path.dirname(os.path.abspath(__file__)), "synthetic")
rng = random.Random(20240601)

nouns = [f"noun{i:02d}" for i in range(30)]
preps = ["after", "before", "without", "while"]
vec = {w: [round(rng.uniform(0.0, 1.0), 4) for _ in range(DIM)] for w in nouns}


def triples_for(verb):
    picks = rng.sample(nouns, 6)
    return [(picks[2 * j], verb, picks[2 * j + 1], rng.randint(1, 5)) for j in range(3)]


rows, triples = [], []
for i in range(ENTRIES):
    a, b = rng.sample(nouns, 2)
    c, d, bad = f"verb{i:02d}", f"helper{i:02d}", f"other{i:02d}"
    good = f"like{i:02d}"
    tc = triples_for(c)
    triples += tc + [(s, good, o, n) for s, _, o, n in tc]
    triples += triples_for(bad) + triples_for(d)
    label = 1 if i % 2 == 0 else 2
    c1, c2 = (good, bad) if label == 1 else (bad, good)
    rows.append((a, b, c, rng.choice(preps), d, c1, c2, label))

os.makedirs(here, exist_ok=True)
with open(os.path.join(here, "embeddings.txt"), "w") as f:
    f.write(f"{len(nouns)} {DIM}\n")
    for w in nouns:
        f.write(w + " " + " ".join(f"{x:.4f}" for x in vec[w]) + "\n")
with open(os.path.join(here, "triples.tsv"), "w") as f:
    for s, v, o, n in triples:
        f.write(f"{s}\t{v}\t{o}\t{n}\n")
with open(os.path.join(here, "dataset.tsv"), "w") as f:
    f.write("# A\tB\tC\tPrep\tD\tC1\tC2\tlabel\n")
    for r in rows:
        f.write("\t".join(str(x) for x in r) + "\n")
with open(os.path.join(here, "dataset_inverted.tsv"), "w") as f:
    f.write("# same entries, labels swapped\n")
    for r in rows:
        f.write("\t".join(str(x) for x in r[:7]) + "\t" + str(3 - r[7]) + "\n")
