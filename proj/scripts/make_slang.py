#!/usr/bin/env python3
"""Build data/slang-id.tsv from the Colloquial Indonesian Lexicon (kamus-alay).

Source: the lexicon as packaged by indoNLP (pip install indoNLP), which
carries the kamus-alay table by Salsabila, Ali, Yosef and Ade.

Filtering applied on top of the published table:
  * keys must be [a-z]+ and values [a-z]+ words separated by single spaces;
  * keys that are root words in data/kata-dasar.txt are dropped (a standard
    word is never slang, e.g. the table maps "minta" -> "meminta");
  * "mbg" is dropped (program acronym in this domain, the table maps it to "mbak");
  * "enggak" -> "tidak" is added so the whole negation family lands on the
    standard form;
  * chains are resolved (a -> b, b -> c becomes a -> c) so one substitution
    pass is stable.
"""
import pathlib
import re

from indoNLP.preprocessing.slang_data import SLANG_DATA

root = pathlib.Path(__file__).resolve().parent.parent
roots = set(w for w in (root / "data/kata-dasar.txt").read_text().split("\n") if w)

table = {}
for key, value in SLANG_DATA.items():
    value = value.strip()
    if not re.fullmatch(r"[a-z]+", key) or not re.fullmatch(r"[a-z]+( [a-z]+)*", value):
        continue
    if key == value or key in roots:
        continue
    table[key] = value
table.pop("mbg", None)
table["enggak"] = "tidak"


def resolve(word, seen):
    if word not in table or word in seen:
        return word
    return " ".join(resolve(w, seen | {word}) for w in table[word].split(" "))


closed = {k: " ".join(resolve(w, {k}) for w in v.split(" ")) for k, v in table.items()}
closed = {k: v for k, v in closed.items() if k != v}

with open(root / "data/slang-id.tsv", "w", newline="\n") as out:
    for key in sorted(closed):
        out.write(f"{key}\t{closed[key]}\n")
print(f"wrote {len(closed)} entries")
