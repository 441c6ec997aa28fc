#!/usr/bin/env python3
"""Capture (word, stem) pairs from the reference Sastrawi stemmer.

    pip install Sastrawi
    python3 scripts/make_stem_golden.py

Writes:
  data/stem-golden.tsv            curated set used by the acceptance gate
  tests/fixtures/stem-extended.tsv  larger generated set for the unit suite

Words are built from root words with the usual Indonesian affix morphology
(meN-/peN- allomorphs, ber-, ter-, di-, ke-, se-, per-, confixes, particles
and possessives). Only pairs where the reference stem is idempotent are kept,
so stem(stem(w)) == stem(w) holds over both files.
"""
import pathlib
import random

from Sastrawi.Stemmer.StemmerFactory import StemmerFactory

root = pathlib.Path(__file__).resolve().parent.parent
roots = [w for w in (root / "data/kata-dasar.txt").read_text().split("\n") if w.isalpha()]
stemmer = StemmerFactory().create_stemmer()

VOWELS = set("aiueo")


def men(r):
    c = r[0]
    if r.startswith(("ng", "ny")) or c in "lrwymn":
        return "me" + r
    if c in "bfv":
        return "mem" + r
    if c == "p":
        return "mem" + r[1:]
    if c in "dcjz":
        return "men" + r
    if c == "t":
        return "men" + r[1:]
    if c == "s":
        return "meny" + r[1:]
    if c == "k":
        return "meng" + r[1:]
    return "meng" + r


def pen(r):
    return "pe" + men(r)[2:]


def ber(r):
    return ("be" if r[0] == "r" or r.startswith("er", 1) else "ber") + r


def ter(r):
    return ("te" if r[0] == "r" else "ter") + r


PREFIXES = [men, pen, ber, ter, lambda r: "di" + r, lambda r: "ke" + r,
            lambda r: "se" + r, lambda r: "per" + r, lambda r: "memper" + r,
            lambda r: "diper" + r, lambda r: r]
SUFFIXES = ["", "", "kan", "i", "an", "nya", "lah", "kah", "pun", "ku", "mu",
            "kannya", "inya", "annya", "kanlah", "ilah"]

# Hand-picked everyday words (social-media register) checked first.
CURATED = """
makanan memberikan makan pemerintah kebijakan program gratis bergizi menyukai
dimakan memakan permakanan sekolah anak-anak pelajar belajar mengajar pengajaran
menyebabkan penyebab keberhasilan berhasil dibagikan membagikan pembagian
kesehatan menyehatkan disehatkan rakyatnya masyarakat pelaksanaan dilaksanakan
melaksanakan terlaksana anggaran menganggarkan dianggarkan korupsi dikorupsi
mengkritik kritikan dikritik pendidikan mendidik terdidik kebutuhan membutuhkan
dibutuhkan penyaluran menyalurkan disalurkan bantuan membantu dibantu terbantu
kenyang kelaparan melaparkan pemberian diberikan berikan memberi pemberi
keracunan meracuni diracuni beracun tercapai mencapai pencapaian menghabiskan
dihabiskan kehabisan penghabisan mendengarkan didengar pendengaran semangat
bersemangat menyemangati pengawasan mengawasi diawasi ketahuan mengetahui
diketahui pengetahuan sepenuhnya seharusnya sebenarnya sesungguhnya kesempatan
mempengaruhi pengaruh terpengaruh menyala nyala menyapu penyapu menulis penulis
tulisan ditulis tertulis memukul pukulan dipukul pemukul mengirim pengiriman
dikirim kiriman mentaati menaati ketaatan berbalas-balasan meniru-nirukan
bermain permainan dimainkan memainkan kekecewaan mengecewakan kecewa menjanjikan
dijanjikan perjanjian janjinya menipu penipuan ditipu tertipu mahal kemahalan
kenaikan menaikkan dinaikkan murahnya termurah membeli pembelian dibeli terbeli
menjual penjualan dijual terjual
""".split()


def golden_pairs(words):
    pairs = []
    seen = set()
    for w in words:
        if w in seen or len(w) < 2:
            continue
        seen.add(w)
        s = stemmer.stem(w)
        if stemmer.stem(s) != s:
            continue
        pairs.append((w, s))
    return pairs


def generated(n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        r = rng.choice(roots)
        if len(r) < 3:
            continue
        word = rng.choice(PREFIXES)(r) + rng.choice(SUFFIXES)
        out.append(word)
    return out


curated = golden_pairs(CURATED + generated(400, 20250101))
extended = golden_pairs(generated(6000, 7))

with open(root / "data/stem-golden.tsv", "w", newline="\n") as f:
    for w, s in curated:
        f.write(f"{w}\t{s}\n")
with open(root / "tests/fixtures/stem-extended.tsv", "w", newline="\n") as f:
    for w, s in extended:
        f.write(f"{w}\t{s}\n")
print(f"golden: {len(curated)} pairs, extended: {len(extended)} pairs")
