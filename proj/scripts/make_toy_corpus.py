"""Writes data/toy-corpus.csv: a small labeled corpus of synthetic Indonesian
comments about a free school-meal programme, used by tests and demos."""
import csv
import random

rng = random.Random(2024)

subjects = ["program makan gratis", "makanan di sekolah", "menu hari ini", "programnya",
            "makan siang anak", "bantuan makanan", "pemerintah", "kebijakan ini"]
positive = ["bagus sekali", "sangat membantu", "enak dan bergizi", "mantap", "keren banget",
            "bermanfaat buat anak", "semoga terus berjalan", "terima kasih", "sehat dan lezat",
            "anak anak senang"]
negative = ["rasanya hambar", "basi dan bau", "buang buang anggaran", "jelek sekali", "mengecewakan",
            "korupsi lagi", "porsinya sedikit", "anak jadi sakit perut", "percuma saja",
            "kualitasnya buruk"]
openers = ["", "Menurut saya ", "Jujur ", "Wah ", "Hmm ", "Pokoknya "]
closers = ["", "!!", " 👍", " 😡", " #MBG", " @menteri", " cek https://contoh.id/berita", "..."]

rows = []
n = 0
for label, words, count in (("negative", negative, 80), ("positive", positive, 40)):
    for _ in range(count):
        n += 1
        text = f"{rng.choice(openers)}{rng.choice(subjects)} {rng.choice(words)}{rng.choice(closers)}"
        if rng.random() < 0.3:
            text = text.upper() if rng.random() < 0.3 else text.capitalize()
        rows.append((f"c{n:03d}", "toy", text, label))
rng.shuffle(rows)

with open("data/toy-corpus.csv", "w", newline="", encoding="utf-8") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["id", "source", "text", "label"])
    w.writerows(rows)
