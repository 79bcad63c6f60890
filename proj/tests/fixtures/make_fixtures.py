#!/usr/bin/env python3
"""Regenerates the checked-in test fixtures.

    python3 make_fixtures.py --cmudict path/to/cmudict.dict

The lyrics are synthetic, built from small themed word pools, so the corpus
has recoverable topic structure without carrying any real song text.
"""
import argparse
import json
import math
import pathlib
import random

HERE = pathlib.Path(__file__).resolve().parent
SEED = 20240611

THEMES = {
    "night": {
        "noun": ["night", "moon", "stars", "shadow", "city", "street", "light", "dream"],
        "verb": ["shine", "wander", "whisper", "fade", "glow", "drift"],
        "adj": ["silver", "dark", "quiet", "electric", "lonely"],
    },
    "sea": {
        "noun": ["ocean", "wave", "shore", "sail", "tide", "harbor", "wind", "island"],
        "verb": ["sail", "crash", "roll", "call", "carry", "float"],
        "adj": ["blue", "deep", "salty", "wild", "endless"],
    },
    "fire": {
        "noun": ["fire", "flame", "heat", "smoke", "spark", "ash", "engine", "thunder"],
        "verb": ["burn", "rise", "roar", "ignite", "break", "run"],
        "adj": ["red", "hot", "loud", "restless", "golden"],
    },
    "home": {
        "noun": ["home", "door", "kitchen", "mother", "porch", "garden", "table", "window"],
        "verb": ["remember", "wait", "stay", "return", "sing", "hold"],
        "adj": ["warm", "old", "gentle", "simple", "sweet"],
    },
    "road": {
        "noun": ["road", "highway", "truck", "mile", "dust", "town", "radio", "wheel"],
        "verb": ["drive", "ride", "leave", "chase", "roll", "go"],
        "adj": ["long", "empty", "dusty", "fast", "free"],
    },
}

PRONOUNS = ["i", "you", "we", "they", "she", "he"]
PREPS = ["in", "on", "under", "through", "across", "by"]
ADVERBS = ["tonight", "again", "forever", "slowly", "away", "now"]
TEMPLATES = [
    "{pron} {verb} the {noun}",
    "{adj} {noun} in the {noun2}",
    "{verb} with me {adv}",
    "we {verb} {prep} the {adj} {noun}",
    "{noun} and {noun2} and {noun}",
    "oh the {adj} {noun} will {verb}",
    "{pron} {verb} {prep} the {noun} {adv}",
    "don't {verb} my {noun}",
]
GENRES = ["rock", "pop", "country", "hip-hop", "electronic", "rnb"]

# a few tokens deliberately missing from the lexicon to exercise coverage
OOV = ["zzxqy", "brrrum"]


def line(rng, theme):
    pool = THEMES[theme]
    text = rng.choice(TEMPLATES).format(
        pron=rng.choice(PRONOUNS),
        verb=rng.choice(pool["verb"]),
        noun=rng.choice(pool["noun"]),
        noun2=rng.choice(pool["noun"]),
        adj=rng.choice(pool["adj"]),
        prep=rng.choice(PREPS),
        adv=rng.choice(ADVERBS),
    )
    if rng.random() < 0.03:
        text += " " + rng.choice(OOV)
    return text


def section(rng, theme, second):
    lines = []
    for _ in range(4):
        t = second if second and rng.random() < 0.3 else theme
        lines.append(line(rng, t))
    if rng.random() < 0.3:
        lines.append(lines[0])  # a repeated hook line
    return lines


def unit(rng, dim):
    v = [rng.gauss(0.0, 1.0) for _ in range(dim)]
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def mix(a, b, wa):
    v = [wa * x + (1.0 - wa) * y for x, y in zip(a, b)]
    n = math.sqrt(sum(x * x for x in v))
    return [round(x / n, 6) for x in v]


def write_vectors(path, kind, dim, records):
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps({"kind": kind, "dim": dim}) + "\n")
        for rid in sorted(records):
            f.write(json.dumps({"id": rid, "vec": records[rid]}) + "\n")


def build_corpus(rng):
    names = sorted(THEMES)
    tracks = []
    for i in range(20):
        theme = names[i % len(names)]
        second = names[(i * 3 + 1) % len(names)] if i % 3 else None
        count = 4 + (i % 3)
        sections = [section(rng, theme, second) for _ in range(count)]
        tracks.append({
            "track_id": "t%02d" % (i + 1),
            "title": "%s song %d" % (theme.title(), i + 1),
            "artist": "artist %d" % (i % 7 + 1),
            "genre": GENRES[i % len(GENRES)],
            "valence": round(rng.uniform(-2.0, 2.0), 2),
            "arousal": round(rng.uniform(-2.0, 2.0), 2),
            "sections": sections,
            "_theme": theme,
        })
    # mood values quoted in the worked examples
    tracks[0]["valence"], tracks[0]["arousal"] = -1.94, -0.66
    tracks[1]["valence"], tracks[1]["arousal"] = 1.54, 1.70
    # t20 opens with an exact copy of a t03 section, for duplicate-query checks
    tracks[19]["sections"][0] = list(tracks[2]["sections"][1])
    # one blank section, skipped at ingest
    tracks[5]["sections"].append(["", "   "])
    return tracks


def build_lexicon(tracks, cmudict):
    words = set()
    for t in tracks:
        for s in t["sections"]:
            for l in s:
                words.update(w for w in l.split() if w)
    words.update(["ring", "the"])
    entries = {}
    with open(cmudict, encoding="utf-8") as f:
        for raw in f:
            parts = raw.split("#")[0].split()
            if not parts:
                continue
            head = parts[0]
            base = head.split("(")[0]
            if base in words:
                entries.setdefault(base, []).append((head, parts[1:]))
    missing = sorted(words - set(entries) - set(OOV))
    if missing:
        raise SystemExit("not in cmudict: %s" % missing)
    out = [";;; pronunciation subset for the test corpus", ";;; WORD  PHONEMES (stress digits kept)"]
    for w in sorted(entries):
        for head, phones in entries[w][:2]:
            out.append("%s  %s" % (head.upper(), " ".join(phones)))
    return "\n".join(out) + "\n"


def build_vectors(rng, tracks):
    names = sorted(THEMES)
    sem_base = {t: unit(rng, 384) for t in names}
    aud_base = {g: unit(rng, 200) for g in GENRES}
    semantic, audio, mood = {}, {}, {}
    for t in tracks:
        idx = 0
        for s in t["sections"]:
            if not any(l.strip() for l in s):
                continue
            semantic["%s:%d" % (t["track_id"], idx)] = mix(sem_base[t["_theme"]], unit(rng, 384), 0.6)
            idx += 1
        if t["track_id"] != "t07":  # no audio for one track
            audio[t["track_id"]] = mix(aud_base[t["genre"]], unit(rng, 200), 0.5)
        mood[t["track_id"]] = [t["valence"], t["arousal"]]
    semantic["t20:0"] = list(semantic["t03:1"])
    return semantic, audio, mood


def build_ordered():
    """Triples whose target values are equally spaced and ranked in order."""
    questions, rows = [], []
    specs = [("sim_sem", [0.9, 0.5, 0.1]), ("diff_mus", [0.2, 0.5, 0.8])]
    qn = 0
    for metric, values in specs:
        for r in range(3):
            qn += 1
            qid = "q%04d" % qn
            comps = {}
            for g, v in zip("HML", values):
                metrics = {m: 0.5 for m in ["sim_top", "sim_sem", "diff_mood", "sim_aud", "sim_pho", "diff_mus"]}
                metrics[metric] = v
                comps[g] = {"set_id": "ref%d-%s" % (r, g), "metrics": metrics}
            questions.append({"question_id": qid, "reference": "ref%d" % r, "target": metric, "comparisons": comps})
            for rater in ("r1", "r2", "r3"):
                for rank, g in enumerate("HML", start=1):
                    rows.append("%s,%s,%s,%d" % (qid, rater, g, rank))
    doc = {"questions": questions}
    csv = "question_id,rater_id,group_label,rank\n" + "\n".join(rows) + "\n"
    return json.dumps(doc, indent=2) + "\n", csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cmudict", required=True)
    args = ap.parse_args()
    rng = random.Random(SEED)

    tracks = build_corpus(rng)
    (HERE / "lexicon.dict").write_text(build_lexicon(tracks, args.cmudict), encoding="utf-8")
    semantic, audio, mood = build_vectors(rng, tracks)
    with open(HERE / "corpus.jsonl", "w", encoding="utf-8") as f:
        for t in tracks:
            f.write(json.dumps({k: v for k, v in t.items() if not k.startswith("_")}) + "\n")
    write_vectors(HERE / "semantic.jsonl", "semantic", 384, semantic)
    write_vectors(HERE / "audio.jsonl", "audio", 200, audio)
    write_vectors(HERE / "mood.jsonl", "mood", 2, mood)
    triples, ranks = build_ordered()
    (HERE / "ordered_triples.json").write_text(triples, encoding="utf-8")
    (HERE / "ordered_ranks.csv").write_text(ranks, encoding="utf-8")


if __name__ == "__main__":
    main()
