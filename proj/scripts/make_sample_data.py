#!/usr/bin/env python3
"""Generates the bundled sample corpus and toy knowledge-base vectors.

The corpus plants three topics with distinct density profiles so the ranked
output is predictable: a dense machine-learning theme whose words are tightly
bundled in the toy vector space and broadly co-occurring, a looser
infrastructure theme, and a diffuse office theme. "machine learning" always
occurs as an adjacent pair so the bigram detector folds it into one token;
the audit below confirms no other pair clears the phrase threshold.

Run from the repository root:  python3 scripts/make_sample_data.py
"""

import collections
import math
import os
import random
import re

SEED = 20260401
KB_DIM = 50

DENSE_CORE = ["model", "algorithm", "network"]
DENSE_REST = [
    "gradient", "dataset", "feature", "parameter", "inference", "regression",
    "classifier", "probability", "matrix", "vector", "tensor", "optimization",
    "accuracy", "embedding", "layer", "neuron", "kernel", "estimator", "training",
]
DENSE = DENSE_CORE + DENSE_REST
INFRA = [
    "server", "cloud", "database", "storage", "memory", "processor",
    "latency", "pipeline", "container", "deployment", "cache", "bandwidth",
]
OFFICE = [
    "meeting", "budget", "office", "invoice", "contract", "manager",
    "agenda", "deadline", "schedule", "report",
]
MISC = ["coffee", "lunch", "weekend", "city", "weather", "family", "music", "film"]
PLANTED = DENSE + INFRA + OFFICE + MISC

VERBS = [
    "improve", "refine", "evaluate", "compare", "tune", "compute", "adjust",
    "describe", "discuss", "examine", "explore", "extend", "combine", "apply",
    "inspect", "revisit", "sharpen", "simplify", "rework", "probe",
]
ADJS = [
    "new", "robust", "simple", "fast", "sparse", "stable", "noisy", "final",
    "better", "odd", "tidy", "rough", "clean", "quirky", "subtle", "plain",
]
ADVS = [
    "carefully", "quickly", "often", "rarely", "gladly", "slowly", "nearly",
    "really", "eagerly", "broadly", "boldly", "calmly", "neatly",
    "loosely", "firmly", "barely",
]
CONNS = ["with", "against", "alongside", "beside", "beyond", "near", "under", "atop"]
LEADS = ["We", "They", "You", "Both", "Some", "Few", "Most", "Many"]
PIVOTS = ["is what", "is where", "is why", "is when", "remains what", "becomes what"]
RESTS = ["sits", "rests", "stands", "leans", "waits", "hides"]
SHAPES = ["shapes", "changes", "alters", "steers", "guides", "drives"]
BECAUSES = ["because", "since", "whenever", "if", "though", "while", "when", "once"]


def dense_word(rng):
    # Core words dominate so their degree clearly tops the vocabulary.
    if rng.random() < 0.42:
        return rng.choice(DENSE_CORE)
    return rng.choice(DENSE_REST)


def maybe_adv(rng):
    return rng.choice(ADVS) + " " if rng.random() < 0.5 else ""


def sentence_from_slots(rng, words):
    lead = rng.choice(LEADS)
    v1, v2 = rng.sample(VERBS, 2)
    a1, a2 = rng.sample(ADJS, 2)
    conn = rng.choice(CONNS)
    w = words + [words[0]] * (4 - len(words)) if len(words) < 4 else words
    forms = [
        f"{lead} {maybe_adv(rng)}{v1} the {a1} {w[0]} {conn} the {w[1]}.",
        f"{lead} {v1} one {w[0]} and {maybe_adv(rng)}{v2} a {a1} {w[1]}.",
        f"The {a1} {w[0]} {rng.choice(RESTS)} {conn} the {w[1]} until {lead.lower()} {v1} it.",
        f"{lead} {v1} the {w[0]}, then {maybe_adv(rng)}{v2} the {a2} {w[1]}.",
        f"A {a1} {w[0]} {conn} a {a2} {w[1]} {rng.choice(PIVOTS)} {lead.lower()} {maybe_adv(rng)}{v1}.",
        f"{lead} {maybe_adv(rng)}{v1} every {w[0]} before the {a1} {w[1]} changes.",
    ]
    s = rng.choice(forms)
    if len(words) >= 3 and rng.random() < 0.7:
        tails = [
            f" Its {words[2]} grows {rng.choice(ADVS)}.",
            f" The {rng.choice(ADJS)} {words[2]} follows.",
            f" That {words[2]} stays {rng.choice(ADJS)}.",
        ]
        s = s[:-1] + f" {conn} the {words[2]}."
        if rng.random() < 0.5:
            s += rng.choice(tails)
    return s


def ml_sentence(rng):
    d = dense_word(rng)
    v = rng.choice(VERBS)
    a = rng.choice(ADJS)
    adv = rng.choice(ADVS)
    lead = rng.choice(LEADS)
    forms = [
        f"{lead} {adv} {v} machine learning {rng.choice(CONNS)} the {d}.",
        f"{lead} {v} the {a} {d} {rng.choice(BECAUSES)} machine learning {adv} spreads.",
        f"Machine learning {adv} {rng.choice(SHAPES)} how {lead.lower()} {v} the {d}.",
        f"Machine learning {rng.choice(RESTS)} {rng.choice(CONNS)} the {a} {d}.",
    ]
    return rng.choice(forms)


def dense_sentence(rng):
    roll = rng.random()
    if roll < 0.22:
        return ml_sentence(rng)
    words = [dense_word(rng), dense_word(rng), dense_word(rng)]
    if roll < 0.36:
        words[2] = rng.choice(INFRA)
    elif roll < 0.42:
        words[2] = rng.choice(MISC)
    return sentence_from_slots(rng, words)


def infra_sentence(rng):
    words = rng.sample(INFRA, 3)
    if rng.random() < 0.3:
        words[2] = rng.choice(DENSE_CORE)
    return sentence_from_slots(rng, words)


def office_sentence(rng):
    words = rng.sample(OFFICE, 2)
    if rng.random() < 0.25:
        words.append(rng.choice(DENSE_CORE))
    return sentence_from_slots(rng, words)


def misc_sentence(rng):
    return sentence_from_slots(rng, rng.sample(MISC, 2))


def make_corpus(rng, out_dir, docs=10, sentences_per_doc=70):
    os.makedirs(out_dir, exist_ok=True)
    for doc in range(docs):
        lines = []
        for s in range(sentences_per_doc):
            roll = rng.random()
            if roll < 0.55:
                line = dense_sentence(rng)
            elif roll < 0.80:
                line = infra_sentence(rng)
            elif roll < 0.92:
                line = office_sentence(rng)
            else:
                line = misc_sentence(rng)
            lines.append(line)
            if s % 8 == 7:
                lines.append("")
        with open(os.path.join(out_dir, f"doc{doc:02d}.txt"), "w") as f:
            f.write("\n".join(lines) + "\n")


def unit(vec):
    norm = math.sqrt(sum(x * x for x in vec))
    return [x / norm for x in vec]


def random_unit(rng):
    return unit([rng.gauss(0.0, 1.0) for _ in range(KB_DIM)])


def at_angle(rng, center, theta):
    w = [rng.gauss(0.0, 1.0) for _ in range(KB_DIM)]
    dot = sum(a * b for a, b in zip(w, center))
    w = unit([a - dot * b for a, b in zip(w, center)])
    return [math.cos(theta) * c + math.sin(theta) * s for c, s in zip(center, w)]


def make_kb(rng, path):
    u_dense = random_unit(rng)
    u_infra = random_unit(rng)
    u_office = random_unit(rng)

    rows = []
    for w in DENSE_CORE:
        rows.append((w, at_angle(rng, u_dense, rng.uniform(0.002, 0.005))))
    rows.append(("machine_learning", at_angle(rng, u_dense, rng.uniform(0.008, 0.012))))
    for w in DENSE_REST:
        rows.append((w, at_angle(rng, u_dense, rng.uniform(0.02, 0.05))))
    for w in INFRA:
        rows.append((w, at_angle(rng, u_infra, rng.uniform(0.15, 0.30))))
    for w in OFFICE:
        rows.append((w, at_angle(rng, u_office, rng.uniform(0.30, 0.60))))
    for w in MISC:
        rows.append((w, random_unit(rng)))
    # A few non-noun entries; the loader's vocabulary filter skips them.
    for w in ["the", "with", "compute", "fast"]:
        rows.append((w, random_unit(rng)))

    with open(path, "w") as f:
        f.write(f"{len(rows)} {KB_DIM}\n")
        for word, vec in rows:
            f.write(word + " " + " ".join(f"{x:.6f}" for x in vec) + "\n")


# --- audit: mirrors the artifact's lemma and phrase rules closely enough ---

IRREGULAR = {"men": "man", "women": "woman", "children": "child", "goes": "go", "does": "do"}
S_KEEP = {"news", "series", "species", "always", "perhaps", "whereas", "towards", "besides"}


def plural_lemma(w):
    if w in IRREGULAR:
        return IRREGULAR[w]
    if w in S_KEEP:
        return w
    if w.endswith("sses"):
        return w[:-2]
    if w.endswith("ies"):
        return w[:-3] + "y" if len(w) >= 5 else w[:-1]
    if w.endswith(("zzes", "xes", "ches", "shes")):
        return w[:-2]
    if w.endswith(("ss", "us", "is")):
        return w
    if len(w) >= 4 and w.endswith("s"):
        return w[:-1]
    return w


def verb_lemma_pass(tokens):
    counts = collections.Counter(tokens)
    remap = {}
    for w in counts:
        base = None
        if w.endswith("ing") and len(w) >= 6:
            base = w[:-3]
        elif w.endswith("ed") and len(w) >= 5:
            base = w[:-2]
        if base is None:
            continue
        cands = ([base] if len(base) >= 3 else []) + [base + "e"]
        if len(base) >= 4 and base[-1] == base[-2] and base[-1] not in "aeiou":
            cands.append(base[:-1])
        for c in cands:
            if c != w and counts.get(c, 0) > 0:
                remap[w] = c
                break
    return [remap.get(t, t) for t in tokens]


def audit(out_dir, delta=5, threshold=10.0):
    sentences = []
    for name in sorted(os.listdir(out_dir)):
        with open(os.path.join(out_dir, name)) as f:
            for line in f:
                toks = [plural_lemma(t) for t in re.findall(r"[a-z]+", line.lower())
                        if len(t) >= 2]
                if toks:
                    sentences.append(toks)
    flat = [t for s in sentences for t in s]
    remapped = verb_lemma_pass(flat)
    pos = 0
    for s in sentences:
        s[:] = remapped[pos:pos + len(s)]
        pos += len(s)

    unigrams = collections.Counter(t for s in sentences for t in s)
    pairs = collections.Counter()
    for s in sentences:
        pairs.update(zip(s, s[1:]))
    total = sum(unigrams.values())
    merged = []
    for (a, b), c in pairs.items():
        if c <= delta:
            continue
        score = (c - delta) * total / (unigrams[a] * unigrams[b])
        if score >= threshold:
            merged.append((a, b, c, round(score, 1)))
    return total, unigrams, merged


def main():
    rng = random.Random(SEED)
    here = os.path.dirname(os.path.abspath(__file__))
    root = os.path.dirname(here)
    corpus_dir = os.path.join(root, "data", "sample", "corpus")
    make_corpus(rng, corpus_dir)
    make_kb(rng, os.path.join(root, "data", "sample", "kb_vectors.txt"))

    total, unigrams, merged = audit(corpus_dir)
    print(f"tokens={total}")
    print("qualifying bigrams:", merged)
    low = {w: unigrams[w] for w in PLANTED if unigrams[w] < 3}
    print("planted words below min_count:", low or "none")
    core = {w: unigrams[w] for w in DENSE_CORE + ["machine", "learning"]}
    print("core counts:", core)
    # Filler-filler merges are fine; merges touching planted words would
    # disturb the construction, and a pair ending in "machine" would beat
    # (machine, learning) in the greedy pass.
    guarded = set(PLANTED) | {"machine", "learning"}
    bad = [m for m in merged
           if ((m[0], m[1]) != ("machine", "learning")
               and (m[0] in guarded or m[1] in guarded))]
    if bad or low:
        print("offending:", bad)
        raise SystemExit("sample corpus needs a different seed or templates")


if __name__ == "__main__":
    main()
