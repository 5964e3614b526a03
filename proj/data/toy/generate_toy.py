#!/usr/bin/env python3
"""Regenerates the toy collection, queries, qrels and gazetteer.

Each entity has a canonical name and a descriptive alias with no words in
common. Entity passages mention only the descriptive alias; entity queries
mention only the canonical name and otherwise use words that never occur in
the collection, so they can be answered only through entity expansion.
Lexical queries share a topic word with their passage.
"""

import random
from pathlib import Path

SEED = 20240611
NUM_ENTITIES = 40
NUM_FILLER_PASSAGES = 160
NUM_LEXICAL_QUERIES = 40
NUM_UNANSWERABLE = 5

ONSETS = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"]
VOWELS = ["a", "e", "i", "o", "u"]
CODAS = ["", "n", "r", "s", "l", "th"]

ADJECTIVES = """amber ashen azure bitter brass broken cedar chalk cobalt copper crimson
distant dusky dappled ember fallow frozen gilded granite hollow ivory jade lantern marble
misty mossy obsidian olive pale quiet russet saffron scarlet silent silver slate
sunken tawny velvet willow""".split()
NOUNS = """abbey archive arsenal bastion beacon bridge canal chapel citadel cloister
colossus conservatory courthouse dockyard fortress foundry gallery garrison granary
harbor hermitage lighthouse manor mill monastery observatory orchard palace pavilion
quarry rampart refinery reservoir sanctuary shipyard spire tannery terrace tower vineyard""".split()
FILLER = """ancient record season river valley market winter summer council trade road
stone timber harvest festival guild craft merchant village district north south east
west early late century decade survey map journal letter account report annual local
regional coastal inland upper lower central old new long short large small green gray
built opened closed restored rebuilt founded visited described noted listed housed
served supplied linked crossed faced held kept made moved named owned used""".split()
QUERY_ONLY = """who what where when which describe explain information regarding tell
me about details history origin purpose""".split()
STRUCTURE = ["the", "of", "and", "in", "was", "by", "for", "with", "near", "its"]


def make_word(rng, syllables):
    return "".join(rng.choice(ONSETS) + rng.choice(VOWELS) + rng.choice(CODAS) for _ in range(syllables))


def unique_words(rng, count, taken):
    out = []
    while len(out) < count:
        w = make_word(rng, rng.randint(2, 3))
        if w not in taken:
            taken.add(w)
            out.append(w)
    return out


def filler_sentence(rng, length):
    words = [rng.choice(FILLER + STRUCTURE) for _ in range(length)]
    return " ".join(words).capitalize() + "."


def main():
    rng = random.Random(SEED)
    out_dir = Path(__file__).resolve().parent
    taken = set(ADJECTIVES + NOUNS + FILLER + QUERY_ONLY + STRUCTURE)

    adjectives = ADJECTIVES[:]
    nouns = NOUNS[:]
    rng.shuffle(adjectives)
    rng.shuffle(nouns)
    name_words = unique_words(rng, 2 * NUM_ENTITIES, taken)
    entities = []
    for i in range(NUM_ENTITIES):
        canonical = f"{name_words[2 * i].capitalize()} {name_words[2 * i + 1].capitalize()}"
        alias = f"{adjectives[i]} {nouns[i]}"
        entities.append((canonical, alias, nouns[i]))

    gazetteer = []
    for canonical, alias, noun in entities:
        gazetteer.append((canonical, canonical, round(rng.uniform(8.0, 10.0), 2)))
        gazetteer.append((alias, canonical, round(rng.uniform(5.0, 7.5), 2)))
        # a bare noun is too ambiguous to link on its own
        gazetteer.append((noun, canonical, round(rng.uniform(1.0, 4.0), 2)))

    passages = []
    queries = []
    qrels = []

    for i, (canonical, alias, noun) in enumerate(entities):
        pid = f"P{len(passages):04d}"
        body = [filler_sentence(rng, rng.randint(6, 14)) for _ in range(rng.randint(1, 3))]
        body.insert(rng.randint(0, len(body)), f"The {alias} was {rng.choice(FILLER)} {rng.choice(FILLER)}.")
        if i % 8 == 0:
            # long passages span several linker windows
            body += [filler_sentence(rng, 20) for _ in range(8)]
            body.append(f"Later the {alias} {rng.choice(FILLER)} again.")
        passages.append((pid, " ".join(body)))
        if i < NUM_ENTITIES - NUM_UNANSWERABLE:
            qid = f"E{i:03d}"
            asks = rng.sample(QUERY_ONLY, 3)
            queries.append((qid, f"{asks[0]} {asks[1]} {canonical} {asks[2]}"))
            qrels.append((qid, pid))

    topic_words = unique_words(rng, NUM_FILLER_PASSAGES, taken)
    for i in range(NUM_FILLER_PASSAGES):
        pid = f"P{len(passages):04d}"
        body = [filler_sentence(rng, rng.randint(5, 12)) for _ in range(rng.randint(1, 4))]
        body.insert(rng.randint(0, len(body)), f"The {topic_words[i]} {rng.choice(FILLER)} {rng.choice(FILLER)}.")
        if rng.random() < 0.3:
            canonical = rng.choice(entities)[0]
            body.append(f"{canonical} {rng.choice(FILLER)} {rng.choice(STRUCTURE)} {rng.choice(FILLER)}.")
        passages.append((pid, " ".join(body)))
        if i < NUM_LEXICAL_QUERIES:
            qid = f"L{i:03d}"
            asks = rng.sample(QUERY_ONLY, 2)
            queries.append((qid, f"{asks[0]} {topic_words[i]} {rng.choice(FILLER)} {asks[1]}"))
            qrels.append((qid, pid))

    # entity queries whose passages mention only the unlinkable bare noun
    for i in range(NUM_ENTITIES - NUM_UNANSWERABLE, NUM_ENTITIES):
        canonical, alias, noun = entities[i]
        pid = f"P{len(passages):04d}"
        passages.append((pid, f"{filler_sentence(rng, 8)} The {noun} {rng.choice(FILLER)} {rng.choice(FILLER)}."))
        qid = f"U{i:03d}"
        asks = rng.sample(QUERY_ONLY, 2)
        queries.append((qid, f"{asks[0]} {canonical} {asks[1]}"))
        qrels.append((qid, pid))

    with open(out_dir / "collection.tsv", "w", encoding="utf-8") as f:
        for pid, text in passages:
            f.write(f"{pid}\t{text}\n")
    with open(out_dir / "queries.tsv", "w", encoding="utf-8") as f:
        for qid, text in queries:
            f.write(f"{qid}\t{text}\n")
    with open(out_dir / "qrels.txt", "w", encoding="utf-8") as f:
        for qid, pid in qrels:
            f.write(f"{qid} 0 {pid} 1\n")
    with open(out_dir / "gazetteer.tsv", "w", encoding="utf-8") as f:
        for alias, entity, score in gazetteer:
            f.write(f"{alias}\t{entity}\t{score}\n")


if __name__ == "__main__":
    main()
