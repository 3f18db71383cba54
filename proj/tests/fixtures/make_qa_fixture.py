#!/usr/bin/env python3
# Copyright (c) 2026, The moelab Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates qa_fixture_200.json (SQuAD v2 layout). Deterministic."""

import json
import random

NAMES = ["Ada Lovelace", "Marie Curie", "Tomas Berg", "Lena Okafor", "Ravi Menon", "Chen Wei",
         "Sofia Rossi", "Jonas Keller", "Amara Diallo", "Ingrid Holm", "Pedro Alves", "Yuki Sato"]
ORGS = ["river museum", "glass factory", "public library", "chess club", "rowing society",
        "city orchestra", "botanical garden", "weather station", "printing house", "night school"]
PLACES = ["Zürich", "St. Louis", "Lisbon", "the old harbour", "Kraków", "Nairobi", "Oslo",
          "the northern valley", "Montréal", "Cape Town"]
OBJECTS = ["a brass telescope", "the red notebook", "an oak table", "a silver key",
           "the blue lantern", "a paper map", "the iron bell", "a wooden flute"]
FILLERS = [
    "The weather was cold and the streets were quiet.",
    "Many visitors came from distant towns to see the building.",
    "A large crowd gathered near the gate before noon.",
    "The small shop sold fresh bread and strong coffee.",
    "Local papers wrote about the event for several weeks.",
    "Children often played in the big park behind the hall.",
    "The river rose quickly after the heavy rain.",
    "Workers repaired the roof during the long summer.",
    "An old bridge connected the two parts of the town.",
    "Most people walked to work because the trains were slow.",
    "The teacher told a funny story about the early days.",
    "Some records were lost in a fire many years later.",
    "The mayor gave a short speech at the opening.",
    "Bright lights filled the main street every evening.",
    "A famous painter lived in a quiet house nearby.",
    "The market was busy and loud on most mornings.",
    "Farmers brought apples and grain to the square.",
    "The new road made the journey much faster.",
    "Students read quietly in the large reading room.",
    "The committee met again to discuss the difficult plan.",
]


def sentence_facts(rng):
    name = rng.choice(NAMES)
    org = rng.choice(ORGS)
    place = rng.choice(PLACES)
    year = str(rng.randint(1820, 1990))
    obj = rng.choice(OBJECTS)
    kind = rng.randrange(5)
    if kind == 0:
        return (f"{name} founded the {org} in {year}.", f"When did {name} found the {org}?", [year])
    if kind == 1:
        return (f"In {year}, {name} moved to {place} to study music.", f"Where did {name} move to study music?", [place])
    if kind == 2:
        return (f"The {org} was led by {name} for many years.", f"Who led the {org}?", [name])
    if kind == 3:
        return (f"{name} kept {obj} in the small office.", f"What did {name} keep in the small office?", [obj, obj.split(" ", 1)[1]])
    return (f"The first director of the {org} was {name}, who arrived from {place}.",
            f"Where did the first director of the {org} come from?", [place])


def main():
    rng = random.Random(20260419)
    paragraphs = []
    for n in range(200):
        key, question, answers = sentence_facts(rng)
        fillers = rng.sample(FILLERS, rng.randint(2, 5))
        slot = rng.randint(0, len(fillers))
        sentences = fillers[:slot] + [key] + fillers[slot:]
        context = " ".join(sentences)
        unanswerable = n % 10 == 9
        qa = {"id": f"fx-{n:03d}", "question": question, "is_impossible": unanswerable}
        if unanswerable:
            qa["question"] = question.replace("?", " during the war?")
            qa["answers"] = []
        else:
            key_pos = context.index(key)
            qa["answers"] = []
            for text in answers:
                start = key_pos + key.index(text)
                qa["answers"].append({"text": text, "answer_start": start})
        paragraphs.append({"context": context, "qas": [qa]})
    doc = {"version": "v2.0", "data": [{"title": "fixture", "paragraphs": paragraphs}]}
    with open("qa_fixture_200.json", "w", encoding="utf-8") as f:
        json.dump(doc, f, ensure_ascii=False, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
