"""Synthetic corpus for the toy demonstration.

Emits CoNLL-U text (the primary toolchain's input format) plus the matching
cloze templates and facts. Every token gets a trailing space in the surface
form, so rendered sentences split losslessly on whitespace, which is what the
word-level model assumes.

Design: 54 subject-relation-object facts across three transitive frames.
Fact sentences appear in several positive variants (plain, adverb, adjective,
adjective+adverb, modal) and are never negated. Filler sentences carry fixed
subject-object associations that are identical in positive and negated
frames, so the corpus statistics teach that negation leaves the object slot
untouched. The pretrained model therefore completes a negated fact query
with the fact object, which is the failure the fine-tuning is meant to
repair; filler verbs stay disjoint from fact verbs so that repair can be
observed on the fact frames alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

SUBJECTS = [
    "museum", "castle", "tower", "library", "bakery", "harbor", "temple",
    "garden", "bridge", "mill", "forge", "tavern", "chapel", "granary",
    "stable", "lighthouse", "fortress", "cottage",
]

RELATIONS = [
    ("houses", "house"),
    ("guards", "guard"),
    ("sells", "sell"),
]

OBJECTS = [
    "crown", "throne", "sceptre", "chalice", "banner", "drum", "harp",
    "lute", "compass", "lantern", "anchor", "barrel", "saddle", "plough",
    "loom", "kettle", "quill", "scroll", "hammer", "chisel", "spindle",
    "bellows", "cradle", "mirror", "goblet", "dagger", "helmet", "shield",
    "cloak", "candle", "basket", "ribbon", "ledger", "atlas", "globe",
    "prism", "telescope", "hourglass", "sundial", "abacus", "flute",
    "violin", "trumpet", "organ", "easel", "palette", "statue", "mosaic",
    "tapestry", "fresco", "amphora", "urn", "obelisk", "fountain",
]

ADJECTIVES = ["old", "great", "famous", "small", "quiet"]
ADVERBS = ["also", "still", "proudly"]
FILLER_SUBJECTS = ["king", "baker", "sailor", "farmer", "miller", "hunter", "painter"]
FILLER_OBJECTS = ["storm", "river", "road", "wall", "field", "song", "feast"]
# filler subject -> object is fixed and identical in positive and negated
# frames: the corpus statistics say negation leaves the object slot alone,
# which is the negation-blindness the fine-tuning has to overcome
FILLER_FACTS = dict(zip(FILLER_SUBJECTS, FILLER_OBJECTS))
FILLER_PAST = [("visited", "visit"), ("admired", "admire"), ("watched", "watch"),
               ("painted", "paint"), ("crossed", "cross")]
FILLER_BASE = ["visit", "admire", "watch", "paint", "cross"]  # disjoint from fact verbs

FEATS_VBZ = "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin"
FEATS_VBD = "Mood=Ind|Tense=Past|VerbForm=Fin"


@dataclass(frozen=True)
class Fact:
    subject: str
    relation: str  # inflected verb, e.g. "houses"
    lemma: str
    obj: str


def make_facts() -> list[Fact]:
    facts = []
    pool = iter(OBJECTS)
    for relation, lemma in RELATIONS:
        for subject in SUBJECTS:
            facts.append(Fact(subject, relation, lemma, next(pool)))
    return facts


def _conllu(sent_id: str, rows: list[tuple]) -> str:
    lines = [f"# sent_id = {sent_id}"]
    text = " ".join(row[0] for row in rows)
    lines.append(f"# text = {text}")
    for i, (form, lemma, upos, xpos, feats, head, deprel) in enumerate(rows, start=1):
        lines.append(
            f"{i}\t{form}\t{lemma}\t{upos}\t{xpos}\t{feats or '_'}\t{head}\t{deprel}\t_\t_"
        )
    return "\n".join(lines) + "\n\n"


DET = ("the", "the", "DET", "DT", "Definite=Def|PronType=Art")
DET_CAP = ("The", "the", "DET", "DT", "Definite=Def|PronType=Art")
DOT = (".", ".", "PUNCT", ".", "")


def fact_plain(fact: Fact, sent_id: str) -> str:
    return _conllu(sent_id, [
        DET_CAP + (2, "det"),
        (fact.subject, fact.subject, "NOUN", "NN", "Number=Sing", 3, "nsubj"),
        (fact.relation, fact.lemma, "VERB", "VBZ", FEATS_VBZ, 0, "root"),
        DET + (5, "det"),
        (fact.obj, fact.obj, "NOUN", "NN", "Number=Sing", 3, "obj"),
        DOT + (3, "punct"),
    ])


def fact_adverb(fact: Fact, adverb: str, sent_id: str) -> str:
    return _conllu(sent_id, [
        DET_CAP + (2, "det"),
        (fact.subject, fact.subject, "NOUN", "NN", "Number=Sing", 4, "nsubj"),
        (adverb, adverb, "ADV", "RB", "", 4, "advmod"),
        (fact.relation, fact.lemma, "VERB", "VBZ", FEATS_VBZ, 0, "root"),
        DET + (6, "det"),
        (fact.obj, fact.obj, "NOUN", "NN", "Number=Sing", 4, "obj"),
        DOT + (4, "punct"),
    ])


def fact_adjective(fact: Fact, adjective: str, sent_id: str) -> str:
    return _conllu(sent_id, [
        DET_CAP + (3, "det"),
        (adjective, adjective, "ADJ", "JJ", "Degree=Pos", 3, "amod"),
        (fact.subject, fact.subject, "NOUN", "NN", "Number=Sing", 4, "nsubj"),
        (fact.relation, fact.lemma, "VERB", "VBZ", FEATS_VBZ, 0, "root"),
        DET + (6, "det"),
        (fact.obj, fact.obj, "NOUN", "NN", "Number=Sing", 4, "obj"),
        DOT + (4, "punct"),
    ])


def fact_adjective_adverb(fact: Fact, adjective: str, adverb: str, sent_id: str) -> str:
    return _conllu(sent_id, [
        DET_CAP + (3, "det"),
        (adjective, adjective, "ADJ", "JJ", "Degree=Pos", 3, "amod"),
        (fact.subject, fact.subject, "NOUN", "NN", "Number=Sing", 5, "nsubj"),
        (adverb, adverb, "ADV", "RB", "", 5, "advmod"),
        (fact.relation, fact.lemma, "VERB", "VBZ", FEATS_VBZ, 0, "root"),
        DET + (7, "det"),
        (fact.obj, fact.obj, "NOUN", "NN", "Number=Sing", 5, "obj"),
        DOT + (5, "punct"),
    ])


def fact_modal(fact: Fact, sent_id: str) -> str:
    return _conllu(sent_id, [
        DET_CAP + (2, "det"),
        (fact.subject, fact.subject, "NOUN", "NN", "Number=Sing", 4, "nsubj"),
        ("may", "may", "AUX", "MD", "VerbForm=Fin", 4, "aux"),
        (fact.lemma, fact.lemma, "VERB", "VB", "VerbForm=Inf", 0, "root"),
        DET + (6, "det"),
        (fact.obj, fact.obj, "NOUN", "NN", "Number=Sing", 4, "obj"),
        DOT + (4, "punct"),
    ])


def filler_past(rng: random.Random, sent_id: str) -> str:
    subject = rng.choice(FILLER_SUBJECTS)
    obj = FILLER_FACTS[subject]
    verb, lemma = rng.choice(FILLER_PAST)
    return _conllu(sent_id, [
        DET_CAP + (2, "det"),
        (subject, subject, "NOUN", "NN", "Number=Sing", 3, "nsubj"),
        (verb, lemma, "VERB", "VBD", FEATS_VBD, 0, "root"),
        DET + (5, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 3, "obj"),
        DOT + (3, "punct"),
    ])


def filler_did_not(rng: random.Random, sent_id: str) -> str:
    subject = rng.choice(FILLER_SUBJECTS)
    obj = FILLER_FACTS[subject]
    lemma = rng.choice(FILLER_BASE)
    return _conllu(sent_id, [
        DET_CAP + (2, "det"),
        (subject, subject, "NOUN", "NN", "Number=Sing", 5, "nsubj"),
        ("did", "do", "AUX", "VBD", FEATS_VBD, 5, "aux"),
        ("not", "not", "PART", "RB", "Polarity=Neg", 5, "advmod"),
        (lemma, lemma, "VERB", "VB", "VerbForm=Inf", 0, "root"),
        DET + (7, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 5, "obj"),
        DOT + (5, "punct"),
    ])


def filler_does_not(rng: random.Random, sent_id: str) -> str:
    subject = rng.choice(FILLER_SUBJECTS)
    obj = FILLER_FACTS[subject]
    lemma = rng.choice(FILLER_BASE)
    return _conllu(sent_id, [
        DET_CAP + (2, "det"),
        (subject, subject, "NOUN", "NN", "Number=Sing", 5, "nsubj"),
        ("does", "do", "AUX", "VBZ", FEATS_VBZ, 5, "aux"),
        ("not", "not", "PART", "RB", "Polarity=Neg", 5, "advmod"),
        (lemma, lemma, "VERB", "VB", "VerbForm=Inf", 0, "root"),
        DET + (7, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 5, "obj"),
        DOT + (5, "punct"),
    ])


def filler_copula(rng: random.Random, sent_id: str) -> str:
    subject = rng.choice(FILLER_SUBJECTS + SUBJECTS)
    adjective = rng.choice(ADJECTIVES)
    return _conllu(sent_id, [
        DET_CAP + (2, "det"),
        (subject, subject, "NOUN", "NN", "Number=Sing", 4, "nsubj"),
        ("is", "be", "AUX", "VBZ", FEATS_VBZ, 4, "cop"),
        (adjective, adjective, "ADJ", "JJ", "Degree=Pos", 0, "root"),
        DOT + (4, "punct"),
    ])


def generate_corpus(seed: int, fact_repeats: int = 12, filler_count: int = 320,
                    heldout_fraction: float = 0.15) -> tuple[str, str, list[Fact]]:
    """Deterministic (train_conllu, heldout_conllu, facts)."""
    rng = random.Random(seed)
    facts = make_facts()
    blocks: list[str] = []
    counter = 0

    def next_id() -> str:
        nonlocal counter
        counter += 1
        return f"toy-{counter}"

    for fact in facts:
        for _ in range(fact_repeats):
            variant = rng.random()
            if variant < 0.35:
                blocks.append(fact_plain(fact, next_id()))
            elif variant < 0.50:
                blocks.append(fact_adverb(fact, rng.choice(ADVERBS), next_id()))
            elif variant < 0.65:
                blocks.append(fact_adjective(fact, rng.choice(ADJECTIVES), next_id()))
            elif variant < 0.85:
                blocks.append(
                    fact_adjective_adverb(
                        fact, rng.choice(ADJECTIVES), rng.choice(ADVERBS), next_id()
                    )
                )
            else:
                blocks.append(fact_modal(fact, next_id()))
    makers = [filler_past, filler_past, filler_did_not, filler_does_not,
              filler_copula]
    for _ in range(filler_count):
        blocks.append(rng.choice(makers)(rng, next_id()))

    rng.shuffle(blocks)
    cut = int(len(blocks) * (1.0 - heldout_fraction))
    return "".join(blocks[:cut]), "".join(blocks[cut:]), facts


def cloze_templates() -> list[dict]:
    rows = []
    for relation, lemma in RELATIONS:
        rows.append(
            {
                "relation": relation,
                "template": f"The [X] {relation} the [Y] .",
                "negated_template": f"The [X] does not {lemma} the [Y] .",
            }
        )
    return rows


def cloze_facts(facts: list[Fact]) -> list[dict]:
    return [
        {"relation": f.relation, "subject": f.subject, "object": f.obj} for f in facts
    ]
