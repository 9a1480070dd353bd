#!/usr/bin/env python3
"""Generate the frozen 100-sentence census fixture (fixtures/corpus100.conllu).

Run once; the output is committed. Regenerating with the same seed is
byte-stable, but tests rely on the committed file, not on this script.
"""

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from negforge.conllu import ParsedSentence, Token, to_conllu

NOUNS = [
    "king", "queen", "farmer", "baker", "soldier", "teacher", "doctor",
    "sailor", "miller", "hunter", "painter", "guard", "wagon", "letter",
    "sword", "shield", "basket", "lantern", "mirror", "saddle", "barrel",
    "ladder", "anchor", "ribbon", "candle", "gate", "bridge", "castle",
]
PLURALS = [("kings", "king"), ("farmers", "farmer"), ("soldiers", "soldier"),
           ("sailors", "sailor"), ("guards", "guard"), ("painters", "painter"),
           ("hunters", "hunter"), ("millers", "miller")]
PLACES = ["valley", "harbor", "village", "forest", "meadow", "courtyard",
          "cellar", "orchard"]
ADJS = ["old", "bright", "heavy", "quiet", "narrow", "golden", "wooden", "distant"]
V_TRANS = [("carried", "carry"), ("painted", "paint"), ("repaired", "repair"),
           ("guarded", "guard"), ("opened", "open"), ("closed", "close"),
           ("moved", "move"), ("lifted", "lift"), ("cleaned", "clean"),
           ("watched", "watch"), ("borrowed", "borrow"), ("sharpened", "sharpen")]
V_INTR_PAST = [("worked", "work"), ("waited", "wait"), ("rested", "rest"),
               ("slept", "sleep")]
MODALS = ["may", "must", "should", "would", "will"]

DET_THE = ("the", "the", "DET", "DT", "Definite=Def|PronType=Art")
DET_A = ("a", "a", "DET", "DT", "Definite=Ind|PronType=Art")

FEATS_VBD = "Mood=Ind|Tense=Past|VerbForm=Fin"
FEATS_VBZ = "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin"
FEATS_VBP = "Mood=Ind|Tense=Pres|VerbForm=Fin"
FEATS_VBN = "Tense=Past|VerbForm=Part"
FEATS_VBG = "Tense=Pres|VerbForm=Part"
FEATS_IMP = "Mood=Imp|VerbForm=Fin"


def tok(index, form, lemma, upos, xpos, feats, head, deprel, space=True):
    pairs = tuple(tuple(item.split("=", 1)) for item in feats.split("|")) if feats else ()
    return Token(index=index, form=form, lemma=lemma, upos=upos, xpos=xpos,
                 feats=pairs, head=head, deprel=deprel, space_after=space)


def sentence(sent_id, rows):
    tokens = []
    for i, row in enumerate(rows, start=1):
        form, lemma, upos, xpos, feats, head, deprel = row[:7]
        space = row[7] if len(row) > 7 else True
        tokens.append(tok(i, form, lemma, upos, xpos, feats, head, deprel, space))
    from negforge.rules import render

    text = render(tokens)
    return ParsedSentence(sent_id=sent_id, tokens=tuple(tokens), text=text)


def simple_past(r, i):
    subj = r.choice(NOUNS)
    obj = r.choice([n for n in NOUNS if n != subj])
    verb, lemma = r.choice(V_TRANS)
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 3, "nsubj"),
        (verb, lemma, "VERB", "VBD", FEATS_VBD, 0, "root"),
        ("the",) + DET_THE[1:] + (5, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 3, "obj", False),
        (".", ".", "PUNCT", ".", "", 3, "punct"),
    ])


def simple_past_obl(r, i):
    subj = r.choice(NOUNS)
    place = r.choice(PLACES)
    verb, lemma = r.choice(V_INTR_PAST)
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 3, "nsubj"),
        (verb, lemma, "VERB", "VBD", FEATS_VBD, 0, "root"),
        ("in", "in", "ADP", "IN", "", 6, "case"),
        ("the",) + DET_THE[1:] + (6, "det"),
        (place, place, "NOUN", "NN", "Number=Sing", 3, "obl", False),
        (".", ".", "PUNCT", ".", "", 3, "punct"),
    ])


def present_3sg(r, i):
    subj = r.choice(NOUNS)
    obj = r.choice([n for n in NOUNS if n != subj])
    verb, lemma = r.choice(V_TRANS)
    vbz = lemma + ("es" if lemma.endswith(("ch", "sh", "s", "x")) else "s")
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 3, "nsubj"),
        (vbz, lemma, "VERB", "VBZ", FEATS_VBZ, 0, "root"),
        ("the",) + DET_THE[1:] + (5, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 3, "obj", False),
        (".", ".", "PUNCT", ".", "", 3, "punct"),
    ])


def present_plural(r, i):
    subj, subj_lemma = r.choice(PLURALS)
    obj = r.choice(NOUNS)
    _, lemma = r.choice(V_TRANS)
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj_lemma, "NOUN", "NNS", "Number=Plur", 3, "nsubj"),
        (lemma, lemma, "VERB", "VBP", FEATS_VBP, 0, "root"),
        ("the",) + DET_THE[1:] + (5, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 3, "obj", False),
        (".", ".", "PUNCT", ".", "", 3, "punct"),
    ])


def copula(r, i):
    subj = r.choice(NOUNS)
    adj = r.choice(ADJS)
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 4, "nsubj"),
        ("is", "be", "AUX", "VBZ", FEATS_VBZ, 4, "cop"),
        (adj, adj, "ADJ", "JJ", "Degree=Pos", 0, "root", False),
        (".", ".", "PUNCT", ".", "", 4, "punct"),
    ])


def modal(r, i):
    subj = r.choice(NOUNS)
    obj = r.choice([n for n in NOUNS if n != subj])
    _, lemma = r.choice(V_TRANS)
    md = r.choice(MODALS)
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 4, "nsubj"),
        (md, md, "AUX", "MD", "VerbForm=Fin", 4, "aux"),
        (lemma, lemma, "VERB", "VB", "VerbForm=Inf", 0, "root"),
        ("the",) + DET_THE[1:] + (6, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 4, "obj", False),
        (".", ".", "PUNCT", ".", "", 4, "punct"),
    ])


def perfect(r, i):
    subj = r.choice(NOUNS)
    obj = r.choice([n for n in NOUNS if n != subj])
    verb, lemma = r.choice(V_TRANS)
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 4, "nsubj"),
        ("has", "have", "AUX", "VBZ", FEATS_VBZ, 4, "aux"),
        (verb, lemma, "VERB", "VBN", FEATS_VBN, 0, "root"),
        ("the",) + DET_THE[1:] + (6, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 4, "obj", False),
        (".", ".", "PUNCT", ".", "", 4, "punct"),
    ])


def progressive(r, i):
    subj = r.choice(NOUNS)
    obj = r.choice([n for n in NOUNS if n != subj])
    _, lemma = r.choice(V_TRANS)
    vbg = lemma[:-1] + "ing" if lemma.endswith("e") else lemma + "ing"
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 4, "nsubj"),
        ("is", "be", "AUX", "VBZ", FEATS_VBZ, 4, "aux"),
        (vbg, lemma, "VERB", "VBG", FEATS_VBG, 0, "root"),
        ("the",) + DET_THE[1:] + (6, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 4, "obj", False),
        (".", ".", "PUNCT", ".", "", 4, "punct"),
    ])


def passive(r, i):
    subj = r.choice(NOUNS)
    agent = r.choice([n for n in NOUNS if n != subj])
    verb, lemma = r.choice(V_TRANS)
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 4, "nsubj:pass"),
        ("was", "be", "AUX", "VBD", "Mood=Ind|Number=Sing|Person=3|Tense=Past|VerbForm=Fin", 4, "aux:pass"),
        (verb, lemma, "VERB", "VBN", FEATS_VBN, 0, "root"),
        ("by", "by", "ADP", "IN", "", 7, "case"),
        ("the",) + DET_THE[1:] + (7, "det"),
        (agent, agent, "NOUN", "NN", "Number=Sing", 4, "obl", False),
        (".", ".", "PUNCT", ".", "", 4, "punct"),
    ])


def root_be(r, i):
    noun = r.choice(NOUNS)
    place = r.choice(PLACES)
    return sentence(f"c{i}", [
        ("There", "there", "PRON", "EX", "", 2, "expl"),
        ("was", "be", "VERB", "VBD", "Mood=Ind|Number=Sing|Person=3|Tense=Past|VerbForm=Fin", 0, "root"),
        ("a",) + DET_A[1:] + (4, "det"),
        (noun, noun, "NOUN", "NN", "Number=Sing", 2, "nsubj"),
        ("in", "in", "ADP", "IN", "", 7, "case"),
        ("the",) + DET_THE[1:] + (7, "det"),
        (place, place, "NOUN", "NN", "Number=Sing", 2, "obl", False),
        (".", ".", "PUNCT", ".", "", 2, "punct"),
    ])


def imperative(r, i):
    obj = r.choice(NOUNS)
    _, lemma = r.choice(V_TRANS)
    return sentence(f"c{i}", [
        (lemma.capitalize(), lemma, "VERB", "VB", FEATS_IMP, 0, "root"),
        ("the",) + DET_THE[1:] + (3, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 1, "obj", False),
        (".", ".", "PUNCT", ".", "", 1, "punct"),
    ])


def already_negated(r, i):
    subj = r.choice(NOUNS)
    obj = r.choice([n for n in NOUNS if n != subj])
    _, lemma = r.choice(V_TRANS)
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 5, "nsubj"),
        ("did", "do", "AUX", "VBD", FEATS_VBD, 5, "aux"),
        ("not", "not", "PART", "RB", "Polarity=Neg", 5, "advmod"),
        (lemma, lemma, "VERB", "VB", "VerbForm=Inf", 0, "root"),
        ("the",) + DET_THE[1:] + (7, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 5, "obj", False),
        (".", ".", "PUNCT", ".", "", 5, "punct"),
    ])


def npi(r, i):
    subj = r.choice(NOUNS)
    place = r.choice(PLACES)
    verb, npi_word = r.choice([("see", "anyone"), ("find", "anything"), ("meet", "anybody")])
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 5, "nsubj"),
        ("did", "do", "AUX", "VBD", FEATS_VBD, 5, "aux"),
        ("not", "not", "PART", "RB", "Polarity=Neg", 5, "advmod"),
        (verb, verb, "VERB", "VB", "VerbForm=Inf", 0, "root"),
        (npi_word, npi_word, "PRON", "NN", "Number=Sing", 5, "obj"),
        ("at", "at", "ADP", "IN", "", 9, "case"),
        ("the",) + DET_THE[1:] + (9, "det"),
        (place, place, "NOUN", "NN", "Number=Sing", 5, "obl", False),
        (".", ".", "PUNCT", ".", "", 5, "punct"),
    ])


def negword_det(r, i):
    noun = r.choice(NOUNS)
    place = r.choice(PLACES)
    return sentence(f"c{i}", [
        ("There", "there", "PRON", "EX", "", 2, "expl"),
        ("is", "be", "VERB", "VBZ", FEATS_VBZ, 0, "root"),
        ("no", "no", "DET", "DT", "Polarity=Neg", 4, "det"),
        (noun, noun, "NOUN", "NN", "Number=Sing", 2, "nsubj"),
        ("in", "in", "ADP", "IN", "", 7, "case"),
        ("the",) + DET_THE[1:] + (7, "det"),
        (place, place, "NOUN", "NN", "Number=Sing", 2, "obl", False),
        (".", ".", "PUNCT", ".", "", 2, "punct"),
    ])


def negword_adv(r, i):
    subj = r.choice(NOUNS)
    obj = r.choice([n for n in NOUNS if n != subj])
    verb, lemma = r.choice(V_TRANS)
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (2, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 4, "nsubj"),
        ("never", "never", "ADV", "RB", "", 4, "advmod"),
        (verb, lemma, "VERB", "VBD", FEATS_VBD, 0, "root"),
        ("the",) + DET_THE[1:] + (6, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 4, "obj", False),
        (".", ".", "PUNCT", ".", "", 4, "punct"),
    ])


def inversion(r, i):
    subj = r.choice(NOUNS)
    obj = r.choice([n for n in NOUNS if n != subj])
    _, lemma = r.choice(V_TRANS)
    return sentence(f"c{i}", [
        ("Nowhere", "nowhere", "ADV", "RB", "", 5, "advmod"),
        ("did", "do", "AUX", "VBD", FEATS_VBD, 5, "aux"),
        ("the",) + DET_THE[1:] + (4, "det"),
        (subj, subj, "NOUN", "NN", "Number=Sing", 5, "nsubj"),
        (lemma, lemma, "VERB", "VB", "VerbForm=Inf", 0, "root"),
        ("the",) + DET_THE[1:] + (7, "det"),
        (obj, obj, "NOUN", "NN", "Number=Sing", 5, "obj", False),
        (".", ".", "PUNCT", ".", "", 5, "punct"),
    ])


def long_coordination(r, i):
    return sentence(f"c{i}", [
        ("The",) + DET_THE[1:] + (3, "det"),
        ("old", "old", "ADJ", "JJ", "Degree=Pos", 3, "amod"),
        ("king", "king", "NOUN", "NN", "Number=Sing", 8, "nsubj"),
        ("and", "and", "CCONJ", "CC", "", 7, "cc"),
        ("the",) + DET_THE[1:] + (7, "det"),
        ("quiet", "quiet", "ADJ", "JJ", "Degree=Pos", 7, "amod"),
        ("queen", "queen", "NOUN", "NN", "Number=Sing", 3, "conj"),
        ("carried", "carry", "VERB", "VBD", FEATS_VBD, 0, "root"),
        ("the",) + DET_THE[1:] + (11, "det"),
        ("heavy", "heavy", "ADJ", "JJ", "Degree=Pos", 11, "amod"),
        ("barrel", "barrel", "NOUN", "NN", "Number=Sing", 8, "obj"),
        ("and", "and", "CCONJ", "CC", "", 15, "cc"),
        ("the",) + DET_THE[1:] + (15, "det"),
        ("wooden", "wooden", "ADJ", "JJ", "Degree=Pos", 15, "amod"),
        ("ladder", "ladder", "NOUN", "NN", "Number=Sing", 11, "conj"),
        ("from", "from", "ADP", "IN", "", 19, "case"),
        ("the",) + DET_THE[1:] + (19, "det"),
        ("narrow", "narrow", "ADJ", "JJ", "Degree=Pos", 19, "amod"),
        ("bridge", "bridge", "NOUN", "NN", "Number=Sing", 8, "obl"),
        ("to", "to", "ADP", "IN", "", 23, "case"),
        ("the",) + DET_THE[1:] + (23, "det"),
        ("distant", "distant", "ADJ", "JJ", "Degree=Pos", 23, "amod"),
        ("castle", "castle", "NOUN", "NN", "Number=Sing", 8, "obl", False),
        (".", ".", "PUNCT", ".", "", 8, "punct"),
    ])


def unmatched_fragment(r, i, kind):
    if kind == 0:
        return sentence(f"c{i}", [
            ("What", "what", "DET", "WDT", "PronType=Int", 3, "det"),
            ("a",) + DET_A[1:] + (3, "det"),
            ("day", "day", "NOUN", "NN", "Number=Sing", 0, "root", False),
            ("!", "!", "PUNCT", ".", "", 3, "punct"),
        ])
    if kind == 1:
        noun = r.choice(NOUNS)
        obj = r.choice([n for n in NOUNS if n != noun])
        _, lemma = r.choice(V_TRANS)
        return sentence(f"c{i}", [
            ("Did", "do", "AUX", "VBD", FEATS_VBD, 4, "aux"),
            ("the",) + DET_THE[1:] + (3, "det"),
            (noun, noun, "NOUN", "NN", "Number=Sing", 4, "nsubj"),
            (lemma, lemma, "VERB", "VB", "VerbForm=Inf", 0, "root"),
            ("the",) + DET_THE[1:] + (6, "det"),
            (obj, obj, "NOUN", "NN", "Number=Sing", 4, "obj", False),
            ("?", "?", "PUNCT", ".", "", 4, "punct"),
        ])
    if kind == 2:
        return sentence(f"c{i}", [
            ("The",) + DET_THE[1:] + (3, "det"),
            ("red", "red", "ADJ", "JJ", "Degree=Pos", 3, "amod"),
            ("house", "house", "NOUN", "NN", "Number=Sing", 0, "root", False),
            (".", ".", "PUNCT", ".", "", 3, "punct"),
        ])
    return sentence(f"c{i}", [
        ("Such", "such", "DET", "PDT", "", 4, "det:predet"),
        ("a",) + DET_A[1:] + (4, "det"),
        ("strange", "strange", "ADJ", "JJ", "Degree=Pos", 4, "amod"),
        ("evening", "evening", "NOUN", "NN", "Number=Sing", 0, "root", False),
        (".", ".", "PUNCT", ".", "", 4, "punct"),
    ])


def main():
    r = random.Random(20240601)
    makers = (
        [simple_past] * 16
        + [simple_past_obl] * 3
        + [long_coordination] * 1
        + [present_3sg] * 13
        + [present_plural] * 12
        + [imperative] * 8
        + [progressive] * 4
        + [passive] * 4
        + [perfect] * 6
        + [copula] * 7
        + [modal] * 6
        + [root_be] * 4
        + [already_negated] * 4
        + [npi] * 3
        + [negword_det] * 2
        + [negword_adv] * 1
        + [inversion] * 2
    )
    sentences = []
    for i, maker in enumerate(makers, start=1):
        sentences.append(maker(r, i))
    for k in range(4):
        sentences.append(unmatched_fragment(r, len(makers) + 1 + k, k))
    assert len(sentences) == 100, len(sentences)
    out = Path(__file__).resolve().parent.parent / "fixtures" / "corpus100.conllu"
    out.write_text("".join(to_conllu(s) for s in sentences), encoding="utf-8")
    print(f"wrote {out} ({len(sentences)} sentences)")


if __name__ == "__main__":
    main()
