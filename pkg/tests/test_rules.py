import json

import pytest

from negforge.conllu import parse_conllu
from negforge.rules import (
    ApplyError,
    OutToken,
    RuleLoadError,
    apply_actions,
    coverage_stats,
    load_default_ruleset,
    load_ruleset,
    negate,
    render,
    select_rule,
)

TWO_RULES = json.dumps(
    [
        {
            "name": "aux before subj",
            "pattern": "{$;tag:/VB.*/}=A >/advmod|cc/ {word:/never|nobody|no|nothing|nowhere|neither|Never|Nobody|No|Nothing|Nowhere|Neither/}=npiword >/aux.*/ ({}=B $++ {}=subject) >/nsubj.*/ {}=subject ?>obj {tag:/NN.*/}=object",
            "actions": [
                {"type": "move", "to_move": "B", "anchor": "A", "position": "before"},
                {"type": "replace", "token": "", "to_replace": "npiword"},
            ],
            "ul_priority": ["object", "subject"],
        },
        {
            "name": "simple past",
            "pattern": "{$;cpos:/.*Tense=Past.*/}=A >/nsubj|csubj/=E {}=subject ?>obj {tag:/NN.*/}=object",
            "actions": [
                {"type": "insert", "token": "did", "rel": "AUX", "anchor": "A", "position": "before"},
                {"type": "insert", "token": "not", "rel": "ADV", "anchor": "A", "position": "before"},
                {"type": "lemmatize"},
            ],
            "ul_priority": ["object", "subject"],
        },
    ]
)


@pytest.fixture(scope="module")
def two_rules():
    return load_ruleset(TWO_RULES, source="two_rules")


# ---------------------------------------------------------------------------
# Loading


def test_load_two_rule_file(two_rules):
    assert len(two_rules) == 2
    assert two_rules.names() == ["aux before subj", "simple past"]
    assert len(two_rules.sha256) == 64


def test_empty_ruleset_never_matches(showcase):
    rules = load_ruleset("[]")
    assert len(rules) == 0
    assert negate(rules, showcase["showcase-past"]) is None


def test_dangling_action_capture_rejected():
    bad = json.dumps(
        [
            {
                "name": "broken",
                "pattern": "{}=A",
                "actions": [{"type": "replace", "token": "", "to_replace": "X"}],
            }
        ]
    )
    with pytest.raises(RuleLoadError, match="'X'"):
        load_ruleset(bad)


def test_dangling_ul_priority_rejected():
    bad = json.dumps([{"name": "broken", "pattern": "{}=A", "ul_priority": ["ghost"]}])
    with pytest.raises(RuleLoadError, match="ghost"):
        load_ruleset(bad)


def test_duplicate_rule_name_rejected():
    bad = json.dumps([{"name": "r", "pattern": "{}"}, {"name": "r", "pattern": "{}"}])
    with pytest.raises(RuleLoadError, match="duplicate"):
        load_ruleset(bad)


def test_bad_pattern_names_rule():
    bad = json.dumps([{"name": "r", "pattern": "{unclosed"}])
    with pytest.raises(RuleLoadError, match="'r'"):
        load_ruleset(bad)


def test_unknown_action_type_rejected():
    bad = json.dumps([{"name": "r", "pattern": "{}=A", "actions": [{"type": "zap"}]}])
    with pytest.raises(RuleLoadError, match="zap"):
        load_ruleset(bad)


def test_default_ruleset_loads_and_validates():
    rules = load_default_ruleset()
    names = rules.names()
    assert names[0] == "aux before subj"
    for expected in (
        "NPI words",
        "negative words",
        "already negated with not",
        "present with modal",
        "present with auxiliary verb",
        "past perfect",
        "copula statements",
        "simple past",
        "simple present",
        "imperative",
    ):
        assert expected in names
    # un-negation rules precede the tense rules
    assert names.index("already negated with not") < names.index("simple past")
    assert names.index("NPI words") < names.index("already negated with not")


# ---------------------------------------------------------------------------
# Action application


def test_move_and_delete_rebuild_inversion(two_rules, showcase):
    s = showcase["showcase-inversion"]
    rule = two_rules.rules[0]
    match = rule.pattern.first_match(s)
    tokens = apply_actions(rule, s, match)
    assert render(tokens) == "in his confession he did mention the Monteagle letter."


def test_insert_and_lemmatize_rebuild_past(two_rules, showcase):
    s = showcase["showcase-past"]
    rule = two_rules.rules[1]
    match = rule.pattern.first_match(s)
    tokens = apply_actions(rule, s, match)
    assert render(tokens) == "Many fonts then did not make the right leg vertical."


def test_action_on_unbound_capture_is_apply_error():
    rules = load_ruleset(
        json.dumps(
            [
                {
                    "name": "bad-apply",
                    "pattern": "{$}=A ?>obj {tag:/NN.*/}=object",
                    "actions": [
                        {"type": "replace", "token": "", "to_replace": "object"}
                    ],
                }
            ]
        )
    )
    (s,) = parse_conllu(
        "1\tSleep\tsleep\tVERB\tVB\tMood=Imp|VerbForm=Fin\t0\troot\t_\t_\n"
    )
    rule = rules.rules[0]
    match = rule.pattern.first_match(s)
    assert match is not None and "object" not in match.captures
    with pytest.raises(ApplyError, match="object"):
        apply_actions(rule, s, match)


# ---------------------------------------------------------------------------
# negate() end to end


def test_negate_review_cases_byte_exact(default_rules, negation_cases):
    expected = [
        ("That tournament did not help demonstrate the high caliber of play in women's soccer.", "tournament"),
        ("The attributes of this vector (length and direction) do not characterize the rotation at that point.", "rotation"),
        ("This was not broadcast live on Norway's main national TV carrier NRK.", "Norway"),
        ("The latter may not occur implicitly through the use of a construct like DEFVAR or DEFPARAMETER.", "latter"),
        ("When Arjuna was fighting Karna, the latter's chariot's wheels did not sink into the ground.", "wheels"),
        ("It also does not prohibit or restricts the use of certain accounts held at financial institutions.", "use"),
    ]
    assert len(negation_cases) == len(expected)
    for sentence, (want_text, want_ul) in zip(negation_cases, expected):
        outcome = negate(default_rules, sentence)
        assert outcome is not None, sentence.sent_id
        assert render(outcome.tokens) == want_text
        assert outcome.ul_token.form == want_ul


def test_verb_form_corrections_diverge_from_naive_insertion(default_rules, negation_cases):
    # rows 5 and 6 keep the raw inflected verb under a naive transform;
    # lemmatizing the matched head verb yields the corrected forms instead
    sank = negate(default_rules, negation_cases[4])
    assert "did not sink" in render(sank.tokens)
    assert "did not sank" not in render(sank.tokens)
    prohibits = negate(default_rules, negation_cases[5])
    assert "does not prohibit or" in render(prohibits.tokens)
    # the conjoined verb is deliberately left untouched
    assert "restricts" in [t.form for t in prohibits.tokens]


def test_negate_no_match_returns_none(default_rules):
    (s,) = parse_conllu(
        "1\tThe\tthe\tDET\tDT\tDefinite=Def|PronType=Art\t3\tdet\t_\t_\n"
        "2\tred\tred\tADJ\tJJ\tDegree=Pos\t3\tamod\t_\t_\n"
        "3\thouse\thouse\tNOUN\tNN\tNumber=Sing\t0\troot\t_\tSpaceAfter=No\n"
        "4\t.\t.\tPUNCT\t.\t_\t3\tpunct\t_\t_\n"
    )
    assert negate(default_rules, s) is None


def test_negate_is_deterministic(default_rules, corpus100):
    for sentence in corpus100[:25]:
        first = negate(default_rules, sentence)
        second = negate(default_rules, sentence)
        if first is None:
            assert second is None
            continue
        assert render(first.tokens) == render(second.tokens)
        assert first.ul_index == second.ul_index
        assert first.rule_name == second.rule_name


def test_ul_token_survives_verbatim(default_rules, corpus100):
    for sentence in corpus100:
        outcome = negate(default_rules, sentence)
        if outcome is None:
            continue
        ul = outcome.ul_token
        assert ul.source_index is not None
        assert sentence.token(ul.source_index).form == ul.form


def test_polarity_round_trip_on_not(default_rules, showcase, polarity_pairs, reference_pairs):
    # positive fixtures gain a "not"; their negated twins lose it
    for positive in (showcase["showcase-past"], reference_pairs["ref-soul"],
                     polarity_pairs["pair-copula-pos"]):
        outcome = negate(default_rules, positive)
        assert "not" in [t.form for t in outcome.tokens]
        assert "not" not in [t.form for t in positive.tokens]
    for negated in (polarity_pairs["pair-past-pos"], polarity_pairs["pair-present-neg"],
                    polarity_pairs["pair-copula-neg"]):
        outcome = negate(default_rules, negated)
        assert outcome.rule_name == "already negated with not"
        assert "not" not in [t.form for t in outcome.tokens]
    # the copula pair restores the exact original surface
    restored = negate(default_rules, polarity_pairs["pair-copula-neg"])
    assert render(restored.tokens) == "The sky is blue."


# ---------------------------------------------------------------------------
# render


def test_render_basic():
    hello = OutToken(form="Hello", space_after=False)
    period = OutToken(form=".")
    assert render([hello, period]) == "Hello."
    assert render([]) == ""


def test_render_recapitalize(default_rules, showcase):
    outcome = negate(default_rules, showcase["showcase-inversion"])
    assert render(outcome.tokens) == "in his confession he did mention the Monteagle letter."
    assert (
        render(outcome.tokens, recapitalize=True)
        == "In his confession he did mention the Monteagle letter."
    )


# ---------------------------------------------------------------------------
# coverage census


def test_census_sums_to_corpus_size(default_rules, corpus100):
    counts, unmatched = coverage_stats(default_rules, corpus100)
    assert sum(counts.values()) + unmatched == 100
    assert unmatched == 4
    assert set(counts) == set(default_rules.names())
    assert all(count > 0 for count in counts.values())


def test_census_frozen_counts(default_rules, corpus100):
    counts, unmatched = coverage_stats(default_rules, corpus100)
    assert counts == {
        "aux before subj": 2,
        "NPI words": 3,
        "negative words": 3,
        "already negated with not": 4,
        "present with modal": 6,
        "present with auxiliary verb": 8,
        "past perfect": 6,
        "copula statements": 7,
        "be as root": 4,
        "simple past": 20,
        "simple present third person": 13,
        "simple present": 12,
        "imperative": 8,
    }
    assert unmatched == 4


def test_census_empty_corpus(default_rules):
    counts, unmatched = coverage_stats(default_rules, [])
    assert unmatched == 0
    assert all(count == 0 for count in counts.values())


def test_census_single_sentence(two_rules, showcase):
    counts, unmatched = coverage_stats(two_rules, [showcase["showcase-past"]])
    assert counts == {"aux before subj": 0, "simple past": 1}
    assert unmatched == 0


def test_census_attribution_matches_negate(default_rules, corpus100):
    counts, unmatched = coverage_stats(default_rules, corpus100)
    recount: dict[str, int] = {name: 0 for name in default_rules.names()}
    missing = 0
    for sentence in corpus100:
        selected = select_rule(default_rules, sentence)
        if selected is None:
            missing += 1
        else:
            recount[selected[0].name] += 1
    assert recount == counts
    assert missing == unmatched
