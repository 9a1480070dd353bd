import io

import pytest

from negforge.conllu import (
    ConlluError,
    parse_conllu,
    to_conllu,
    within_length_limit,
)

GOOD_BLOCK = """\
# sent_id = t1
# text = The king rested.
1\tThe\tthe\tDET\tDT\tDefinite=Def|PronType=Art\t2\tdet\t_\t_
2\tking\tking\tNOUN\tNN\tNumber=Sing\t3\tnsubj\t_\t_
3\trested\trest\tVERB\tVBD\tMood=Ind|Tense=Past|VerbForm=Fin\t0\troot\t_\t_
4\t.\t.\tPUNCT\t.\t_\t3\tpunct\t_\tSpaceAfter=No
"""


def test_empty_stream_yields_nothing():
    assert list(parse_conllu("")) == []
    assert list(parse_conllu(io.StringIO("\n\n\n"))) == []


def test_parse_showcase_sentence(showcase):
    s = showcase["showcase-past"]
    assert len(s.tokens) == 9
    assert s.token(4).form == "made"
    assert s.token(4).head == 0
    assert s.token(7).deprel == "obj"
    assert s.token(7).form == "leg"
    assert s.token(8).space_after is False


def test_basic_block_fields():
    (s,) = parse_conllu(GOOD_BLOCK)
    assert s.sent_id == "t1"
    assert s.text == "The king rested."
    assert s.token(1).feats == (("Definite", "Def"), ("PronType", "Art"))
    assert s.token(3).feats_str == "Mood=Ind|Tense=Past|VerbForm=Fin"
    assert s.token(3).cpos == "VERB|Mood=Ind|Tense=Past|VerbForm=Fin"
    assert s.token(4).cpos == "PUNCT|_"
    assert s.token(4).space_after is False


def test_multiword_and_empty_node_lines_skipped():
    block = GOOD_BLOCK.replace(
        "1\tThe",
        "1-2\tTheking\t_\t_\t_\t_\t_\t_\t_\t_\n1\tThe",
    ) + "4.1\tghost\t_\t_\t_\t_\t_\t_\t_\t_\n"
    (s,) = parse_conllu(block)
    assert [t.form for t in s.tokens] == ["The", "king", "rested", "."]


def test_dangling_head_reports_line():
    bad = GOOD_BLOCK.replace("\t3\tnsubj", "\t99\tnsubj")
    with pytest.raises(ConlluError) as err:
        list(parse_conllu(bad))
    assert "99" in str(err.value)
    assert err.value.line_no == 4  # the king line, after two comments and the first token


def test_cycle_detected():
    bad = GOOD_BLOCK.replace("3\trested\trest\tVERB\tVBD\tMood=Ind|Tense=Past|VerbForm=Fin\t0\troot",
                             "3\trested\trest\tVERB\tVBD\tMood=Ind|Tense=Past|VerbForm=Fin\t2\troot")
    with pytest.raises(ConlluError, match="root|cycl"):
        list(parse_conllu(bad))


def test_multiple_roots_rejected():
    bad = GOOD_BLOCK.replace("\t2\tdet", "\t0\tdet")
    with pytest.raises(ConlluError, match="multiple root"):
        list(parse_conllu(bad))


def test_self_head_rejected():
    bad = GOOD_BLOCK.replace("\t2\tdet", "\t1\tdet")
    with pytest.raises(ConlluError, match="own head"):
        list(parse_conllu(bad))


def test_wrong_column_count():
    with pytest.raises(ConlluError, match="10 columns"):
        list(parse_conllu("1\tonly\tthree\n"))


def test_skip_mode_drops_bad_sentences():
    text = GOOD_BLOCK.replace("\t3\tnsubj", "\tx\tnsubj") + "\n" + GOOD_BLOCK
    kept = list(parse_conllu(text, on_error="skip"))
    assert len(kept) == 1
    assert kept[0].sent_id == "t1"


def test_crlf_tolerated():
    text = GOOD_BLOCK.replace("\n", "\r\n")
    (s,) = parse_conllu(io.StringIO(text))
    assert len(s.tokens) == 4


def test_roundtrip_fixture_files(showcase, negation_cases, corpus100):
    for sentence in [*showcase.values(), *negation_cases, *corpus100]:
        (again,) = parse_conllu(to_conllu(sentence))
        assert again == sentence


def test_length_limit_boundaries(showcase):
    assert within_length_limit(showcase["showcase-past"])  # 8 words
    assert within_length_limit(showcase["showcase-inversion"])  # 10 words
    words = " ".join(f"w{i}" for i in range(20))
    lines = [
        f"{i}\tw{i-1}\tw{i-1}\tNOUN\tNN\t_\t{0 if i == 1 else 1}\t{'root' if i == 1 else 'dep'}\t_\t_"
        for i in range(1, 21)
    ]
    block = "# text = " + words + "\n" + "\n".join(lines) + "\n"
    (s20,) = parse_conllu(block)
    assert within_length_limit(s20)  # exactly 20: the bound is inclusive
    extra = f"21\tw20\tw20\tNOUN\tNN\t_\t1\tdep\t_\t_"
    (s21,) = parse_conllu(block.rstrip("\n") + "\n" + extra + "\n")
    assert not within_length_limit(s21)
    # punctuation never changes the verdict
    punct = f"21\t!\t!\tPUNCT\t.\t_\t1\tpunct\t_\t_"
    (s20p,) = parse_conllu(block.rstrip("\n") + "\n" + punct + "\n")
    assert within_length_limit(s20p)
    assert within_length_limit(s20p, include_punct=True) is False


def test_children_of(showcase):
    s = showcase["showcase-past"]
    assert s.children_of(4) == [2, 3, 7, 8, 9]
    assert s.children_of(1) == []  # leaf
    assert s.children_of(0) == [4]  # the single root
    with pytest.raises(IndexError):
        s.children_of(99)


def test_children_partition_tree(corpus100):
    for sentence in corpus100:
        total = sum(len(sentence.children_of(t.index)) for t in sentence.tokens)
        total += len(sentence.children_of(0))
        assert total == len(sentence.tokens)
