import pathlib

import pytest

from negforge import load_default_ruleset, parse_conllu_file

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def default_rules():
    return load_default_ruleset()


@pytest.fixture(scope="session")
def showcase():
    sentences = list(parse_conllu_file(FIXTURES / "rule_showcase.conllu"))
    return {s.sent_id: s for s in sentences}


@pytest.fixture(scope="session")
def negation_cases():
    return list(parse_conllu_file(FIXTURES / "negation_cases.conllu"))


@pytest.fixture(scope="session")
def reference_pairs():
    sentences = list(parse_conllu_file(FIXTURES / "reference_pairs.conllu"))
    return {s.sent_id: s for s in sentences}


@pytest.fixture(scope="session")
def polarity_pairs():
    sentences = list(parse_conllu_file(FIXTURES / "polarity_pairs.conllu"))
    return {s.sent_id: s for s in sentences}


@pytest.fixture(scope="session")
def corpus100():
    return list(parse_conllu_file(FIXTURES / "corpus100.conllu"))
