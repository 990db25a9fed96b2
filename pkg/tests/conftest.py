from __future__ import annotations

from pathlib import Path

import pytest

from locredit import load_seed_verbs, load_wordnet, parse_seed_verbs

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def chain_tax():
    return load_wordnet(DATA_DIR / "wn_chain")


@pytest.fixture(scope="session")
def forest_tax():
    return load_wordnet(DATA_DIR / "wn_forest")


@pytest.fixture(scope="session")
def web_tax():
    return load_wordnet(DATA_DIR / "wn_web")


@pytest.fixture(scope="session")
def campus_tax():
    return load_wordnet(DATA_DIR / "wn_campus")


@pytest.fixture(scope="session")
def all_fixture_taxonomies(chain_tax, forest_tax, web_tax):
    return {"chain": chain_tax, "forest": forest_tax, "web": web_tax}


@pytest.fixture(scope="session")
def default_clusters():
    return load_seed_verbs()


# Clusters over the wn_web lemmas: two seeds per level, the remaining
# lemmas (behave, function, toil, moil, live, scrape, outlast, produce,
# originate, plan, contrive, tinker, putter) stay free for silhouette
# assignment.
WEB_SEED_TEXT = """
[1] Remember
act, be
[2] Understand
work, exist
[3] Apply
labor, subsist
[4] Analyze
drudge, survive
[5] Evaluate
make, create
[6] Create
design, invent
"""


@pytest.fixture(scope="session")
def web_clusters():
    return parse_seed_verbs(WEB_SEED_TEXT, source="web-fixture-seeds")
