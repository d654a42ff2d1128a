import random

import pytest

from planexplain.domain import (
    CognitiveModel,
    CognitiveSkill,
    Profile,
    PromptCatalog,
    PromptSlot,
    SlotOption,
)
from planexplain.fixtures import load_engine_config
from planexplain.ledger import posterior_mean
from planexplain.utility import UtilityParams


@pytest.fixture(scope="session")
def config():
    return load_engine_config()


@pytest.fixture()
def fixture_estimator(config):
    """Acceptance estimates from the fixture's seed counts only."""

    def make(profile):
        def estimate(p, q):
            a, r = config.seeds[(profile, p, q)]
            return float(posterior_mean(a, r))

        return estimate

    return make


def random_instance(rng: random.Random):
    """A small random model/catalog/counts tuple for solver property tests."""
    num_skills = rng.randint(1, 2)
    num_profiles = rng.randint(1, 3)
    skills = []
    for k in range(1, num_skills + 1):
        m = rng.randint(1, 3)
        skills.append(
            CognitiveSkill(index=k, name=f"skill{k}", levels=tuple(f"l{i}" for i in range(1, m + 1)))
        )
    profiles = tuple(Profile(id=n, name=f"p{n}", description=f"profile {n}") for n in range(1, num_profiles + 1))

    joints = {}
    for n in range(1, num_profiles + 1):
        for s in skills:
            m = s.num_levels
            weights = [[rng.random() for _ in range(m)] for _ in range(m)]
            # occasionally zero out a predicted-level column to exercise
            # unreachable observations
            if m > 1 and rng.random() < 0.2:
                col = rng.randrange(m)
                for row in weights:
                    row[col] = 0.0
            total = sum(v for row in weights for v in row)
            joints[(n, s.index)] = tuple(tuple(v / total for v in row) for row in weights)
    model = CognitiveModel(profiles=profiles, skills=tuple(skills), joints=joints)

    slots = []
    num_slots = rng.randint(1, 3)
    for p in range(1, num_slots + 1):
        options = []
        for q in range(1, rng.randint(2, 3) + 1):
            alignment = {}
            for s in skills:
                if rng.random() < 0.7:
                    size = rng.randint(1, s.num_levels)
                    alignment[s.name] = frozenset(rng.sample(range(1, s.num_levels + 1), size))
            options.append(
                SlotOption(slot=p, index=q, prompt_text=f"text {p}.{q}", alignment=alignment)
            )
        slots.append(PromptSlot(index=p, name=f"slot{p}", options=tuple(options)))
    catalog = PromptCatalog(slots=tuple(slots))

    counts = {
        (n, p, q): (rng.randint(0, 40), rng.randint(0, 40))
        for n in range(1, num_profiles + 1)
        for p, q in catalog.option_ids()
    }
    params = UtilityParams()
    return model, catalog, counts, params


def count_estimator(counts, profile):
    def estimate(p, q):
        a, r = counts[(profile, p, q)]
        return float(posterior_mean(a, r))

    return estimate
