"""
Synthesizing an acceptance-maximizing prompt policy
===================================================

Walks through the bundled construction scenario: load the engine
configuration, inspect the cognitive model, and synthesize a policy
for each user profile with both solvers cross-checking each other.
"""

from planexplain.engine import Engine
from planexplain.fixtures import load_engine_config

config = load_engine_config()

# The cognitive model: three user profiles, two skills, three levels each.
print("profiles:")
for p in config.model.profiles:
    print(f"  {p.id}: {p.name}")
print("skills:", [s.name for s in config.model.skills])

# The prompt catalog: each slot offers interchangeable phrasings whose
# alignment data says which hidden skill levels they suit.
for slot in config.catalog.slots:
    print(f"slot {slot.index} ({slot.name}): {len(slot.options)} options")

engine = Engine(config)

# verify=True runs the decomposed argmax solver and the backward-induction
# solver and insists they agree, value and argmax sets alike.
for p in config.model.profiles:
    snapshot = engine.policy(p.id, verify=True)
    print(f"\npolicy for {p.name} (expected value {snapshot.value:.3f}):")
    for obs in sorted(snapshot.choices):
        picks = ", ".join(f"p{pp}_q{qq}" for pp, qq in snapshot.choices[obs])
        print(f"  predicted levels {obs} -> {picks}")
