"""
Learning from accept/reject feedback
====================================

Requests an explanation, records verdicts, and watches the acceptance
estimates and the policy move. Ends by replaying the bundled adaptation
scenario, which walks a user through four distinct policies.
"""

from planexplain.engine import Engine
from planexplain.fixtures import load_engine_config, load_scenario

engine = Engine(load_engine_config())

# Ask for an explanation for the AI-expert profile with both skills
# predicted at their highest level.
record = engine.explain(profile=1, obs=(3, 3))
print("explanation id:", record.id)
print("slot choices:", record.choices)
print("backend:", record.backend)

# Acceptance estimates before feedback (Beta(1,1) posterior means).
for p, q in record.choices:
    print(f"  r({p},{q}) = {float(engine.ledger.estimate(1, p, q)):.4f}")

# One verdict covers the whole explanation: every shown option gets the vote.
engine.feedback(record.id, "rejected")
print("\nafter one rejection:")
for p, q in record.choices:
    print(f"  r({p},{q}) = {float(engine.ledger.estimate(1, p, q)):.4f}")

# Repeated rejection eventually flips the policy for this observation.
for _ in range(40):
    rec = engine.explain(profile=1, obs=(3, 3))
    engine.feedback(rec.id, "rejected")
print("\nchoices after sustained rejection:", engine.explain(profile=1, obs=(3, 3)).choices)

# The bundled scenario replays the full story: profile switches, a feedback
# burst, and a cognitive-model update, each producing a different policy.
timeline = Engine(load_engine_config()).run_scenario(load_scenario())
print("\nscenario timeline:")
for step in timeline:
    print(f"  {step['label']}: profile {step['profile']}, choices {step['choices']}")
