"""
Exporting the decision model as a PRISM POMDP
=============================================

Builds the partially observable decision process for one profile and
prints the PRISM-language text, plus the structural counts a model
checker (or a reviewer) would verify first.
"""

from planexplain.fixtures import load_engine_config
from planexplain.ledger import posterior_mean
from planexplain.pomdp import build, count_flow_steps, count_reward_entries, export_prism

config = load_engine_config()


def estimate(p, q):
    a, r = config.seeds[(1, p, q)]
    return float(posterior_mean(a, r))


spec = build(config.model, config.catalog, estimate, config.params, profile=1)

# K observe steps, P slot-choice steps, one terminal step.
print("total steps:", spec.total_steps)
print("reward entries:", len(spec.rewards))

text = export_prism(spec)
print("flow steps in Turn module:", count_flow_steps(text))
print("guarded reward entries:", count_reward_entries(text))
print()
print(text)
