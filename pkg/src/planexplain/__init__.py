"""planexplain: self-adaptive, profile-aware generation of task-plan
explanations.

The engine models a user's hidden cognitive state and explanation
preferences as a small POMDP, picks the prompt configuration that maximizes
expected acceptance, fills an explanation prompt for a pluggable
text-generation backend, and adapts online from accept/reject feedback,
updated cognitive-state predictions, and context changes.
"""

from .domain import (
    CognitiveModel,
    CognitiveSkill,
    Plan,
    PlannerInput,
    Profile,
    PromptCatalog,
    PromptSlot,
    SlotOption,
    validate_cognitive_model,
)
from .engine import Engine, EngineConfig, Trigger
from .ledger import FeedbackEvent, FeedbackLedger, posterior_mean
from .policy import PolicySnapshot, posterior, prompt_options, solve_decomposed, solve_value_iteration
from .pomdp import build, export_prism
from .prompting import MockBackend, fill
from .utility import UtilityParams, expected_utility, kappa, utility

__all__ = [
    "CognitiveModel",
    "CognitiveSkill",
    "Engine",
    "EngineConfig",
    "FeedbackEvent",
    "FeedbackLedger",
    "MockBackend",
    "Plan",
    "PlannerInput",
    "PolicySnapshot",
    "Profile",
    "PromptCatalog",
    "PromptSlot",
    "SlotOption",
    "Trigger",
    "UtilityParams",
    "build",
    "expected_utility",
    "export_prism",
    "fill",
    "kappa",
    "posterior",
    "posterior_mean",
    "prompt_options",
    "solve_decomposed",
    "solve_value_iteration",
    "utility",
    "validate_cognitive_model",
]

__version__ = "0.1.0"
