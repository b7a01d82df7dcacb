"""
Step policies and the policy registry
"""

from typing import Dict, Type

from rts_backtrack.exceptions import ConfigurationError
from rts_backtrack.policies.acyclic import AcyclicPolicy, make_acyclic
from rts_backtrack.policies.base import BasePolicy
from rts_backtrack.policies.lookahead import (
    DynamicLookaheadPolicy,
    LookaheadSpec,
    dynamic_lookahead_step,
)
from rts_backtrack.policies.lrta import LRTAPolicy, lrta_step
from rts_backtrack.policies.piecewise import PiecewisePolicy, SegmentState, piecewise_step
from rts_backtrack.policies.sla import SLAPolicy, SLATPolicy, sla_step, slat_step

POLICIES: Dict[str, Type[BasePolicy]] = {
    LRTAPolicy.name: LRTAPolicy,
    SLAPolicy.name: SLAPolicy,
    SLATPolicy.name: SLATPolicy,
    DynamicLookaheadPolicy.name: DynamicLookaheadPolicy,
    PiecewisePolicy.name: PiecewisePolicy,
}


def get_policy(algo_id: str, acyclic: bool = False, **settings) -> BasePolicy:
    """
    Instantiate a policy by id.

    Args:
        algo_id: One of ``lrta``, ``sla``, ``slat``, ``dynlook``, ``piecewise``
        acyclic: Wrap the policy so its stack never holds duplicates
        **settings: Policy settings (``d_max`` for dynlook, ``k`` for piecewise)

    Returns:
        Policy instance
    """
    try:
        policy_cls = POLICIES[algo_id]
    except KeyError:
        raise ConfigurationError(
            f"Unknown algorithm {algo_id!r}; choose one of {', '.join(sorted(POLICIES))}"
        )
    policy = policy_cls(**settings)
    return make_acyclic(policy) if acyclic else policy


__all__ = [
    "POLICIES",
    "get_policy",
    "AcyclicPolicy",
    "make_acyclic",
    "BasePolicy",
    "DynamicLookaheadPolicy",
    "LookaheadSpec",
    "dynamic_lookahead_step",
    "LRTAPolicy",
    "lrta_step",
    "PiecewisePolicy",
    "SegmentState",
    "piecewise_step",
    "SLAPolicy",
    "SLATPolicy",
    "sla_step",
    "slat_step",
]
