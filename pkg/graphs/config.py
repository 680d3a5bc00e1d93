import os
import logging
from dataclasses import dataclass, replace

logger = logging.getLogger(__name__)

BUDGET_ENV = 'SPLITTOOL_BUDGET'


@dataclass(frozen=True)
class SplitConfig:
    """
    Limits and defaults shared by all operations:

    - max_radius: largest window radius a command may build
    - max_cut_size: largest coboundary size accepted by tight cut enumeration
    - search_budget: branch and bound nodes allowed per enumeration
    - walk_budget: DFS steps allowed while enumerating short cycles
    - max_filling_length: largest epsilon accepted by epsilon fillings
    - uncross_rounds: iterations allowed when uncrossing a cut family
    - pendant_bound: diameter bound for the almost-2-connected test
    - exhaustive_pairs: below this many vertex pairs QI checks are exhaustive
    - sample_pairs: number of sampled pairs above that threshold
    - thin_budget: vertex pairs examined by the thinness test
    - transfer_factor: default cut transfer radius is transfer_factor * lambda ** 5
    - seed: seed for every sampled check
    """

    max_radius: int = 64
    max_cut_size: int = 6
    search_budget: int = 500_000
    walk_budget: int = 1_000_000
    max_filling_length: int = 12
    uncross_rounds: int = 200
    pendant_bound: int = 2
    exhaustive_pairs: int = 2000
    sample_pairs: int = 500
    thin_budget: int = 10_000
    transfer_factor: int = 100
    seed: int = 42

    @classmethod
    def from_env(cls, **overrides) -> 'SplitConfig':
        config = cls(**overrides)
        raw = os.environ.get(BUDGET_ENV)
        if not raw:
            return config
        try:
            budget = int(raw)
        except ValueError:
            logger.warning(f"ignoring non-integer {BUDGET_ENV}={raw!r}")
            return config
        logger.debug(f"{BUDGET_ENV} caps enumeration budgets at {budget}")
        return replace(
            config,
            search_budget=min(config.search_budget, budget),
            walk_budget=min(config.walk_budget, budget),
            thin_budget=min(config.thin_budget, budget),
        )


def resolve(config) -> SplitConfig:
    return config if config is not None else SplitConfig.from_env()
