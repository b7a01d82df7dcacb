"""
Run configuration: YAML file, then RTS_* environment variables, then command-line flags
"""

import logging
import os
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml
from dotenv import find_dotenv, load_dotenv

from rts_backtrack.exceptions import ConfigurationError
from rts_backtrack.models.agent import AccountingMode, AlgoParams
from rts_backtrack.models.costs import INF, as_fraction, to_units
from rts_backtrack.policies import POLICIES, get_policy
from rts_backtrack.policies.base import BasePolicy

logger = logging.getLogger(__name__)

ENV_PREFIX = "RTS_"
TRUE_WORDS = ("1", "true", "yes", "on")
FALSE_WORDS = ("0", "false", "no", "off")


def _to_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in TRUE_WORDS:
        return True
    if text in FALSE_WORDS:
        return False
    raise ConfigurationError(f"Expected on/off, got {value!r}")


def _to_real(value: Any) -> Union[Fraction, float]:
    text = str(value).strip().lower()
    if text in ("inf", "infinity", "+inf"):
        return INF
    try:
        return as_fraction(value if not isinstance(value, str) else value.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"Expected a real number, got {value!r}")


def _to_int(value: Any) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"Expected an integer, got {value!r}")


COERCERS = {
    "algo": str,
    "theta": _to_real,
    "quota": _to_real,
    "gamma_bar": _to_real,
    "d_max": _to_int,
    "k": _to_int,
    "tie_seed": _to_int,
    "accounting": str,
    "audit": _to_bool,
    "budget": _to_int,
    "acyclic": _to_bool,
    "enforce_quota": _to_bool,
    "out": str,
    "trace_format": str,
    "workers": _to_int,
    "log_level": str,
}


@dataclass
class RunConfig:
    """
    Everything needed to reproduce one run or sweep.

    Real-valued settings (θ, T, γ̄) are exact fractions; ``quota`` may be ``inf``.
    """
    algo: str = "lrta"
    theta: Fraction = Fraction(1)
    quota: Union[Fraction, float] = INF
    gamma_bar: Optional[Fraction] = None
    d_max: int = 1
    k: Optional[int] = None
    tie_seed: Optional[int] = None
    accounting: str = AccountingMode.TOTAL.value
    audit: bool = True
    budget: Optional[int] = None
    acyclic: bool = False
    enforce_quota: bool = False
    out: Optional[str] = None
    trace_format: str = "csv"
    workers: int = 1
    log_level: str = "WARNING"

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def coerce(cls, values: Mapping[str, Any]) -> Dict[str, Any]:
        """Normalise keys (dashes to underscores) and convert values; ``None`` values are dropped."""
        known = set(cls.field_names())
        result: Dict[str, Any] = {}
        for key, value in values.items():
            name = key.replace("-", "_").lower()
            if name not in known:
                raise ConfigurationError(f"Unknown configuration key {key!r}")
            if value is None:
                continue
            result[name] = COERCERS[name](value)
        return result

    @classmethod
    def from_yaml(cls, path: Union[str, Path], base: Optional["RunConfig"] = None) -> "RunConfig":
        """
        Load a flat YAML mapping of configuration keys.

        Args:
            path: Config file
            base: Configuration to override (defaults to the built-in defaults)

        Returns:
            RunConfig
        """
        path = Path(path)
        try:
            data = yaml.safe_load(path.read_text()) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigurationError(f"Cannot read config file {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError(f"Config file {path} must hold a flat mapping")
        logger.info(f"Loaded configuration from {path}")
        return (base or cls()).merged(data)

    @classmethod
    def from_environment(cls, base: Optional["RunConfig"] = None) -> "RunConfig":
        """
        Override configuration from ``RTS_*`` environment variables.

        Expected variables (all optional): RTS_ALGO, RTS_THETA, RTS_QUOTA, RTS_GAMMA_BAR,
        RTS_D_MAX, RTS_K, RTS_TIE_SEED, RTS_ACCOUNTING, RTS_AUDIT, RTS_BUDGET, RTS_ACYCLIC,
        RTS_ENFORCE_QUOTA, RTS_OUT, RTS_TRACE_FORMAT, RTS_WORKERS, RTS_LOG_LEVEL.
        A ``.env`` file in the working directory is read first.

        Returns:
            RunConfig
        """
        load_dotenv(find_dotenv(usecwd=True))
        found = {
            name: os.getenv(ENV_PREFIX + name.upper())
            for name in cls.field_names()
            if os.getenv(ENV_PREFIX + name.upper()) is not None
        }
        if found:
            logger.debug(f"Environment overrides: {', '.join(sorted(found))}")
        return (base or cls()).merged(found)

    def merged(self, overrides: Mapping[str, Any]) -> "RunConfig":
        return replace(self, **self.coerce(overrides))

    def validate(self) -> "RunConfig":
        if self.algo not in POLICIES:
            raise ConfigurationError(f"Unknown algorithm {self.algo!r}; choose one of {', '.join(sorted(POLICIES))}")
        if self.theta <= 0:
            raise ConfigurationError(f"theta must be positive, got {self.theta}")
        gamma_bar = self.effective_gamma_bar
        if gamma_bar <= 0:
            raise ConfigurationError(f"gamma_bar must be positive, got {gamma_bar}")
        if self.theta < gamma_bar:
            raise ConfigurationError(f"theta ({self.theta}) must be at least gamma_bar ({gamma_bar})")
        if self.quota < 0:
            raise ConfigurationError(f"quota must be non-negative, got {self.quota}")
        if self.d_max < 1:
            raise ConfigurationError(f"d_max must be at least 1, got {self.d_max}")
        if self.algo == "piecewise" and self.k is None:
            raise ConfigurationError("piecewise search needs k")
        if self.k is not None and self.k < 1:
            raise ConfigurationError(f"k must be at least 1, got {self.k}")
        if self.accounting not in {m.value for m in AccountingMode}:
            raise ConfigurationError(f"Unknown accounting mode {self.accounting!r}")
        if self.budget is not None and self.budget < 1:
            raise ConfigurationError(f"budget must be positive, got {self.budget}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be at least 1, got {self.workers}")
        if self.trace_format not in ("csv", "table"):
            raise ConfigurationError(f"Unknown trace format {self.trace_format!r}")
        return self

    @property
    def effective_gamma_bar(self) -> Fraction:
        """γ̄ defaults to 1, or to θ when θ < 1."""
        if self.gamma_bar is not None:
            return self.gamma_bar
        return min(Fraction(1), self.theta)

    def to_params(self, epsilon: Fraction) -> AlgoParams:
        """
        Algorithm parameters in ε units. The run uses γ = γ̄.

        Args:
            epsilon: Cost quantum of the problem

        Returns:
            Validated AlgoParams
        """
        gamma = self.effective_gamma_bar
        return AlgoParams(
            theta=self.theta,
            quota=to_units(self.quota, as_fraction(epsilon), integral=False),
            gamma=gamma,
            gamma_bar=gamma,
            d_max=self.d_max,
            k=self.k,
            tie_seed=self.tie_seed,
            accounting=AccountingMode(self.accounting),
            enforce_quota=self.enforce_quota,
        ).validate()

    def make_policy(self) -> BasePolicy:
        return get_policy(self.algo, acyclic=self.acyclic)

