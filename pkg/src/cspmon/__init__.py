"""Runtime verification of event streams against CSP models.

Parse a machine-readable CSP subset, synthesize an explicit labelled
transition system by the language's operational semantics, gate it for
determinism, and use it as the oracle for checking recorded traces or
live event streams in strict or permissive mode.
"""

from .config import Config, ListenInput, TraceFileInput, load_config
from .errors import (
    AlphabetError, BindError, ConfigError, CspmonError, DomainError,
    EvalError, LexError, LimitExceeded, MappingError, NondeterministicOracle,
    ParseError, PositionError, ResolveError, UnknownState,
)
from .lts import (
    DEFAULT_LIMITS, Event, Lts, SynthesisLimits, check_determinism,
    determinize, dump_lts, events_of, hide, is_deterministic_tau_free,
)
from .monitor import (
    Counterexample, Fail, FailReason, Mode, OracleIndex, PassSoFar, Session,
    Unmapped, check_trace, new_session, observed_text,
)
from .parser import parse_spec
from .pipeline import build_oracle, load_and_synthesize
from .resolver import build_symbols, validate_spec
from .synth import enumerate_alphabet, synthesize_lts
from .traceio import Mapping, empty_mapping, load_mapping, read_trace

__version__ = "0.1.0"

__all__ = [
    "AlphabetError", "BindError", "Config", "ConfigError", "Counterexample",
    "CspmonError", "DEFAULT_LIMITS", "DomainError", "EvalError", "Event",
    "Fail", "FailReason", "LexError", "LimitExceeded", "ListenInput", "Lts",
    "Mapping", "MappingError", "Mode", "NondeterministicOracle",
    "OracleIndex", "ParseError", "PassSoFar", "PositionError", "ResolveError",
    "Session", "SynthesisLimits", "TraceFileInput", "Unmapped",
    "UnknownState", "build_oracle", "build_symbols", "check_determinism",
    "check_trace", "determinize", "dump_lts", "empty_mapping",
    "enumerate_alphabet", "events_of", "hide", "is_deterministic_tau_free",
    "load_and_synthesize", "load_config", "load_mapping", "new_session",
    "observed_text", "parse_spec", "read_trace", "synthesize_lts",
    "validate_spec",
]
