import pytest

from cspmon import rover
from cspmon.lts import determinize
from cspmon.monitor import OracleIndex
from cspmon.parser import parse_spec
from cspmon.resolver import build_symbols, validate_spec
from cspmon.synth import enumerate_alphabet, synthesize_lts
from cspmon.traceio import load_mapping, map_event


@pytest.fixture(scope="session")
def rover_spec():
    return validate_spec(parse_spec(rover.SPEC_PATH.read_text()))


@pytest.fixture(scope="session")
def rover_syms(rover_spec):
    return build_symbols(rover_spec)


@pytest.fixture(scope="session")
def rover_alphabet(rover_spec, rover_syms):
    return enumerate_alphabet(rover_spec, rover_syms)


@pytest.fixture(scope="session")
def rover_lts(rover_spec, rover_syms):
    return synthesize_lts(rover_spec, rover.ENTRY, (), syms=rover_syms)


@pytest.fixture(scope="session")
def rover_oracle(rover_lts):
    return determinize(rover_lts)


@pytest.fixture(scope="session")
def rover_index(rover_oracle):
    return OracleIndex(rover_oracle)


@pytest.fixture(scope="session")
def rover_mapping(rover_alphabet):
    return load_mapping(rover.MAPPING_PATH, rover_alphabet)


@pytest.fixture(scope="session")
def rover_observed(rover_mapping):
    return [map_event(rover_mapping, line)
            for line in rover.build_pass_trace_lines()]


@pytest.fixture(scope="session")
def rover_once_spec():
    return validate_spec(parse_spec(rover.SPEC_ONCE_PATH.read_text()))
