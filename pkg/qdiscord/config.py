#  Copyright 2024-2026 The qdiscord Contributors
#
#  This file is part of qdiscord.
#
#  qdiscord is free software: you can redistribute it and/or modify
#  it under the terms of the GNU General Public License as published by
#  the Free Software Foundation, either version 3 of the License, or
#  (at your option) any later version.
#
#  qdiscord is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#  GNU General Public License for more details.
#
#  You should have received a copy of the GNU General Public License
#  along with qdiscord.  If not, see <https://www.gnu.org/licenses/>.
import logging
from typing import Callable, Dict, List, Optional, Tuple
from xml.etree import ElementTree
from xml.etree.ElementTree import Element

from qdiscord.channels import STATE_IDS, PARAMETRIZED_STATE_IDS
from qdiscord.errors import ConfigError

logger = logging.getLogger(__name__)

SCENARIO_CONFIG = "ScenarioConfig"
PARAM = "Param"
PARAM__NAME = "name"
PARAM__VALUE = "value"

SCENARIO_FIG2 = 'fig2'
SCENARIO_FIG3 = 'fig3'
SCENARIO_FIG4 = 'fig4'
SCENARIO_FIG5 = 'fig5'
SCENARIO_SUPP_NOISE = 'supp-noise'
SCENARIO_STATE = 'state'
SCENARIO_RANK_TABLE = 'rank-table'
SCENARIOS = (SCENARIO_FIG2, SCENARIO_FIG3, SCENARIO_FIG4, SCENARIO_FIG5, SCENARIO_SUPP_NOISE, SCENARIO_STATE,
             SCENARIO_RANK_TABLE)

DEFAULT_DAMPING_GRID = tuple(i / 10 for i in range(11))
DEFAULT_WERNER_GRID = tuple(i / 20 for i in range(21))
DEFAULT_SHOTS_GRID = (100, 250, 500, 1000)
DEFAULT_SEED = 20130101


def _parse_int(name: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"Parameter '{name}' must be an integer, got '{value}'.")


def _parse_float(name: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"Parameter '{name}' must be a number, got '{value}'.")


def _parse_float_grid(name: str, value: str) -> Tuple[float, ...]:
    return tuple(_parse_float(name, v) for v in value.split())


def _parse_int_grid(name: str, value: str) -> Tuple[int, ...]:
    return tuple(_parse_int(name, v) for v in value.split())


def _parse_str(name: str, value: str) -> str:
    return value


_PARSERS: Dict[str, Callable[[str, str], object]] = {
    'scenario': _parse_str,
    'damping_grid': _parse_float_grid,
    'werner_grid': _parse_float_grid,
    'shots': _parse_int,
    'shots_grid': _parse_int_grid,
    'copies': _parse_int,
    'seed': _parse_int,
    'tolerance': _parse_float,
    'grid_points': _parse_int,
    'axis_tolerance': _parse_float,
    'mle_max_iterations': _parse_int,
    'mle_tolerance': _parse_float,
    'mc_max_iterations': _parse_int,
    'mc_tolerance': _parse_float,
    'histogram_bins': _parse_int,
    'rank_instances': _parse_int,
    'workers': _parse_int,
    'tomography_copies': _parse_int,
    'state_name': _parse_str,
    'state_p': _parse_float,
    'state_file': _parse_str,
    'counts_file': _parse_str,
    'out': _parse_str,
}
PARAMETER_NAMES = tuple(_PARSERS.keys())


class ScenarioConfig:
    def __init__(self, scenario: str,
                 damping_grid: Tuple[float, ...] = DEFAULT_DAMPING_GRID,
                 werner_grid: Tuple[float, ...] = DEFAULT_WERNER_GRID,
                 shots: int = 1000,
                 shots_grid: Tuple[int, ...] = DEFAULT_SHOTS_GRID,
                 copies: int = 70,
                 seed: int = DEFAULT_SEED,
                 tolerance: float = 1e-7,
                 grid_points: int = 312,
                 axis_tolerance: float = 1e-4,
                 mle_max_iterations: int = 100000,
                 mle_tolerance: float = 1e-10,
                 mc_max_iterations: int = 3000,
                 mc_tolerance: float = 1e-9,
                 histogram_bins: int = 20,
                 rank_instances: int = 1000,
                 workers: int = 1,
                 tomography_copies: int = 0,
                 state_name: Optional[str] = None,
                 state_p: Optional[float] = None,
                 state_file: Optional[str] = None,
                 counts_file: Optional[str] = None,
                 out: str = 'qdiscord_output'):
        self.scenario = scenario
        self.damping_grid = tuple(damping_grid)
        self.werner_grid = tuple(werner_grid)
        self.shots = shots
        self.shots_grid = tuple(shots_grid)
        self.copies = copies
        self.seed = seed
        self.tolerance = tolerance
        self.grid_points = grid_points
        self.axis_tolerance = axis_tolerance
        self.mle_max_iterations = mle_max_iterations
        self.mle_tolerance = mle_tolerance
        self.mc_max_iterations = mc_max_iterations
        self.mc_tolerance = mc_tolerance
        self.histogram_bins = histogram_bins
        self.rank_instances = rank_instances
        self.workers = workers
        self.tomography_copies = tomography_copies
        self.state_name = state_name
        self.state_p = state_p
        self.state_file = state_file
        self.counts_file = counts_file
        self.out = out

    @classmethod
    def from_params(cls, params: Dict[str, str]) -> 'ScenarioConfig':
        """Builds a validated config from raw string parameters (file values merged with CLI overrides)."""
        kwargs = {}
        for name, value in params.items():
            if name not in _PARSERS:
                raise ConfigError(f"Unknown parameter '{name}'. Known parameters: {', '.join(PARAMETER_NAMES)}.")
            kwargs[name] = _PARSERS[name](name, value)
        if 'scenario' not in kwargs:
            raise ConfigError("No scenario given.")
        config = cls(**kwargs)
        config.validate()
        return config

    def validate(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"Unknown scenario '{self.scenario}'. Known scenarios: {', '.join(SCENARIOS)}.")
        for name in ('damping_grid', 'werner_grid'):
            grid = getattr(self, name)
            if len(grid) == 0:
                raise ConfigError(f"Parameter '{name}' must not be empty.")
            if any(not 0 <= p <= 1 for p in grid):
                raise ConfigError(f"All values of '{name}' must lie in [0, 1], got {list(grid)}.")
        if len(self.shots_grid) == 0:
            raise ConfigError("Parameter 'shots_grid' must not be empty.")
        self._at_least('shots', 1)
        for shots in self.shots_grid:
            if shots < 1:
                raise ConfigError(f"All values of 'shots_grid' must be at least 1, got {list(self.shots_grid)}.")
        self._at_least('copies', 2)
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"Parameter 'seed' must be a 64-bit unsigned integer, got {self.seed}.")
        if not 0 < self.tolerance < 0.5:
            raise ConfigError(f"Parameter 'tolerance' must lie in (0, 0.5), got {self.tolerance!r}.")
        self._at_least('grid_points', 1)
        for name in ('axis_tolerance', 'mle_tolerance', 'mc_tolerance'):
            if not getattr(self, name) > 0:
                raise ConfigError(f"Parameter '{name}' must be positive, got {getattr(self, name)!r}.")
        self._at_least('mle_max_iterations', 1)
        self._at_least('mc_max_iterations', 1)
        self._at_least('histogram_bins', 2)
        self._at_least('rank_instances', 1)
        self._at_least('workers', 1)
        if self.tomography_copies == 1 or self.tomography_copies < 0:
            raise ConfigError(f"Parameter 'tomography_copies' must be 0 (off) or at least 2, "
                              f"got {self.tomography_copies}.")
        if self.scenario == SCENARIO_STATE:
            self._validate_state_source()

    def to_params(self) -> List[Tuple[str, str]]:
        """All parameters as (name, text) pairs in a fixed order, for echoing into reports."""
        params = []
        for name in PARAMETER_NAMES:
            value = getattr(self, name)
            if value is None:
                continue
            if isinstance(value, tuple):
                text = ' '.join(repr(v) for v in value)
            elif isinstance(value, float):
                text = repr(value)
            else:
                text = str(value)
            params.append((name, text))
        return params

    def _at_least(self, name: str, minimum: int):
        value = getattr(self, name)
        if value < minimum:
            raise ConfigError(f"Parameter '{name}' must be at least {minimum}, got {value}.")

    def _validate_state_source(self):
        sources = [s for s in (self.state_name, self.state_file, self.counts_file) if s is not None]
        if len(sources) != 1:
            raise ConfigError("The state scenario needs exactly one of 'state_name', 'state_file' and 'counts_file'.")
        if self.state_name is not None:
            if self.state_name not in STATE_IDS:
                raise ConfigError(f"Unknown state '{self.state_name}'. Known states: {', '.join(STATE_IDS)}.")
            if self.state_name in PARAMETRIZED_STATE_IDS:
                if self.state_p is None or not 0 <= self.state_p <= 1:
                    raise ConfigError(f"State '{self.state_name}' needs 'state_p' in [0, 1], got {self.state_p!r}.")


def read_config_file(path: str) -> Dict[str, str]:
    """Reads the raw parameters of a <ScenarioConfig> file. Values are validated by ScenarioConfig.from_params."""
    try:
        root = ElementTree.parse(path).getroot()
    except ElementTree.ParseError as err:
        raise ConfigError(f"Config file {path} is not valid XML: {err}")
    except OSError as err:
        raise ConfigError(f"Can not read config file {path}: {err}")
    return read_config_xml(root)


def read_config_xml(root: Element) -> Dict[str, str]:
    validate_xml_tag(root, SCENARIO_CONFIG)
    validate_xml_attribs(root, [])
    params = {}
    for child in root:
        validate_xml_tag(child, PARAM)
        validate_xml_attribs(child, [PARAM__NAME, PARAM__VALUE])
        name = child.attrib[PARAM__NAME]
        if name not in _PARSERS:
            raise ConfigError(f"Unknown parameter '{name}'. Known parameters: {', '.join(PARAMETER_NAMES)}.")
        if name in params:
            raise ConfigError(f"Parameter '{name}' is given more than once.")
        params[name] = child.attrib[PARAM__VALUE]
    logger.debug(f"Read {len(params)} parameters from config XML")
    return params


def validate_xml_tag(xml: Element, tag: str):
    if xml.tag != tag:
        raise ConfigError(f"Unexpected XML tag '{xml.tag}', expected '{tag}'.")


def validate_xml_attribs(xml: Element, attribs: List[str]):
    """The element must carry exactly the given attributes."""
    for attrib in attribs:
        if attrib not in xml.attrib:
            raise ConfigError(f"The XML tag '{xml.tag}' is missing the attribute '{attrib}'.")
    for attrib in xml.attrib:
        if attrib not in attribs:
            raise ConfigError(f"The XML tag '{xml.tag}' has the unknown attribute '{attrib}'.")
