"""
Report documents: an XML file with metadata, conventions, the configuration echo, data tables and
density matrices, plus one flat CSV file per table.
"""
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
import csv
import logging
import math
import os
from typing import Dict, List, Optional, Sequence, Union
from xml.dom import minidom
from xml.etree import ElementTree
from xml.etree.ElementTree import Element, Comment

import numpy as np

from qdiscord import __version__, CONVENTIONS
from qdiscord.config import ScenarioConfig, SCENARIO_CONFIG, PARAM, PARAM__NAME, PARAM__VALUE
from qdiscord.densop import DensityOperator
from qdiscord.errors import InvalidArgumentError
from qdiscord.tomography import GENERATOR_NAME

logger = logging.getLogger(__name__)

QDISCORD_REPORT = "QDiscordReport"
QDISCORD_REPORT__VERSION = "version"
QDISCORD_REPORT__SCENARIO = "scenario"
METADATA = "Metadata"
METADATA__GENERATOR = "generator"
METADATA__SEED = "seed"
CONVENTION = "Convention"
CONVENTION__NAME = "name"
CONVENTION__VALUE = "value"
TABLE = "Table"
TABLE__NAME = "name"
ROW = "Row"
OPERATOR = "Operator"
OPERATOR__NAME = "name"
OPERATOR__DIM = "dim"
OPERATOR__MAX_ABS_IMAG = "max_abs_imag"

Cell = Union[None, str, int, float, bool]


def format_cell(value: Cell) -> str:
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


class Table:
    """A named table. Numeric cells must be finite; None marks a cell that does not apply."""
    def __init__(self, name: str, columns: Sequence[str]):
        self.name = name
        self.columns = list(columns)
        self.rows: List[List[Cell]] = []

    def add_row(self, values: Dict[str, Cell]):
        unknown = set(values) - set(self.columns)
        if unknown:
            raise InvalidArgumentError(f"Table '{self.name}' has no columns {sorted(unknown)}.")
        row = []
        for column in self.columns:
            value = values.get(column)
            if isinstance(value, (float, np.floating)) and not math.isfinite(value):
                raise InvalidArgumentError(f"Non-finite value {value!r} in column '{column}' of table '{self.name}'.")
            row.append(value)
        self.rows.append(row)

    def column(self, name: str) -> List[Cell]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]

    def get_element(self) -> Element:
        table = Element(TABLE, {TABLE__NAME: self.name})
        for row in self.rows:
            table.append(Element(ROW, {c: format_cell(v) for c, v in zip(self.columns, row)}))
        return table

    def write_csv(self, path: str):
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([format_cell(v) for v in row])


class OperatorEntry:
    def __init__(self, name: str, rho: DensityOperator):
        self.name = name
        self.rho = rho

    @property
    def max_abs_imag(self) -> float:
        return float(np.max(np.abs(self.rho.matrix.imag)))

    def get_element(self) -> Element:
        op = Element(OPERATOR, {
            OPERATOR__NAME: self.name,
            OPERATOR__DIM: str(self.rho.dim),
            OPERATOR__MAX_ABS_IMAG: format_cell(self.max_abs_imag)
        })
        op.text = '\n' + '\n'.join(f'{format_cell(v.real)} {format_cell(v.imag)}'
                                   for v in self.rho.matrix.reshape(-1)) + '\n'
        return op


class Report:
    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.tables: List[Table] = []
        self.operators: List[OperatorEntry] = []

    @property
    def scenario(self) -> str:
        return self.config.scenario

    def add_table(self, table: Table) -> Table:
        self.tables.append(table)
        return table

    def add_operator(self, name: str, rho: DensityOperator):
        self.operators.append(OperatorEntry(name, rho))

    def table(self, name: str) -> Table:
        for table in self.tables:
            if table.name == name:
                return table
        raise InvalidArgumentError(f"Report '{self.scenario}' has no table '{name}'.")

    def get_element(self) -> Element:
        report = Element(QDISCORD_REPORT, {
            QDISCORD_REPORT__VERSION: __version__,
            QDISCORD_REPORT__SCENARIO: self.scenario
        })
        report.append(Comment(" qdiscord report.\n       "
                              "Metadata holds the conventions every number below is expressed in, and the full "
                              "configuration.\n       The ScenarioConfig element can be saved as a config file "
                              "to re-run this scenario. "))
        report.append(self._metadata())
        report.append(Comment(" Data tables. Each Row carries one attribute per column; empty attributes mark "
                              "quantities that do not apply.\n       "
                              "The same tables are written as <scenario>_<table>.csv next to this file. "))
        for table in self.tables:
            report.append(table.get_element())
        if len(self.operators) > 0:
            report.append(Comment(" Density matrices: 16 (or 4) lines of 're im', row-major in the basis "
                                  "|00>, |01>, |10>, |11>. "))
            for op in self.operators:
                report.append(op.get_element())
        return report

    def write(self, out_dir: Optional[str] = None) -> List[str]:
        """Writes <scenario>.report.xml and the CSV tables, returns the written paths."""
        out_dir = self.config.out if out_dir is None else out_dir
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        xml_path = os.path.join(out_dir, f'{self.scenario}.report.xml')
        with open(xml_path, 'w', encoding='utf-8') as f:
            f.write(prettify(self.get_element()))
        paths.append(xml_path)
        for table in self.tables:
            csv_path = os.path.join(out_dir, f'{self.scenario}_{table.name}.csv')
            table.write_csv(csv_path)
            paths.append(csv_path)
        for path in paths:
            logger.info(f"Wrote {path}")
        return paths

    def _metadata(self) -> Element:
        metadata = Element(METADATA, {
            METADATA__GENERATOR: GENERATOR_NAME,
            METADATA__SEED: str(self.config.seed)
        })
        for name, value in CONVENTIONS:
            metadata.append(Element(CONVENTION, {CONVENTION__NAME: name, CONVENTION__VALUE: value}))
        config = Element(SCENARIO_CONFIG)
        for name, value in self.config.to_params():
            config.append(Element(PARAM, {PARAM__NAME: name, PARAM__VALUE: value}))
        metadata.append(config)
        return metadata


def prettify(elem: Element) -> str:
    rough = ElementTree.tostring(elem, 'utf-8')
    return minidom.parseString(rough).toprettyxml(indent="  ")
