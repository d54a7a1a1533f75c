"""
Reads and writes the files exchanged between subcommands: transition logs,
adjacency matrices and learning curves as CSV, models, Q-networks and
mappings as JSON. Floats are written with :func:`repr`, which round-trips
exactly, and JSON keys are sorted, so the same run always writes the same
bytes.
"""
import csv
import json
from typing import Any, Dict, Iterable, List, NamedTuple, Sequence

import numpy as np

from csm.agents.dqn import CurvePoint, QNetworks
from csm.environments.attributes import Action, COLUMN_NAMES
from csm.environments.triggers import Transition
from csm.exceptions import LogParseError
from csm.structure.dataset import Dataset
from csm.structure.graph import WeightedAdjacency
from csm.structure.notears import NotearsModel
from csm.transfer.mapping import AttributeMapping, CategoryGroups

TRANSITION_HEADER = ('grid_id', 'step', 'action') + COLUMN_NAMES
CURVE_HEADER = CurvePoint._fields


class LogRecord(NamedTuple):
    """
    One row of a transition log
    """
    grid_id: int
    step: int
    transition: Transition


def write_transitions(path: str, records: Iterable[LogRecord]) -> int:
    """

    :param path: The file to write
    :param records: The rows, in order
    :return: The number of rows written
    """
    count = 0
    with open(path, 'w', newline='') as stream:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(TRANSITION_HEADER)
        for record in records:
            writer.writerow(
                [record.grid_id, record.step, record.transition.action.label]
                + [_format(value) for value in record.transition.row()]
            )
            count += 1
    return count


def read_datasets(path: str) -> Dict[Action, Dataset]:
    """

    :param path: A transition log
    :return: The rows of each action that occurs in the log
    :raises LogParseError: If the header is not the canonical one, or a row
        is malformed
    """
    rows = {}  # type: Dict[Action, List[List[float]]]
    with open(path, newline='') as stream:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None or tuple(header) != TRANSITION_HEADER:
            raise LogParseError(
                'Expected the header %s' % ','.join(TRANSITION_HEADER), path, 1
            )
        for line, fields in enumerate(reader, start=2):
            if len(fields) != len(TRANSITION_HEADER):
                raise LogParseError(
                    'Expected %d fields, got %d' % (
                        len(TRANSITION_HEADER), len(fields)
                    ),
                    path, line
                )
            try:
                action = Action.parse(fields[2])
                values = [float(field) for field in fields[3:]]
            except ValueError as error:
                raise LogParseError(str(error), path, line) from error
            if not all(np.isfinite(values)):
                raise LogParseError('Non-finite value', path, line)
            rows.setdefault(action, []).append(values)
    return {
        action: Dataset(np.array(action_rows), action)
        for action, action_rows in sorted(rows.items())
    }


def write_model(path: str, model: NotearsModel) -> None:
    _write_json(path, model.to_dict())


def read_model(path: str) -> NotearsModel:
    """

    :param path: A model file
    :return: The model
    :raises LogParseError: If the file is not a valid model description
    """
    data = _read_json(path)
    try:
        return NotearsModel.from_dict(data)
    except (KeyError, TypeError, ValueError) as error:
        raise LogParseError('Not a model file: %s' % error, path) from error


def write_adjacency(path: str, adjacency: WeightedAdjacency) -> None:
    """
    Write a header of column names, then one row per parent

    :param path: The file to write
    :param adjacency: The matrix
    """
    with open(path, 'w', newline='') as stream:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(adjacency.column_names)
        for row in adjacency.weights:
            writer.writerow([repr(float(value)) for value in row])


def write_curve(path: str, curve: Sequence[CurvePoint]) -> None:
    with open(path, 'w', newline='') as stream:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(CURVE_HEADER)
        for point in curve:
            writer.writerow([
                point.global_step, point.episode_index,
                _format(point.episode_return), _format(point.epsilon),
                point.phase
            ])


def write_mapping(
        path: str, mapping: AttributeMapping, groups: CategoryGroups
) -> None:
    data = mapping.to_dict()
    data['groups'] = groups.to_list()
    _write_json(path, data)


def read_mapping(path: str) -> AttributeMapping:
    """

    :param path: A mapping file
    :return: The mapping. Groups are derived data and are not read back
    :raises LogParseError: If the file is not a valid mapping
    """
    data = _read_json(path)
    try:
        return AttributeMapping.from_dict(data)
    except (KeyError, TypeError, ValueError) as error:
        raise LogParseError('Not a mapping file: %s' % error, path) from error


def write_q(path: str, q: QNetworks) -> None:
    _write_json(path, q.to_dict())


def read_q(path: str) -> QNetworks:
    """

    :param path: A Q-network file
    :return: The networks
    :raises LogParseError: If the file is not a valid description
    """
    data = _read_json(path)
    try:
        return QNetworks.from_dict(data)
    except (KeyError, TypeError, ValueError) as error:
        raise LogParseError(
            'Not a Q-network file: %s' % error, path
        ) from error


def summary(**fields: Any) -> str:
    """

    :param fields: The values to report
    :return: The fields as space-separated ``key=value`` pairs, in the
        order given
    """
    return ' '.join(
        '%s=%s' % (key, _format(value) if isinstance(value, float) else value)
        for key, value in fields.items()
    )


def _format(value: Any) -> str:
    number = float(value)
    if number.is_integer():
        return str(int(number))
    return repr(number)


def _write_json(path: str, data: Any) -> None:
    with open(path, 'w') as stream:
        json.dump(data, stream, indent=2, sort_keys=True)
        stream.write('\n')


def _read_json(path: str) -> Any:
    with open(path) as stream:
        try:
            return json.load(stream)
        except json.JSONDecodeError as error:
            raise LogParseError(error.msg, path, error.lineno) from error

