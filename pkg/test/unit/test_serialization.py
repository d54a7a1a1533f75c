"""
Contains tests for the files exchanged between subcommands
"""
import csv
import json
import os
import tempfile
import unittest

import numpy as np

from csm.agents import CurvePoint, QNetworks
from csm.environments import Action, COLUMN_NAMES, act, parse_layout, reset
from csm.exceptions import LogParseError
from csm.serialization import CURVE_HEADER, LogRecord, TRANSITION_HEADER
from csm.serialization import read_datasets, read_mapping
from csm.serialization import read_model, read_q, summary, write_adjacency
from csm.serialization import write_curve, write_mapping, write_model
from csm.serialization import write_q, write_transitions
from csm.structure import NotearsModel, StructuralMask, WeightedAdjacency
from csm.transfer import AttributeMapping, CategoryGroups, Evidence


class TestSerialization(unittest.TestCase):
    def setUp(self) -> None:
        self._directory = tempfile.TemporaryDirectory()
        self.addCleanup(self._directory.cleanup)

    def path(self, name: str) -> str:
        return os.path.join(self._directory.name, name)

    def write_text(self, name: str, text: str) -> str:
        path = self.path(name)
        with open(path, 'w') as stream:
            stream.write(text)
        return path

    @staticmethod
    def records():
        state = reset(parse_layout('#####\n#...#\n#.A.#\n#K.L#\n#####\n'))
        for step, action in enumerate(
                (Action.UP, Action.LEFT, Action.UP, Action.DOWN)
        ):
            transition, outcome = act(state, action)
            yield LogRecord(0, step, transition)
            state = outcome.next_state


class TestTransitions(TestSerialization):
    def test_count_and_header(self) -> None:
        path = self.path('log.csv')
        self.assertEqual(4, write_transitions(path, self.records()))
        with open(path) as stream:
            lines = stream.read().splitlines()
        self.assertEqual(','.join(TRANSITION_HEADER), lines[0])
        self.assertEqual(5, len(lines))
        self.assertTrue(lines[1].startswith('0,0,up,'))

    def test_datasets(self) -> None:
        path = self.path('log.csv')
        records = list(self.records())
        write_transitions(path, records)
        datasets = read_datasets(path)
        self.assertEqual({Action.UP, Action.LEFT, Action.DOWN}, set(datasets))
        self.assertEqual(2, datasets[Action.UP].n)
        self.assertEqual(COLUMN_NAMES, tuple(datasets[Action.UP].column_names))
        np.testing.assert_array_equal(
            records[3].transition.row(), datasets[Action.DOWN].rows[0]
        )

    def test_same_bytes(self) -> None:
        first, second = self.path('a.csv'), self.path('b.csv')
        write_transitions(first, self.records())
        write_transitions(second, self.records())
        with open(first) as a, open(second) as b:
            self.assertEqual(a.read(), b.read())


class TestReadDatasetsErrors(TestSerialization):
    def test_wrong_header(self) -> None:
        path = self.write_text('log.csv', 'grid_id,step\n')
        with self.assertRaises(LogParseError) as context:
            read_datasets(path)
        self.assertEqual(1, context.exception.line)

    def test_empty_file(self) -> None:
        with self.assertRaises(LogParseError):
            read_datasets(self.write_text('log.csv', ''))

    def test_short_row(self) -> None:
        path = self.write_text(
            'log.csv', ','.join(TRANSITION_HEADER) + '\n0,0,up\n'
        )
        with self.assertRaises(LogParseError) as context:
            read_datasets(path)
        self.assertEqual(2, context.exception.line)

    def test_unknown_action(self) -> None:
        fields = ['0', '0', 'jump'] + ['0'] * len(COLUMN_NAMES)
        path = self.write_text(
            'log.csv',
            ','.join(TRANSITION_HEADER) + '\n' + ','.join(fields) + '\n'
        )
        with self.assertRaises(LogParseError) as context:
            read_datasets(path)
        self.assertEqual(2, context.exception.line)
        self.assertIn('log.csv:2:', str(context.exception))

    def test_non_finite(self) -> None:
        fields = ['0', '0', 'up', 'nan'] + ['0'] * (len(COLUMN_NAMES) - 1)
        path = self.write_text(
            'log.csv',
            ','.join(TRANSITION_HEADER) + '\n' + ','.join(fields) + '\n'
        )
        with self.assertRaises(LogParseError):
            read_datasets(path)

    def test_missing_file(self) -> None:
        with self.assertRaises(OSError):
            read_datasets(self.path('absent.csv'))


class TestModels(TestSerialization):
    def test_round_trip(self) -> None:
        model = NotearsModel.initialize(
            StructuralMask.temporal(), np.random.default_rng(2), hidden=3
        )
        path = self.path('model.json')
        write_model(path, model)
        loaded = read_model(path)
        np.testing.assert_array_equal(
            model.adjacency().weights, loaded.adjacency().weights
        )
        row = np.arange(len(COLUMN_NAMES), dtype=np.float64)
        np.testing.assert_array_equal(
            model.predict_row(row), loaded.predict_row(row)
        )

    def test_not_a_model(self) -> None:
        with self.assertRaises(LogParseError):
            read_model(self.write_text('model.json', '{"mask": []}\n'))

    def test_not_json(self) -> None:
        with self.assertRaises(LogParseError) as context:
            read_model(self.write_text('model.json', '{\n  oops\n'))
        self.assertEqual(2, context.exception.line)


class TestAdjacency(TestSerialization):
    def test_exact_values(self) -> None:
        adjacency = WeightedAdjacency(
            np.array([[0.0, 0.125], [1.0 / 3.0, 0.0]]), ('a', 'b')
        )
        path = self.path('adjacency.csv')
        write_adjacency(path, adjacency)
        with open(path, newline='') as stream:
            rows = list(csv.reader(stream))
        self.assertEqual(['a', 'b'], rows[0])
        np.testing.assert_array_equal(
            adjacency.weights,
            np.array([[float(field) for field in row] for row in rows[1:]])
        )


class TestCurve(TestSerialization):
    def test_rows(self) -> None:
        curve = [
            CurvePoint(12, 0, 1.0, 0.5, 'plan'),
            CurvePoint(40, 1, 0.0, 0.1, 'dqn'),
        ]
        path = self.path('curve.csv')
        write_curve(path, curve)
        with open(path, newline='') as stream:
            rows = list(csv.DictReader(stream))
        self.assertEqual(list(CURVE_HEADER), list(rows[0]))
        self.assertEqual(
            [('12', '0', '1', 'plan'), ('40', '1', '0', 'dqn')],
            [(row['global_step'], row['episode_index'],
              row['episode_return'], row['phase']) for row in rows]
        )


class TestMapping(TestSerialization):
    def test_round_trip(self) -> None:
        mapping = AttributeMapping()
        mapping.set(4, 3, Evidence(7, Action.LEFT, 0.0, (2, 1)))
        mapping.set(3, 4, Evidence(9, Action.UP, 1.0, (1, 2)))
        path = self.path('mapping.json')
        write_mapping(path, mapping, CategoryGroups.from_mapping(mapping))
        loaded = read_mapping(path)
        self.assertEqual(mapping, loaded)
        self.assertEqual(Action.UP, loaded.evidence(3).action)

    def test_groups_written(self) -> None:
        mapping = AttributeMapping()
        mapping.set(4, 3, Evidence(7, Action.LEFT, 0.0, (2, 1)))
        path = self.path('mapping.json')
        write_mapping(path, mapping, CategoryGroups.from_mapping(mapping))
        with open(path) as stream:
            self.assertEqual([[3, 4]], json.load(stream)['groups'])

    def test_shared_source(self) -> None:
        path = self.write_text('mapping.json', json.dumps({'entries': [
            {'target_color': 5, 'source_color': 1},
            {'target_color': 6, 'source_color': 1},
        ]}))
        with self.assertRaises(LogParseError):
            read_mapping(path)

    def test_not_a_mapping(self) -> None:
        with self.assertRaises(LogParseError):
            read_mapping(self.write_text('mapping.json', '[1, 2]\n'))


class TestQNetworks(TestSerialization):
    def test_round_trip(self) -> None:
        q = QNetworks.initialize(np.random.default_rng(5), hidden=(4,))
        path = self.path('q.json')
        write_q(path, q)
        loaded = read_q(path)
        x = np.linspace(0.0, 1.0, q.online.input_dim)
        np.testing.assert_array_equal(
            q.online.forward(x), loaded.online.forward(x)
        )
        np.testing.assert_array_equal(
            q.target.forward(x), loaded.target.forward(x)
        )


class TestSummary(unittest.TestCase):
    def test_order_and_format(self) -> None:
        self.assertEqual(
            'command=eval rows=3 mean_return=0.5 h=2',
            summary(command='eval', rows=3, mean_return=0.5, h=2.0)
        )

    def test_empty(self) -> None:
        self.assertEqual('', summary())
