"""
Contains tests for the command-line entry point
"""
import csv
import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from typing import Dict, List, Tuple

from csm.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, main
from csm.environments import Action, act, parse_layout, reset
from csm.serialization import LogRecord, read_model
from csm.serialization import write_transitions

LAYOUT = '#####\n#A.K#\n#...#\n#L..#\n#####\n'


class TestCli(unittest.TestCase):
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

    def run_cli(self, *argv: str) -> Tuple[int, str]:
        stdout = io.StringIO()
        with redirect_stdout(stdout), redirect_stderr(io.StringIO()):
            code = main(list(argv) + ['--quiet'])
        return code, stdout.getvalue().strip()

    @staticmethod
    def curve_rows(directory: str) -> List[Dict[str, str]]:
        with open(os.path.join(directory, 'curve.csv'), newline='') as stream:
            return list(csv.DictReader(stream))

    def small_dqn(self) -> str:
        return self.write_text('dqn.cfg', '\n'.join([
            'max_steps = 10',
            'episodes = 2',
            'dqn.total_steps = 60',
            'dqn.burn_in = 20',
            'dqn.hidden = 4',
            'dqn.batch_size = 8',
            'dqn.capacity = 50',
            'dqn.target_sync_every = 10',
            'plan.horizon = 3',
            'plan.num_sequences = 2',
            'combined.plan_steps = 20',
            'combined.dqn_steps = 20',
        ]) + '\n')


class TestUsage(TestCli):
    def test_bad_arguments(self) -> None:
        self.assertEqual(EXIT_INVALID, self.run_cli('fly')[0])

    def test_unknown_setting(self) -> None:
        config = self.write_text('bad.cfg', 'colour = 3\n')
        code, _ = self.run_cli(
            'collect', '--out=%s' % self.path('log.csv'),
            '--config=%s' % config
        )
        self.assertEqual(EXIT_INVALID, code)

    def test_flag_beats_file(self) -> None:
        config = self.write_text(
            'run.cfg', 'samples_per_action = 5\nmax_size = 5\nomega = 0\n'
        )
        out = '--out=%s' % self.path('log.csv')
        code, _ = self.run_cli('collect', out, '--config=%s' % config)
        self.assertEqual(EXIT_INVALID, code)
        code, _ = self.run_cli(
            'collect', out, '--config=%s' % config, '--omega=0.5'
        )
        self.assertEqual(EXIT_OK, code)

    def test_samples_flag(self) -> None:
        config = self.write_text(
            'run.cfg', 'samples_per_action = 1000\nmax_size = 5\n'
        )
        code, line = self.run_cli(
            'collect', '--out=%s' % self.path('log.csv'),
            '--config=%s' % config, '--samples=5'
        )
        self.assertEqual(EXIT_OK, code)
        self.assertLess(int(line.rpartition('=')[2]), 4000)

    def test_bad_flag_value(self) -> None:
        code, _ = self.run_cli(
            'eval', '--qnet=%s' % self.path('q.json'), '--episodes=many'
        )
        self.assertEqual(EXIT_INVALID, code)

    def test_burn_in_too_long(self) -> None:
        config = self.write_text(
            'dqn.cfg', 'dqn.total_steps = 10\ndqn.burn_in = 20\n'
        )
        code, _ = self.run_cli(
            'train-dqn', '--out=%s' % self.path('run'),
            '--config=%s' % config
        )
        self.assertEqual(EXIT_INVALID, code)


class TestCollectAndLearn(TestCli):
    def test_flow(self) -> None:
        log_path = self.path('log.csv')
        config = self.write_text('run.cfg', '\n'.join([
            'samples_per_action = 30',
            'max_size = 6',
            'omega = 10',
            'notears.min_samples = 30',
            'notears.hidden = 0',
            'notears.max_inner_steps = 20',
            'notears.h_tol = 1000',
        ]) + '\n')
        code, line = self.run_cli(
            'collect', '--out=%s' % log_path, '--config=%s' % config,
            '--seed=2'
        )
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(line.startswith('command=collect rows='))

        models = self.path('models')
        code, line = self.run_cli(
            'learn-structure', log_path, '--out=%s' % models,
            '--config=%s' % config
        )
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(line.startswith('command=learn-structure h='))
        self.assertTrue(line.endswith('edges=0'))
        for action in Action:
            model = read_model(
                os.path.join(models, 'model_%s.json' % action.label)
            )
            self.assertIs(action, model.action)
            self.assertTrue(os.path.exists(
                os.path.join(models, 'adjacency_%s.csv' % action.label)
            ))

        code, line = self.run_cli(
            'export-adjacency', os.path.join(models, 'model_up.json'),
            '--out=%s' % self.path('up.csv'), '--config=%s' % config
        )
        self.assertEqual(EXIT_OK, code)
        self.assertEqual('command=export-adjacency edges=0', line)

    def test_too_few_rows(self) -> None:
        log_path = self.path('log.csv')
        self.run_cli(
            'collect', '--out=%s' % log_path, '--config=%s' % self.write_text(
                'run.cfg', 'samples_per_action = 5\nmax_size = 5\n'
            )
        )
        code, _ = self.run_cli(
            'learn-structure', log_path, '--out=%s' % self.path('models')
        )
        self.assertEqual(EXIT_INVALID, code)

    def test_missing_action(self) -> None:
        log_path = self.path('log.csv')
        state = reset(parse_layout(LAYOUT))
        transition, _ = act(state, Action.DOWN)
        write_transitions(log_path, [LogRecord(0, 0, transition)])
        config = self.write_text('run.cfg', 'notears.min_samples = 1\n')
        code, _ = self.run_cli(
            'learn-structure', log_path, '--out=%s' % self.path('models'),
            '--config=%s' % config
        )
        self.assertEqual(EXIT_INVALID, code)

    def test_missing_log(self) -> None:
        code, _ = self.run_cli(
            'learn-structure', self.path('absent.csv'),
            '--out=%s' % self.path('models')
        )
        self.assertEqual(EXIT_IO, code)

    def test_unreadable_log(self) -> None:
        log_path = self.write_text('log.csv', 'not,a,log\n')
        code, _ = self.run_cli(
            'learn-structure', log_path, '--out=%s' % self.path('models')
        )
        self.assertEqual(EXIT_IO, code)


class TestTraining(TestCli):
    def test_train_and_eval(self) -> None:
        out = self.path('dqn')
        layout = self.write_text('layout.txt', LAYOUT)
        config = self.small_dqn()
        code, line = self.run_cli(
            'train-dqn', '--out=%s' % out, '--layout=%s' % layout,
            '--config=%s' % config
        )
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(line.startswith('command=train-dqn episodes='))
        self.assertIn('updates=', line)
        episodes = int(line.split()[1].partition('=')[2])
        self.assertEqual(
            episodes, len(self.curve_rows(out))
        )
        with open(os.path.join(out, 'layout.txt')) as stream:
            self.assertEqual(parse_layout(LAYOUT), parse_layout(stream.read()))

        code, line = self.run_cli(
            'eval', '--qnet=%s' % os.path.join(out, 'q.json'),
            '--layout=%s' % layout, '--config=%s' % config
        )
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(line.startswith('command=eval mean_return='))

    def test_train_combined_with_rules(self) -> None:
        out = self.path('combined')
        code, line = self.run_cli(
            'train-combined', '--out=%s' % out, '--rules',
            '--layout=%s' % self.write_text('layout.txt', LAYOUT),
            '--config=%s' % self.small_dqn()
        )
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(line.startswith('command=train-combined episodes='))
        phases = {row['phase'] for row in self.curve_rows(out)}
        self.assertIn('plan', phases)

    def test_bad_layout(self) -> None:
        code, _ = self.run_cli(
            'train-dqn', '--out=%s' % self.path('dqn'),
            '--layout=%s' % self.write_text('layout.txt', '#####\n#?A.#\n'),
            '--config=%s' % self.small_dqn()
        )
        self.assertEqual(EXIT_IO, code)


class TestTransfer(TestCli):
    def test_identity(self) -> None:
        out = self.path('dqn')
        layout = self.write_text('layout.txt', LAYOUT)
        config = self.small_dqn()
        self.run_cli(
            'train-dqn', '--out=%s' % out, '--layout=%s' % layout,
            '--config=%s' % config
        )
        mapping = self.path('mapping.json')
        code, line = self.run_cli(
            'transfer', '--rules', '--qnet=%s' % os.path.join(out, 'q.json'),
            '--out=%s' % mapping, '--target=%s' % layout,
            '--config=%s' % config
        )
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(
            line.startswith('command=transfer mapping_size=0 mismatches=0')
        )
        with open(mapping) as stream:
            self.assertEqual([], json.load(stream)['entries'])

        code, line = self.run_cli(
            'eval', '--qnet=%s' % os.path.join(out, 'q.json'),
            '--layout=%s' % layout, '--mapping=%s' % mapping,
            '--config=%s' % config
        )
        self.assertEqual(EXIT_OK, code)
