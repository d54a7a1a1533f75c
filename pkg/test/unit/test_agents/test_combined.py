"""
Contains tests for the planning-then-Q-learning agent
"""
import functools
import unittest

import numpy as np

from csm.agents import CombinedConfig, DqnConfig, train_combined
from csm.environments import parse_layout, reset
from csm.exceptions import InvalidConfig
from csm.planning import GroundTruthOracle, ModelOracle, PlanConfig
from csm.planning import RuleDynamics


class TestCombined(unittest.TestCase):
    def setUp(self) -> None:
        spec = parse_layout(
            '#####\n'
            '#.L.#\n'
            '#...#\n'
            '#A.K#\n'
            '#####\n'
        )
        self.factory = functools.partial(reset, spec, 20)
        self.config = DqnConfig(
            total_steps=100, burn_in=10, batch_size=4, capacity=100,
            hidden=(8,), target_sync_every=25
        )
        self.plan_config = PlanConfig(num_sequences=5, horizon=6)


class TestCombinedConfig(TestCombined):
    def test_defaults(self) -> None:
        self.assertEqual((5000, 20000, 0.05), tuple(CombinedConfig()))

    def test_negative(self) -> None:
        with self.assertRaises(InvalidConfig):
            CombinedConfig(plan_steps=-1).check()

    def test_epsilon(self) -> None:
        with self.assertRaises(InvalidConfig):
            CombinedConfig(epsilon=2.0).check()


class TestTrainCombined(TestCombined):
    def test_no_planning(self) -> None:
        result = train_combined(
            self.factory, GroundTruthOracle(), self.config, self.plan_config,
            np.random.default_rng(0), CombinedConfig(0, 60, 0.05)
        )
        self.assertTrue(result.curve)
        self.assertTrue(all(
            point.phase == 'dqn' and point.epsilon == 0.05
            for point in result.curve
        ))
        self.assertEqual(60 - 3, result.updates)

    def test_phases(self) -> None:
        result = train_combined(
            self.factory, ModelOracle(RuleDynamics()), self.config,
            self.plan_config, np.random.default_rng(1),
            CombinedConfig(40, 40, 0.05)
        )
        phases = [point.phase for point in result.curve]
        self.assertIn('plan', phases)
        self.assertEqual(phases, sorted(phases, key=lambda p: p != 'plan'))
        self.assertEqual(
            [], [point for point in result.curve
                 if point.phase == 'plan' and point.epsilon != 0.0]
        )
        self.assertTrue(all(point.global_step <= 80
                            for point in result.curve))
        self.assertEqual(80 - 3, result.updates)

    def test_deterministic(self) -> None:
        runs = [
            train_combined(
                self.factory, GroundTruthOracle(), self.config,
                self.plan_config, np.random.default_rng(3),
                CombinedConfig(30, 30, 0.05)
            )
            for _ in range(2)
        ]
        self.assertEqual(runs[0].curve, runs[1].curve)
        self.assertEqual(runs[0].random_actions, runs[1].random_actions)
