"""
Contains the transfer experiment: a source policy and learned models carried
into a world whose key and lock colors are swapped
"""
import functools
import unittest

import numpy as np

from csm.agents import DqnConfig, evaluate_policy, train_dqn
from csm.environments import Action, GridSpec, Palette, observe
from csm.environments import random_layout, reachable_states, reset, step
from csm.planning import LearnedDynamics
from csm.transfer import predict_with_mapping, structure_map
from csm.transfer import transfer_policy_eval

from .runs import SEEDS, acceptance, learned_models

SWAP = [(3, 4), (4, 3)]


@acceptance
class TestTransfer(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        cls.model = LearnedDynamics(learned_models())

    def source(self, seed: int) -> GridSpec:
        return random_layout(np.random.default_rng(100 + seed), 5, 5, 1, 1)

    def factory(self, spec: GridSpec):
        return functools.partial(reset, spec, 200)

    def source_q(self, seed: int):
        return train_dqn(
            self.factory(self.source(seed)),
            DqnConfig(total_steps=60000, seed=seed),
            np.random.default_rng(seed)
        ).q

    def test_swap_recovered(self) -> None:
        recovered = 0
        for seed in SEEDS:
            source = self.source(seed)
            target = source.with_palette(Palette.inverted())
            q = self.source_q(seed)
            result = structure_map(
                self.model, q, self.factory(target),
                np.random.default_rng(seed)
            )
            if result.mapping.items() != SWAP:
                continue
            recovered += 1
            self.assertEqual(
                evaluate_policy(q, self.factory(source), 1),
                transfer_policy_eval(q, result.mapping, self.factory(target), 1)
            )
            for state in reachable_states(reset(target)):
                if state.terminal:
                    continue
                attributes = observe(state)
                for action in Action:
                    outcome = step(state, action)
                    prediction = predict_with_mapping(
                        self.model, result.mapping, attributes, action
                    )
                    self.assertEqual(
                        outcome.reward, int(np.rint(prediction.reward))
                    )
                    self.assertEqual(
                        outcome.next_state.agent_pos,
                        tuple(prediction.next_pos)
                    )
        self.assertGreaterEqual(recovered, 4)
