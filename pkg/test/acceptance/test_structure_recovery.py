"""
Contains the structure recovery experiment: the graphs learned from random
play must find the attributes that drive each action's outcome
"""
import unittest

from csm.environments import Action, OUTCOME_COLUMNS
from csm.structure import acyclicity_h

from .runs import acceptance, learned_graphs, learned_models

NEIGHBORS = {
    Action.UP: 'up',
    Action.DOWN: 'down',
    Action.LEFT: 'left',
    Action.RIGHT: 'right',
}


@acceptance
class TestStructureRecovery(unittest.TestCase):
    def test_reward_parents(self) -> None:
        graphs = learned_graphs()
        for action, neighbor in NEIGHBORS.items():
            self.assertLessEqual(
                {'num_keys', '%s.c' % neighbor},
                set(graphs[action].parents('reward')), action.label
            )

    def test_position_parents(self) -> None:
        graphs = learned_graphs()
        for action, neighbor in NEIGHBORS.items():
            color = '%s.c' % neighbor
            self.assertLessEqual(
                {'agent.x', color}, set(graphs[action].parents('agent.x_next')),
                action.label
            )
            self.assertLessEqual(
                {'agent.y', color}, set(graphs[action].parents('agent.y_next')),
                action.label
            )

    def test_outcomes_have_no_children(self) -> None:
        for action, graph in learned_graphs().items():
            for parent, child in graph.edges():
                self.assertNotIn(parent, OUTCOME_COLUMNS, action.label)

    def test_constraint_satisfied(self) -> None:
        models = learned_models()
        for action, graph in learned_graphs().items():
            self.assertLessEqual(models[action].report.h, 1e-8, action.label)
            self.assertAlmostEqual(
                0.0, acyclicity_h(graph.adjacency.astype(float)), places=12,
                msg=action.label
            )
