"""
Contains tests for attribute mappings and behavior groups
"""
import unittest

import numpy as np

from hypothesis import given
from hypothesis.strategies import integers, lists

from csm.environments import Action, COLUMN_NAMES, Palette
from csm.exceptions import InvalidMapping
from csm.transfer import AttributeMapping, CategoryGroups, Evidence


class TestMapping(unittest.TestCase):
    @property
    def swap(self) -> AttributeMapping:
        mapping = AttributeMapping()
        mapping.set(4, 3, Evidence(2, Action.UP, 0.0, (1, 2)))
        mapping.set(3, 4, Evidence(9, Action.LEFT, -1.0, (2, 2)))
        return mapping


class TestAttributeMapping(TestMapping):
    def test_empty(self) -> None:
        mapping = AttributeMapping()
        self.assertEqual(0, len(mapping))
        self.assertEqual(7, mapping.source_of(7))
        attributes = np.arange(16, dtype=np.float64)
        np.testing.assert_array_equal(attributes, mapping.rewrite(attributes))

    def test_rewrite_touches_colors_only(self) -> None:
        attributes = np.full(16, 3.0)
        rewritten = self.swap.rewrite(attributes)
        for index, name in enumerate(COLUMN_NAMES[:16]):
            expected = 4.0 if name.endswith('.c') else 3.0
            self.assertEqual(expected, rewritten[index], name)
        self.assertEqual(3.0, attributes[2])

    def test_set_replaces(self) -> None:
        mapping = self.swap
        mapping.set(4, 1, Evidence(12, Action.DOWN, 0.0, (3, 3)))
        self.assertEqual([(3, 4), (4, 1)], mapping.items())
        self.assertEqual(12, mapping.evidence(4).step)

    def test_shared_source_rejected(self) -> None:
        mapping = self.swap
        with self.assertRaises(InvalidMapping):
            mapping.set(7, 3, Evidence(5, Action.UP, 0.0, (1, 1)))
        self.assertEqual([(3, 4), (4, 3)], mapping.items())
        self.assertIsNone(mapping.evidence(7))

    def test_shared_source_in_constructor(self) -> None:
        with self.assertRaises(InvalidMapping):
            AttributeMapping({5: 1, 6: 1})

    def test_shared_source_in_dict(self) -> None:
        data = {'entries': [
            {'target_color': 5, 'source_color': 1},
            {'target_color': 6, 'source_color': 1},
        ]}
        with self.assertRaises(InvalidMapping):
            AttributeMapping.from_dict(data)

    def test_target_of(self) -> None:
        self.assertEqual(4, self.swap.target_of(3))
        self.assertIsNone(self.swap.target_of(1))

    @given(lists(integers(0, 9), min_size=1, max_size=30))
    def test_stays_one_to_one(self, sources) -> None:
        mapping = AttributeMapping()
        evidence = Evidence(0, Action.UP, 0.0, (0, 0))
        for target, source in enumerate(sources):
            try:
                mapping.set(target, source, evidence)
            except InvalidMapping:
                self.assertIsNotNone(mapping.target_of(source))
        mapped = [source for _, source in mapping.items()]
        self.assertEqual(len(set(mapped)), len(mapped))
        self.assertEqual(len(set(sources)), len(mapping))

    def test_copy(self) -> None:
        original = self.swap
        duplicate = original.copy()
        duplicate.set(5, 1, Evidence(1, Action.UP, 0.0, (0, 0)))
        self.assertNotIn(5, original)
        self.assertIn(5, duplicate)

    def test_dict(self) -> None:
        data = self.swap.to_dict()
        self.assertEqual(
            [3, 4], [entry['target_color'] for entry in data['entries']]
        )
        self.assertEqual('left', data['entries'][0]['evidence']['action'])
        restored = AttributeMapping.from_dict(data)
        self.assertEqual(self.swap, restored)
        self.assertEqual(
            Evidence(2, Action.UP, 0.0, (1, 2)), restored.evidence(4)
        )


class TestCategoryGroups(TestMapping):
    def test_from_mapping(self) -> None:
        groups = CategoryGroups.from_mapping(self.swap, {0, 1, 3})
        self.assertEqual([[0, 0], [1, 1], [3, 4], [4, 3]], groups.to_list())
        self.assertEqual(3, groups.group_of(4))
        self.assertEqual('key-like', groups.label(groups.group_of(4)))
        self.assertEqual('lock-like', groups.label(groups.group_of(3)))
        self.assertEqual('wall-like', groups.label(1))
        self.assertEqual('free-like', groups.label(0))

    def test_mapped_colors_only(self) -> None:
        groups = CategoryGroups.from_mapping(self.swap)
        self.assertEqual([[3, 4], [4, 3]], groups.to_list())
        self.assertIsNone(groups.group_of(1))

    def test_add_moves(self) -> None:
        groups = CategoryGroups()
        groups.add(1, 5)
        groups.add(1, 6)
        groups.add(3, 5)
        self.assertEqual([6], groups.members(1))
        self.assertEqual([5], groups.members(3))
        groups.add(3, 6)
        self.assertEqual(1, len(groups))
        self.assertIsNone(groups.group_of(7))

    def test_unknown_label(self) -> None:
        self.assertEqual('color-9-like', CategoryGroups().label(9))

    def test_inverted_palette_labels(self) -> None:
        groups = CategoryGroups(Palette.inverted())
        self.assertEqual('key-like', groups.label(4))
