"""
Describes what structure mapping learns about a target world: which source
color each target color stands for, the evidence behind every entry, and the
behavior groups the colors fall into
"""
from typing import Any, Dict, Iterable, Iterator, List, Mapping, NamedTuple
from typing import Optional, Tuple

import numpy as np

from csm.environments.attributes import Action, COLOR_COLUMNS
from csm.environments.triggers import CellKind, Palette
from csm.exceptions import InvalidMapping
from csm.interfaces import Prediction

_LABELS = {
    CellKind.FREE: 'free-like',
    CellKind.WALL: 'wall-like',
    CellKind.KEY: 'key-like',
    CellKind.LOCK: 'lock-like',
    CellKind.AGENT: 'agent-like',
}


class Evidence(NamedTuple):
    """
    The observation that justified a mapping entry
    """
    step: int
    action: Action
    reward: float
    next_pos: Tuple[int, int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'step': self.step,
            'action': self.action.label,
            'reward': self.reward,
            'next_pos': list(self.next_pos),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'Evidence':
        return cls(
            int(data['step']),
            Action.parse(data['action']),
            float(data['reward']),
            (int(data['next_pos'][0]), int(data['next_pos'][1]))
        )


class MismatchEvent(NamedTuple):
    """
    A step whose observed outcome the model failed to predict. The offending
    object is the neighbor in the direction of the action, the only object
    whose attributes decide a one-step outcome.
    """
    step: int
    state: np.ndarray
    action: Action
    observed: Prediction
    predicted: Prediction
    offending_position: Tuple[int, int]
    offending_color: int


class AttributeMapping(object):
    """
    A partial one-to-one map from target color codes to source color codes.
    Colors without an entry read as themselves.
    """
    def __init__(
            self,
            entries: Optional[Mapping[int, int]] = None,
            evidence: Optional[Mapping[int, Evidence]] = None
    ) -> None:
        """

        :param entries: Source color of each mapped target color
        :param evidence: Why each entry was made, keyed by target color
        """
        self._entries = {
            int(target): int(source)
            for target, source in (entries or {}).items()
        }  # type: Dict[int, int]
        self._evidence = dict(evidence or {})  # type: Dict[int, Evidence]
        self._check_consistency()

    def _check_consistency(self) -> None:
        sources = list(self._entries.values())
        if len(set(sources)) != len(sources):
            raise InvalidMapping('Entries %s share a source color' % (
                sorted(self._entries.items()),
            ))

    def set(self, target: int, source: int, evidence: Evidence) -> None:
        """
        Map a target color, replacing any earlier entry for it

        :param target: The color observed in the target world
        :param source: The source color it behaves like
        :param evidence: The observation justifying the entry
        :raises InvalidMapping: If another target color already maps to
            ``source``
        """
        owner = self.target_of(source)
        if owner is not None and owner != int(target):
            raise InvalidMapping(
                'Cannot map %d to %d, already taken by %d' % (
                    target, source, owner
                )
            )
        self._entries[int(target)] = int(source)
        self._evidence[int(target)] = evidence

    def source_of(self, target: int) -> int:
        return self._entries.get(int(target), int(target))

    def target_of(self, source: int) -> Optional[int]:
        """

        :param source: A source color
        :return: The target color explicitly mapped to it, or ``None``
        """
        for target, mapped in self._entries.items():
            if mapped == int(source):
                return target
        return None

    def evidence(self, target: int) -> Optional[Evidence]:
        return self._evidence.get(int(target))

    def items(self) -> List[Tuple[int, int]]:
        return sorted(self._entries.items())

    def rewrite(self, attributes: np.ndarray) -> np.ndarray:
        """

        :param attributes: The 16 time-``t`` attributes of the target world
        :return: A copy with every mapped color replaced by its source color
        """
        rewritten = np.array(attributes, dtype=np.float64)
        for column in COLOR_COLUMNS:
            rewritten[column] = self.source_of(int(rewritten[column]))
        return rewritten

    def copy(self) -> 'AttributeMapping':
        return self.__class__(self._entries, self._evidence)

    def to_dict(self) -> Dict[str, Any]:
        """

        :return: The entries in ascending target order, each with its
            evidence
        """
        entries = []
        for target, source in self.items():
            entry = {
                'target_color': target, 'source_color': source
            }  # type: Dict[str, Any]
            if target in self._evidence:
                entry['evidence'] = self._evidence[target].to_dict()
            entries.append(entry)
        return {'entries': entries}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'AttributeMapping':
        entries = {}
        evidence = {}
        for entry in data['entries']:
            target = int(entry['target_color'])
            entries[target] = int(entry['source_color'])
            if 'evidence' in entry:
                evidence[target] = Evidence.from_dict(entry['evidence'])
        return cls(entries, evidence)

    def __contains__(self, target: object) -> bool:
        return target in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._entries))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AttributeMapping) and \
            self._entries == other._entries

    def __repr__(self) -> str:
        return '{0}({1})'.format(
            self.__class__.__name__,
            ', '.join('%d->%d' % item for item in self.items())
        )


class CategoryGroups(object):
    """
    A partition of target colors by the source color they behave like. Each
    group is labelled by what its source color is in the source palette.
    """
    def __init__(self, palette: Palette = Palette.default()) -> None:
        """

        :param palette: The source palette, used for labels
        """
        self._palette = palette
        self._groups = {}  # type: Dict[int, List[int]]

    @classmethod
    def from_mapping(
            cls,
            mapping: AttributeMapping,
            consistent: Iterable[int] = (),
            palette: Palette = Palette.default()
    ) -> 'CategoryGroups':
        """

        :param mapping: The mapped target colors
        :param consistent: Target colors whose behavior matched their own
            source meaning
        :param palette: The source palette
        :return: The groups of all mapped and consistent colors
        """
        groups = cls(palette)
        for target in sorted(set(consistent) | set(mapping)):
            groups.add(mapping.source_of(target), target)
        return groups

    def add(self, source: int, target: int) -> None:
        """
        Put a target color in the group of a source color, taking it out of
        any other group

        :param source: The source color
        :param target: The target color behaving like it
        """
        current = self.group_of(target)
        if current is not None:
            self._groups[current].remove(int(target))
        members = self._groups.setdefault(int(source), [])
        members.append(int(target))
        members.sort()
        self._groups = {
            key: value for key, value in self._groups.items() if value
        }

    def group_of(self, target: int) -> Optional[int]:
        """

        :param target: A target color
        :return: The source color of its group, or ``None`` if ungrouped
        """
        for source, members in self._groups.items():
            if target in members:
                return source
        return None

    def members(self, source: int) -> List[int]:
        return list(self._groups.get(int(source), []))

    def label(self, source: int) -> str:
        """

        :param source: A source color
        :return: A name for the behavior of that color, such as
            ``key-like``
        """
        kind = self._palette.kind_of(source)
        return _LABELS[kind] if kind is not None else 'color-%d-like' % source

    def to_list(self) -> List[List[int]]:
        """

        :return: One list per group in ascending source order: the source
            color followed by its target colors
        """
        return [
            [source] + self.members(source) for source in sorted(self._groups)
        ]

    def __len__(self) -> int:
        return len(self._groups)

    def __repr__(self) -> str:
        return '{0}({1})'.format(
            self.__class__.__name__,
            ', '.join(
                '%s=%s' % (self.label(source), members)
                for source, members in sorted(self._groups.items())
            )
        )
