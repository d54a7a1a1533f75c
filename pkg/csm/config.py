"""
Describes the settings of a command-line run. Settings come from a flat
``key=value`` file and from command-line flags, flags winning. Keys of the
algorithm configurations carry a section prefix, e.g. ``notears.lambda1`` or
``dqn.total_steps``; general keys such as ``seed`` have none.

.. code-block:: text

    # a small run
    seed = 3
    max_size = 8
    notears.max_inner_steps = 2000
    dqn.hidden = 32,32
"""
import logging
from typing import Any, Dict, Mapping, NamedTuple, Optional, Tuple, Type

from csm.agents.combined import CombinedConfig
from csm.agents.dqn import DqnConfig
from csm.environments.layouts import MIN_RANDOM_SIZE
from csm.exceptions import InvalidConfig
from csm.planning.shooting import PlanConfig
from csm.structure.notears import NotearsConfig
from csm.transfer.structure_mapping import TransferConfig

log = logging.getLogger(__name__)

_TRUE = ('1', 'true', 'yes', 'on')
_FALSE = ('0', 'false', 'no', 'off')


class GeneralConfig(NamedTuple):
    seed: int = 0
    size: int = 5
    min_size: int = 5
    max_size: int = 20
    n_keys: int = 1
    n_locks: int = 1
    min_keys: int = 1
    max_keys: int = 2
    min_locks: int = 1
    max_locks: int = 2
    samples_per_action: int = 16000
    max_steps: int = 200
    omega: float = 0.3
    episodes: int = 20
    jobs: int = 1

    def check(self) -> None:
        """
        :raises InvalidConfig: If a field is outside its range
        """
        for name in ('size', 'min_size'):
            if getattr(self, name) < MIN_RANDOM_SIZE:
                raise InvalidConfig(
                    '%s must be at least %d, got %d' % (
                        name, MIN_RANDOM_SIZE, getattr(self, name)
                    )
                )
        if self.max_size < self.min_size:
            raise InvalidConfig(
                'max_size (%d) is below min_size (%d)' % (
                    self.max_size, self.min_size
                )
            )
        positive = (
            'n_keys', 'n_locks', 'min_keys', 'min_locks',
            'samples_per_action', 'max_steps', 'episodes', 'jobs'
        )
        for name in positive:
            if getattr(self, name) < 1:
                raise InvalidConfig('%s must be at least 1' % name)
        for kind in ('keys', 'locks'):
            low = getattr(self, 'min_' + kind)
            high = getattr(self, 'max_' + kind)
            if high < low:
                raise InvalidConfig('max_%s (%d) is below min_%s (%d)' % (
                    kind, high, kind, low
                ))
        interior = (self.min_size - 2) ** 2
        if 1 + self.max_keys + self.max_locks > interior:
            raise InvalidConfig(
                '%d keys and %d locks do not fit a %dx%d grid' % (
                    self.max_keys, self.max_locks, self.min_size,
                    self.min_size
                )
            )
        if not self.omega > 0:
            raise InvalidConfig('omega must be positive, got %g' % self.omega)


_SECTIONS = {
    'notears': NotearsConfig,
    'dqn': DqnConfig,
    'plan': PlanConfig,
    'combined': CombinedConfig,
    'transfer': TransferConfig,
}  # type: Dict[str, Type[Any]]


class RunConfig(object):
    """
    Every setting of a run, split into the general settings and one
    configuration record per algorithm
    """
    def __init__(self, values: Optional[Mapping[str, Any]] = None) -> None:
        """

        :param values: Raw settings by key. Strings are converted to the
            type of the default
        :raises InvalidConfig: If a key is unknown or a value does not
            convert or is out of range
        """
        values = dict(values or {})
        sections = {'': {}}  # type: Dict[str, Dict[str, Any]]
        for key, value in values.items():
            section, _, name = key.rpartition('.')
            record = GeneralConfig if not section else _SECTIONS.get(section)
            if record is None or name not in record._fields:
                raise InvalidConfig('Unknown setting %r' % key)
            sections.setdefault(section, {})[name] = _convert(
                key, value, record._field_defaults[name]
            )

        self.general = GeneralConfig(**sections[''])
        seeded = {
            section: self._seeded(section, sections.get(section, {}))
            for section in _SECTIONS
        }
        self.notears = NotearsConfig(**seeded['notears'])
        self.dqn = DqnConfig(**seeded['dqn'])
        self.plan = PlanConfig(**seeded['plan'])
        self.combined = CombinedConfig(**seeded['combined'])
        self.transfer = TransferConfig(**seeded['transfer'])
        self.check()

    @classmethod
    def load(
            cls,
            path: Optional[str] = None,
            overrides: Optional[Mapping[str, Any]] = None
    ) -> 'RunConfig':
        """

        :param path: A ``key=value`` file, if any
        :param overrides: Settings that win over the file
        :return: The merged configuration
        :raises InvalidConfig: If a line, key or value is invalid
        """
        values = {} if path is None else read_settings(path)
        values.update(overrides or {})
        return cls(values)

    def check(self) -> None:
        self.general.check()
        for section in _SECTIONS:
            getattr(self, section).check()

    def _seeded(
            self, section: str, fields: Dict[str, Any]
    ) -> Dict[str, Any]:
        if 'seed' in _SECTIONS[section]._fields and 'seed' not in fields:
            return dict(fields, seed=self.general.seed)
        return fields

    def __repr__(self) -> str:
        return '{0}({1!r})'.format(self.__class__.__name__, self.general)


def read_settings(path: str) -> Dict[str, str]:
    """

    :param path: A ``key=value`` file. Blank lines and text after ``#`` are
        ignored
    :return: The raw settings
    :raises InvalidConfig: If a line has no ``=`` or repeats a key
    """
    settings = {}  # type: Dict[str, str]
    with open(path) as stream:
        for number, line in enumerate(stream, start=1):
            text = line.split('#', 1)[0].strip()
            if not text:
                continue
            key, equals, value = text.partition('=')
            key = key.strip()
            if not equals or not key:
                raise InvalidConfig(
                    '%s:%d: expected key=value, got %r' % (path, number, text)
                )
            if key in settings:
                raise InvalidConfig(
                    '%s:%d: %r is set twice' % (path, number, key)
                )
            settings[key] = value.strip()
    return settings


def _convert(key: str, value: Any, default: Any) -> Any:
    if not isinstance(value, str):
        return value
    try:
        if isinstance(default, bool):
            lowered = value.lower()
            if lowered not in _TRUE + _FALSE:
                raise ValueError('not a boolean')
            return lowered in _TRUE
        if isinstance(default, tuple):
            return tuple(
                int(part) for part in value.split(',') if part.strip()
            )  # type: Tuple[int, ...]
        return type(default)(value)
    except ValueError as error:
        raise InvalidConfig(
            'Cannot read %r as the value of %s: %s' % (value, key, error)
        ) from error
