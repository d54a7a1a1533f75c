"""
Describes how to make Triggers layouts, either by drawing them at random or by
reading the plain-text format:

.. code-block:: text

    palette: key=3 lock=4
    #####
    #A.K#
    #...#
    #L..#
    #####

``.`` is free space, ``#`` a wall, ``A`` the agent start, ``K`` a key and
``L`` a lock. The palette header is optional.
"""
import logging
import re
from collections import deque
from typing import Iterable, List, Optional, Set

import numpy as np

from csm.environments.triggers import CellKind, GridSpec, Palette, Position
from csm.exceptions import InvalidSpec, LayoutInfeasible

log = logging.getLogger(__name__)

MIN_RANDOM_SIZE = 5

_SYMBOLS = {
    '.': CellKind.FREE,
    '#': CellKind.WALL,
    'K': CellKind.KEY,
    'L': CellKind.LOCK,
}
_CHARACTERS = {kind: symbol for symbol, kind in _SYMBOLS.items()}
_PALETTE_HEADER = re.compile(r'^palette:\s*(.*)$')


def random_layout(
        rng: np.random.Generator,
        height: int,
        width: int,
        n_keys: int,
        n_locks: int,
        palette: Optional[Palette] = None,
        solvable: bool = True,
        max_attempts: int = 100
) -> GridSpec:
    """
    Draw a walled grid with keys, locks and an agent start at distinct
    interior cells. The draw depends only on the generator state.

    :param rng: The random source
    :param height: Number of rows, at least 5
    :param width: Number of columns, at least 5
    :param n_keys: Number of keys, at least 1
    :param n_locks: Number of locks, at least 1
    :param palette: The palette of the world, the default one if omitted
    :param solvable: Redraw until every key and lock can be reached
    :param max_attempts: How many draws to try before giving up
    :return: The layout
    :raises LayoutInfeasible: If the objects do not fit in the interior, or
        no solvable layout turned up within ``max_attempts`` draws
    """
    if height < MIN_RANDOM_SIZE or width < MIN_RANDOM_SIZE:
        raise LayoutInfeasible(
            'Random layouts need at least %dx%d cells, got %dx%d' % (
                MIN_RANDOM_SIZE, MIN_RANDOM_SIZE, height, width
            )
        )
    if n_keys < 1 or n_locks < 1:
        raise LayoutInfeasible('Layouts need at least one key and one lock')

    interior = [
        (row, col)
        for row in range(1, height - 1) for col in range(1, width - 1)
    ]
    needed = 1 + n_keys + n_locks
    if needed > len(interior):
        raise LayoutInfeasible(
            'Cannot place %d objects in the %d interior cells of a %dx%d grid'
            % (needed, len(interior), height, width)
        )

    for attempt in range(max_attempts):
        order = rng.permutation(len(interior))
        chosen = [interior[index] for index in order[:needed]]
        agent_start = chosen[0]
        keys = chosen[1:1 + n_keys]
        locks = chosen[1 + n_keys:]
        layout = _empty_room(height, width)
        for row, col in keys:
            layout[row][col] = CellKind.KEY
        for row, col in locks:
            layout[row][col] = CellKind.LOCK
        spec = GridSpec(layout, agent_start, palette)
        if not solvable or is_solvable(spec):
            return spec
        log.debug('Layout draw %d was not solvable, drawing again', attempt)

    raise LayoutInfeasible(
        'No solvable %dx%d layout with %d keys and %d locks in %d draws' % (
            height, width, n_keys, n_locks, max_attempts
        )
    )


def is_solvable(spec: GridSpec) -> bool:
    """
    A layout is solvable if every key can be reached without passing through
    a lock, and every lock can be reached once the keys are gone.

    :param spec: The layout to check
    :return: ``True`` if an episode can collect the full return
    """
    passable_with_keys = _reachable(spec, {CellKind.FREE, CellKind.KEY})
    if not spec.keys <= passable_with_keys:
        return False
    passable = _reachable(spec, {CellKind.FREE, CellKind.KEY, CellKind.LOCK})
    return spec.locks <= passable


def parse_layout(text: str) -> GridSpec:
    """

    :param text: A layout in the plain-text format
    :return: The layout it describes
    :raises InvalidSpec: If a symbol is unknown, the agent start appears
        other than exactly once, or the grid is not playable
    """
    lines = [line.rstrip() for line in text.splitlines() if line.strip()]
    palette = Palette.default()
    if lines:
        header = _PALETTE_HEADER.match(lines[0].strip())
        if header is not None:
            palette = _parse_palette(header.group(1))
            lines = lines[1:]

    layout = []  # type: List[List[CellKind]]
    starts = []  # type: List[Position]
    for row, line in enumerate(lines):
        cells = []  # type: List[CellKind]
        for col, symbol in enumerate(line):
            if symbol == 'A':
                starts.append((row, col))
                cells.append(CellKind.FREE)
            elif symbol in _SYMBOLS:
                cells.append(_SYMBOLS[symbol])
            else:
                raise InvalidSpec(
                    'Unknown symbol %r at row %d, column %d' % (
                        symbol, row, col
                    )
                )
        layout.append(cells)

    if len(starts) != 1:
        raise InvalidSpec(
            'Expected exactly one agent start, found %d' % len(starts)
        )
    return GridSpec(layout, starts[0], palette)


def format_layout(spec: GridSpec) -> str:
    """

    :param spec: The layout to write
    :return: The layout in the plain-text format, palette header included
    """
    lines = ['palette: key=%d lock=%d' % (spec.palette.key, spec.palette.lock)]
    for row, cells in enumerate(spec.layout):
        lines.append(''.join(
            'A' if (row, col) == spec.agent_start else _CHARACTERS[kind]
            for col, kind in enumerate(cells)
        ))
    return '\n'.join(lines) + '\n'


def _parse_palette(fields: str) -> Palette:
    codes = {}
    for field in fields.split():
        name, _, value = field.partition('=')
        if name not in ('key', 'lock') or not value.isdigit():
            raise InvalidSpec('Malformed palette entry %r' % field)
        codes[name] = int(value)
    return Palette(**codes)


def _empty_room(height: int, width: int) -> List[List[CellKind]]:
    return [
        [
            CellKind.WALL
            if row in (0, height - 1) or col in (0, width - 1)
            else CellKind.FREE
            for col in range(width)
        ]
        for row in range(height)
    ]


def _reachable(spec: GridSpec, passable: Iterable[CellKind]) -> Set[Position]:
    """
    Flood-fill from the agent start through the given kinds of cell
    """
    allowed = set(passable)
    seen = {spec.agent_start}
    queue = deque([spec.agent_start])
    while queue:
        row, col = queue.popleft()
        for drow, dcol in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            neighbor = (row + drow, col + dcol)
            if neighbor in seen or spec.kind_at(neighbor) not in allowed:
                continue
            seen.add(neighbor)
            queue.append(neighbor)
    return seen
