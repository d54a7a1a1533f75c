"""
Causal structure mapping experiments.

Usage:
    csm collect --out=<log> [options]
    csm learn-structure <log> --out=<dir> [options]
    csm train-dqn --out=<dir> [--layout=<file>] [options]
    csm train-combined --out=<dir> (--models=<dir> | --rules) [--layout=<file>] [options]
    csm transfer --models=<dir> --qnet=<file> --out=<file> [--target=<file>] [options]
    csm transfer --rules --qnet=<file> --out=<file> [--target=<file>] [options]
    csm eval --qnet=<file> [--layout=<file>] [--mapping=<file>] [options]
    csm export-adjacency <model> --out=<file> [options]
    csm (-h | --help)

Options:
    -h --help            Show this screen
    --seed=<n>           Seed of every random source
    --config=<file>      A key=value settings file
    --jobs=<n>           Worker processes for independent fits
    --samples=<n>        Rows wanted for each action when collecting
    --lambda1=<x>        L1 weight of structure learning
    --omega=<x>          Edge threshold on learned adjacencies
    --horizon=<n>        Planning horizon
    --t0=<n>             Step budget of structure mapping
    --size=<n>           Side of randomly drawn layouts
    --episodes=<n>       Episodes averaged when evaluating a policy
    --rules              Plan and map with the exact rules of the world
                         instead of learned models
    -v --verbose         Log progress
    -q --quiet           Log errors only

Flags override the values of the settings file. Training runs write q.json,
curve.csv and the layout they trained on as layout.txt to their --out
directory.

Exit status is 0 on success, 2 for invalid input, 3 when structure learning
does not converge, 4 for unreadable or unwritable files and 5 for other
model errors.
"""
import functools
import logging
import os
import sys
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from docopt import DocoptExit, docopt

from csm.agents.combined import train_combined
from csm.agents.dqn import EnvFactory, TrainingResult, evaluate_policy
from csm.agents.dqn import train_dqn
from csm.collection import collect
from csm.config import RunConfig
from csm.environments.attributes import Action
from csm.environments.layouts import format_layout, parse_layout
from csm.environments.layouts import random_layout
from csm.environments.triggers import GridSpec, Palette, reset
from csm.exceptions import CyclicAfterThreshold, DidNotConverge
from csm.exceptions import InsufficientData, InvalidConfig, InvalidSpec
from csm.exceptions import LayoutInfeasible, LogParseError
from csm.exceptions import MissingActionData, ShapeMismatch
from csm.exceptions import StructureLearningError
from csm.exceptions import UnresolvableMismatch
from csm.interfaces import DynamicsModel
from csm.planning.dynamics import LearnedDynamics, RuleDynamics
from csm.planning.oracles import ModelOracle
from csm.serialization import read_datasets, read_mapping, read_model
from csm.serialization import read_q, summary, write_adjacency, write_curve
from csm.serialization import write_mapping, write_model, write_q
from csm.serialization import write_transitions
from csm.structure.mask import StructuralMask
from csm.structure.notears import learn_all_actions
from csm.transfer.structure_mapping import structure_map
from csm.transfer.structure_mapping import transfer_policy_eval

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4
EXIT_MODEL = 5


def main(argv: Optional[List[str]] = None) -> int:
    """

    :param argv: The arguments, ``sys.argv[1:]`` if omitted
    :return: The exit status
    """
    try:
        arguments = docopt(__doc__, argv=argv)
    except DocoptExit as error:
        print(error, file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(
        level=logging.DEBUG if arguments['--verbose'] else
        logging.ERROR if arguments['--quiet'] else logging.WARNING,
        format='%(asctime)s %(name)s %(levelname)s: %(message)s'
    )
    try:
        config = RunConfig.load(arguments['--config'], _overrides(arguments))
        command = next(
            name for name in _COMMANDS if arguments[name]
        )
        line = _COMMANDS[command](arguments, config)
    except DidNotConverge as error:
        log.error('%s', error)
        return EXIT_CONVERGENCE
    except (LogParseError, OSError) as error:
        log.error('%s', error)
        return EXIT_IO
    except (
            InvalidConfig, InvalidSpec, LayoutInfeasible, InsufficientData,
            MissingActionData, ShapeMismatch
    ) as error:
        log.error('%s', error)
        return EXIT_INVALID
    except (
            UnresolvableMismatch, CyclicAfterThreshold,
            StructureLearningError
    ) as error:
        log.error('%s', error)
        return EXIT_MODEL
    print(line)
    return EXIT_OK


def collect_cmd(arguments: Dict[str, Any], config: RunConfig) -> str:
    general = config.general
    rows = write_transitions(arguments['--out'], collect(
        np.random.default_rng(general.seed), general.samples_per_action,
        general.min_size, general.max_size,
        (general.min_keys, general.max_keys),
        (general.min_locks, general.max_locks), general.max_steps
    ))
    return summary(command='collect', rows=rows)


def learn_structure_cmd(arguments: Dict[str, Any], config: RunConfig) -> str:
    out = _directory(arguments['--out'])
    datasets = read_datasets(arguments['<log>'])
    learned = learn_all_actions(
        datasets, StructuralMask.temporal(), config.notears,
        config.general.omega, config.general.jobs
    )
    for action, (model, _) in sorted(learned.items()):
        write_model(_model_path(out, action), model)
        write_adjacency(
            os.path.join(out, 'adjacency_%s.csv' % action.label),
            model.adjacency()
        )
    return summary(
        command='learn-structure',
        h=max(model.report.h for model, _ in learned.values()
              if model.report is not None),
        edges=sum(len(graph.edges()) for _, graph in learned.values())
    )


def train_dqn_cmd(arguments: Dict[str, Any], config: RunConfig) -> str:
    out = _directory(arguments['--out'])
    spec = _layout(arguments['--layout'], config)
    result = train_dqn(
        _env_factory(spec, config), config.dqn,
        np.random.default_rng(config.dqn.seed)
    )
    return _write_training(out, 'train-dqn', result, spec)


def train_combined_cmd(arguments: Dict[str, Any], config: RunConfig) -> str:
    out = _directory(arguments['--out'])
    spec = _layout(arguments['--layout'], config)
    result = train_combined(
        _env_factory(spec, config), ModelOracle(_dynamics(arguments)),
        config.dqn, config.plan, np.random.default_rng(config.plan.seed),
        config.combined
    )
    return _write_training(out, 'train-combined', result, spec)


def transfer_cmd(arguments: Dict[str, Any], config: RunConfig) -> str:
    q = read_q(arguments['--qnet'])
    if arguments['--target']:
        target = _read_layout(arguments['--target'])
    else:
        target = random_layout(
            np.random.default_rng(config.general.seed), config.general.size,
            config.general.size, config.general.n_keys,
            config.general.n_locks, Palette.inverted()
        )
    env_factory = _env_factory(target, config)
    result = structure_map(
        _dynamics(arguments), q, env_factory,
        np.random.default_rng(config.general.seed), config.transfer
    )
    write_mapping(arguments['--out'], result.mapping, result.groups)
    mean_return = transfer_policy_eval(
        q, result.mapping, env_factory, config.general.episodes
    )
    return summary(
        command='transfer', mapping_size=len(result.mapping),
        mismatches=len(result.trace), steps=result.steps,
        mean_return=mean_return
    )


def eval_cmd(arguments: Dict[str, Any], config: RunConfig) -> str:
    q = read_q(arguments['--qnet'])
    spec = _layout(arguments['--layout'], config)
    env_factory = _env_factory(spec, config)
    if arguments['--mapping']:
        mean_return = transfer_policy_eval(
            q, read_mapping(arguments['--mapping']), env_factory,
            config.general.episodes
        )
    else:
        mean_return = evaluate_policy(
            q, env_factory, config.general.episodes
        )
    return summary(command='eval', mean_return=mean_return)


def export_adjacency_cmd(arguments: Dict[str, Any], config: RunConfig) -> str:
    model = read_model(arguments['<model>'])
    adjacency = model.adjacency()
    write_adjacency(arguments['--out'], adjacency)
    return summary(
        command='export-adjacency',
        edges=int(np.count_nonzero(adjacency.weights > config.general.omega))
    )


_COMMANDS = {
    'collect': collect_cmd,
    'learn-structure': learn_structure_cmd,
    'train-dqn': train_dqn_cmd,
    'train-combined': train_combined_cmd,
    'transfer': transfer_cmd,
    'eval': eval_cmd,
    'export-adjacency': export_adjacency_cmd,
}  # type: Dict[str, Callable[[Dict[str, Any], RunConfig], str]]


_FLAGS = (
    ('--seed', 'seed'),
    ('--jobs', 'jobs'),
    ('--samples', 'samples_per_action'),
    ('--lambda1', 'notears.lambda1'),
    ('--omega', 'omega'),
    ('--horizon', 'plan.horizon'),
    ('--t0', 'transfer.t0'),
    ('--size', 'size'),
    ('--episodes', 'episodes'),
)


def _overrides(arguments: Dict[str, Any]) -> Dict[str, str]:
    return {
        key: arguments[flag]
        for flag, key in _FLAGS if arguments.get(flag) is not None
    }


def _dynamics(arguments: Dict[str, Any]) -> DynamicsModel:
    if arguments['--rules']:
        return RuleDynamics(Palette.default())
    directory = arguments['--models']
    return LearnedDynamics({
        action: read_model(_model_path(directory, action))
        for action in Action
    })


def _layout(path: Optional[str], config: RunConfig) -> GridSpec:
    if path:
        return _read_layout(path)
    general = config.general
    return random_layout(
        np.random.default_rng(general.seed), general.size, general.size,
        general.n_keys, general.n_locks
    )


def _env_factory(spec: GridSpec, config: RunConfig) -> EnvFactory:
    return functools.partial(reset, spec, config.general.max_steps)


def _read_layout(path: str) -> GridSpec:
    with open(path) as stream:
        text = stream.read()
    try:
        return parse_layout(text)
    except InvalidSpec as error:
        raise LogParseError(str(error), path) from error


def _write_training(
        out: str, command: str, result: TrainingResult, spec: GridSpec
) -> str:
    write_q(os.path.join(out, 'q.json'), result.q)
    with open(os.path.join(out, 'layout.txt'), 'w') as stream:
        stream.write(format_layout(spec))
    write_curve(os.path.join(out, 'curve.csv'), result.curve)
    window = [point.episode_return for point in result.curve[-20:]]
    return summary(
        command=command, episodes=len(result.curve),
        final_mean_return=float(np.mean(window)) if window else 0.0,
        random_actions=result.random_actions, updates=result.updates
    )


def _model_path(directory: str, action: Action) -> str:
    return os.path.join(directory, 'model_%s.json' % action.label)


def _directory(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


if __name__ == '__main__':
    sys.exit(main())
