from typing import Any, Dict, List, Optional
import sys
from argparse import ArgumentParser

import yaml

from .config import load_config
from .core.graph_core import build_window, dump_window, window_to_dot
from .core.graph_providers import list_providers, make_provider
from .errors import ConfigError, CutsetLabError
from .runner import ExperimentRunner


def _parse_params(pairs: List[str]) -> Dict[str, Any]:
    params = {}
    for pair in pairs:
        if '=' not in pair:
            raise ConfigError(f'provider parameter {pair!r} is not of the form key=value')
        key, value = pair.split('=', 1)
        params[key] = yaml.safe_load(value)
    return params


def run(config_path: str, output_dir: Optional[str] = None, verbose: Optional[bool] = None) -> int:
    config = load_config(config_path)
    runner = ExperimentRunner(config, output_dir = output_dir, verbose = verbose)
    runner.run()
    return 0


def dump(family: str, params: List[str], radius: int, dot: bool = False, output: Optional[str] = None) -> int:
    provider = make_provider(family, **_parse_params(params))
    w = build_window(provider, radius)
    text = window_to_dot(w) if dot else '\n'.join(dump_window(w)) + '\n'
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, 'w') as f:
            f.write(text)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = ArgumentParser(prog = 'cutset-lab')
    bool_type = lambda x: x.lower() in ['true', '1', 'yes']
    sub = parser.add_subparsers(dest = 'command', required = True)

    run_parser = sub.add_parser('run', help = 'run one experiment config')
    run_parser.add_argument('config')
    run_parser.add_argument('-o', '--output_dir', type = str, default = None)
    run_parser.add_argument('-v', '--verbose', type = bool_type, default = None)

    sub.add_parser('list-providers', help = 'list graph families and their parameters')

    dump_parser = sub.add_parser('dump-window', help = 'write the radius-R window of a provider')
    dump_parser.add_argument('family')
    dump_parser.add_argument('params', nargs = '*', help = 'provider parameters as key=value')
    dump_parser.add_argument('-r', '--radius', type = int, default = 2)
    dump_parser.add_argument('--dot', action = 'store_true')
    dump_parser.add_argument('-o', '--output', type = str, default = None)

    args = parser.parse_args(argv)
    if getattr(args, 'verbose', None):
        print(args)
    try:
        if args.command == 'run':
            return run(args.config, output_dir = args.output_dir, verbose = args.verbose)
        if args.command == 'list-providers':
            for name, doc in list_providers():
                print(f'{name}\t{doc}')
            return 0
        return dump(args.family, args.params, args.radius, dot = args.dot, output = args.output)
    except CutsetLabError as e:
        print(f'{type(e).__name__}: {e}', file = sys.stderr)
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
