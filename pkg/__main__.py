import json
import logging
import sys
from argparse import ArgumentParser

import numpy as np

from graphs.errors import BudgetError, SplitToolError
from splitting.runner import Command, PipelineConfig, Runner

EXIT_PRECONDITION = 1
EXIT_BUDGET = 2
EXIT_IO = 3


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='splittool')
    parser.add_argument('command', choices=[c.value for c in Command])
    parser.add_argument('-k', '--kind', help='generator, e.g. grid2d, free_group:3, free_product:grid2d,grid2d')
    parser.add_argument('-r', '--radius', type=int, default=4)
    parser.add_argument('--radii', default='8,16,32', help='comma separated radii for diagnose-faces')
    parser.add_argument('-w', '--window')
    parser.add_argument('--embedding', help='embedding JSON to read, or to write with generate')
    parser.add_argument('--complex')
    parser.add_argument('--pattern')
    parser.add_argument('--map', dest='map_path')
    parser.add_argument('--cuts', dest='cuts_path')
    parser.add_argument('--domain')
    parser.add_argument('--codomain')
    parser.add_argument('--edge')
    parser.add_argument('--max-size', type=int, default=3)
    parser.add_argument('--from', dest='source', default='marker:0')
    parser.add_argument('--to', dest='target', default='marker:1')
    parser.add_argument('--mode', choices=['edge', 'vertex'], default='edge')
    parser.add_argument('--variant', choices=['tight', 'connected'], default='tight')
    parser.add_argument('-m', type=int)
    parser.add_argument('--vertices', nargs='+', default=[], help='subgraph, loop or cut side')
    parser.add_argument('--friendly-radius', dest='r', type=int, default=1)
    parser.add_argument('--eps', type=int, default=4)
    parser.add_argument('--relative', action='store_true')
    parser.add_argument('--search', action='store_true')
    parser.add_argument('--transfer-radius')
    parser.add_argument('-o', '--out')
    parser.add_argument('-f', '--format', choices=['json', 'dot'], default='json')
    parser.add_argument('-s', '--seed', type=int, default=42)
    parser.add_argument('-v', '--verbose', action='store_true')
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s - %(levelname)s: %(message)s",
    )
    np.random.seed(args.seed)

    options = vars(args)
    options.pop('verbose')
    embedding = options.pop('embedding')
    if options['command'] == Command.GENERATE.value:
        options['embedding_out'] = embedding
    else:
        options['embedding'] = embedding
    try:
        options['radii'] = tuple(int(r) for r in options['radii'].split(',') if r)
    except ValueError:
        print(f"error: bad radius list {options['radii']!r}", file=sys.stderr)
        return EXIT_PRECONDITION

    try:
        runner = Runner(PipelineConfig(**options))
        text = runner.write(runner.run())
    except BudgetError as err:
        print(f"budget exceeded: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except SplitToolError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (OSError, json.JSONDecodeError) as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO
    if not args.out:
        print(text)
    return 0


if __name__ == '__main__':
    sys.exit(main())
