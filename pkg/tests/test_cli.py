import importlib.util
import json
from pathlib import Path

import pytest

from graphs.config import BUDGET_ENV
from graphs.errors import ArgumentError
from splitting.runner import Command, PipelineConfig, Runner

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope='module')
def cli():
    spec = importlib.util.spec_from_file_location('splittool_cli', ROOT / '__main__.py')
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def line_cuts(tmp_path):
    path = tmp_path / 'cuts.json'
    path.write_text(json.dumps([[str(i) for i in range(3, 7)], [str(-i) for i in range(3, 7)]]))
    return str(path)


def test_generate_writes_a_window(cli, tmp_path):
    out = tmp_path / 'w.json'
    assert cli.main(['generate', '-k', 'zline', '-r', '3', '-o', str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data['vertices']) == 7
    assert data['generator'] == 'zline'


def test_exit_codes(cli, tmp_path, monkeypatch):
    assert cli.main(['cuts', '-k', 'ladder']) == cli.EXIT_PRECONDITION
    assert cli.main(['menger', '--window', str(tmp_path / 'missing.json')]) == cli.EXIT_IO
    monkeypatch.setenv(BUDGET_ENV, '1')
    assert cli.main(['fill', '-k', 'grid2d', '-r', '2']) == cli.EXIT_BUDGET


def test_bad_radius_list(cli):
    assert cli.main(['diagnose-faces', '-k', 'grid2d', '--radii', '2,x']) == cli.EXIT_PRECONDITION


def test_menger_on_the_cylinder():
    report = Runner(PipelineConfig(Command.MENGER, kind='cylinder', radius=6)).run()
    assert report['value'] == 4
    assert report['mode'] == 'edge'
    assert report['generator'] == 'cylinder'
    assert len(report['paths']) == 4


def test_diagnose_faces_of_grid_with_holes():
    report = Runner(PipelineConfig(Command.DIAGNOSE_FACES, kind='grid_with_holes')).run()
    assert [row['max_finite_face_length'] for row in report['radii']] == [8, 16, 32]
    assert report['increasing']


def test_diagnose_faces_of_the_grid():
    report = Runner(PipelineConfig(Command.DIAGNOSE_FACES, kind='grid2d', radii=(2, 3, 4))).run()
    assert not report['increasing']
    assert all(row['euler'] for row in report['radii'])


def test_structure_tree_command(tmp_path):
    cfg = PipelineConfig(Command.STRUCTURE_TREE, kind='zline', radius=6, cuts_path=line_cuts(tmp_path))
    report = Runner(cfg).run()
    assert report['vertices']['t0'] == ['-1', '-2', '0', '1', '2']
    assert len(report['edges']) == 2
    assert report['order_mismatches'] == 0


@pytest.mark.parametrize('variant, adhesion', [('tight', 1), ('connected', 2)])
def test_tree_decomp_command(tmp_path, variant, adhesion):
    cfg = PipelineConfig(Command.TREE_DECOMP, kind='zline', radius=6, cuts_path=line_cuts(tmp_path), variant=variant)
    report = Runner(cfg).run()
    assert report['verified'], report['failures']
    assert report['adhesion'] == adhesion
    assert [row['size'] for row in report['bags']] == ([7, 4, 4] if variant == 'tight' else [7, 5, 5])


def test_dot_output(tmp_path):
    out = tmp_path / 'tree.dot'
    cfg = PipelineConfig(Command.STRUCTURE_TREE, kind='zline', radius=6, cuts_path=line_cuts(tmp_path),
                         format='dot', out=str(out))
    runner = Runner(cfg)
    runner.write(runner.run())
    assert out.read_text().startswith('graph structure {')


def test_fill_and_chomp_from_a_file(tmp_path):
    fill = Runner(PipelineConfig(Command.FILL, kind='grid2d', radius=2)).run()
    assert len(fill['complex']['cells']) == 4
    path = tmp_path / 'k.json'
    path.write_text(json.dumps(fill['complex']))
    report = Runner(PipelineConfig(Command.CHOMP, complex=str(path))).run()
    assert report['chomp']


def test_badloop_command():
    cfg = PipelineConfig(Command.BADLOOP, kind='cylinder', radius=6, vertices=['0,0', '0,1', '0,2', '0,3'])
    report = Runner(cfg).run()
    assert report['bad']
    assert report['cut']['tags'] == ['H-finite']


def test_unknown_format():
    with pytest.raises(ArgumentError):
        PipelineConfig(Command.GENERATE, kind='zline', format='yaml')


def run_twice(cli, tmp_path, name, argv):
    outputs = []
    for i in range(2):
        out = tmp_path / f'{name}-{i}.json'
        assert cli.main(argv + ['-o', str(out)]) == 0
        outputs.append(out.read_bytes())
    return outputs


@pytest.mark.parametrize('name, argv', [
    ('generate', ['generate', '-k', 'free_product:grid2d,surface_genus2', '-r', '2']),
    ('cuts', ['cuts', '-k', 'grid2d', '-r', '3', '--edge', '0,0~1,0', '--max-size', '3']),
    ('menger', ['menger', '-k', 'cylinder', '-r', '6']),
    ('faces', ['faces', '-k', 'grid_with_holes', '-r', '5']),
    ('fill', ['fill', '-k', 'grid2d', '-r', '3']),
    ('chomp', ['chomp', '-k', 'cylinder', '-r', '3', '--relative']),
])
def test_fixed_seed_gives_identical_bytes(cli, tmp_path, name, argv):
    first, second = run_twice(cli, tmp_path, name, argv + ['-s', '7'])
    assert first == second


def test_sampled_qi_check_is_reproducible(cli, tmp_path):
    window = tmp_path / 'w.json'
    assert cli.main(['generate', '-k', 'grid2d', '-r', '6', '-o', str(window)]) == 0
    vertices = json.loads(window.read_text())['vertices']
    qimap = tmp_path / 'f.json'
    qimap.write_text(json.dumps({'map': {v: v for v in vertices}, 'lambda': '1', 'eps': '0'}))
    argv = ['qi-verify', '--domain', str(window), '--codomain', str(window), '--map', str(qimap), '-s', '7']
    first, second = run_twice(cli, tmp_path, 'qi', argv)
    assert first == second
    report = json.loads(first)
    assert not report['exhaustive']
    assert report['passed']
