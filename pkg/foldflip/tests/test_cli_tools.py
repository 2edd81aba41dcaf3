import json
import xml.etree.ElementTree as et

import pytest

import foldflip.cli.tools as tools
from foldflip.core import MVAssignment, save_pattern
from foldflip.patterns import PatternSpec, generate, reference_assignment

SVG = '{http://www.w3.org/2000/svg}'


def parse(text):
    return et.fromstring(text)


def polygons(root):
    return root.findall('{0}g/{0}polygon'.format(SVG))


def lines(root):
    return root.findall('{0}g/{0}line'.format(SVG))


@pytest.fixture
def grid_file(tmp_path, grid22):
    path = str(tmp_path / 'grid.json')
    with open(path, 'w') as fobj:
        save_pattern(grid22, fobj, reference_assignment(grid22))
    return path


def test_read_pattern(grid_file, grid22):
    pattern, assignment = tools.read_pattern(grid_file)
    assert pattern.creases == grid22.creases
    assert assignment.to_string() == 'MMMV'


def test_read_assignment_string(tmp_path, grid22):
    path = tmp_path / 'state.txt'
    path.write_text('MV\nVV\n')
    assert tools.read_assignment(str(path), grid22).to_string() == 'MVVV'


def test_read_assignment_json(grid_file, grid22):
    assert tools.read_assignment(grid_file, grid22).to_string() == 'MMMV'


def test_read_assignment_errors(tmp_path, grid22, miura22):
    short = tmp_path / 'short.txt'
    short.write_text('MVV')
    with pytest.raises(ValueError):
        tools.read_assignment(str(short), grid22)
    bare = tmp_path / 'bare.json'
    with open(str(bare), 'w') as fobj:
        save_pattern(miura22, fobj)
    with pytest.raises(ValueError):
        tools.read_assignment(str(bare), miura22)


def test_resolve_seed(mocker):
    assert tools.resolve_seed(7) == 7
    assert tools.resolve_seed('12') == 12
    seed_mock = mocker.patch('foldflip.cli.tools.np.random.SeedSequence')
    seed_mock.return_value.entropy = 123456789
    assert tools.resolve_seed(None) == 123456789


def test_render_svg_structure():
    pattern = generate(PatternSpec('miura', (4, 6)))
    root = parse(tools.render_svg(pattern, reference_assignment(pattern)))
    assert root.tag == SVG + 'svg'
    assert root.get('version') == '1.1'
    assert len(polygons(root)) == 24
    classes = [line.get('class') for line in lines(root)]
    assert classes.count('mountain') + classes.count('valley') == 38
    assert classes.count('boundary') == len(pattern.boundary_edges)
    assert 'crease' not in classes


def test_render_svg_unassigned(grid22):
    root = parse(tools.render_svg(grid22))
    classes = [line.get('class') for line in lines(root)]
    assert classes.count('crease') == 4
    assert classes.count('boundary') == 8


def test_render_svg_mv_classes(grid22):
    root = parse(tools.render_svg(grid22, MVAssignment.from_string('MMMV')))
    creases = [line.get('class') for line in lines(root)][-4:]
    assert creases == ['mountain', 'mountain', 'mountain', 'valley']


def test_render_svg_is_deterministic(twist_tile):
    state = reference_assignment(twist_tile)
    assert tools.render_svg(twist_tile, state, show_parity=True) == \
        tools.render_svg(twist_tile, state, show_parity=True)


def test_render_svg_parity_and_highlight(grid22):
    root = parse(tools.render_svg(grid22, show_parity=True,
                                  highlight={0: 0, 3: 2}))
    classes = [p.get('class') for p in polygons(root)]
    assert classes == ['face level-0', 'face parity', 'face parity',
                       'face level-2']


def test_rows_to_csv():
    text = tools.rows_to_csv(('size', 'tmix', 'gap'),
                             [('2x2', 2, 0.5), ('3x3', 'reducible', None)])
    assert text == 'size,tmix,gap\n2x2,2,0.5\n3x3,reducible,\n'


def test_write_text_and_digest(tmp_path):
    path = str(tmp_path / 'out.txt')
    tools.write_text(path, 'abc')
    assert tools.file_digest(path) == \
        'ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad'


def test_run_manifest(tmp_path):
    path = str(tmp_path / 'out.txt')
    tools.write_text(path, 'abc')
    manifest = tools.run_manifest('mcmc', 42, [path, None,
                                               str(tmp_path / 'missing')],
                                  argv=['foldflip', 'mcmc'])
    assert manifest['command'] == 'mcmc'
    assert manifest['argv'] == ['foldflip', 'mcmc']
    assert manifest['seed'] == 42
    assert manifest['version']
    assert manifest['timestamp'].endswith('+00:00')
    assert list(manifest['outputs']) == [path]


def test_manifest_path():
    assert tools.manifest_path('m.json', 'out.json') == 'm.json'
    assert tools.manifest_path(None, 'out.json') == 'out.json.manifest.json'
    assert tools.manifest_path(None, None) is None


def test_write_manifest(tmp_path):
    path = str(tmp_path / 'run.manifest.json')
    tools.write_manifest(path, {'seed': 1, 'command': 'gen'})
    with open(path) as fobj:
        text = fobj.read()
    assert json.loads(text) == {'seed': 1, 'command': 'gen'}
    assert text.index('command') < text.index('seed')
