import glob
import json
import os

import pytest
import yaml

from cutset_lab.cli import main
from cutset_lab.config import load_config, parse_config
from cutset_lab.core.graph_core import build_window, neighborhood
from cutset_lab.core.graph_providers import make_provider
from cutset_lab.errors import ConfigError, ExperimentAssertionError
from cutset_lab.groups.group_dl import build_Hk
from cutset_lab.qi import make_map
from cutset_lab.runner import ExperimentRunner

CONFIG_DIR = os.path.join(os.path.dirname(__file__), '..', 'configs')
SQUARE = { 'family': 'lattice', 'params': { 'rank': 2 } }


def run(tmp_path, **data):
    config = parse_config({ 'provider': SQUARE, **data })
    out = str(tmp_path / 'out')
    return ExperimentRunner(config, output_dir = out).run(), out


def read(out, name):
    with open(os.path.join(out, name)) as f:
        return f.read()


def test_enumerate(tmp_path):
    results, out = run(
            tmp_path,
            experiment = 'enumerate',
            radius = 6,
            params = { 'n_max': 6, 'verify': True, 'with_closeness': True },
            expect = { 'counts': { 4: 1, 6: 4 } },
            output = { 'dot': True }
    )
    assert results['total'] == 5
    assert results['alpha'] == pytest.approx(2.0)
    assert read(out, 'counts.csv') == 'n,count,alpha_running\n1,0,\n2,0,\n3,0,\n4,1,\n5,0,\n6,4,2.000000\n'
    lines = read(out, 'cutsets.tsv').splitlines()
    assert len(lines) == 5
    assert lines[0].startswith('4\t')
    assert all(line.split('\t')[-1] in ('1', '2') for line in lines)
    assert read(out, 'window.dot').startswith('graph window {')
    manifest = json.loads(read(out, 'manifest.json'))
    assert manifest['failures'] == []
    assert manifest['outputs'] == ['counts.csv', 'cutsets.tsv', 'window.dot']
    assert manifest['results']['counts']['6'] == 4


def test_failed_expectation_still_writes(tmp_path):
    with pytest.raises(ExperimentAssertionError):
        run(tmp_path, experiment = 'enumerate', radius = 6, params = { 'n_max': 4 }, expect = { 'counts': { 4: 2 } })
    manifest = json.loads(read(str(tmp_path / 'out'), 'manifest.json'))
    assert len(manifest['failures']) == 1
    assert 'expect.counts' in manifest['failures'][0]


def test_unknown_expectation(tmp_path):
    with pytest.raises(ConfigError):
        run(tmp_path, experiment = 'enumerate', radius = 6, params = { 'n_max': 4 }, expect = { 'alpha_final': 2 })


def test_closeness_sup_with_oracle(tmp_path):
    results, out = run(
            tmp_path,
            experiment = 'closeness-sup',
            radius = 8,
            params = { 'n_max': 8, 'oracle_samples': 20 },
            seed = 3,
            expect = { 'running_max': 2, 'oracle_mismatches': 0 }
    )
    assert results['max_closeness'][4] == 1
    assert read(out, 'closeness.csv').splitlines()[0] == 'n,count,max_closeness,running_max,witness'


def test_dl_family(tmp_path):
    config = parse_config({
            'experiment': 'dl-family',
            'provider': { 'family': 'dl', 'params': { 'k': 2, 'n': 2 } },
            'radius': 10,
            'params': { 'k_max': 2 },
            'expect': { 'dist_AB': [1, 2], 'C_sizes': [8, 16], 'minimal': True }
    })
    results = ExperimentRunner(config, output_dir = str(tmp_path)).run()
    assert len(results['closeness']) == 2


def shipped(name):
    return load_config(os.path.join(CONFIG_DIR, name))


@pytest.mark.parametrize('path', sorted(glob.glob(os.path.join(CONFIG_DIR, '*.yaml'))), ids = os.path.basename)
def test_shipped_windows_fit_the_cap(path):
    config = load_config(path)
    cap = config.caps.max_vertices
    provider = make_provider(config.provider.family, **config.provider.params)
    assert len(build_window(provider, config.radius, max_vertices = cap)) > 1
    if config.target is not None:
        target = make_provider(config.target.family, **config.target.params)
        build_window(target, config.target_radius or config.radius, max_vertices = cap)


def test_shipped_dl_family(tmp_path):
    results = ExperimentRunner(shipped('dl_family.yaml'), output_dir = str(tmp_path)).run()
    assert results['closeness'] == [2, 3, 4, 5, 6]
    assert results['running_max'] == 6
    assert read(str(tmp_path), 'dl_family.csv').splitlines()[-1].startswith('5,192,128,')


def test_shipped_dl_lamplighter_sets_fit():
    config = shipped('qi_dl_lamplighter.yaml')
    p = config.experiment_params()
    wG = build_window(make_provider(config.provider.family, **config.provider.params), config.radius)
    wH = build_window(make_provider(config.target.family, **config.target.params), config.target_radius)
    qmap = make_map(p.map, wG.provider, wH.provider)
    for k in sorted(set(p.transfer_hk + p.closure_hk)):
        H = build_Hk(k, wG).H
        assert len(neighborhood(wG, H, p.closure_n + 1)) > len(H)
        assert all(qmap.forward(v) in wH for v in H)


def test_shipped_lamplighter_growth(tmp_path):
    results = ExperimentRunner(shipped('growth_lamplighter.yaml'), output_dir = str(tmp_path)).run()
    assert results['max_fx'] == 14
    assert results['S_size'] == 7


def test_half_t(tmp_path):
    results, out = run(
            tmp_path,
            experiment = 'half-t',
            radius = 14,
            params = { 'relators': ['E,N,W,S'], 'n_max': 6, 'instances': 10 },
            seed = 5,
            expect = { 't': 4, 'ok': True, 'witnesses': 10 }
    )
    assert results['max_endpoint_distance'] <= 2
    assert len(read(out, 'witnesses.tsv').splitlines()) == 10
    assert not os.path.exists(os.path.join(out, 'counterexample.jsonl'))


def test_qi_transfer(tmp_path):
    results, out = run(
            tmp_path,
            experiment = 'qi-transfer',
            radius = 10,
            target = { 'family': 'king' },
            params = {
                    'map': 'identity-regenerate',
                    'sample_radius': 3,
                    'n_max': 6,
                    'fiber_sizes': [4],
                    'transfer_boxes': [3]
            },
            expect = { 'certified_m': 2, 'growth_ok': True, 'max_fiber': { 4: 1 } }
    )
    assert results['growth_checks'] == 5
    assert results['transfer'][0]['set'] == 'box_3'
    assert results['transfer'][0]['vacuous']
    assert read(out, 'transfer.csv').startswith('set,k,m,radius,')


def test_claimed_constant_below_certified(tmp_path):
    with pytest.raises(ExperimentAssertionError):
        run(
                tmp_path,
                experiment = 'qi-transfer',
                radius = 8,
                target = { 'family': 'king' },
                params = { 'map': 'identity-regenerate', 'm': 1, 'sample_radius': 2 },
                expect = { 'certified_m': 2 }
        )


def test_claimed_constant_above_certified(tmp_path):
    _, out = run(
            tmp_path,
            experiment = 'qi-transfer',
            radius = 12,
            target = { 'family': 'king' },
            params = { 'map': 'identity-regenerate', 'm': 3, 'sample_radius': 2, 'transfer_boxes': [3] },
            expect = { 'certified_m': 2, 'm': 3 }
    )
    assert read(out, 'transfer.csv').splitlines()[1].split(',')[3] == '3'


def test_growth(tmp_path):
    results, out = run(
            tmp_path,
            experiment = 'growth',
            provider = { 'family': 'lattice', 'params': { 'rank': 1 } },
            radius = 6,
            params = { 'n_max': 5, 'subperiodic': ['+'], 'subperiodic_depth': 2, 'dump_tree': True },
            expect = { 'growth': [1, 3, 5, 7, 9, 11], 'max_fx': 0, 'subperiodic': { '+': True } }
    )
    assert results['rays'] == [1, 2, 2, 2, 2, 2]
    assert read(out, 'tree.tsv').splitlines()[1] == '1\t0\t+'


def test_finiteness(tmp_path):
    results, _ = run(
            tmp_path,
            experiment = 'finiteness',
            radius = 4,
            params = { 'n': 4, 'radii': [4, 3] },
            expect = { 'counts': { 3: 1, 4: 1 }, 'stabilized_at': 3, 'core_radius': 2 }
    )
    assert results['counts'] == { 3: 1, 4: 1 }


def test_subgraph_count(tmp_path):
    results, out = run(
            tmp_path,
            experiment = 'subgraph-count',
            radius = 6,
            params = { 'n_max': 5, 'certificate_n_max': 4 },
            expect = { 'counts': { 1: 1, 2: 4, 3: 18, 4: 76, 5: 315 }, 'bound_ok': True, 'certificates_ok': True }
    )
    assert results['certificates_checked'] == 1 + 4 + 18 + 76
    assert read(out, 'subsets.csv').splitlines()[1] == '1,1,16,True'


def test_reruns_are_identical(tmp_path):
    data = {
            'experiment': 'closeness-sup',
            'provider': { 'family': 'hex' },
            'radius': 8,
            'params': { 'n_max': 6, 'oracle_samples': 10 },
            'seed': 11
    }
    for name in ('a', 'b'):
        ExperimentRunner(parse_config(data), output_dir = str(tmp_path / name)).run()
    for name in sorted(os.listdir(tmp_path / 'a')):
        assert read(str(tmp_path / 'a'), name) == read(str(tmp_path / 'b'), name)


def write_config(tmp_path, data):
    path = tmp_path / 'config.yaml'
    path.write_text(yaml.safe_dump(data))
    return str(path)


def test_cli_run(tmp_path):
    path = write_config(tmp_path, {
            'experiment': 'finiteness',
            'provider': SQUARE,
            'radius': 4,
            'params': { 'n': 4, 'radii': [3] },
            'expect': { 'counts': { 3: 1 } }
    })
    assert main(['run', path, '-o', str(tmp_path / 'out')]) == 0
    assert os.path.exists(tmp_path / 'out' / 'finiteness.csv')


def test_cli_exit_codes(tmp_path, capsys):
    assert main(['run', str(tmp_path / 'missing.yaml')]) == 2
    assert 'ConfigError' in capsys.readouterr().err
    path = write_config(tmp_path, {
            'experiment': 'finiteness',
            'provider': SQUARE,
            'radius': 4,
            'params': { 'n': 4, 'radii': [3] },
            'expect': { 'counts': { 3: 2 } }
    })
    assert main(['run', path, '-o', str(tmp_path / 'out')]) == 4
    path = write_config(tmp_path, {
            'experiment': 'enumerate',
            'provider': SQUARE,
            'radius': 6,
            'params': { 'n_max': 4 },
            'caps': { 'max_vertices': 10 }
    })
    assert main(['run', path, '-o', str(tmp_path / 'out')]) == 3


def test_cli_list_and_dump(tmp_path, capsys):
    assert main(['list-providers']) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith('lattice\t')
    assert main(['dump-window', 'tree', 'degree=4', '-r', '1']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 5
    assert lines[0] == 'root\t0\t0;1;2;3'
    target = tmp_path / 'w.dot'
    assert main(['dump-window', 'lattice', '-r', '2', '--dot', '-o', str(target)]) == 0
    assert target.read_text().startswith('graph window {')
    assert main(['dump-window', 'lattice', 'depth']) == 2
