import json
import time

import pytest

from rtaudit.cli import main

ANALYZE_FLAGS = ('--input', '--output-dir', '--format', '--seed', '--train-fraction', '--repetitions', '--alpha',
                 '--workers', '--rt-min', '--rt-max', '--column-map', '--verbose', '--quiet')
SIMULATE_FLAGS = ('--output-dir', '--format', '--seed', '--train-fraction', '--repetitions', '--participants',
                  '--trials', '--delta-ms', '--sigma-ms', '--family', '--replications', '--alpha', '--workers',
                  '--base-ms', '--between-sd', '--participant-grid', '--trial-grid', '--delta-grid', '--dataset-out')
HISTOGRAM_FLAGS = ('--input', '--output-dir', '--format', '--weighting')
PLOT_FLAGS = ('--input', '--style', '--participant', '--family', '--base-ms', '--delta-ms', '--sigma-ms',
              '--rt-min', '--rt-max', '--column-map', '--output-dir')


@pytest.mark.parametrize('command, flags', [
    ('analyze', ANALYZE_FLAGS),
    ('simulate', SIMULATE_FLAGS),
    ('histogram', HISTOGRAM_FLAGS),
    ('plot', PLOT_FLAGS),
])
def test_help_lists_every_flag(command, flags, capsys):
    assert main([command, '--help']) == 0
    out = capsys.readouterr().out
    for flag in flags:
        assert flag in out


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(['analyze']) == 2
    assert main(['simulate', '--family', 'gamma']) == 2
    assert main(['simulate', '--participants', '1', '--replications', '1']) == 2


def test_missing_file(tmp_path, capsys):
    assert main(['analyze', '--input', str(tmp_path / 'nope.csv')]) == 2
    assert 'nope.csv' in capsys.readouterr().err


def test_analyze_example(data_dir, tmp_path, capsys):
    out_dir = tmp_path / 'out'
    code = main(['analyze', '--input', str(data_dir / 'example_trials.csv'), '--output-dir', str(out_dir),
                 '--format', 'json', '--format', 'csv', '--format', 'text', '-q'])
    assert code == 0
    stdout = capsys.readouterr().out
    assert 'Median classifier' in stdout and 'Over-optimistic upper bound' in stdout
    assert {p.name for p in out_dir.iterdir()} == {'report.json', 'report.csv', 'report.txt'}
    doc = json.loads((out_dir / 'report.json').read_text())
    assert doc['dataset']['n_participants'] == 6


def test_analyze_is_deterministic(data_dir, tmp_path):
    reports = []
    for run in ('a', 'b'):
        out_dir = tmp_path / run
        assert main(['analyze', '--input', str(data_dir / 'example_trials.csv'), '--seed', '7',
                     '--output-dir', str(out_dir), '-q']) == 0
        reports.append((out_dir / 'report.json').read_bytes())
    assert reports[0] == reports[1]
    assert json.loads(reports[0])['config']['protocol']['seed'] == 7


def test_analyze_exit_codes(tmp_path, capsys):
    bad = tmp_path / 'bad.csv'
    bad.write_text('participant_id,condition,rt_ms\np,congruent,500\np,neutral,510\n')
    assert main(['analyze', '--input', str(bad), '-q']) == 3
    assert 'bad.csv:3:' in capsys.readouterr().err

    invalid = tmp_path / 'invalid.csv'
    invalid.write_text('participant_id,condition,rt_ms\np,congruent,0\np,congruent,500\n'
                       'p,incongruent,510\np,incongruent,520\n')
    assert main(['analyze', '--input', str(invalid), '-q']) == 4

    single = tmp_path / 'single.csv'
    single.write_text('participant_id,condition,rt_ms\np,congruent,490\np,congruent,500\n'
                      'p,incongruent,510\np,incongruent,520\n')
    assert main(['analyze', '--input', str(single), '-q']) == 5


def test_simulate_smoke(tmp_path, capsys):
    start = time.perf_counter()
    code = main(['simulate', '--participants', '4', '--replications', '10', '--output-dir', str(tmp_path),
                 '--format', 'csv', '-q'])
    assert code == 0
    assert time.perf_counter() - start < 5
    assert (tmp_path / 'sweep.csv').read_text().startswith('# format_version: 1\n')
    assert 'rejection_rate' in capsys.readouterr().out


def test_simulate_delta_alias_and_grid(tmp_path, capsys):
    code = main(['simulate', '--delta', '0', '--participants', '4', '--trials', '20', '--replications', '2',
                 '--repetitions', '1', '--trial-grid', '10,20', '--output-dir', str(tmp_path), '-q'])
    assert code == 0
    doc = json.loads((tmp_path / 'sweep.json').read_text())
    assert [c['trials_per_condition'] for c in doc['cells']] == [10, 20]
    assert all(c['delta_ms'] == 0.0 for c in doc['cells'])


def test_simulated_fixture_through_analyze(tmp_path, capsys):
    fixture = tmp_path / 'simulated.csv'
    assert main(['simulate', '--replications', '1', '--repetitions', '1', '--dataset-out', str(fixture), '-q']) == 0
    out_dir = tmp_path / 'report'
    assert main(['analyze', '--input', str(fixture), '--output-dir', str(out_dir), '-q']) == 0
    doc = json.loads((out_dir / 'report.json').read_text())
    assert doc['dataset']['n_participants'] == 66
    assert 0.495 <= doc['classifiers']['median']['mean_accuracy'] <= 0.515


@pytest.mark.parametrize('rows, expected', [
    (('300,5,0', '400,0,5'), '100.00%'),
    (('300,3,3', '400,7,7'), '50.00%'),
    (('300,6,4', '400,4,6'), '60.00%'),
])
def test_histogram(rows, expected, tmp_path, capsys):
    path = tmp_path / 'hist.csv'
    path.write_text('edge_ms,congruent,incongruent\n' + '\n'.join(rows) + '\n500,,\n')
    assert main(['histogram', '--input', str(path), '--output-dir', str(tmp_path), '-q']) == 0
    out = capsys.readouterr().out
    assert out.count(expected) == 2
    doc = json.loads((tmp_path / 'histogram.json').read_text())
    assert doc['step_accuracy'] == pytest.approx(doc['bayes_accuracy'])


def test_histogram_empty(tmp_path):
    path = tmp_path / 'hist.csv'
    path.write_text('edge_ms,congruent,incongruent\n300,0,0\n400,,\n')
    assert main(['histogram', '--input', str(path), '-q']) == 6


def test_plot_domain_error():
    assert main(['plot', '--family', 'lognormal', '--base-ms', '10', '--delta-ms', '-20', '-q']) == 7


def test_plot_writes_svg(data_dir, tmp_path):
    assert main(['plot', '--output-dir', str(tmp_path), '-q']) == 0
    assert (tmp_path / 'trial_distributions.svg').read_bytes().lstrip().startswith(b'<?xml')

    assert main(['plot', '--input', str(data_dir / 'example_trials.csv'), '--participant', 'max',
                 '--output-dir', str(tmp_path), '-q']) == 0
    assert main(['plot', '--input', str(data_dir / 'example_trials.csv'), '--style', 'mean_sem_distributions',
                 '--output-dir', str(tmp_path), '-q']) == 0
    assert (tmp_path / 'mean_sem_distributions.svg').exists()
    assert main(['plot', '--input', str(data_dir / 'example_trials.csv'), '--participant', 'nobody', '-q']) == 2


def test_invalid_utf8_is_a_parse_error(tmp_path, capsys):
    bad = tmp_path / 'latin.csv'
    bad.write_bytes(b'participant_id,condition,rt_ms\np,congruent,500\np\xff,incongruent,510\n')
    assert main(['analyze', '--input', str(bad), '-q']) == 3
    assert 'latin.csv:3:' in capsys.readouterr().err

    hist = tmp_path / 'hist.csv'
    hist.write_bytes(b'edge_ms,congruent,incongruent\n300,\xe9,4\n400,,\n')
    assert main(['histogram', '--input', str(hist), '-q']) == 3


@pytest.mark.parametrize('argv', [
    ['analyze', '--input', 'unused.csv', '--column-map', 'subject'],
    ['analyze', '--input', 'unused.csv', '--rt-min', '900', '--rt-max', '100'],
    ['analyze', '--input', 'unused.csv', '--train-fraction', '1.5'],
    ['simulate', '--participant-grid', '1,4', '--replications', '1'],
    ['plot', '--format', 'json'],
    ['plot', '--workers', '2'],
])
def test_invalid_option_values(argv, capsys):
    assert main(argv + ['-q']) == 2


def test_internal_errors_are_not_usage_errors(data_dir, monkeypatch):
    def broken(*args, **kwargs):
        raise TypeError('unexpected internal failure')

    monkeypatch.setattr('rtaudit.cli.build_report', broken)
    with pytest.raises(TypeError):
        main(['analyze', '--input', str(data_dir / 'example_trials.csv'), '-q'])
