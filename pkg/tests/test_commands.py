"""
Tests for the basym management commands and the console entry point
"""
import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from basym.asymptote import AsymptoticShape
from basym.cli import main


MAXIMAL_SESSION = """\
ring x:1 y:1;
ideal I = x, y;
window t=1..2 wcap=10;
"""

MODULE_SESSION = """\
ring x:1 y:1;
ideal I = x, y;
module M = S/(x^2, x*y);
use M;
window t=1..2 wcap=10;
"""


@pytest.fixture
def maximal_path(session_file):
    return session_file(MAXIMAL_SESSION)


def _run(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def _json(*args):
    return json.loads(_run(*args, '--format', 'json'))


class TestBettiCommand:
    """Test the betti command"""

    def test_json(self, maximal_path):
        """Test Betti tables of (x, y)^t per t"""
        data = _json('betti', '--input', maximal_path)
        assert sorted(data) == ['1', '2']
        assert data['2'] == {
            '0': [{'degree': [2], 'multiplicity': 3}],
            '1': [{'degree': [3], 'multiplicity': 2}],
        }

    def test_window_override(self, maximal_path):
        """Test --t replaces the session window"""
        data = _json('betti', '--input', maximal_path, '--t', '3..3')
        assert list(data) == ['3']

    def test_table(self, maximal_path):
        """Test table output"""
        output = _run('betti', '--input', maximal_path)
        assert '-' * 80 in output
        assert 'multiplicity' in output
        assert 'Total: 4 rows' in output

    def test_tsv(self, maximal_path):
        """Test TSV output"""
        lines = _run('betti', '--input', maximal_path, '--format', 'tsv').splitlines()
        assert lines[0] == 't\ti\tdegree\tmultiplicity'
        assert '1\t0\t1\t2' in lines


class TestOtherCommands:
    """Test rees, gb, stanley, shape and bounds"""

    def test_rees(self, maximal_path):
        """Test the Rees ideal of (x, y) has one generator"""
        data = _json('rees', '--input', maximal_path)
        assert len(data['rees_ideal']) == 1
        assert data['setup']['rees_variables'] == [['T1', 'T2']]

    def test_gb(self, maximal_path):
        """Test the Groebner basis of a declared ideal"""
        data = _json('gb', '--input', maximal_path)
        assert data['ideal'] == 'I'
        assert sorted(data['basis']) == ['x', 'y']

    def test_gb_unknown_ideal(self, maximal_path):
        """Test --ideal naming an undeclared ideal"""
        with pytest.raises(CommandError, match="Unknown ideal 'J'"):
            _run('gb', '--input', maximal_path, '--ideal', 'J')

    def test_stanley(self, session_file):
        """Test the decomposition of the selected module"""
        data = _json('stanley', '--input', session_file(MODULE_SESSION))
        assert data['module'] == 'M'
        assert len(data['stanley']) == 2
        assert len(data['toric']['binomials']) == 1

    def test_stanley_table(self, session_file):
        """Test the table lists Stanley pieces and fiber components"""
        output = _run('stanley', '--input', session_file(MODULE_SESSION))
        assert 'stanley' in output
        assert 'fiber' in output

    def test_shape(self, maximal_path):
        """Test the shape of Tor_1 of (x, y)^t"""
        data = _json('shape', '--input', maximal_path, '--ell', '1')
        assert data['components'] == [{'delta': [2], 't0': [1], 'blocks': [[[1]]]}]
        assert data['window'] == {'t': [1, 2], 'wcap': 10}

    def test_shape_threshold(self, maximal_path):
        """Test the table output ends with the threshold"""
        output = _run('shape', '--input', maximal_path, '--ell', '1')
        assert 'threshold: 1' in output

    def test_bounds(self, maximal_path):
        """Test Delta_1 and its strand polynomial"""
        data = _json('bounds', '--input', maximal_path, '--ell', '1')
        strand = data['indices']['1']['strands'][0]
        assert strand['eta'] == [1]
        assert strand['hilbert']['polynomial'] == 't'


class TestVerifyCommand:
    """Test the verify command"""

    def test_success(self, maximal_path):
        """Test the shape of Tor_0 agrees with the oracle"""
        output = _run('verify', '--input', maximal_path)
        assert '✓ 2 checks passed' in output

    def test_report_files(self, maximal_path, tmp_path):
        """Test --json and --tsv write the report"""
        json_path, tsv_path = tmp_path / 'report.json', tmp_path / 'report.tsv'
        _run(
            'verify', '--input', maximal_path, '--ell', '1',
            '--json', str(json_path), '--tsv', str(tsv_path),
        )
        data = json.loads(json_path.read_text())
        assert data['ok'] is True
        assert data['thresholds'] == {'1': [1]}
        assert [e['t'] for e in data['entries']] == [[1], [2]]
        lines = tsv_path.read_text().splitlines()
        assert lines[0] == 'ell\tt\tdegree\tpredicted\toracle'
        assert lines[1:] == ['1\t1\t2\t1\t1', '1\t2\t3\t1\t1']

    def test_mismatch(self, maximal_path, mocker):
        """Test a wrong prediction fails the command"""
        mocker.patch.object(AsymptoticShape, 'support_at', return_value=set())
        out = StringIO()
        with pytest.raises(CommandError, match=r'verify: 2 mismatch\(es\)'):
            call_command('verify', '--input', maximal_path, stdout=out)
        assert '✗ ell=0 t=[1]' in out.getvalue()


class TestCommandErrors:
    """Test failures surface as CommandError"""

    def test_bad_window(self, maximal_path):
        """Test an unreadable --t"""
        with pytest.raises(CommandError, match='expected a..b'):
            _run('betti', '--input', maximal_path, '--t', 'one..two')

    def test_empty_window(self, maximal_path):
        """Test a reversed --t"""
        with pytest.raises(CommandError, match='Empty range'):
            _run('betti', '--input', maximal_path, '--t', '3..1')

    def test_bad_wcap(self, maximal_path):
        """Test a non-positive --wcap"""
        with pytest.raises(CommandError, match='--wcap must be positive'):
            _run('shape', '--input', maximal_path, '--wcap', '0')

    def test_missing_file(self, tmp_path):
        """Test an input path that does not exist"""
        with pytest.raises(CommandError, match='cannot read'):
            _run('betti', '--input', str(tmp_path / 'missing.basym'))

    def test_syntax_error(self, session_file):
        """Test the parse position reaches the command error"""
        path = session_file('ring x:1;\nideal I = x^2 + x;\n')
        with pytest.raises(CommandError, match='line 2, column 11'):
            _run('betti', '--input', path)


class TestConsoleScript:
    """Test the basym entry point"""

    def test_usage(self, capsys):
        """Test running without a command prints usage"""
        assert main([]) == 0
        assert 'commands: betti, rees, stanley, shape, verify, gb, bounds' in capsys.readouterr().out

    def test_unknown_command(self, capsys):
        """Test an unknown command exits with status 2"""
        assert main(['frobnicate']) == 2
        assert "unknown command 'frobnicate'" in capsys.readouterr().err

    def test_dispatch(self, maximal_path, capsys):
        """Test a command runs through the management utility"""
        assert main(['gb', '--input', maximal_path, '--format', 'json']) == 0
        assert json.loads(capsys.readouterr().out)['ideal'] == 'I'
